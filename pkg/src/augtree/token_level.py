"""Token-level augmentation: synonym replacement through embedding nearest
neighbors, random word deletion, and random word swapping.

Deletion and swapping invalidate the dependency tree, so their outputs carry
"_" in HEAD and DEPREL; every other column travels with its token.
"""

from __future__ import annotations

import logging
import math

import numpy as np

from .core import RngStream, as_fraction, select_token_indices
from .errors import EmbeddingError
from .treebank import EMPTY, MwtRange, Sentence, Token

logger = logging.getLogger(__name__)

SKIP_UPOS = ("PUNCT", "SYM")


class EmbeddingTable:
    """Immutable word -> dense-vector lookup."""

    def __init__(self, words: list[str], matrix: np.ndarray, duplicates: int = 0):
        self.words = list(words)
        self.matrix = np.asarray(matrix, dtype=np.float64)
        self.dim = int(self.matrix.shape[1]) if self.matrix.size else 0
        self.duplicates = duplicates
        self._index = {w: i for i, w in enumerate(self.words)}
        self._norms = np.linalg.norm(self.matrix, axis=1) if self.matrix.size else np.zeros(0)
        self._knn_cache: dict[tuple[str, int], list[tuple[str, float]]] = {}

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self._index

    def vector(self, word: str) -> np.ndarray:
        return self.matrix[self._index[word]]


def load_embeddings(text: str) -> EmbeddingTable:
    """Load a word2vec-style text table: header "count dim", then one
    "word v1 ... v_dim" row per line. Duplicate words keep the last row."""
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise EmbeddingError("empty embedding file")
    header = lines[0].split()
    if len(header) != 2:
        raise EmbeddingError(f"line 1: expected header 'count dim', got {lines[0]!r}")
    try:
        dim = int(header[1])
    except ValueError:
        raise EmbeddingError(f"line 1: non-integer dimension {header[1]!r}") from None
    if dim < 1:
        raise EmbeddingError(f"line 1: dimension must be >= 1, got {dim}")

    rows: dict[str, np.ndarray] = {}
    duplicates = 0
    for line_no, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        word, values = parts[0], parts[1:]
        if len(values) != dim:
            raise EmbeddingError(f"line {line_no}: expected {dim} values, got {len(values)}")
        try:
            vec = np.array([float(v) for v in values], dtype=np.float64)
        except ValueError:
            raise EmbeddingError(f"line {line_no}: non-numeric vector component") from None
        if not np.linalg.norm(vec):
            raise EmbeddingError(f"line {line_no}: zero-norm vector for {word!r}")
        if word in rows:
            duplicates += 1
        rows[word] = vec
    if not rows:
        raise EmbeddingError("embedding file contains no vectors")
    if duplicates:
        logger.warning("embedding file: %d duplicate words (last occurrence kept)", duplicates)
    words = list(rows)
    return EmbeddingTable(words, np.stack([rows[w] for w in words]), duplicates)


def cosine(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise EmbeddingError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu, nv = np.linalg.norm(u), np.linalg.norm(v)
    if nu == 0 or nv == 0:
        raise EmbeddingError("cosine of a zero-norm vector")
    return max(-1.0, min(1.0, float(np.dot(u, v) / (nu * nv))))


def knn(table: EmbeddingTable, word: str, k: int) -> list[tuple[str, float]]:
    """Top-k other words by descending cosine similarity, ties broken
    lexicographically. Raises KeyError for an out-of-table word.

    Similarities come from the same per-pair arithmetic as cosine(), so the
    ranking agrees exactly with a brute-force all-pairs scan."""
    if word not in table:
        raise KeyError(word)
    cached = table._knn_cache.get((word, k))
    if cached is not None:
        return list(cached)
    q = table.vector(word)
    ranked = sorted(
        ((w, cosine(q, table.matrix[i])) for w, i in table._index.items() if w != word),
        key=lambda item: (-item[1], item[0]),
    )
    result = ranked[:k]
    table._knn_cache[(word, k)] = result
    return list(result)


def synonym_replace(sent: Sentence, table: EmbeddingTable, p, k: int, rng: RngStream) -> Sentence | None:
    """Replace selected token forms with a uniform draw from their k nearest
    neighbors. Punctuation (PUNCT/SYM) and out-of-table forms are skipped;
    returns None when nothing was replaced (the copy would duplicate its
    source)."""
    out = sent.clone()
    selected = select_token_indices(len(out), p, rng)
    changed = False
    for idx in sorted(selected):
        tok = out.tokens[idx - 1]
        if tok.upos in SKIP_UPOS or tok.form not in table:
            continue
        neighbors = knn(table, tok.form, k)
        if not neighbors:
            continue
        tok.form = neighbors[rng.randrange(len(neighbors))][0]
        changed = True
    return out if changed else None


def _strip_tree(tok: Token) -> Token:
    tok.head = None
    tok.deprel = EMPTY
    return tok


def _apred_slots(sent: Sentence, kept: set[int]) -> list[int]:
    preds = sent.predicate_ids()
    return [i for i, pid in enumerate(preds) if pid in kept]


def random_word_delete(sent: Sentence, p, rng: RngStream) -> Sentence | None:
    """Drop selected tokens; at least one token survives. Survivors are
    renumbered with HEAD/DEPREL cleared."""
    n = len(sent)
    if n < 2:
        return None
    selected = select_token_indices(n, p, rng)
    if len(selected) == n:
        survivor = rng.randrange(1, n + 1)
        selected.discard(survivor)
    kept = [i for i in range(1, n + 1) if i not in selected]
    slots = _apred_slots(sent, set(kept))
    tokens = []
    for new_id, old_id in enumerate(kept, start=1):
        tok = _strip_tree(sent.token(old_id).clone())
        tok.id = new_id
        if tok.srl is not None:
            tok.srl.apreds = [tok.srl.apreds[i] for i in slots if i < len(tok.srl.apreds)]
        tokens.append(tok)
    mapping = {old: new for new, old in enumerate(kept, start=1)}
    mwt = [
        MwtRange(mapping[r.start], mapping[r.end], r.form, r.misc)
        for r in sent.mwt_ranges
        if all(i in mapping for i in range(r.start, r.end + 1))
    ]
    return Sentence(list(sent.comments), tokens, mwt, [])


def random_word_swap(sent: Sentence, p, rng: RngStream) -> Sentence | None:
    """Exchange ceil(p * n) disjoint position pairs wholesale; each token keeps
    all of its own columns except the cleared HEAD/DEPREL."""
    n = len(sent)
    if n < 2:
        return None
    num_pairs = min(math.ceil(as_fraction(p) * n), n // 2)
    arrangement = list(range(1, n + 1))
    pool = list(range(n))
    for _ in range(num_pairs):
        a = pool.pop(rng.randrange(len(pool)))
        b = pool.pop(rng.randrange(len(pool)))
        arrangement[a], arrangement[b] = arrangement[b], arrangement[a]
    tokens = []
    for new_id, old_id in enumerate(arrangement, start=1):
        tok = _strip_tree(sent.token(old_id).clone())
        tok.id = new_id
        tokens.append(tok)
    return Sentence(list(sent.comments), tokens, [], [])
