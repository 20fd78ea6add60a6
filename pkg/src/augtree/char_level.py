"""Orthographic noise: character insertion, deletion, substitution, swapping,
and the 60/10/10/10/10 mixed noise model.

Rules shared by all kinds: one-letter tokens are never touched, swaps never
move the first or last character, deletions never empty a token, and edits
operate on code points. Only the FORM column of a token ever changes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import RngStream, Technique, as_fraction, select_token_indices
from .errors import AugtreeError, ConfigError
from .treebank import Sentence

# Mixed-noise draw: mostly clean, the rest split evenly across the four kinds.
CA_CLEAN_WEIGHT = 0.6
CA_NOISE_WEIGHT = 0.1
_CA_KINDS = (None, Technique.CI, Technique.CD, Technique.CSU, Technique.CSW)


@dataclass(frozen=True)
class CharVocab:
    """Most frequent characters of a corpus, ordered by descending count
    (ties broken by code point)."""

    entries: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if not self.entries:
            raise AugtreeError("character vocabulary is empty")
        cum = []
        total = 0
        for _, count in self.entries:
            total += count
            cum.append(total)
        object.__setattr__(self, "_chars", tuple(ch for ch, _ in self.entries))
        object.__setattr__(self, "_cum_weights", tuple(cum))

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, ch: str) -> bool:
        return ch in self._chars

    def sample(self, rng: RngStream) -> str:
        """Frequency-weighted character draw."""
        return rng.choices(self._chars, cum_weights=self._cum_weights, k=1)[0]

    def sample_excluding(self, rng: RngStream, exclude: str) -> str | None:
        """Draw a character different from `exclude`, redrawing on collisions.
        Returns None when the vocabulary offers no alternative."""
        if all(ch == exclude for ch in self._chars):
            return None
        while True:
            ch = self.sample(rng)
            if ch != exclude:
                return ch

    def to_tsv(self) -> str:
        return "".join(f"{ch}\t{count}\n" for ch, count in self.entries)

    @classmethod
    def from_tsv(cls, text: str) -> "CharVocab":
        entries = []
        for line in text.splitlines():
            if not line:
                continue
            ch, count = line.split("\t")
            entries.append((ch, int(count)))
        return cls(tuple(entries))


def build_char_vocab(sentences: list[Sentence], top_k: int = 100) -> CharVocab:
    """Count characters over all token forms and keep the top_k most frequent."""
    if top_k < 1:
        raise ConfigError(f"top_k must be >= 1, got {top_k}")
    counts: dict[str, int] = {}
    for sent in sentences:
        for tok in sent.tokens:
            for ch in tok.form:
                if ch.isspace():
                    continue
                counts[ch] = counts.get(ch, 0) + 1
    if not counts:
        raise AugtreeError("cannot build character vocabulary from an empty corpus")
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return CharVocab(tuple(ordered[:top_k]))


def num_char_edits(p, token_len: int) -> int:
    """Edits applied to one selected token: max(1, floor(p * length))."""
    return max(1, math.floor(as_fraction(p) * token_len))


# ---------------------------------------------------------------------------
# Deterministic edit application. Each function takes explicit edits so a
# recorded edit sequence reproduces a target string exactly; the lowercase
# sampling wrappers below draw the edits from an RngStream.


def ci_token(form: str, edits: list[tuple[int, str]]) -> str:
    """Insert characters left to right; positions index the evolving string."""
    out = form
    for pos, ch in edits:
        if not 0 <= pos <= len(out):
            raise AugtreeError(f"insert position {pos} out of range for {out!r}")
        out = out[:pos] + ch + out[pos:]
    return out


def cd_token(form: str, positions: list[int]) -> str:
    """Delete the given positions (indices into the original form)."""
    unique = set(positions)
    for pos in unique:
        if not 0 <= pos < len(form):
            raise AugtreeError(f"delete position {pos} out of range for {form!r}")
    if len(unique) >= len(form):
        raise AugtreeError(f"deleting {len(unique)} characters would empty {form!r}")
    return "".join(ch for i, ch in enumerate(form) if i not in unique)


def csu_token(form: str, subs: list[tuple[int, str]]) -> str:
    """Substitute characters in place; a replacement equal to the original is an error."""
    chars = list(form)
    for pos, ch in subs:
        if not 0 <= pos < len(chars):
            raise AugtreeError(f"substitute position {pos} out of range for {form!r}")
        if chars[pos] == ch:
            raise AugtreeError(f"substitution at {pos} equals the original {ch!r}")
        chars[pos] = ch
    return "".join(chars)


def csw_token(form: str, pairs: list[tuple[int, int]]) -> str:
    """Exchange interior character pairs; the first and last characters never move."""
    chars = list(form)
    interior_max = len(chars) - 2
    for i, j in pairs:
        if i == j:
            raise AugtreeError("swap pair must name two distinct positions")
        for pos in (i, j):
            if not 1 <= pos <= interior_max:
                raise AugtreeError(f"swap position {pos} is not interior for {form!r}")
        chars[i], chars[j] = chars[j], chars[i]
    return "".join(chars)


# ---------------------------------------------------------------------------
# Sampling wrappers


def ci(form: str, vocab: CharVocab, p, rng: RngStream) -> str:
    edits = []
    length = len(form)
    for i in range(num_char_edits(p, length)):
        pos = rng.randrange(length + i + 1)
        edits.append((pos, vocab.sample(rng)))
    return ci_token(form, edits)


def cd(form: str, p, rng: RngStream) -> str:
    k = min(num_char_edits(p, len(form)), len(form) - 1)
    positions = rng.sample(range(len(form)), k)
    return cd_token(form, positions)


def csu(form: str, vocab: CharVocab, p, rng: RngStream) -> str:
    positions = rng.sample(range(len(form)), min(num_char_edits(p, len(form)), len(form)))
    subs = []
    for pos in sorted(positions):
        ch = vocab.sample_excluding(rng, form[pos])
        if ch is not None:
            subs.append((pos, ch))
    return csu_token(form, subs)


def csw(form: str, p, rng: RngStream) -> str:
    """Swap interior pairs. Pairs of identical characters are redrawn (the
    swap would be invisible); if the edit sequence composes to the identity,
    one extra swap is applied so a swapped token always looks swapped."""
    if len(form) < 4 or len(set(form[1:-1])) < 2:
        return form
    out = form
    for _ in range(num_char_edits(p, len(form))):
        out = _swap_distinct_pair(out, rng)
    if out == form:
        out = _swap_distinct_pair(out, rng)
    return out


def _swap_distinct_pair(s: str, rng: RngStream) -> str:
    # swapping preserves the interior multiset, so a distinct pair stays available
    while True:
        i, j = rng.sample(range(1, len(s) - 1), 2)
        if s[i] != s[j]:
            return csw_token(s, [(i, j)])


def draw_ca_kind(rng: RngStream) -> Technique | None:
    """Sample the mixed-noise branch: None (clean) with weight 0.6, otherwise
    one of the four noise kinds with weight 0.1 each."""
    u = rng.random()
    if u < CA_CLEAN_WEIGHT:
        return None
    slot = int((u - CA_CLEAN_WEIGHT) / CA_NOISE_WEIGHT)
    return _CA_KINDS[min(slot + 1, 4)]


def ca_token(form: str, vocab: CharVocab, p, rng: RngStream) -> str:
    if len(form) < 2:
        return form
    kind = draw_ca_kind(rng)
    if kind is Technique.CSW and len(form) < 4:
        kind = None
    if kind is None:
        return form
    return _apply_kind(kind, form, vocab, p, rng)


def _apply_kind(kind: Technique, form: str, vocab: CharVocab, p, rng: RngStream) -> str:
    if kind is Technique.CI:
        return ci(form, vocab, p, rng)
    if kind is Technique.CD:
        return cd(form, p, rng)
    if kind is Technique.CSU:
        return csu(form, vocab, p, rng)
    if kind is Technique.CSW:
        return csw(form, p, rng)
    if kind is Technique.CA:
        return ca_token(form, vocab, p, rng)
    raise ConfigError(f"{kind!r} is not a character-level technique")


def _editable(kind: Technique, form: str) -> bool:
    if len(form) < 2:
        return False
    if kind is Technique.CSW and (len(form) < 4 or len(set(form[1:-1])) < 2):
        return False
    return True


def apply_char_noise(sent: Sentence, kind: Technique, vocab: CharVocab, p, rng: RngStream) -> Sentence:
    """Noise the forms of probabilistically selected tokens, leaving every
    other column untouched.

    If the draw lands only on uneditable tokens (one-letter words, or short
    words under CSW) one editable token is additionally forced so the copy
    differs from its source whenever that is possible at all.
    """
    kind = Technique(kind)
    if kind not in {Technique.CI, Technique.CD, Technique.CSU, Technique.CSW, Technique.CA}:
        raise ConfigError(f"{kind.value!r} is not a character-level technique")
    out = sent.clone()
    selected = select_token_indices(len(out), p, rng)
    editable = [t.id for t in out.tokens if _editable(kind, t.form)]
    if editable and not any(i in selected for i in editable):
        selected.add(editable[rng.randrange(len(editable))])
    for idx in sorted(selected):
        tok = out.tokens[idx - 1]
        if not _editable(kind, tok.form):
            continue
        tok.form = _apply_kind(kind, tok.form, vocab, p, rng)
    return out
