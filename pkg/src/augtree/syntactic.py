"""Dependency-tree-aware augmenters: cropping to predicate-argument fragments,
rotating first-level argument subtrees around the root, and nonce rewriting of
content words.

The augmenters operate on labels of interest (LOI): dependency relations that
attach subjects and objects directly to the root predicate. Only that first
level is considered; material inside a subtree is never reordered. Built-in
per-language profiles list the LOI labels plus the relations whose dependents
are fused with their head before augmentation (multiword predicates).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from .core import RngStream
from .errors import ConfigError
from .treebank import Sentence, build_tree, reindex, subtree_token_ids

logger = logging.getLogger(__name__)

CONTENT_UPOS = frozenset({"NOUN", "VERB", "ADJ"})


@dataclass(frozen=True)
class LoiProfile:
    """Label-of-interest sets for one annotation scheme."""

    name: str
    subject_labels: frozenset[str]
    object_labels: frozenset[str]
    merge_labels: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "subject_labels", frozenset(self.subject_labels))
        object.__setattr__(self, "object_labels", frozenset(self.object_labels))
        object.__setattr__(self, "merge_labels", frozenset(self.merge_labels))
        if self.subject_labels & self.object_labels:
            raise ConfigError("subject_labels and object_labels must be disjoint")
        if not (self.subject_labels | self.object_labels):
            raise ConfigError("profile needs at least one subject or object label")


BUILTIN_PROFILES: dict[str, LoiProfile] = {
    "ud": LoiProfile(
        "ud",
        subject_labels=frozenset({"nsubj"}),
        object_labels=frozenset({"obj", "dobj", "iobj", "obl"}),
    ),
    "finnish": LoiProfile(
        "finnish",
        subject_labels=frozenset({"nsubj"}),
        object_labels=frozenset({"dobj", "iobj", "obj", "obl", "nmod"}),
        merge_labels=frozenset({"case", "fixed", "flat", "cop", "compound"}),
    ),
    "turkish": LoiProfile(
        "turkish",
        subject_labels=frozenset({"Subject"}),
        object_labels=frozenset({"Object", "Modifier"}),
        merge_labels=frozenset({"MWE", "Deriv"}),
    ),
    "spanish_catalan": LoiProfile(
        "spanish_catalan",
        subject_labels=frozenset({"suj"}),
        object_labels=frozenset({"cd", "ci"}),
    ),
    "czech": LoiProfile(
        "czech",
        subject_labels=frozenset({"Sb"}),
        object_labels=frozenset({"Obj", "Atr"}),
        merge_labels=frozenset({"Pred"}),
    ),
}


def builtin_profile(name: str) -> LoiProfile:
    try:
        return BUILTIN_PROFILES[name]
    except KeyError:
        known = ", ".join(sorted(BUILTIN_PROFILES))
        raise ConfigError(f"unknown profile {name!r} (built-ins: {known})") from None


def load_profile(text: str) -> LoiProfile:
    """Parse a plain-text profile: one "key = comma,separated,values" line per
    field (name, subject_labels, object_labels, merge_labels)."""
    fields: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"malformed profile line {line!r} (expected key = value)")
        key, value = line.split("=", 1)
        fields[key.strip()] = value.strip()
    if "name" not in fields:
        raise ConfigError("profile config is missing 'name'")

    def labels(key: str) -> frozenset[str]:
        raw = fields.get(key, "")
        return frozenset(x.strip() for x in raw.split(",") if x.strip())

    return LoiProfile(
        name=fields["name"],
        subject_labels=labels("subject_labels"),
        object_labels=labels("object_labels"),
        merge_labels=labels("merge_labels"),
    )


def resolve_profile(spec: "str | LoiProfile") -> LoiProfile:
    """Accept a profile object, a built-in name, or a path to a profile file."""
    if isinstance(spec, LoiProfile):
        return spec
    if spec in BUILTIN_PROFILES:
        return BUILTIN_PROFILES[spec]
    import os

    if os.path.exists(spec):
        with open(spec, encoding="utf-8") as fh:
            return load_profile(fh.read())
    return builtin_profile(spec)


# ---------------------------------------------------------------------------
# Multiword-predicate merging


def merge_fixed_expressions(sent: Sentence, profile: LoiProfile) -> Sentence:
    """Fuse each maximal chain of tokens connected by merge-label relations
    into one token: the chain head keeps its annotation, the fused FORM is the
    surface-order concatenation joined by "_", and outside dependents of any
    chain member are re-attached to the fused token."""
    if not profile.merge_labels:
        return sent
    merged_child = {
        t.id for t in sent.tokens
        if t.deprel in profile.merge_labels and t.head not in (0, None)
    }
    if not merged_child:
        return sent
    build_tree(sent)  # guards against calling this on an invalid tree

    def chain_top(tid: int) -> int:
        while tid in merged_child:
            tid = sent.token(tid).head
        return tid

    groups: dict[int, list[int]] = {}
    for tid in merged_child:
        groups.setdefault(chain_top(tid), []).append(tid)

    work = sent.clone()
    for top, members in groups.items():
        surface = sorted(members + [top])
        work.token(top).form = "_".join(sent.token(i).form for i in surface)
    for tok in work.tokens:
        if tok.head in merged_child and tok.id not in merged_child:
            tok.head = chain_top(tok.head)
    kept = [t.id for t in work.tokens if t.id not in merged_child]
    return reindex(work, kept)


# ---------------------------------------------------------------------------
# Label-of-interest detection


def find_loi_attachments(sent: Sentence, profile: LoiProfile) -> list[tuple[int, str, str]]:
    """First-level dependents of the root whose relation is a label of
    interest, in surface order, as (token_id, label, "subject"|"object")."""
    tree = build_tree(sent)
    out = []
    for child in tree.children[tree.root_id]:
        rel = sent.token(child).deprel
        if rel in profile.subject_labels:
            out.append((child, rel, "subject"))
        elif rel in profile.object_labels:
            out.append((child, rel, "object"))
    return out


def num_loi(sent: Sentence, profile: LoiProfile) -> int:
    return len(find_loi_attachments(sent, profile))


# ---------------------------------------------------------------------------
# Crop


def crop_candidates(sent: Sentence, profile: LoiProfile) -> list[list[int]]:
    """Kept-id lists for every crop candidate: per object LOI the root plus
    the subject subtree(s) plus that one object subtree, plus a subject-only
    candidate when a subject exists. Candidates equal to the whole sentence
    are not candidates (they would duplicate it)."""
    lois = find_loi_attachments(sent, profile)
    if not lois:
        return []
    tree = build_tree(sent)
    subject_ids: set[int] = set()
    for tid, _, kind in lois:
        if kind == "subject":
            subject_ids |= subtree_token_ids(tree, tid)
    base = subject_ids | {tree.root_id}
    candidates = []
    for tid, _, kind in lois:
        if kind != "object":
            continue
        kept = sorted(base | subtree_token_ids(tree, tid))
        if len(kept) < len(sent):
            candidates.append(kept)
    if subject_ids:
        kept = sorted(base)
        if len(kept) < len(sent):
            candidates.append(kept)
    return candidates


def crop(sent: Sentence, profile: LoiProfile, p, rng: RngStream) -> list[Sentence]:
    """Emit each crop candidate independently with probability p. Outputs are
    reindexed fragments keeping the original root; semantic-role columns of
    dropped predicates are repaired by reindex."""
    threshold = float(p)
    outputs = []
    for kept in crop_candidates(sent, profile):
        if rng.random() < threshold:
            outputs.append(reindex(sent, kept))
    return outputs


# ---------------------------------------------------------------------------
# Rotate


def rotate_chunks(sent: Sentence, profile: LoiProfile) -> list[list[int]] | None:
    """Split the sentence into reorderable chunks: one contiguous block per
    first-level LOI subtree plus the root chunk (root and all remaining
    material, internal order fixed). Returns None when some LOI subtree is
    not contiguous."""
    lois = find_loi_attachments(sent, profile)
    if not lois:
        return []
    tree = build_tree(sent)
    blocks = []
    covered: set[int] = set()
    for tid, _, _ in lois:
        ids = sorted(subtree_token_ids(tree, tid))
        if ids[-1] - ids[0] + 1 != len(ids):
            return None
        blocks.append(ids)
        covered |= set(ids)
    root_chunk = [t.id for t in sent.tokens if t.id not in covered]
    chunks = blocks + [root_chunk]
    chunks.sort(key=lambda ids: ids[0])
    return chunks


def rotate(sent: Sentence, profile: LoiProfile, p, rng: RngStream) -> list[Sentence]:
    """With probability p emit one copy whose chunks are reordered by a
    uniformly drawn non-identity permutation. Skips (with a warning) sentences
    whose LOI subtrees are not contiguous."""
    chunks = rotate_chunks(sent, profile)
    if chunks is None:
        logger.warning("rotate: skipped sentence with non-contiguous LOI subtree: %s", sent.text())
        return []
    if not chunks or len(chunks) < 2:
        return []
    if rng.random() >= float(p):
        return []
    identity = list(range(len(chunks)))
    perm = identity[:]
    while perm == identity:
        rng.shuffle(perm)
    new_order = [tid for i in perm for tid in chunks[i]]
    mapping = {old: new for new, old in enumerate(new_order, start=1)}
    tokens = []
    for old_id in new_order:
        tok = sent.token(old_id).clone()
        tok.id = mapping[old_id]
        if tok.head not in (0, None):
            tok.head = mapping[tok.head]
        tokens.append(tok)
    return [Sentence(list(sent.comments), tokens, [], [])]


# ---------------------------------------------------------------------------
# Nonce


@dataclass
class NonceIndex:
    """Pools of interchangeable content-word forms keyed by
    (upos, canonical feats, deprel)."""

    pools: dict[tuple[str, str, str], list[str]] = field(default_factory=dict)

    def pool(self, tok) -> list[str]:
        return self.pools.get((tok.upos, tok.feats, tok.deprel), [])


def build_nonce_index(sentences: list[Sentence]) -> NonceIndex:
    """Collect the distinct forms observed for each content-word key."""
    seen: dict[tuple[str, str, str], set[str]] = {}
    for sent in sentences:
        for tok in sent.tokens:
            if tok.upos not in CONTENT_UPOS:
                continue
            seen.setdefault((tok.upos, tok.feats, tok.deprel), set()).add(tok.form)
    return NonceIndex({key: sorted(forms) for key, forms in seen.items()})


def nonce(sent: Sentence, index: NonceIndex, p, rng: RngStream) -> list[Sentence]:
    """Replace each content token with probability p by a uniform draw from
    its pool (its own form excluded). Emits the copy only when at least one
    replacement happened."""
    threshold = float(p)
    out = sent.clone()
    changed = False
    for tok in out.tokens:
        if tok.upos not in CONTENT_UPOS:
            continue
        if rng.random() >= threshold:
            continue
        alternatives = [f for f in index.pool(tok) if f != tok.form]
        if not alternatives:
            continue
        tok.form = alternatives[rng.randrange(len(alternatives))]
        changed = True
    return [out] if changed else []
