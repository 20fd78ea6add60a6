"""Corpus-level augmentation driver.

Every sentence is processed with RNG streams derived from
(seed, sentence_index, copy_index), never from shared state, so the output is
bit-identical across runs and across any degree of parallelism. Originals are
always retained, each immediately followed by its augmented copies.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from . import char_level, syntactic, token_level
from .char_level import CharVocab, build_char_vocab
from .core import (
    AugConfig,
    CHAR_TECHNIQUES,
    ORTHOGRAPHIC_TECHNIQUES,
    Technique,
    cap_count,
    derive_stream,
    num_augmented,
)
from .errors import AugtreeError, ConfigError
from .syntactic import LoiProfile, NonceIndex, build_nonce_index, resolve_profile
from .token_level import EmbeddingTable
from .treebank import Sentence


@dataclass
class AugResources:
    """Corpus-derived lookups shared by all sentences of one run."""

    char_vocab: CharVocab | None = None
    embeddings: EmbeddingTable | None = None
    nonce_index: NonceIndex | None = None
    profile: LoiProfile | None = None


@dataclass(frozen=True)
class ProvenanceRecord:
    """Where one augmented sentence came from."""

    source_index: int
    copy_index: int
    technique: str
    ratio: float
    probability: float
    max_sentences: int
    seed: int


MANIFEST_COLUMNS = ("source_index", "copy_index", "technique", "ratio",
                    "probability", "max_sentences", "seed")


def manifest_tsv(records: list[ProvenanceRecord]) -> str:
    lines = ["\t".join(MANIFEST_COLUMNS)]
    for r in records:
        lines.append("\t".join(str(v) for v in (
            r.source_index, r.copy_index, r.technique, r.ratio,
            r.probability, r.max_sentences, r.seed)))
    return "\n".join(lines) + "\n"


def prepare_resources(
    sentences: list[Sentence],
    cfg: AugConfig,
    *,
    embeddings: EmbeddingTable | None = None,
    profile: "str | LoiProfile | None" = None,
) -> AugResources:
    """Build exactly the lookups the configured technique needs."""
    res = AugResources()
    if cfg.technique in CHAR_TECHNIQUES:
        res.char_vocab = build_char_vocab(sentences, cfg.vocab_top_k)
    if cfg.technique is Technique.SR:
        if embeddings is None:
            raise ConfigError("synonym replacement requires an embedding table")
        res.embeddings = embeddings
    if cfg.technique is Technique.NONCE:
        res.nonce_index = build_nonce_index(sentences)
    if cfg.technique in (Technique.CROP, Technique.ROTATE):
        res.profile = resolve_profile(profile if profile is not None else "ud")
    return res


def augment_sentence(
    sent: Sentence,
    cfg: AugConfig,
    resources: AugResources,
    sentence_index: int = 0,
) -> list[Sentence]:
    """Augmented copies of one sentence (originals are added by augment_corpus).

    Orthographic techniques and nonce emit up to
    min(floor(ratio * |sentence|), max_sentences) copies; crop and rotate are
    candidate-driven, truncated to max_sentences.
    """
    cfg.require_viable()
    technique = cfg.technique

    if technique in ORTHOGRAPHIC_TECHNIQUES:
        count = cap_count(num_augmented(cfg.ratio, len(sent)), cfg.max_sentences)
        outputs = []
        for copy_index in range(count):
            rng = derive_stream(cfg.seed, sentence_index, copy_index)
            out = _orthographic_copy(sent, cfg, resources, rng)
            if out is not None:
                outputs.append(out)
        return outputs

    # Syntactic techniques never touch sentences with empty nodes: enhanced
    # dependencies would be invalidated, so those pass through unaugmented.
    if sent.empty_nodes:
        return []
    if not sent.is_annotated():
        raise ConfigError(
            f"technique {technique.value!r} requires dependency annotation")

    if technique is Technique.NONCE:
        count = cap_count(num_augmented(cfg.ratio, len(sent)), cfg.max_sentences)
        outputs = []
        for copy_index in range(count):
            rng = derive_stream(cfg.seed, sentence_index, copy_index)
            outputs.extend(syntactic.nonce(sent, resources.nonce_index, cfg.probability, rng))
        return outputs

    profile = resources.profile if resources.profile is not None else resolve_profile("ud")
    base = sent
    if profile.merge_labels:
        base = syntactic.merge_fixed_expressions(sent, profile)
    rng = derive_stream(cfg.seed, sentence_index, 0)
    if technique is Technique.CROP:
        outputs = syntactic.crop(base, profile, cfg.probability, rng)
    else:
        outputs = syntactic.rotate(base, profile, cfg.probability, rng)
    return outputs[: cfg.max_sentences]


def _orthographic_copy(sent, cfg, resources, rng) -> Sentence | None:
    technique = cfg.technique
    if technique in CHAR_TECHNIQUES:
        return char_level.apply_char_noise(
            sent, technique, resources.char_vocab, cfg.probability, rng)
    if technique is Technique.SR:
        return token_level.synonym_replace(
            sent, resources.embeddings, cfg.probability, cfg.knn_k, rng)
    if technique is Technique.RWD:
        return token_level.random_word_delete(sent, cfg.probability, rng)
    if technique is Technique.RWS:
        return token_level.random_word_swap(sent, cfg.probability, rng)
    raise ConfigError(f"unhandled technique {technique!r}")


def augment_corpus(
    sentences: list[Sentence],
    cfg: AugConfig,
    *,
    embeddings: EmbeddingTable | None = None,
    profile: "str | LoiProfile | None" = None,
    max_workers: int | None = None,
) -> tuple[list[Sentence], list[ProvenanceRecord]]:
    """Augment a corpus, returning (originals interleaved with copies,
    provenance records for the copies)."""
    cfg.require_viable()
    if not sentences:
        return [], []
    resources = prepare_resources(sentences, cfg, embeddings=embeddings, profile=profile)

    def work(idx: int) -> list[Sentence]:
        try:
            return augment_sentence(sentences[idx], cfg, resources, idx)
        except AugtreeError as exc:
            raise type(exc)(f"sentence {idx}: {exc}") from exc

    indices = range(len(sentences))
    if max_workers is not None and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            per_sentence = list(pool.map(work, indices))
    else:
        per_sentence = [work(i) for i in indices]

    out: list[Sentence] = []
    manifest: list[ProvenanceRecord] = []
    for idx, copies in enumerate(per_sentence):
        out.append(sentences[idx])
        for copy_index, copy in enumerate(copies):
            out.append(copy)
            manifest.append(ProvenanceRecord(
                source_index=idx, copy_index=copy_index,
                technique=cfg.technique.value, ratio=float(cfg.ratio),
                probability=float(cfg.probability),
                max_sentences=cfg.max_sentences, seed=cfg.seed,
            ))
    return out, manifest
