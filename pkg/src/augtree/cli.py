"""Command-line interface.

Subcommands:
  augment    apply one technique to a corpus, writing corpus + manifest
  grid       write one corpus per parameter combination
  sample     uniform sample without replacement, order preserved
  split-dev  deterministic train/dev partition
  stats      corpus statistics as TSV (plus figures with --out-dir)
  validate   check sentence and tree invariants

Exit codes: 0 success, 1 validation/config error, 2 I/O or parse error.
AUGTREE_SEED serves as the fallback seed when --seed is not given.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from .core import (
    AugConfig,
    GRID_MAX_SENTENCES,
    GRID_PROBABILITIES,
    GRID_RATIOS,
    GRID_TREE_PROBABILITIES,
    Task,
    Technique,
    as_fraction,
    derive_stream,
)
from .errors import AugtreeError, ConfigError, EmbeddingError, ParseError, TreeError
from .pipeline import augment_corpus, manifest_tsv
from .figures import render_stats_figures
from .stats import corpus_stats, stats_tsv
from .syntactic import resolve_profile
from .token_level import load_embeddings
from .treebank import parse_corpus, serialize_corpus, validate_text

logger = logging.getLogger("augtree")

TREE_TECHNIQUES = (Technique.CROP, Technique.ROTATE)


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; bad flags are configuration errors here.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise ConfigError(message)


def _env_seed() -> int:
    return int(os.environ.get("AUGTREE_SEED", "0"))


def _read_corpus(path: str, fmt: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IoError(str(exc)) from exc
    return parse_corpus(text, fmt)


class _IoError(AugtreeError):
    pass


def _write_atomic(path: "str | Path", text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text, encoding="utf-8")
    os.replace(tmp, path)


def _preprocess(sentences, lowercase: bool, max_len: int | None):
    if max_len is not None:
        sentences = [s for s in sentences if len(s) <= max_len]
    if lowercase:
        lowered = []
        for s in sentences:
            c = s.clone()
            for tok in c.tokens:
                tok.form = tok.form.lower()
            lowered.append(c)
        sentences = lowered
    return sentences


class _WarningCounter(logging.Handler):
    def __init__(self):
        super().__init__(level=logging.WARNING)
        self.count = 0

    def emit(self, record):
        self.count += 1


# ---------------------------------------------------------------------------
# augment


def _load_embeddings_if_needed(args, techniques):
    if not any(t is Technique.SR for t in techniques):
        return None
    if not args.embeddings:
        raise ConfigError("synonym replacement requires --embeddings")
    return load_embeddings(Path(args.embeddings).read_text(encoding="utf-8"))


def _run_augmentation(sentences, args, technique: Technique, ratio, probability,
                      max_sentences, embeddings):
    if technique in TREE_TECHNIQUES and ratio is not None:
        logger.warning("ratio is ignored for %s (candidate-driven technique)", technique.value)
    cfg = AugConfig(
        technique=technique,
        task=Task(args.task),
        ratio=AugConfig.ratio if ratio is None else ratio,
        probability=probability,
        max_sentences=max_sentences,
        seed=args.seed,
        knn_k=args.knn_k,
        vocab_top_k=args.vocab_top_k,
    )
    cfg.require_viable()
    profile = resolve_profile(args.profile)
    return augment_corpus(sentences, cfg, embeddings=embeddings, profile=profile,
                          max_workers=args.workers)


def cmd_augment(args) -> int:
    counter = _WarningCounter()
    syntactic_logger = logging.getLogger("augtree.syntactic")
    syntactic_logger.addHandler(counter)
    try:
        sentences = _preprocess(_read_corpus(args.input, args.format),
                                args.lowercase, args.max_len)
        technique = Technique(args.technique)
        embeddings = _load_embeddings_if_needed(args, [technique])
        out, manifest = _run_augmentation(
            sentences, args, technique, args.ratio, args.probability,
            args.max_sentences, embeddings)
    finally:
        syntactic_logger.removeHandler(counter)
    _write_atomic(args.output, serialize_corpus(out, args.format))
    manifest_path = args.manifest or str(args.output) + ".manifest.tsv"
    _write_atomic(manifest_path, manifest_tsv(manifest))
    if counter.count:
        logger.warning("%d sentence(s) skipped during rotation (non-contiguous subtrees)",
                       counter.count)
    logger.info("wrote %d sentences (%d augmented) to %s", len(out), len(manifest), args.output)
    return 0


# ---------------------------------------------------------------------------
# grid


@dataclass(frozen=True)
class GridSpec:
    """Parameter grid; defaults mirror the standard experiment grids."""

    techniques: tuple[Technique, ...]
    ratios: tuple[float, ...] = GRID_RATIOS
    probabilities: tuple[float, ...] | None = None
    max_sentences_values: tuple[int, ...] = GRID_MAX_SENTENCES
    seed: int = 0

    def combinations(self):
        """Yield (technique, ratio, probability, max_sentences); ratio is None
        for candidate-driven techniques that do not use it."""
        if not self.techniques:
            raise ConfigError("grid over an empty technique set")
        for technique in self.techniques:
            if self.probabilities is not None:
                probs = self.probabilities
            elif technique in TREE_TECHNIQUES:
                probs = GRID_TREE_PROBABILITIES
            else:
                probs = GRID_PROBABILITIES
            ratios = (None,) if technique in TREE_TECHNIQUES else self.ratios
            for ratio in ratios:
                for probability in probs:
                    for max_sentences in self.max_sentences_values:
                        yield technique, ratio, probability, max_sentences


def _combo_name(technique, ratio, probability, max_sentences, ext) -> str:
    parts = [technique.value]
    if ratio is not None:
        parts.append(f"r{ratio}")
    parts.append(f"p{probability}")
    parts.append(f"m{max_sentences}")
    return "_".join(parts) + "." + ext


def cmd_grid(args) -> int:
    sentences = _preprocess(_read_corpus(args.input, args.format), args.lowercase, args.max_len)
    techniques = tuple(Technique(t.strip()) for t in args.techniques.split(",") if t.strip())
    spec = GridSpec(
        techniques=techniques,
        ratios=tuple(args.ratios) if args.ratios else GRID_RATIOS,
        probabilities=tuple(args.probabilities) if args.probabilities else None,
        max_sentences_values=(tuple(args.max_sentences_values)
                              if args.max_sentences_values else GRID_MAX_SENTENCES),
        seed=args.seed,
    )
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    embeddings = _load_embeddings_if_needed(args, techniques)
    index_rows = ["filename\ttechnique\tratio\tprobability\tmax_sentences\tseed"]
    written = 0
    for technique, ratio, probability, max_sentences in spec.combinations():
        out, manifest = _run_augmentation(
            sentences, args, technique, ratio, probability, max_sentences, embeddings)
        name = _combo_name(technique, ratio, probability, max_sentences, args.format)
        _write_atomic(out_dir / name, serialize_corpus(out, args.format))
        _write_atomic(out_dir / (name + ".manifest.tsv"), manifest_tsv(manifest))
        index_rows.append("\t".join([
            name, technique.value, "" if ratio is None else str(ratio),
            str(probability), str(max_sentences), str(args.seed)]))
        written += 1
    _write_atomic(out_dir / "grid_index.tsv", "\n".join(index_rows) + "\n")
    logger.info("grid wrote %d corpora to %s", written, out_dir)
    return 0


# ---------------------------------------------------------------------------
# sample / split-dev


def cmd_sample(args) -> int:
    sentences = _read_corpus(args.input, args.format)
    if args.n > len(sentences):
        raise ConfigError(f"cannot sample {args.n} from {len(sentences)} sentences")
    rng = derive_stream(args.seed, 0, 0)
    keep = sorted(rng.sample(range(len(sentences)), args.n))
    _write_atomic(args.output, serialize_corpus([sentences[i] for i in keep], args.format))
    logger.info("sampled %d of %d sentences to %s", args.n, len(sentences), args.output)
    return 0


def cmd_split_dev(args) -> int:
    if not 0 < args.fraction < 1:
        raise ConfigError(f"fraction must be in (0, 1), got {args.fraction}")
    sentences = _read_corpus(args.input, args.format)
    n = len(sentences)
    dev_size = math.floor(as_fraction(args.fraction) * n + as_fraction(0.5))
    rng = derive_stream(args.seed, 0, 0)
    dev_idx = set(rng.sample(range(n), dev_size))
    dev = [sentences[i] for i in range(n) if i in dev_idx]
    train = [sentences[i] for i in range(n) if i not in dev_idx]
    _write_atomic(args.train_output, serialize_corpus(train, args.format))
    _write_atomic(args.dev_output, serialize_corpus(dev, args.format))
    logger.info("split %d sentences into %d train / %d dev", n, len(train), len(dev))
    return 0


# ---------------------------------------------------------------------------
# stats / validate


def cmd_stats(args) -> int:
    sentences = _read_corpus(args.input, args.format)
    profiles = [resolve_profile(name.strip())
                for name in args.profile.split(",") if name.strip()]
    stats = corpus_stats(sentences, profiles)
    report = stats_tsv(stats)
    if args.out_dir:
        out_dir = Path(args.out_dir)
        _write_atomic(out_dir / "stats.tsv", report)
        if args.figures:
            for path in render_stats_figures(stats, out_dir):
                logger.info("wrote %s", path)
    else:
        sys.stdout.write(report)
    return 0


def cmd_validate(args) -> int:
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise _IoError(str(exc)) from exc
    problems = validate_text(text, args.format)
    for index, exc in problems:
        print(f"sentence {index}: {exc}", file=sys.stderr)
    if problems:
        print(f"{len(problems)} invalid sentence(s)", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------


def _add_io_args(p, output=True):
    p.add_argument("--input", required=True, help="input corpus file")
    p.add_argument("--format", choices=("conllu", "conll09"), default="conllu",
                   help="corpus format (default conllu)")
    if output:
        p.add_argument("--output", required=True, help="output corpus file")


def _add_augment_args(p):
    p.add_argument("--task", choices=[t.value for t in Task], required=True,
                   help="downstream task the output will train")
    p.add_argument("--ratio", type=float, default=None,
                   help="copies per sentence = floor(ratio * length) (default 0.1; "
                        "ignored by crop/rotate)")
    p.add_argument("--probability", type=float, default=0.1,
                   help="per-token / per-candidate probability (default 0.1)")
    p.add_argument("--max-sentences", type=int, default=5, dest="max_sentences",
                   help="cap on augmented copies per sentence (default 5)")
    p.add_argument("--seed", type=int, default=None,
                   help="random seed (default: AUGTREE_SEED or 0)")
    p.add_argument("--profile", default="ud",
                   help="label-of-interest profile: built-in name or config path (default ud)")
    p.add_argument("--embeddings", default=None,
                   help="word2vec-style text embeddings (required for sr)")
    p.add_argument("--vocab-top-k", type=int, default=100, dest="vocab_top_k",
                   help="character vocabulary size (default 100)")
    p.add_argument("--knn-k", type=int, default=5, dest="knn_k",
                   help="neighbor pool size for synonym replacement (default 5)")
    p.add_argument("--lowercase", action="store_true",
                   help="lowercase all token forms before augmentation")
    p.add_argument("--max-len", type=int, default=None, dest="max_len",
                   help="drop sentences longer than this before augmentation")
    p.add_argument("--workers", type=int, default=None,
                   help="parallel workers (output is identical at any setting)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="augtree",
                     description="Deterministic treebank augmentation toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("augment", help="apply one augmentation technique")
    _add_io_args(p)
    p.add_argument("--technique", choices=[t.value for t in Technique], required=True)
    _add_augment_args(p)
    p.add_argument("--manifest", default=None,
                   help="provenance manifest path (default: <output>.manifest.tsv)")
    p.set_defaults(func=cmd_augment)

    p = sub.add_parser("grid", help="augment with every parameter combination")
    _add_io_args(p, output=False)
    p.add_argument("--out-dir", required=True, dest="out_dir")
    p.add_argument("--techniques", required=True,
                   help="comma-separated technique list")
    p.add_argument("--ratios", type=float, nargs="*", default=None)
    p.add_argument("--probabilities", type=float, nargs="*", default=None)
    p.add_argument("--max-sentences-values", type=int, nargs="*", default=None,
                   dest="max_sentences_values")
    _add_augment_args(p)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("sample", help="uniform sample without replacement")
    _add_io_args(p)
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("split-dev", help="split off a development set")
    _add_io_args(p, output=False)
    p.add_argument("--fraction", type=float, default=0.25,
                   help="dev fraction (default 0.25)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--train-output", required=True, dest="train_output")
    p.add_argument("--dev-output", required=True, dest="dev_output")
    p.set_defaults(func=cmd_split_dev)

    p = sub.add_parser("stats", help="corpus statistics report")
    _add_io_args(p, output=False)
    p.add_argument("--profile", default="ud",
                   help="comma-separated profiles for the LOI distribution (default ud)")
    p.add_argument("--out-dir", default=None, dest="out_dir",
                   help="write stats.tsv and figures here instead of stdout")
    p.add_argument("--no-figures", action="store_false", dest="figures",
                   help="skip figure rendering")
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("validate", help="check sentence and tree invariants")
    _add_io_args(p, output=False)
    p.set_defaults(func=cmd_validate)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s: %(message)s",
                        stream=sys.stderr)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "seed", None) is None and hasattr(args, "seed"):
            args.seed = _env_seed()
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (_IoError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, TreeError, EmbeddingError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AugtreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
