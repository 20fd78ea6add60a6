"""Corpus statistics: counts, length histogram, label inventories, and the
per-profile distribution of label-of-interest attachments."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from .syntactic import LoiProfile, num_loi
from .treebank import Sentence


@dataclass
class CorpusStats:
    sentence_count: int = 0
    token_count: int = 0
    length_hist: Counter = field(default_factory=Counter)
    upos_counts: Counter = field(default_factory=Counter)
    deprel_counts: Counter = field(default_factory=Counter)
    # profile name -> Counter mapping #LOI value to number of sentences
    loi_dist: dict[str, Counter] = field(default_factory=dict)


def corpus_stats(sentences: list[Sentence], profiles: list[LoiProfile] | None = None) -> CorpusStats:
    stats = CorpusStats()
    profiles = profiles or []
    for profile in profiles:
        stats.loi_dist[profile.name] = Counter()
    for sent in sentences:
        stats.sentence_count += 1
        stats.token_count += len(sent)
        stats.length_hist[len(sent)] += 1
        for tok in sent.tokens:
            stats.upos_counts[tok.upos] += 1
            stats.deprel_counts[tok.deprel] += 1
        for profile in profiles:
            if sent.is_annotated():
                stats.loi_dist[profile.name][num_loi(sent, profile)] += 1
    return stats


def stats_tsv(stats: CorpusStats) -> str:
    """Flat three-column report: section, key, value."""
    rows = [("corpus", "sentences", stats.sentence_count),
            ("corpus", "tokens", stats.token_count)]
    for length in sorted(stats.length_hist):
        rows.append(("length", length, stats.length_hist[length]))
    for upos, count in sorted(stats.upos_counts.items(), key=lambda kv: (-kv[1], kv[0])):
        rows.append(("upos", upos, count))
    for deprel, count in sorted(stats.deprel_counts.items(), key=lambda kv: (-kv[1], kv[0])):
        rows.append(("deprel", deprel, count))
    for name in sorted(stats.loi_dist):
        for n in sorted(stats.loi_dist[name]):
            rows.append((f"loi:{name}", n, stats.loi_dist[name][n]))
    lines = ["section\tkey\tvalue"]
    lines.extend(f"{section}\t{key}\t{value}" for section, key, value in rows)
    return "\n".join(lines) + "\n"
