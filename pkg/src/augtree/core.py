"""Parameter semantics, deterministic randomness, and task-viability rules.

Counting is done in exact rational arithmetic: a float parameter like 0.3 is
read as the decimal 3/10, so floor(0.3 * 10) is 3 and not 2 as naive float
math would give.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .errors import ConfigError

# A deterministic draw source; streams derived from the same triple produce
# the same sequence on every platform.
RngStream = random.Random


class Technique(str, Enum):
    CI = "ci"
    CD = "cd"
    CSU = "csu"
    CSW = "csw"
    CA = "ca"
    SR = "sr"
    RWD = "rwd"
    RWS = "rws"
    CROP = "crop"
    ROTATE = "rotate"
    NONCE = "nonce"


class Task(str, Enum):
    POS = "pos"
    DEP = "dep"
    SRL = "srl"


CHAR_TECHNIQUES = frozenset({Technique.CI, Technique.CD, Technique.CSU, Technique.CSW, Technique.CA})
# Techniques whose copy count follows the ratio law (floor(ratio * |sentence|)).
RATIO_TECHNIQUES = CHAR_TECHNIQUES | {Technique.SR, Technique.RWD, Technique.RWS, Technique.NONCE}
ORTHOGRAPHIC_TECHNIQUES = CHAR_TECHNIQUES | {Technique.SR, Technique.RWD, Technique.RWS}
SYNTACTIC_TECHNIQUES = frozenset({Technique.CROP, Technique.ROTATE, Technique.NONCE})

_ALL_TASKS = frozenset(Task)

# Which tasks each technique may target. Word deletion and swapping invalidate
# the dependency tree, so they are POS-only; nonce rewriting keeps syntax but
# not semantics, so it is excluded from SRL. Random word insertion is not
# supported at all: an inserted token would have no annotation.
VIABLE_TASKS: dict[Technique, frozenset[Task]] = {
    Technique.CI: _ALL_TASKS,
    Technique.CD: _ALL_TASKS,
    Technique.CSU: _ALL_TASKS,
    Technique.CSW: _ALL_TASKS,
    Technique.CA: _ALL_TASKS,
    Technique.SR: _ALL_TASKS,
    Technique.RWD: frozenset({Task.POS}),
    Technique.RWS: frozenset({Task.POS}),
    Technique.CROP: _ALL_TASKS,
    Technique.ROTATE: _ALL_TASKS,
    Technique.NONCE: frozenset({Task.POS, Task.DEP}),
}

# Standard experiment grids.
GRID_RATIOS = (0.1, 0.2, 0.3, 0.4)
GRID_PROBABILITIES = (0.1, 0.2, 0.3, 0.4)
GRID_TREE_PROBABILITIES = (0.1, 0.3, 0.5, 0.7, 1.0)
GRID_MAX_SENTENCES = (5, 10)


def is_viable(technique: Technique, task: Task) -> bool:
    """Whether a technique may be applied when training data targets a task."""
    return task in VIABLE_TASKS[Technique(technique)]


@dataclass(frozen=True)
class AugConfig:
    """One augmentation run: technique, target task, and sampling parameters.

    ratio drives the per-sentence copy count for orthographic techniques (and
    nonce); probability drives per-token/per-candidate sampling; max_sentences
    caps the copies emitted per source sentence; seed makes every draw
    reproducible. knn_k is the neighbor pool size for synonym replacement and
    vocab_top_k the character-vocabulary size for character noise.
    """

    technique: Technique
    task: Task
    ratio: float = 0.1
    probability: float = 0.1
    max_sentences: int = 5
    seed: int = 0
    knn_k: int = 5
    vocab_top_k: int = 100

    def __post_init__(self):
        object.__setattr__(self, "technique", Technique(self.technique))
        object.__setattr__(self, "task", Task(self.task))
        if not 0 <= float(self.ratio) <= 1:
            raise ConfigError(f"ratio must be in [0, 1], got {self.ratio}")
        if not 0 < float(self.probability) <= 1:
            raise ConfigError(f"probability must be in (0, 1], got {self.probability}")
        if self.max_sentences < 1:
            raise ConfigError(f"max_sentences must be >= 1, got {self.max_sentences}")
        if self.knn_k < 1:
            raise ConfigError(f"knn_k must be >= 1, got {self.knn_k}")
        if self.vocab_top_k < 1:
            raise ConfigError(f"vocab_top_k must be >= 1, got {self.vocab_top_k}")

    def require_viable(self) -> None:
        if not is_viable(self.technique, self.task):
            raise ConfigError(
                f"technique {self.technique.value!r} is not viable for task {self.task.value!r}")


def as_fraction(value) -> Fraction:
    """Read a parameter as an exact rational; floats are taken at their decimal face value."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def num_augmented(ratio, sentence_len: int) -> int:
    """Copies owed to one sentence: floor(ratio * length)."""
    return math.floor(as_fraction(ratio) * sentence_len)


def cap_count(count: int, max_sentences: int) -> int:
    return min(count, max_sentences)


def derive_stream(seed: int, sentence_index: int, copy_index: int) -> RngStream:
    """Independent per-copy stream; the same triple always yields the same draws."""
    key = f"{seed}:{sentence_index}:{copy_index}".encode()
    digest = hashlib.sha256(key).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


def select_token_indices(n: int, p, rng: RngStream) -> set[int]:
    """Pick each index in 1..n independently with probability p.

    An all-clean draw would produce an augmented sentence identical to its
    source, so when nothing is selected one index is forced uniformly.
    """
    threshold = float(p)
    selected = {i for i in range(1, n + 1) if rng.random() < threshold}
    if not selected:
        selected = {rng.randrange(1, n + 1)}
    return selected
