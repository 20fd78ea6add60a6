import math
import random
from fractions import Fraction

import pytest

from augtree.core import (
    AugConfig,
    Task,
    Technique,
    cap_count,
    derive_stream,
    is_viable,
    num_augmented,
    select_token_indices,
)
from augtree.errors import ConfigError


@pytest.mark.parametrize("ratio,length,expected", [
    (0.1, 10, 1),
    (0.1, 5, 0),
    (0.4, 5, 2),
    (0.3, 10, 3),   # would be 2 with naive float floor
    (0.0, 100, 0),
    (1.0, 7, 7),
])
def test_num_augmented(ratio, length, expected):
    assert num_augmented(ratio, length) == expected


def test_num_augmented_matches_exact_floor_property():
    rng = random.Random(3)
    for _ in range(1000):
        ratio = Fraction(rng.randint(0, 100), 100)
        length = rng.randint(1, 80)
        assert num_augmented(ratio, length) == math.floor(ratio * length)
        assert num_augmented(float(ratio), length) == math.floor(ratio * length)


@pytest.mark.parametrize("count,cap,expected", [(12, 5, 5), (3, 10, 3), (0, 5, 0)])
def test_cap_count(count, cap, expected):
    assert cap_count(count, cap) == expected


def test_derive_stream_is_deterministic():
    a = derive_stream(99, 4, 2)
    b = derive_stream(99, 4, 2)
    assert [a.random() for _ in range(100)] == [b.random() for _ in range(100)]


def test_derive_stream_triples_are_independent():
    base = [derive_stream(7, 0, 0).random() for _ in range(5)]
    assert base != [derive_stream(7, 0, 1).random() for _ in range(5)]
    assert base != [derive_stream(7, 1, 0).random() for _ in range(5)]
    assert base != [derive_stream(8, 0, 0).random() for _ in range(5)]


def test_select_all_at_probability_one():
    assert select_token_indices(5, 1.0, derive_stream(0, 0, 0)) == {1, 2, 3, 4, 5}


def test_select_singleton_never_empty():
    for seed in range(50):
        assert select_token_indices(1, 0.01, derive_stream(seed, 0, 0)) == {1}


def test_select_mean_matches_bernoulli_with_nonempty_rule():
    # E[|selected|] = n*p + (1-p)^n because an empty draw forces one index.
    total = 0
    for seed in range(100_000):
        total += len(select_token_indices(10, 0.3, derive_stream(seed, 0, 0)))
    mean = total / 100_000
    assert 2.9 <= mean <= 3.2
    expected = 10 * 0.3 + (1 - 0.3) ** 10
    assert abs(mean - expected) / expected < 0.05


@pytest.mark.parametrize("technique,task,expected", [
    (Technique.RWD, Task.DEP, False),
    (Technique.RWD, Task.SRL, False),
    (Technique.RWD, Task.POS, True),
    (Technique.RWS, Task.DEP, False),
    (Technique.NONCE, Task.SRL, False),
    (Technique.NONCE, Task.DEP, True),
    (Technique.CSW, Task.SRL, True),
    (Technique.CI, Task.POS, True),
    (Technique.SR, Task.SRL, True),
    (Technique.CROP, Task.SRL, True),
    (Technique.ROTATE, Task.DEP, True),
])
def test_viability_matrix(technique, task, expected):
    assert is_viable(technique, task) is expected


def test_config_rejects_bad_parameters():
    with pytest.raises(ConfigError):
        AugConfig(Technique.CD, Task.POS, ratio=1.5)
    with pytest.raises(ConfigError):
        AugConfig(Technique.CD, Task.POS, probability=0.0)
    with pytest.raises(ConfigError):
        AugConfig(Technique.CD, Task.POS, max_sentences=0)


def test_config_viability_check():
    cfg = AugConfig(Technique.RWD, Task.DEP)
    with pytest.raises(ConfigError, match="not viable"):
        cfg.require_viable()
