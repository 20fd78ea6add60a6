"""Shared fixtures: the demo sentence, random-sentence generation, and an
acceptance-criteria reporter."""

import random
from pathlib import Path

import pytest

from augtree.treebank import Sentence, Token, parse_conllu

DATA_DIR = Path(__file__).parent / "data"

DEMO_CONLLU = """\
1\tI\tI\tPRON\t_\t_\t2\tnsubj\t_\t_
2\twrote\twrite\tVERB\t_\t_\t0\troot\t_\t_
3\thim\the\tPRON\t_\t_\t2\tiobj\t_\t_
4\ta\ta\tDET\t_\t_\t5\tdet\t_\t_
5\tletter\tletter\tNOUN\t_\t_\t2\tobj\t_\t_
"""


@pytest.fixture
def demo_sentence() -> Sentence:
    """'I wrote him a letter' with nsubj/iobj/det/obj edges."""
    return parse_conllu(DEMO_CONLLU)[0]


def make_sentence(specs) -> Sentence:
    """Build a sentence from (form, lemma, upos, head, deprel) tuples."""
    tokens = [
        Token(id=i, form=form, lemma=lemma, upos=upos, head=head, deprel=deprel)
        for i, (form, lemma, upos, head, deprel) in enumerate(specs, start=1)
    ]
    return Sentence(tokens=tokens)


_FORM_POOL = (
    "a", "i", "o", "at", "we", "dog", "sun", "tree", "water", "letter",
    "garden", "mountain", "quickly", "bright", "seventy", "lamp", "chair",
)
_UPOS_POOL = ("NOUN", "VERB", "ADJ", "PRON", "DET", "ADV", "ADP", "PUNCT")
_DEPREL_POOL = ("nsubj", "obj", "iobj", "obl", "det", "advmod", "amod", "case", "punct")
_FEATS_POOL = ("_", "Number=Sing", "Case=Nom|Number=Sing", "Number=Plur")


def random_sentence(rng: random.Random, min_len: int = 2, max_len: int = 10) -> Sentence:
    """A random well-formed sentence: every non-root token attaches to an
    already-attached token, so the tree is acyclic with a single root."""
    n = rng.randint(min_len, max_len)
    order = list(range(1, n + 1))
    rng.shuffle(order)
    heads = {order[0]: 0}
    for pos, tid in enumerate(order[1:], start=1):
        heads[tid] = order[rng.randrange(pos)]
    tokens = []
    for tid in range(1, n + 1):
        deprel = "root" if heads[tid] == 0 else rng.choice(_DEPREL_POOL)
        tokens.append(Token(
            id=tid,
            form=rng.choice(_FORM_POOL),
            lemma=rng.choice(_FORM_POOL),
            upos=rng.choice(_UPOS_POOL),
            feats=rng.choice(_FEATS_POOL),
            head=heads[tid],
            deprel=deprel,
        ))
    return Sentence(tokens=tokens)


# Acceptance reporting: one pass/fail line per criterion in the terminal summary.
_ACCEPTANCE_RESULTS: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when != "call":
        return
    name = report.nodeid.rsplit("::", 1)[-1]
    if "test_acceptance" in report.nodeid and name.startswith("test_c"):
        _ACCEPTANCE_RESULTS[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE_RESULTS:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for name in sorted(_ACCEPTANCE_RESULTS):
        terminalreporter.write_line(f"{_ACCEPTANCE_RESULTS[name]}  {name}")
