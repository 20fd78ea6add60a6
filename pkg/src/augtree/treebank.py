"""CoNLL-U and CoNLL-09 sentences, dependency trees, and lossless round-tripping.

CoNLL-U: 10 tab-separated columns (ID FORM LEMMA UPOS XPOS FEATS HEAD DEPREL
DEPS MISC), "#" comment lines, one blank line between sentences, "_" for empty
fields. Multiword-token ranges ("3-4") and empty nodes ("8.1") are preserved
for round-tripping but carry no semantics here.

CoNLL-09: >= 14 tab-separated columns (ID FORM LEMMA PLEMMA POS PPOS FEAT PFEAT
HEAD PHEAD DEPREL PDEPREL FILLPRED PRED APRED...), one APRED column per
FILLPRED=Y token. Gold columns populate the regular Token fields; the five
predicted columns (PLEMMA PPOS PFEAT PHEAD PDEPREL) are stashed tab-joined in
Token.misc so a parsed file serializes back byte-identically.

Normalization contract: trailing whitespace stripped, feature bundles sorted,
a single blank line between sentences, and a final newline. For any file in
this normal form, serialize(parse(f)) == f byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError, TreeError

CONLLU_COLUMNS = ("ID", "FORM", "LEMMA", "UPOS", "XPOS", "FEATS", "HEAD", "DEPREL", "DEPS", "MISC")

EMPTY = "_"
_PRED_COLS_EMPTY = "\t".join([EMPTY] * 5)


def canonical_feats(feats: str) -> str:
    """Sort attribute=value pairs lexicographically; "_" stands for no features."""
    if feats in ("", EMPTY):
        return EMPTY
    return "|".join(sorted(feats.split("|")))


@dataclass
class SrlInfo:
    """Semantic-role columns of one CoNLL-09 token."""

    fillpred: bool = False
    pred: str = EMPTY
    apreds: list[str] = field(default_factory=list)

    def clone(self) -> "SrlInfo":
        return SrlInfo(self.fillpred, self.pred, list(self.apreds))


@dataclass
class Token:
    """One annotated word. head is None when the sentence carries no dependency
    annotation (serialized as "_"); head 0 attaches to the virtual root."""

    id: int
    form: str
    lemma: str = EMPTY
    upos: str = EMPTY
    xpos: str = EMPTY
    feats: str = EMPTY
    head: int | None = None
    deprel: str = EMPTY
    deps: str = EMPTY
    misc: str = EMPTY
    srl: SrlInfo | None = None

    def clone(self) -> "Token":
        return Token(
            self.id, self.form, self.lemma, self.upos, self.xpos, self.feats,
            self.head, self.deprel, self.deps, self.misc,
            self.srl.clone() if self.srl is not None else None,
        )


@dataclass
class MwtRange:
    """Multiword-token surface range covering token ids start..end."""

    start: int
    end: int
    form: str
    misc: str = EMPTY


@dataclass
class Sentence:
    """Ordered token sequence plus comments, multiword ranges and empty nodes.

    Token ids are 1..n in order. empty_nodes holds raw lines for decimal-id
    nodes, verbatim; they are re-emitted after the token their id anchors to.
    """

    comments: list[str] = field(default_factory=list)
    tokens: list[Token] = field(default_factory=list)
    mwt_ranges: list[MwtRange] = field(default_factory=list)
    empty_nodes: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.tokens)

    def clone(self) -> "Sentence":
        return Sentence(
            list(self.comments),
            [t.clone() for t in self.tokens],
            [MwtRange(r.start, r.end, r.form, r.misc) for r in self.mwt_ranges],
            list(self.empty_nodes),
        )

    def token(self, token_id: int) -> Token:
        return self.tokens[token_id - 1]

    def forms(self) -> list[str]:
        return [t.form for t in self.tokens]

    def text(self) -> str:
        return " ".join(t.form for t in self.tokens)

    def is_annotated(self) -> bool:
        """True when every token carries an integer head."""
        return bool(self.tokens) and all(t.head is not None for t in self.tokens)

    def predicate_ids(self) -> list[int]:
        return [t.id for t in self.tokens if t.srl is not None and t.srl.fillpred]


@dataclass
class DepTree:
    """Root id plus child lists (surface-ordered) keyed by token id."""

    root_id: int
    children: dict[int, list[int]]


# ---------------------------------------------------------------------------
# CoNLL-U


def parse_conllu(text: str) -> list[Sentence]:
    """Parse CoNLL-U text into validated sentences.

    Raises ParseError (naming the line) on malformed columns, bad ids or
    heads, duplicate ids, or tree violations. A parsed sentence is never
    silently invalid: if it has dependency annotation it has exactly one
    root and no cycles.
    """
    sentences = []
    for start_line, lines in _sentence_blocks(text):
        sentences.append(_parse_conllu_block(lines, start_line))
    return sentences


def _sentence_blocks(text: str):
    """Yield (first_line_number, [(line_no, line), ...]) per sentence block."""
    block: list[tuple[int, str]] = []
    for line_no, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip()
        if not line:
            if block:
                yield block[0][0], block
                block = []
            continue
        block.append((line_no, line))
    if block:
        yield block[0][0], block


def _parse_conllu_block(lines: list[tuple[int, str]], start_line: int) -> Sentence:
    sent = Sentence()
    token_lines: list[int] = []
    for line_no, line in lines:
        if line.startswith("#"):
            sent.comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) != 10:
            raise ParseError(f"expected 10 tab-separated columns, got {len(cols)}", line_no)
        tid = cols[0]
        if "-" in tid:
            sent.mwt_ranges.append(_parse_mwt(tid, cols, line_no))
            continue
        if "." in tid:
            sent.empty_nodes.append(line)
            continue
        try:
            token_id = int(tid)
        except ValueError:
            raise ParseError(f"non-integer token id {tid!r}", line_no) from None
        if token_id < 1:
            raise ParseError(f"token id must be >= 1, got {token_id}", line_no)
        if not cols[1]:
            raise ParseError("empty FORM", line_no)
        head: int | None
        if cols[6] == EMPTY:
            head = None
        else:
            try:
                head = int(cols[6])
            except ValueError:
                raise ParseError(f"non-integer head {cols[6]!r}", line_no) from None
            if head < 0:
                raise ParseError(f"negative head {head}", line_no)
        sent.tokens.append(Token(
            id=token_id, form=cols[1], lemma=cols[2], upos=cols[3], xpos=cols[4],
            feats=canonical_feats(cols[5]), head=head, deprel=cols[7],
            deps=cols[8], misc=cols[9],
        ))
        token_lines.append(line_no)
    _check_sentence(sent, token_lines, start_line)
    return sent


def _parse_mwt(tid: str, cols: list[str], line_no: int) -> MwtRange:
    try:
        start_s, end_s = tid.split("-", 1)
        start, end = int(start_s), int(end_s)
    except ValueError:
        raise ParseError(f"malformed multiword range id {tid!r}", line_no) from None
    if start > end or start < 1:
        raise ParseError(f"invalid multiword range {tid!r}", line_no)
    return MwtRange(start, end, cols[1], cols[9])


def _check_sentence(sent: Sentence, token_lines: list[int], start_line: int) -> None:
    n = len(sent.tokens)
    if n == 0:
        raise ParseError("sentence block contains no token lines", start_line)
    for pos, (tok, line_no) in enumerate(zip(sent.tokens, token_lines), start=1):
        if tok.id != pos:
            raise ParseError(f"token id {tok.id} out of sequence (expected {pos})", line_no)
    for r in sent.mwt_ranges:
        if r.end > n:
            raise ParseError(f"multiword range {r.start}-{r.end} exceeds sentence length {n}", start_line)

    annotated = [t.head is not None for t in sent.tokens]
    if any(annotated) and not all(annotated):
        bad = token_lines[annotated.index(False)]
        raise ParseError("mixed head annotation (some heads are '_')", bad)
    if not all(annotated):
        return

    roots = []
    for tok, line_no in zip(sent.tokens, token_lines):
        if tok.head == tok.id:
            raise ParseError(f"token {tok.id} is its own head", line_no)
        if tok.head > n:
            raise ParseError(f"head out of range ({tok.head} > {n})", line_no)
        if tok.head == 0:
            roots.append(tok.id)
    if not roots:
        raise ParseError("no root (no token with head 0)", start_line)
    if len(roots) > 1:
        raise ParseError(f"multiple roots: tokens {roots}", start_line)
    unreachable = _unreachable_ids(sent, roots[0])
    if unreachable:
        raise ParseError(f"cycle involving tokens {sorted(unreachable)}", start_line)


def _unreachable_ids(sent: Sentence, root_id: int) -> set[int]:
    children: dict[int, list[int]] = {t.id: [] for t in sent.tokens}
    for t in sent.tokens:
        if t.head not in (0, None):
            children[t.head].append(t.id)
    seen = set()
    stack = [root_id]
    while stack:
        node = stack.pop()
        if node in seen:
            continue
        seen.add(node)
        stack.extend(children[node])
    return {t.id for t in sent.tokens} - seen


def serialize_conllu(sentences: list[Sentence]) -> str:
    """Render sentences in normal form; inverse of parse_conllu on normalized input."""
    blocks = [_conllu_block(s) for s in sentences]
    return "\n\n".join(blocks) + "\n" if blocks else ""


def _conllu_block(sent: Sentence) -> str:
    lines = list(sent.comments)
    empty_by_anchor: dict[int, list[str]] = {}
    for raw in sent.empty_nodes:
        anchor = int(raw.split("\t", 1)[0].split(".", 1)[0])
        empty_by_anchor.setdefault(anchor, []).append(raw)
    mwt_by_start = {r.start: r for r in sent.mwt_ranges}
    lines.extend(empty_by_anchor.get(0, []))
    for tok in sent.tokens:
        rng = mwt_by_start.get(tok.id)
        if rng is not None:
            lines.append("\t".join([
                f"{rng.start}-{rng.end}", rng.form, EMPTY, EMPTY, EMPTY,
                EMPTY, EMPTY, EMPTY, EMPTY, rng.misc,
            ]))
        head = EMPTY if tok.head is None else str(tok.head)
        lines.append("\t".join([
            str(tok.id), tok.form, tok.lemma, tok.upos, tok.xpos,
            tok.feats, head, tok.deprel, tok.deps, tok.misc,
        ]))
        lines.extend(empty_by_anchor.get(tok.id, []))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# CoNLL-09


def parse_conll09(text: str) -> list[Sentence]:
    """Parse CoNLL-09 text; the APRED column count must equal the number of
    FILLPRED=Y tokens in each sentence."""
    sentences = []
    for start_line, lines in _sentence_blocks(text):
        sentences.append(_parse_conll09_block(lines, start_line))
    return sentences


def _parse_conll09_block(lines: list[tuple[int, str]], start_line: int) -> Sentence:
    sent = Sentence()
    token_lines: list[int] = []
    width = None
    for line_no, line in lines:
        if line.startswith("#"):
            sent.comments.append(line)
            continue
        cols = line.split("\t")
        if len(cols) < 14:
            raise ParseError(f"expected >= 14 tab-separated columns, got {len(cols)}", line_no)
        if width is None:
            width = len(cols)
        elif len(cols) != width:
            raise ParseError(f"inconsistent column count ({len(cols)} vs {width})", line_no)
        try:
            token_id = int(cols[0])
        except ValueError:
            raise ParseError(f"non-integer token id {cols[0]!r}", line_no) from None
        if not cols[1]:
            raise ParseError("empty FORM", line_no)
        head: int | None
        if cols[8] == EMPTY:
            head = None
        else:
            try:
                head = int(cols[8])
            except ValueError:
                raise ParseError(f"non-integer head {cols[8]!r}", line_no) from None
        sent.tokens.append(Token(
            id=token_id, form=cols[1], lemma=cols[2], upos=cols[4], xpos=EMPTY,
            feats=canonical_feats(cols[6]), head=head, deprel=cols[10],
            deps=EMPTY,
            misc="\t".join([cols[3], cols[5], cols[7], cols[9], cols[11]]),
            srl=SrlInfo(fillpred=cols[12] == "Y", pred=cols[13], apreds=list(cols[14:])),
        ))
        token_lines.append(line_no)
    if width is not None:
        n_pred = sum(1 for t in sent.tokens if t.srl.fillpred)
        if width - 14 != n_pred:
            raise ParseError(
                f"APRED column count {width - 14} != predicate count {n_pred}", start_line)
    _check_sentence(sent, token_lines, start_line)
    return sent


def serialize_conll09(sentences: list[Sentence]) -> str:
    blocks = [_conll09_block(s) for s in sentences]
    return "\n\n".join(blocks) + "\n" if blocks else ""


def _conll09_block(sent: Sentence) -> str:
    lines = list(sent.comments)
    for tok in sent.tokens:
        pred_cols = tok.misc.split("\t")
        if len(pred_cols) != 5:
            pred_cols = _PRED_COLS_EMPTY.split("\t")
        srl = tok.srl if tok.srl is not None else SrlInfo()
        head = EMPTY if tok.head is None else str(tok.head)
        lines.append("\t".join([
            str(tok.id), tok.form, tok.lemma, pred_cols[0], tok.upos, pred_cols[1],
            tok.feats, pred_cols[2], head, pred_cols[3], tok.deprel, pred_cols[4],
            "Y" if srl.fillpred else EMPTY, srl.pred, *srl.apreds,
        ]))
    return "\n".join(lines)


def parse_corpus(text: str, fmt: str = "conllu") -> list[Sentence]:
    if fmt == "conllu":
        return parse_conllu(text)
    if fmt == "conll09":
        return parse_conll09(text)
    raise ValueError(f"unknown format {fmt!r}")


def validate_text(text: str, fmt: str = "conllu") -> list[tuple[int, Exception]]:
    """Check every sentence block, returning (sentence_index, error) pairs
    instead of stopping at the first violation."""
    parse_block = _parse_conllu_block if fmt == "conllu" else _parse_conll09_block
    problems = []
    for index, (start_line, lines) in enumerate(_sentence_blocks(text)):
        try:
            parse_block(lines, start_line)
        except (ParseError, TreeError) as exc:
            problems.append((index, exc))
    return problems


def serialize_corpus(sentences: list[Sentence], fmt: str = "conllu") -> str:
    if fmt == "conllu":
        return serialize_conllu(sentences)
    if fmt == "conll09":
        return serialize_conll09(sentences)
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# Trees


def build_tree(sent: Sentence) -> DepTree:
    """Build the dependency tree of a fully annotated sentence.

    Raises TreeError on zero or multiple roots or on a cycle, naming the
    offending token ids.
    """
    if not sent.is_annotated():
        raise TreeError("sentence has no dependency annotation")
    roots = [t.id for t in sent.tokens if t.head == 0]
    if not roots:
        raise TreeError("no root token (head 0)")
    if len(roots) > 1:
        raise TreeError(f"multiple roots: tokens {roots}")
    children: dict[int, list[int]] = {t.id: [] for t in sent.tokens}
    for t in sent.tokens:
        if t.head == t.id:
            raise TreeError(f"token {t.id} is its own head")
        if t.head != 0:
            if t.head not in children:
                raise TreeError(f"token {t.id} has head {t.head} out of range")
            children[t.head].append(t.id)
    unreachable = _unreachable_ids(sent, roots[0])
    if unreachable:
        raise TreeError(f"cycle involving tokens {sorted(unreachable)}")
    return DepTree(root_id=roots[0], children=children)


def subtree_token_ids(tree: DepTree, head_id: int) -> set[int]:
    """The token id plus all of its descendants."""
    if head_id not in tree.children:
        raise TreeError(f"unknown token id {head_id}")
    out = set()
    stack = [head_id]
    while stack:
        node = stack.pop()
        out.add(node)
        stack.extend(tree.children[node])
    return out


def reindex(sent: Sentence, kept_ids: list[int], new_root: int | None = None) -> Sentence:
    """Keep only kept_ids (in surface order), renumbering tokens 1..k.

    Heads are remapped through the renumbering. A kept token whose head was
    removed becomes the root (head 0) if it is new_root, otherwise a TreeError
    is raised. Multiword ranges not fully covered by kept_ids are dropped;
    empty-node lines are always dropped. For CoNLL-09 sentences, APRED columns
    of removed predicates are removed and the predicted-head column is remapped
    alongside the gold one.
    """
    ids = {t.id for t in sent.tokens}
    kept = list(kept_ids)
    if sorted(set(kept)) != kept:
        raise ValueError("kept_ids must be unique and in surface order")
    if not set(kept) <= ids:
        raise ValueError(f"kept_ids not a subset of token ids: {sorted(set(kept) - ids)}")
    mapping = {old: new for new, old in enumerate(kept, start=1)}

    old_preds = sent.predicate_ids()
    kept_pred_slots = [i for i, pid in enumerate(old_preds) if pid in mapping]

    tokens = []
    for old_id in kept:
        tok = sent.token(old_id).clone()
        tok.id = mapping[old_id]
        if tok.head is None or tok.head == 0:
            pass
        elif tok.head in mapping:
            tok.head = mapping[tok.head]
        elif old_id == new_root:
            tok.head = 0
        else:
            raise TreeError(f"dangling head: token {old_id} depends on removed token {tok.head}")
        if tok.srl is not None:
            tok.srl.apreds = [tok.srl.apreds[i] for i in kept_pred_slots if i < len(tok.srl.apreds)]
            tok.misc = _remap_pred_cols(tok.misc, mapping)
        tokens.append(tok)

    mwt = []
    for r in sent.mwt_ranges:
        if all(i in mapping for i in range(r.start, r.end + 1)):
            mwt.append(MwtRange(mapping[r.start], mapping[r.end], r.form, r.misc))
    return Sentence(list(sent.comments), tokens, mwt, [])


def _remap_pred_cols(misc: str, mapping: dict[int, int]) -> str:
    cols = misc.split("\t")
    if len(cols) != 5:
        return misc
    phead = cols[3]
    if phead not in (EMPTY, "0"):
        try:
            old = int(phead)
        except ValueError:
            return misc
        cols[3] = str(mapping[old]) if old in mapping else EMPTY
        return "\t".join(cols)
    return misc
