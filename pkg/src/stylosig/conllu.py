"""Minimal CoNLL-U reader producing validated dependency trees.

Only the columns needed downstream are kept (FORM, LEMMA, UPOS, HEAD,
DEPREL).  Multiword-token ranges and empty nodes are skipped; comment
lines are ignored.  Every sentence must form a single-rooted tree.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .errors import DataError

N_COLUMNS = 10


@dataclass(frozen=True)
class DepToken:
    form: str
    lemma: str
    upos: str
    head: int  # 0-based index of the parent token, -1 for the root
    deprel: str


@dataclass(frozen=True)
class DepSentence:
    tokens: tuple[DepToken, ...]
    root: int

    def __len__(self):
        return len(self.tokens)


def _flush(rows, source, start_line):
    # rows: list of (id, form, lemma, upos, head, deprel) with 1-based ids
    ids = [r[0] for r in rows]
    index_of = {tid: i for i, tid in enumerate(ids)}
    if len(index_of) != len(ids):
        raise DataError(f"{source}: duplicate token id in sentence at line {start_line}")
    tokens = []
    for tid, form, lemma, upos, head, deprel in rows:
        if head == 0:
            parent = -1
        elif head in index_of:
            parent = index_of[head]
        else:
            raise DataError(
                f"{source}: HEAD {head} of token {tid} missing in sentence at line {start_line}"
            )
        tokens.append(DepToken(form, lemma, upos, parent, deprel))

    roots = [i for i, t in enumerate(tokens) if t.head == -1]
    if len(roots) != 1:
        raise DataError(
            f"{source}: sentence at line {start_line} has {len(roots)} roots, expected exactly 1"
        )
    # every node must reach the root without revisiting anything
    n = len(tokens)
    for i in range(n):
        node, steps = i, 0
        while node != -1:
            node = tokens[node].head
            steps += 1
            if steps > n:
                raise DataError(f"{source}: cycle in sentence at line {start_line}")
    return DepSentence(tuple(tokens), roots[0])


def parse_conllu(text: str, source: str = "<string>") -> tuple[DepSentence, ...]:
    """Parse CoNLL-U text into a tuple of dependency sentences."""
    sentences = []
    rows: list[tuple] = []
    start_line = 1
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip():
            if rows:
                sentences.append(_flush(rows, source, start_line))
                rows = []
            continue
        if line.startswith("#"):
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise DataError(f"{source}:{lineno}: expected {N_COLUMNS} tab-separated columns, got {len(cols)}")
        tid = cols[0]
        if "-" in tid or "." in tid:
            continue  # multiword range / empty node
        try:
            token_id = int(tid)
        except ValueError:
            raise DataError(f"{source}:{lineno}: bad token id {tid!r}") from None
        try:
            head = int(cols[6])
        except ValueError:
            raise DataError(f"{source}:{lineno}: bad HEAD {cols[6]!r}") from None
        if not rows:
            start_line = lineno
        rows.append((token_id, cols[1], cols[2], cols[3], head, cols[7]))
    if rows:
        sentences.append(_flush(rows, source, start_line))
    return tuple(sentences)


def read_conllu(path: str | Path) -> tuple[DepSentence, ...]:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    return parse_conllu(text, source=str(path))
