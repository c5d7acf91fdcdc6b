"""Line-oriented N-Triples reader."""

from __future__ import annotations

import re

from .terms import IRI, BNode, Literal, Term, Triple


class RDFSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


class UnsupportedConstructError(RDFSyntaxError):
    """Raised for valid RDF syntax the reader deliberately does not accept."""


_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
_ECHAR = r"\\[tbnrf\"'\\]"
IRIREF = re.compile(r"<((?:[^\x00-\x20<>\"{}|^`\\]|" + _UCHAR + r")*)>")
BNODE_LABEL = re.compile(
    r"_:([A-Za-z0-9_\u00C0-\U000EFFFF](?:[A-Za-z0-9_.\-\u00B7\u00C0-\U000EFFFF]*[A-Za-z0-9_\-\u00B7\u00C0-\U000EFFFF])?)"
)
STRING_QUOTE = re.compile(r'"((?:[^"\\\n\r]|' + _ECHAR + "|" + _UCHAR + r')*)"')
LANGTAG = re.compile(r"@([a-zA-Z]+(?:-[a-zA-Z0-9]+)*)")
_WS = re.compile(r"[ \t]*")
_LINE_BREAK = re.compile(r"\r\n|\n|\r")
_ESCAPE = re.compile(_ECHAR + "|" + _UCHAR)
_ECHAR_MAP = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def unescape(s: str) -> str:
    if "\\" not in s:
        return s

    def sub(m: re.Match[str]) -> str:
        tok = m.group(0)
        if tok[1] in "uU":
            return chr(int(tok[2:], 16))
        return _ECHAR_MAP[tok[1]]

    return _ESCAPE.sub(sub, s)


def _decode(text: str | bytes) -> str:
    if isinstance(text, bytes):
        try:
            return text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise RDFSyntaxError(f"input is not valid UTF-8 ({exc.reason} at byte {exc.start})", 1) from exc
    return text


class TermReader:
    def __init__(self, line: str, lineno: int):
        self.s = line
        self.pos = 0
        self.lineno = lineno

    def error(self, msg: str) -> RDFSyntaxError:
        return RDFSyntaxError(msg, self.lineno, self.pos + 1)

    def skip_ws(self) -> None:
        self.pos = _WS.match(self.s, self.pos).end()

    def node(self, allow_literal: bool) -> Term:
        self.skip_ws()
        s, pos = self.s, self.pos
        if pos >= len(s):
            raise self.error("unexpected end of line")
        c = s[pos]
        if c == "<":
            m = IRIREF.match(s, pos)
            if not m:
                raise self.error("malformed IRI")
            self.pos = m.end()
            return IRI(unescape(m.group(1)))
        if c == "_":
            m = BNODE_LABEL.match(s, pos)
            if not m:
                raise self.error("malformed blank node label")
            self.pos = m.end()
            return BNode(m.group(1))
        if c == '"' and allow_literal:
            m = STRING_QUOTE.match(s, pos)
            if not m:
                raise self.error("malformed string literal")
            self.pos = m.end()
            lexical = unescape(m.group(1))
            if s.startswith("@", self.pos):
                lm = LANGTAG.match(s, self.pos)
                if not lm:
                    raise self.error("malformed language tag")
                self.pos = lm.end()
                return Literal(lexical, lang=lm.group(1))
            if s.startswith("^^", self.pos):
                self.pos += 2
                dm = IRIREF.match(s, self.pos)
                if not dm:
                    raise self.error("datatype must be an absolute IRI")
                self.pos = dm.end()
                return Literal(lexical, datatype=unescape(dm.group(1)))
            return Literal(lexical)
        raise self.error(f"unexpected character {c!r}")


def parse_ntriples(text: str | bytes) -> list[Triple]:
    """Parse an N-Triples document, keeping document order and duplicates."""
    text = _decode(text)
    triples: list[Triple] = []
    for lineno, raw in enumerate(_LINE_BREAK.split(text), start=1):
        r = TermReader(raw, lineno)
        r.skip_ws()
        if r.pos >= len(raw) or raw[r.pos] == "#":
            continue
        subj = r.node(allow_literal=False)
        pred = r.node(allow_literal=False)
        if not isinstance(pred, IRI):
            raise RDFSyntaxError("predicate must be an IRI", lineno)
        obj = r.node(allow_literal=True)
        r.skip_ws()
        if not raw.startswith(".", r.pos):
            raise r.error("expected '.' at end of statement")
        r.pos += 1
        r.skip_ws()
        if r.pos < len(raw) and raw[r.pos] != "#":
            raise r.error("trailing content after statement")
        triples.append(Triple(subj, pred, obj))
    return triples


def parse_line(line: str) -> Triple:
    """Parse exactly one statement (used when decoding ledger payloads)."""
    out = parse_ntriples(line)
    if len(out) != 1:
        raise RDFSyntaxError(f"expected one statement, found {len(out)}", 1)
    return out[0]
