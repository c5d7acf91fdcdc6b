"""Reader for a Turtle subset.

Supported: ``@prefix``/``PREFIX``, ``@base``/``BASE``, prefixed names, the
``a`` keyword, ``;`` and ``,`` abbreviations, blank node labels, all four
string quoting styles with language tags or datatypes, and numeric/boolean
shorthand literals. Anonymous blank nodes (``[ ... ]``) and collections
(``( ... )``) raise :class:`UnsupportedConstructError`; nothing is skipped.
"""

from __future__ import annotations

import bisect
import re
from urllib.parse import urljoin

from .ntriples import RDFSyntaxError, UnsupportedConstructError, _decode, unescape
from .terms import XSD, IRI, BNode, Literal, Term, Triple

RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"

_PN_CHARS_BASE = r"A-Za-z\u00C0-\u00D6\u00D8-\u00F6\u00F8-\u02FF\u0370-\u037D\u037F-\u1FFF\u200C-\u200D\u2070-\u218F\u2C00-\u2FEF\u3001-\uD7FF\uF900-\uFDCF\uFDF0-\uFFFD\U00010000-\U000EFFFF"
_PN_CHARS_U = _PN_CHARS_BASE + "_"
_PN_CHARS = _PN_CHARS_U + r"\-0-9\u00B7\u0300-\u036F\u203F-\u2040"
_PLX = r"%[0-9A-Fa-f]{2}|\\[_~.\-!$&'()*+,;=/?#@%]"
_PN_PREFIX = rf"[{_PN_CHARS_BASE}](?:[{_PN_CHARS}.]*[{_PN_CHARS}])?"
_PN_LOCAL = (
    rf"(?:[{_PN_CHARS_U}:0-9]|{_PLX})"
    rf"(?:(?:[{_PN_CHARS}.:]|{_PLX})*(?:[{_PN_CHARS}:]|{_PLX}))?"
)
_UCHAR = r"\\u[0-9A-Fa-f]{4}|\\U[0-9A-Fa-f]{8}"
_ECHAR = r"\\[tbnrf\"'\\]"

_TOKEN = re.compile(
    "|".join(
        [
            r"(?P<ws>[ \t\r\n]+|#[^\r\n]*)",
            r"(?P<iri><(?:[^\x00-\x20<>\"{}|^`\\]|" + _UCHAR + r")*>)",
            r'(?P<long2>"""(?:(?:"|"")?(?:[^"\\]|' + _ECHAR + "|" + _UCHAR + r'))*""")',
            r"(?P<long1>'''(?:(?:'|'')?(?:[^'\\]|" + _ECHAR + "|" + _UCHAR + r"))*''')",
            r'(?P<str2>"(?:[^"\\\n\r]|' + _ECHAR + "|" + _UCHAR + r')*")',
            r"(?P<str1>'(?:[^'\\\n\r]|" + _ECHAR + "|" + _UCHAR + r")*')",
            r"(?P<lang>@[a-zA-Z]+(?:-[a-zA-Z0-9]+)*)",
            r"(?P<dtype>\^\^)",
            r"(?P<bnode>_:[" + _PN_CHARS_U + r"0-9](?:[" + _PN_CHARS + r".]*[" + _PN_CHARS + r"])?)",
            r"(?P<pname>(?:" + _PN_PREFIX + r")?:(?:" + _PN_LOCAL + r")?)",
            r"(?P<double>[+-]?(?:[0-9]+\.[0-9]*[eE][+-]?[0-9]+|\.[0-9]+[eE][+-]?[0-9]+|[0-9]+[eE][+-]?[0-9]+))",
            r"(?P<decimal>[+-]?[0-9]*\.[0-9]+)",
            r"(?P<integer>[+-]?[0-9]+)",
            r"(?P<sparql_kw>(?i:PREFIX|BASE)(?![A-Za-z0-9_:]))",
            r"(?P<kw>true|false|a)(?![" + _PN_CHARS + r".:])",
            r"(?P<punct>[.;,\[\]()])",
        ]
    )
)
_LOCAL_ESCAPE = re.compile(r"\\([_~.\-!$&'()*+,;=/?#@%])")


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind: str, text: str, pos: int):
        self.kind = kind
        self.text = text
        self.pos = pos


class _TurtleReader:
    def __init__(self, text: str):
        self.text = text
        self._line_starts = [0] + [m.end() for m in re.finditer(r"\r\n|\n|\r", text)]
        self.toks = self._tokenize()
        self.i = 0
        self.prefixes: dict[str, str] = {}
        self.base: str | None = None
        self.out: list[Triple] = []

    def where(self, pos: int) -> tuple[int, int]:
        line = bisect.bisect_right(self._line_starts, pos)
        return line, pos - self._line_starts[line - 1] + 1

    def error(self, msg: str, pos: int | None = None, cls: type[RDFSyntaxError] = RDFSyntaxError):
        if pos is None:
            pos = self.toks[self.i].pos if self.i < len(self.toks) else len(self.text)
        line, col = self.where(pos)
        return cls(msg, line, col)

    def _tokenize(self) -> list[_Tok]:
        toks = []
        pos, n = 0, len(self.text)
        while pos < n:
            m = _TOKEN.match(self.text, pos)
            if not m or m.end() == pos:
                raise self.error(f"unexpected character {self.text[pos]!r}", pos)
            kind = m.lastgroup
            if kind != "ws":
                toks.append(_Tok(kind, m.group(), pos))
            pos = m.end()
        return toks

    def peek(self) -> _Tok | None:
        return self.toks[self.i] if self.i < len(self.toks) else None

    def next(self) -> _Tok:
        tok = self.peek()
        if tok is None:
            raise self.error("unexpected end of document")
        self.i += 1
        return tok

    def expect_punct(self, ch: str) -> None:
        tok = self.next()
        if tok.kind != "punct" or tok.text != ch:
            raise self.error(f"expected {ch!r}, found {tok.text!r}", tok.pos)

    # terms

    def resolve(self, iri: str) -> str:
        if self.base is not None and not re.match(r"[A-Za-z][A-Za-z0-9+.\-]*:", iri):
            return urljoin(self.base, iri)
        return iri

    def iri(self, tok: _Tok) -> str:
        if tok.kind == "iri":
            return self.resolve(unescape(tok.text[1:-1]))
        if tok.kind == "pname":
            prefix, _, local = tok.text.partition(":")
            if prefix not in self.prefixes:
                raise self.error(f"undeclared prefix {prefix!r}", tok.pos)
            return self.prefixes[prefix] + _LOCAL_ESCAPE.sub(r"\1", local)
        raise self.error(f"expected an IRI, found {tok.text!r}", tok.pos)

    def _unsupported(self, tok: _Tok) -> None:
        if tok.kind == "punct" and tok.text in "[(":
            what = "blank node property list" if tok.text == "[" else "collection"
            raise self.error(f"unsupported construct: {what}", tok.pos, UnsupportedConstructError)

    def subject(self) -> IRI | BNode:
        tok = self.next()
        self._unsupported(tok)
        if tok.kind == "bnode":
            return BNode(tok.text[2:])
        return IRI(self.iri(tok))

    def predicate(self) -> IRI:
        tok = self.next()
        if tok.kind == "kw" and tok.text == "a":
            return IRI(RDF_TYPE)
        self._unsupported(tok)
        return IRI(self.iri(tok))

    def object(self) -> Term:
        tok = self.next()
        self._unsupported(tok)
        k = tok.kind
        if k == "bnode":
            return BNode(tok.text[2:])
        if k in ("iri", "pname"):
            return IRI(self.iri(tok))
        if k in ("str1", "str2", "long1", "long2"):
            q = 3 if k.startswith("long") else 1
            lexical = unescape(tok.text[q:-q])
            nxt = self.peek()
            if nxt is not None and nxt.kind == "lang":
                self.i += 1
                return Literal(lexical, lang=nxt.text[1:])
            if nxt is not None and nxt.kind == "dtype":
                self.i += 1
                return Literal(lexical, datatype=self.iri(self.next()))
            return Literal(lexical)
        if k == "integer":
            return Literal(tok.text, datatype=XSD + "integer")
        if k == "decimal":
            return Literal(tok.text, datatype=XSD + "decimal")
        if k == "double":
            return Literal(tok.text, datatype=XSD + "double")
        if k == "kw" and tok.text in ("true", "false"):
            return Literal(tok.text, datatype=XSD + "boolean")
        raise self.error(f"expected an object term, found {tok.text!r}", tok.pos)

    # statements

    def directive(self, tok: _Tok) -> None:
        sparql_style = tok.kind == "sparql_kw"
        word = tok.text.lstrip("@").lower()
        if word == "prefix":
            name = self.next()
            if name.kind != "pname" or not name.text.endswith(":") or name.text.count(":") != 1:
                raise self.error("expected a prefix name ending in ':'", name.pos)
            target = self.next()
            if target.kind != "iri":
                raise self.error("expected an IRI for the prefix", target.pos)
            self.prefixes[name.text[:-1]] = self.resolve(unescape(target.text[1:-1]))
        elif word == "base":
            target = self.next()
            if target.kind != "iri":
                raise self.error("expected an IRI for the base", target.pos)
            self.base = self.resolve(unescape(target.text[1:-1]))
        else:
            raise self.error(f"unknown directive {tok.text!r}", tok.pos)
        if not sparql_style:
            self.expect_punct(".")

    def statement(self) -> None:
        tok = self.peek()
        if tok.kind == "lang" and tok.text in ("@prefix", "@base"):
            self.i += 1
            self.directive(tok)
            return
        if tok.kind == "sparql_kw":
            self.i += 1
            self.directive(tok)
            return
        subj = self.subject()
        while True:
            pred = self.predicate()
            while True:
                self.out.append(Triple(subj, pred, self.object()))
                nxt = self.peek()
                if nxt is not None and nxt.kind == "punct" and nxt.text == ",":
                    self.i += 1
                    continue
                break
            nxt = self.peek()
            if nxt is not None and nxt.kind == "punct" and nxt.text == ";":
                while nxt is not None and nxt.kind == "punct" and nxt.text == ";":
                    self.i += 1
                    nxt = self.peek()
                if nxt is not None and nxt.kind == "punct" and nxt.text == ".":
                    break
                continue
            break
        self.expect_punct(".")

    def parse(self) -> list[Triple]:
        while self.peek() is not None:
            self.statement()
        return self.out


def parse_turtle(text: str | bytes) -> list[Triple]:
    """Parse the supported Turtle subset into fully expanded triples."""
    return _TurtleReader(_decode(text)).parse()
