"""Regenerate the parser fixtures and their expected parses.

The expected JSON is produced by rdflib, used here as an independent
reference parser. rdflib is only needed to run this script, never by the
package or the test suite::

    pip install rdflib
    python3 tests/fixtures/make_fixtures.py
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import rdflib
from rdflib import BNode, Literal, URIRef

HERE = Path(__file__).resolve().parent
XSD = "http://www.w3.org/2001/XMLSchema#"
KKO = "http://kbpedia.org/kko/rc/"
RDF = "http://www.w3.org/1999/02/22-rdf-syntax-ns#"
RDFS = "http://www.w3.org/2000/01/rdf-schema#"
OWL = "http://www.w3.org/2002/07/owl#"
SKOS = "http://www.w3.org/2004/02/skos/core#"

WORDS = (
    "animal plant mineral device vehicle organism process event artifact place agent "
    "structure substance region activity situation concept quality quantity relation"
).split()


def term_json(term) -> list:
    if isinstance(term, URIRef):
        return ["iri", str(term)]
    if isinstance(term, BNode):
        # rdflib relabels blank nodes, so only their presence is comparable
        return ["bnode", "*"]
    if isinstance(term, Literal):
        dt = str(term.datatype) if term.datatype is not None else None
        if dt == XSD + "string":
            dt = None
        return ["literal", str(term), term.language.lower() if term.language else None, dt]
    raise TypeError(type(term))


def expected(path: Path, fmt: str) -> list:
    g = rdflib.Graph()
    g.parse(path, format=fmt)
    rows = [[term_json(s), term_json(p), term_json(o)] for s, p, o in g]
    return sorted(rows, key=json.dumps)


def escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"').replace("\n", "\\n").replace("\t", "\\t")


def ntriples_lines(rng: random.Random) -> list[str]:
    """100 distinct statements covering the N-Triples term forms."""
    specials = [
        f'<{KKO}Caf\\u00E9> <{RDFS}label> "caf\\u00E9 \\U0001F600" .',
        f'<{KKO}Quote> <{RDFS}comment> "say \\"hi\\"\\tand\\\\leave\\r\\n" .',
        f'<{KKO}Lang> <{SKOS}prefLabel> "Hund"@de-CH .',
        f'<{KKO}Lang> <{SKOS}altLabel> "chien"@FR .',
        f'<{KKO}Typed> <{KKO}count> "042"^^<{XSD}integer> .',
        f'<{KKO}Typed> <{KKO}ratio> "1.50"^^<{XSD}decimal> .',
        f'<{KKO}Typed> <{KKO}name> "plain"^^<{XSD}string> .',
        f'_:node1 <{KKO}partOf> _:node2 .',
        f'_:node2 <{RDF}type> <{OWL}Class> .',
        f'<{KKO}Empty> <{RDFS}comment> "" .',
        f'<{KKO}Unicode> <{RDFS}label> "\u65e5\u672c\u8a9e \u00fcber" .',
        f'<{KKO}Spaces>\t<{RDFS}label>   "tabbed"  .  ',
        f'<{KKO}Iri\\u0041> <{RDFS}seeAlso> <http://example.org/a%20b#frag> .',
    ]
    lines = list(specials)
    i = 0
    while len(lines) < 100:
        a, b = rng.choice(WORDS), rng.choice(WORDS)
        subj = f"<{KKO}{a.capitalize()}{b.capitalize()}{i}>"
        kind = i % 4
        if kind == 0:
            lines.append(f"{subj} <{RDF}type> <{OWL}Class> .")
        elif kind == 1:
            lines.append(f"{subj} <{RDFS}subClassOf> <{KKO}{b.capitalize()}> .")
        elif kind == 2:
            lines.append(f'{subj} <{SKOS}prefLabel> "{escape(a + " " + b)}"@en .')
        else:
            lines.append(f'{subj} <{SKOS}definition> "{escape("A " + a + " that is " + b)}." .')
        i += 1
    # comments and blank lines do not count towards the 100 statements
    return ["# parser fixture: 100 statements", ""] + lines + ["# end"]


def turtle_doc(rng: random.Random) -> str:
    """A 1,000-triple excerpt in the style of the KBPedia reference concepts."""
    out = [
        f"@prefix rc: <{KKO}> .",
        f"@prefix rdfs: <{RDFS}> .",
        f"@prefix owl: <{OWL}> .",
        f"PREFIX skos: <{SKOS}>",
        f"@prefix xsd: <{XSD}> .",
        "@base <http://kbpedia.org/kko/> .",
        "",
    ]
    count = 0
    i = 0
    while count < 1000:
        a, b = rng.choice(WORDS), rng.choice(WORDS)
        name = f"{a.capitalize()}{b.capitalize()}-{i}"
        parent = rng.choice(WORDS).capitalize()
        stmts = [
            "a owl:Class",
            f"rdfs:subClassOf rc:{parent}",
            f'skos:prefLabel "{a} {b}"@en',
            f'skos:definition """A {a} that\nrelates to "{b}"."""',
        ]
        extra = i % 5
        if extra == 0:
            stmts.append(f"skos:altLabel '{b} {a}', \"{a}-{b}\"@en-US")
        elif extra == 1:
            stmts.append(f"rc:weight {rng.randint(-50, 900)}")
        elif extra == 2:
            stmts.append(f"rc:score {rng.randint(0, 99)}.{rng.randint(0, 99):02d}")
        elif extra == 3:
            stmts.append(f"rc:mass 1.5e{rng.randint(1, 9)} ; rc:active {rng.choice(['true', 'false'])}")
        else:
            stmts.append(f'rdfs:seeAlso <rc/{name}> ; rc:note "x"^^xsd:token')
        out.append(f"rc:{name} " + " ;\n    ".join(stmts) + " .")
        count = len(expected_from_text("\n".join(out)))
        i += 1
    # trim the last subject's statements if it overshoots, keeping exactly 1,000
    while count > 1000:
        out.pop()
        i -= 1
        a_name = f"rc:Trim{i} a owl:Class ."
        out.append(a_name)
        count = len(expected_from_text("\n".join(out)))
        if count < 1000:
            break
    while count < 1000:
        out.append(f"rc:Pad{count} a owl:Class .")
        count += 1
    return "\n".join(out) + "\n"


def expected_from_text(text: str) -> rdflib.Graph:
    g = rdflib.Graph()
    g.parse(data=text, format="turtle")
    return g


def main() -> None:
    rdflib.NORMALIZE_LITERALS = False
    rng = random.Random(20240617)
    nt = HERE / "sample100.nt"
    nt.write_text("\n".join(ntriples_lines(rng)) + "\n", encoding="utf-8")
    ttl = HERE / "kbpedia_excerpt.ttl"
    ttl.write_text(turtle_doc(rng), encoding="utf-8")
    for path, fmt in ((nt, "nt"), (ttl, "turtle")):
        rows = expected(path, fmt)
        (HERE / (path.stem + ".expected.json")).write_text(json.dumps(rows, indent=0, ensure_ascii=False) + "\n",
                                                           encoding="utf-8")
        print(f"{path.name}: {len(rows)} triples")


if __name__ == "__main__":
    main()
