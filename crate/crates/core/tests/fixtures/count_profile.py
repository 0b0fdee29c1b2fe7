#!/usr/bin/env python3
"""Counts profile figures in an N-Triples file without using kgforge.

usage: count_profile.py FILE.nt [BASE]
Prints profile.tsv lines, then `class<TAB>iri<TAB>instances` lines.
"""
import re
import sys

BASE = sys.argv[2] if len(sys.argv) > 2 else "http://kgforge.local"
LABEL = "http://www.w3.org/2000/01/rdf-schema#label"
COMMENT = "http://www.w3.org/2000/01/rdf-schema#comment"
TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"
META = BASE + "/meta/"

TERM = r'(<[^>]*>|"(?:[^"\\]|\\.)*"(?:\^\^<[^>]*>|@[A-Za-z0-9-]+)?)'
LINE = re.compile(r"^\s*" + TERM + r"\s+" + TERM + r"\s+" + TERM + r"\s*\.\s*$")
ENTITY = re.compile("^" + re.escape(BASE) + r"/([^/]+)/(resource|class|property)/.+$")

kinds = {"resource": set(), "class": set(), "property": set()}
infobox = set()
typing = {}
assertions = 0

with open(sys.argv[1], encoding="utf-8") as f:
    for raw in f:
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        m = LINE.match(raw)
        if not m:
            sys.exit("unparsed line: " + raw)
        terms = m.groups()
        iris = [t[1:-1] for t in terms if t.startswith("<")]
        for iri in iris:
            e = ENTITY.match(iri)
            if e and e.group(1) != "meta":
                kinds[e.group(2)].add(iri)
        s, p, o = terms
        s, p = s[1:-1], p[1:-1]
        if p == META + "derivedFrom" and ENTITY.match(s) and ENTITY.match(s).group(2) == "class":
            infobox.add(s)
        if p == TYPE and o.startswith("<"):
            c = o[1:-1]
            e = ENTITY.match(c)
            if e and e.group(1) != "meta" and e.group(2) == "class":
                typing.setdefault(c, set()).add(s)
        if p not in (LABEL, COMMENT) and not p.startswith(META) and not s.startswith(META):
            assertions += 1

print("metric\tvalue")
print("instances\t%d" % len(kinds["resource"]))
print("classes\t%d" % len(kinds["class"]))
print("infoboxClasses\t%d" % len(infobox))
print("properties\t%d" % len(kinds["property"]))
print("assertions\t%d" % assertions)
for c in sorted(typing):
    print("class\t%s\t%d" % (c, len(typing[c])))
