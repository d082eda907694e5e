"""Result documents: plain dicts rendered as deterministic JSON.

Every CLI command emits one document.  Rendering is byte-stable for a
fixed input and version: keys sorted, two-space indent, trailing
newline, rationals as {"num", "den"} pairs.  Wall-clock timing is
attached only when explicitly requested so that golden files can be
compared bytewise.
"""

from __future__ import annotations

import json
from fractions import Fraction

FORMAT = "blockext-result 1"


def rational_obj(q) -> dict:
    q = Fraction(q)
    return {"num": q.numerator, "den": q.denominator}


def ext_class_obj(e) -> dict:
    return {"free_rank": e.free_rank,
            "torsion": [rational_obj(v) for v in e.torsion],
            "pretty": e.pretty()}


def cyclo_obj(v) -> dict:
    v = v.minimal()
    return {"conductor": v.m,
            "coeffs": [rational_obj(c) for c in v.coeffs]}


def class_function_obj(cf) -> dict:
    return {"degree": cf.degree(),
            "values": [cyclo_obj(v) for v in cf.values]}


def block_char_obj(c) -> dict:
    return {"lambda": list(c.lam.vec),
            "degree": c.degree,
            "chi": [cyclo_obj(v) for v in c.chi.values]}


def document(kind: str, name: str, body: dict, *, version: str,
             precision=None, timing=None) -> dict:
    doc = {"format": FORMAT, "kind": kind, "name": name, "version": version}
    if precision is not None:
        doc["precision"] = precision
    doc.update(body)
    if timing is not None:
        doc["timing_seconds"] = round(timing, 3)
    return doc


def render(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"
