"""JSON wire formats for series, extension-algebra elements and tail elements.

Series::

    {"mode": "exact"|"numeric", "trunc": T,
     "terms": [{"exps": {"0": 2, "3": 1}, "re": "...", "im": "..."}]}

Exact coefficients are rational strings ``"p/q"`` with ``im`` zero. Module
elements are ``{"a": <series>, "m": <series | coefficient>, "action": ...}``
and tail elements ``{"a": <series>, "tail": [<coeff>, ...], "rank": r}`` or
``"rank": {"inf_trunc": R}``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

from .higher import ArElement
from .module_algebra import ModuleAction, ModuleElement
from .series import EXACT, Monomial, PowerSeries, coerce


def coeff_to_json(c) -> dict:
    if isinstance(c, (Fraction, int)):
        c = Fraction(c)
        return {"re": f"{c.numerator}/{c.denominator}", "im": "0"}
    c = complex(c)
    return {"re": repr(c.real), "im": repr(c.imag)}


def coeff_from_json(obj: dict, mode: str):
    re, im = obj.get("re", "0"), obj.get("im", "0")
    if mode == EXACT:
        if Fraction(im) != 0:
            raise ValueError("exact mode coefficients must be real")
        return Fraction(re)
    return complex(float(re), float(im))


def series_to_json(f: PowerSeries) -> dict:
    terms = []
    for m, c in sorted(f.terms.items()):
        terms.append({"exps": {str(i): e for i, e in m.items}, **coeff_to_json(c)})
    return {"mode": f.mode, "trunc": f.trunc, "terms": terms}


def series_from_json(obj: dict) -> PowerSeries:
    mode = obj.get("mode", EXACT)
    terms = {}
    for t in obj.get("terms", []):
        mono = Monomial({int(i): int(e) for i, e in t.get("exps", {}).items()})
        terms[mono] = terms.get(mono, 0) + coeff_from_json(t, mode)
    return PowerSeries(terms, int(obj["trunc"]), mode)


def module_element_to_json(u: ModuleElement, action: ModuleAction) -> dict:
    m = series_to_json(u.m) if isinstance(u.m, PowerSeries) else coeff_to_json(u.m)
    return {"a": series_to_json(u.a), "m": m, "action": action.name}


def module_element_from_json(obj: dict) -> tuple[ModuleElement, ModuleAction]:
    a = series_from_json(obj["a"])
    m_obj = obj["m"]
    m = series_from_json(m_obj) if "terms" in m_obj else coeff_from_json(m_obj, a.mode)
    action = ModuleAction.parse(obj.get("action", "self" if "terms" in m_obj else "char@1"))
    action.check_value(m)
    return ModuleElement(a, m), action


def ar_to_json(u: ArElement) -> dict:
    rank = {"inf_trunc": u.rank} if u.infinite else u.rank
    return {"a": series_to_json(u.a), "tail": [coeff_to_json(m) for m in u.tail], "rank": rank}


def ar_from_json(obj: dict) -> ArElement:
    a = series_from_json(obj["a"])
    tail = [coeff_from_json(m, a.mode) for m in obj.get("tail", [])]
    rank = obj.get("rank", len(tail))
    infinite = isinstance(rank, dict)
    r = int(rank["inf_trunc"]) if infinite else int(rank)
    if len(tail) > r:
        raise ValueError(f"tail has {len(tail)} entries, rank is {r}")
    tail += [coerce(0, a.mode)] * (r - len(tail))
    return ArElement(a, tail, infinite)


def element_from_json(obj: dict):
    """Dispatch on keys: a tail element, a module element, or a bare series."""
    if "tail" in obj:
        return ar_from_json(obj)
    if "m" in obj:
        return module_element_from_json(obj)[0]
    return series_from_json(obj)


def load(path) -> dict:
    return json.loads(Path(path).read_text())


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)
