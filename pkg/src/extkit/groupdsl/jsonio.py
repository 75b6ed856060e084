"""JSON form of group expressions: one object per syntax-tree alternative.

Integer templates and characteristics are stored as their DSL text, which
the parser already knows how to read back.
"""

from __future__ import annotations

from ..fgab.group import FgGroup
from ..primes import PrimeSet
from . import ast as A
from .parser import DslSyntaxError, _Parser, to_text


def _pow_text(t: A.Pow) -> str:
    return str(t)


def _pow_from(text: str, scope: list[str]) -> A.Pow:
    ps = _Parser(text, None)
    ps.scope = list(scope)
    t = ps.int_template()
    if ps.tok.kind != "eof":
        raise DslSyntaxError(f"bad integer template {text!r}")
    return t


def to_json(e) -> dict:
    if isinstance(e, A.Fg):
        return {"kind": "Fg", "group": e.group.to_json()}
    if isinstance(e, A.Cyclic):
        return {"kind": "Cyclic", "order": _pow_text(e.order)}
    if isinstance(e, A.Prufer):
        return {"kind": "Prufer", "p": _pow_text(e.p)}
    if isinstance(e, A.Localized):
        return {"kind": "Localized", "primes": e.primes.to_json()}
    if isinstance(e, A.Rank1):
        return {
            "kind": "Rank1",
            "heights": {str(p): h for p, h in e.chi.exceptions},
            "default": e.chi.default,
        }
    if isinstance(e, A.PGroup):
        return {"kind": "PGroup", "p": _pow_text(e.p), "layers": [to_json(l) for l in e.layers]}
    if isinstance(e, A.DirectSum):
        return {"kind": "DirectSum", "items": [to_json(i) for i in e.items]}
    if isinstance(e, A.PatternSum):
        return {"kind": "PatternSum", "var": e.var, "start": e.start, "body": to_json(e.body)}
    raise TypeError(f"not a group expression: {e!r}")


def from_json(obj, _scope=()) -> object:
    if isinstance(obj, str):
        from .parser import parse

        return parse(obj)
    kind = obj.get("kind")
    scope = list(_scope)
    if kind == "Fg":
        return A.Fg(FgGroup.from_json(obj["group"]))
    if kind == "Cyclic":
        return A.cyclic(_pow_from(obj["order"], scope))
    if kind == "Prufer":
        return A.Prufer(_pow_from(obj["p"], scope))
    if kind == "Localized":
        return A.Localized(PrimeSet.from_json(obj["primes"]))
    if kind == "Rank1":
        hs = {int(p): h for p, h in obj.get("heights", {}).items()}
        return A.Rank1(A.Characteristic.from_dict(hs, obj.get("default", 0)))
    if kind == "PGroup":
        return A.PGroup(_pow_from(obj["p"], scope), tuple(from_json(l, scope) for l in obj["layers"]))
    if kind == "DirectSum":
        return A.direct_sum([from_json(i, scope) for i in obj["items"]])
    if kind == "PatternSum":
        return A.PatternSum(obj["var"], int(obj["start"]), from_json(obj["body"], scope + [obj["var"]]))
    raise DslSyntaxError(f"unknown expression kind {kind!r}")


__all__ = ["to_json", "from_json", "to_text"]
