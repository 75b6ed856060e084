"""Potential complexity class of the extension relation R_Ext(C, A) for
torsion-free C, with a replayable justification trace.

Every decision is taken from DSL block data:
  - torsion-free A: freeness of C over R(A) after localizing;
  - torsion A with bounded primary parts: supports of block
    characteristics against tau(T);
  - p-primary A with unbounded part: the pair (r, beta).
Rule ids in the trace name the branch that fired.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .groupdsl import ast as A
from .groupdsl import to_text
from .groupdsl.semantics import (
    Unsupported,
    is_torsion,
    is_torsion_free,
    layer_specs,
    primary_component,
    validate,
)
from .invariants import (
    OrdinalLite,
    as_pgroup,
    blocks,
    divisible_primes,
    is_free_module,
    p_basic_subgroup,
    symbolic_quotient_rank,
    torsion_support,
    ulm_bound_beta,
)
from .primes import PrimeSet

DEFAULT_DEPTH = 8

# rule ids
R_FREE_C = "free-first-argument"
R_ZERO_A = "zero-coefficients"
R_TF_FREE = "tf/free-after-localizing"
R_TF_FINITE = "tf/finitely-many-nonfree-blocks"
R_TF_FREE_A = "tf/coefficients-free-over-ring"
R_BT_GOOD = "bounded/all-blocks-good"
R_BT_FINITE = "bounded/finitely-many-bad-blocks"
R_BT_INFINITE = "bounded/infinitely-many-bad-blocks"
R_PG_TRIVIAL = "pgroup/r-zero-or-beta-zero"
R_PG_BETA1 = "pgroup/beta-one"
R_PG_LEVEL = "pgroup/beta-level"
R_COMBINE = "torsion/max-over-primes"
R_MIXED = "mixed-coefficients"
R_UNDECIDED = "undecided"


# -- classes ---------------------------------------------------------


_SUB = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@dataclass(frozen=True, eq=False)
class ComplexityClass:
    kind: str  # Trivial / Smooth / EZero / EZeroSeq / PiLevel / Unknown
    beta: int | None = None
    reason: str = ""

    _RANK = {"Trivial": 0, "Smooth": 1, "EZero": 2}

    def __post_init__(self):
        if self.kind not in ("Trivial", "Smooth", "EZero", "EZeroSeq", "PiLevel", "Unknown"):
            raise ValueError(f"unknown class {self.kind}")
        if self.kind == "PiLevel" and (self.beta is None or self.beta < 1):
            raise ValueError("PiLevel needs beta >= 1")

    @property
    def is_known(self) -> bool:
        return self.kind != "Unknown"

    def key(self):
        if self.kind == "Unknown":
            raise TypeError("Unknown is not comparable")
        if self.kind in self._RANK:
            return (self._RANK[self.kind], 0)
        return (3, 1 if self.kind == "EZeroSeq" else self.beta)

    def __eq__(self, other):
        if not isinstance(other, ComplexityClass):
            return NotImplemented
        if self.kind == "Unknown" or other.kind == "Unknown":
            return self.kind == other.kind
        return self.key() == other.key()

    def __hash__(self):
        return hash(("Unknown",) if self.kind == "Unknown" else self.key())

    def __lt__(self, other):
        return self.key() < other.key()

    def __le__(self, other):
        return self.key() <= other.key()

    def __gt__(self, other):
        return self.key() > other.key()

    def __ge__(self, other):
        return self.key() >= other.key()

    @property
    def pointclass(self) -> str:
        if self.kind in ("Trivial", "Smooth"):
            return "Π⁰₁" if self.kind == "Smooth" else "trivial"
        if self.kind == "EZero":
            return "Σ⁰₂"
        if self.kind == "Unknown":
            return "?"
        b = 1 if self.kind == "EZeroSeq" else self.beta
        return "Π⁰" + str(b + 2).translate(_SUB)

    def __str__(self):
        if self.kind == "PiLevel":
            return f"PiLevel({self.beta})"
        if self.kind == "Unknown":
            return f"Unknown({self.reason})"
        return self.kind

    def to_json(self):
        out = {"kind": self.kind, "pointclass": self.pointclass}
        if self.beta is not None:
            out["beta"] = self.beta
        if self.reason:
            out["reason"] = self.reason
        return out


TRIVIAL = ComplexityClass("Trivial")
SMOOTH = ComplexityClass("Smooth")
EZERO = ComplexityClass("EZero")
EZERO_SEQ = ComplexityClass("EZeroSeq")


def PiLevel(beta: int) -> ComplexityClass:
    return ComplexityClass("PiLevel", beta)


def Unknown(reason: str) -> ComplexityClass:
    return ComplexityClass("Unknown", None, reason)


def class_to_benchmark(c: ComplexityClass) -> str:
    if c.kind == "Trivial":
        return "one class"
    if c.kind == "Smooth":
        return "=_ℝ"
    if c.kind == "EZero":
        return "E₀"
    if c == EZERO_SEQ:
        return "E₀^ℕ"
    if c.kind == "PiLevel":
        return f"{c.pointclass} (no classical benchmark)"
    return "unknown"


# -- traces ----------------------------------------------------------


@dataclass
class JustificationTrace:
    steps: list = field(default_factory=list)  # dicts: rule, inputs, result
    invariants: dict = field(default_factory=dict)
    depths: dict = field(default_factory=dict)
    subreports: list = field(default_factory=list)

    def add(self, rule: str, result, **inputs):
        self.steps.append({"rule": rule, "inputs": {k: _plain(v) for k, v in inputs.items()}, "result": str(result)})

    @property
    def rules(self) -> list[str]:
        return [s["rule"] for s in self.steps]

    def merge(self, other: "JustificationTrace", label: str):
        for s in other.steps:
            self.steps.append({**s, "branch": label})
        for k, v in other.invariants.items():
            self.invariants[f"{label}:{k}"] = v
        self.depths.update(other.depths)
        self.subreports.extend(other.subreports)

    def to_json(self):
        return {"steps": self.steps, "invariants": self.invariants, "depths": self.depths, "subreports": self.subreports}


def _plain(v):
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    if isinstance(v, (PrimeSet, OrdinalLite, ComplexityClass)):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    try:
        return to_text(v)
    except Exception:
        return str(v)


# -- divisible parts -------------------------------------------------


def _is_divisible(e) -> bool:
    if isinstance(e, A.Prufer):
        return True
    if isinstance(e, A.Rank1):
        return e.chi.default == A.INF and not e.chi.exceptions
    if isinstance(e, A.Localized):
        return e.primes.cofinite and not e.primes.members
    if isinstance(e, A.PatternSum):
        return _is_divisible(e.body)
    if isinstance(e, A.DirectSum):
        return all(_is_divisible(i) for i in e.items)
    return False


def strip_divisible(a):
    """Drop the divisible summands the DSL can express (Q, Prufer groups)."""
    if isinstance(a, A.DirectSum):
        return A.direct_sum([strip_divisible(i) for i in a.items if not _is_divisible(i)])
    if isinstance(a, A.PatternSum):
        if _is_divisible(a.body):
            return A.ZERO
        body = strip_divisible(a.body)
        return A.ZERO if body == A.ZERO else A.PatternSum(a.var, a.start, body)
    return A.ZERO if _is_divisible(a) else a


# -- torsion-free coefficients ---------------------------------------


def classify_tf_by_tf(c, a, depth: int = DEFAULT_DEPTH):
    tr = JustificationTrace()
    tr.depths["truncation"] = depth
    try:
        pi = divisible_primes(a)
    except Unsupported as exc:
        tr.add(R_UNDECIDED, "Unknown", question="pi(A)", why=str(exc))
        return Unknown(f"pi(A): {exc}"), tr
    tr.invariants["pi(A)"] = str(pi)
    tr.invariants["R(A)"] = f"R_{pi}"
    v = is_free_module(c, pi)
    tr.invariants["C free over R(A)"] = v.verdict
    if v.verdict == "free":
        tr.add(R_TF_FREE, TRIVIAL, C=c, Q=pi, freeness=v.witness)
        return TRIVIAL, tr
    if v.verdict == "unknown":
        tr.add(R_UNDECIDED, "Unknown", question="is C tensor R(A) free", why=v.witness)
        return Unknown(f"freeness of C over R(A): {v.witness}"), tr
    if v.nonfree_repeated == 0:
        tr.add(R_TF_FINITE, EZERO, C=c, Q=pi, nonfree_blocks=v.nonfree_finite, witness=v.witness)
        return EZERO, tr
    va = is_free_module(a, pi)
    tr.invariants["A free over R(A)"] = va.verdict
    if va.verdict == "free":
        tr.add(R_TF_FREE_A, EZERO_SEQ, C=c, A=a, Q=pi, witness=v.witness)
        return EZERO_SEQ, tr
    reason = "outside the decidable range for torsion-free coefficients"
    tr.add(R_UNDECIDED, "Unknown", question="C tensor R(A) = free + finite rank, or A free over R(A)", why=reason)
    return Unknown(reason), tr


# -- bounded torsion coefficients ------------------------------------


def _block_good(chi: A.Characteristic, tau: PrimeSet) -> bool:
    """Some Q meets tau finitely and makes the block free over R_Q.

    Q must contain every infinite-height prime and all but finitely many
    primes of positive height, so this holds iff supp(chi) n tau is finite.
    """
    return (chi.support() & tau).is_finite


def _check_bounded(t) -> None:
    for p in _unbounded_primes(t):
        raise Unsupported(f"the {p}-primary component is unbounded")


def classify_tf_by_bounded_torsion(c, t, depth: int = DEFAULT_DEPTH):
    tr = JustificationTrace()
    tr.depths["truncation"] = depth
    _check_bounded(t)
    try:
        tau = torsion_support(t)
        bs = blocks(c)
    except Unsupported as exc:
        tr.add(R_UNDECIDED, "Unknown", question="tau(T) or block structure of C", why=str(exc))
        return Unknown(str(exc)), tr
    tr.invariants["tau(T)"] = str(tau)
    bad_f = [b for b in bs.finite if not _block_good(b.chi, tau)]
    bad_r = [b for b in bs.repeated if not _block_good(b.chi, tau)]
    tr.invariants["bad blocks"] = [str(b.chi) for b in bad_f] + [f"{b.chi} (infinitely often)" for b in bad_r]
    if not bad_f and not bad_r:
        tr.add(R_BT_GOOD, TRIVIAL, C=c, tau=tau)
        return TRIVIAL, tr
    if not bad_r:
        tr.add(R_BT_FINITE, EZERO, C=c, tau=tau, bad=[str(b.chi) for b in bad_f])
        return EZERO, tr
    tr.add(R_BT_INFINITE, EZERO_SEQ, C=c, tau=tau, bad=f"{bad_r[0].chi} repeated")
    return EZERO_SEQ, tr


# -- p-group coefficients --------------------------------------------


def classify_tf_by_pgroup(c, a, depth: int = DEFAULT_DEPTH, p: int | None = None):
    tr = JustificationTrace()
    tr.depths["truncation"] = depth
    if isinstance(a, A.PGroup):
        diags = validate(a)
        if diags:
            raise ValueError(diags[0])
        from .groupdsl.semantics import pgroup_prime

        p = pgroup_prime(a)
    elif p is None:
        raise ValueError("give the prime for a non-descriptor p-group")
    desc = as_pgroup(a, p)
    beta = ulm_bound_beta(desc)
    tr.invariants["p"] = p
    tr.invariants["beta"] = str(beta)
    try:
        r = symbolic_quotient_rank(c, p)
    except Unsupported as exc:
        tr.add(R_UNDECIDED, "Unknown", question="r", why=str(exc))
        return Unknown(f"r: {exc}"), tr
    # stage construction as evidence (finite rank only: pattern sums grow per stage)
    try:
        rep = p_basic_subgroup(c, p, min(depth, 6))
        tr.subreports.append({"p_basic": rep.to_json()})
        tr.depths["p_basic"] = rep.depth
    except Unsupported as exc:
        tr.subreports.append({"p_basic": f"not computed: {exc}"})
    tr.invariants["r"] = str(r)
    if r == 0 or beta == 0:
        tr.add(R_PG_TRIVIAL, TRIVIAL, r=r, beta=beta)
        return TRIVIAL, tr
    if beta == 1:
        tr.add(R_PG_BETA1, EZERO_SEQ, r=r, beta=beta)
        return EZERO_SEQ, tr
    tr.add(R_PG_LEVEL, PiLevel(beta.value), r=r, beta=beta)
    return PiLevel(beta.value), tr


# -- decomposing torsion coefficients --------------------------------


def _unbounded_primes(t) -> list[int]:
    """Primes whose primary component of T is unbounded."""
    out = set()

    def walk(e, in_pattern):
        if isinstance(e, A.PGroup):
            from .groupdsl.semantics import pgroup_prime

            specs = layer_specs(e)
            if len(specs) > 1 or not specs[0].bounded:
                out.add(pgroup_prime(e))
        elif isinstance(e, A.Cyclic):
            base, exp = e.order.base, e.order.exp
            if not in_pattern:
                return
            if isinstance(base, A.Lit) and not exp.is_const and base.value > 1:
                from sympy import factorint

                out.update(factorint(base.value))
            elif isinstance(base, A.PrimeAt) and base.index.is_const and not exp.is_const:
                from sympy import prime as nth_prime

                out.add(int(nth_prime(base.index.b)))
        elif isinstance(e, A.DirectSum):
            for i in e.items:
                walk(i, in_pattern)
        elif isinstance(e, A.PatternSum):
            walk(e.body, True)

    walk(t, False)
    return sorted(out)


def _remove_primes(t, primes):
    """T with the given primary components removed (others kept)."""
    if not primes:
        return t
    ps = set(primes)

    def keep(e):
        if isinstance(e, A.Fg):
            orders = []
            for d in e.group.torsion:
                for q in list(ps):
                    while d % q == 0:
                        d //= q
                orders.append(d)
            return _fg(orders)
        if isinstance(e, A.PGroup):
            from .groupdsl.semantics import pgroup_prime

            return A.ZERO if pgroup_prime(e) in ps else e
        if isinstance(e, A.DirectSum):
            return A.direct_sum([keep(i) for i in e.items])
        if isinstance(e, A.PatternSum):
            b = keep(e.body)
            return A.ZERO if b == A.ZERO else A.PatternSum(e.var, e.start, b)
        if isinstance(e, A.Cyclic):
            base = e.order.base
            if isinstance(base, A.Lit) and set(_prime_factors(base.value)) <= ps:
                return A.ZERO
            if isinstance(base, A.PrimeAt) and base.index.is_const:
                from sympy import prime as nth_prime

                if int(nth_prime(base.index.b)) in ps:
                    return A.ZERO
            if isinstance(base, A.Lit) and set(_prime_factors(base.value)) & ps:
                raise Unsupported("mixed-prime templated summand")
            return e
        return e

    return keep(t)


def _prime_factors(n):
    from sympy import factorint

    return list(factorint(n))


def _fg(orders):
    from .fgab.group import FgGroup

    return A.Fg(FgGroup.from_orders(orders))


# -- dispatcher ------------------------------------------------------


def classify(c, a, depth: int = DEFAULT_DEPTH):
    """Class of R_Ext(C, A) for torsion-free C."""
    tr = JustificationTrace()
    tr.depths["truncation"] = depth
    if not is_torsion_free(c):
        raise ValueError("C must be torsion-free")
    tr.invariants["C"] = to_text(c)
    tr.invariants["A"] = to_text(a)
    if is_free_module(c, PrimeSet()).verdict == "free":
        tr.add(R_FREE_C, TRIVIAL, C=c)
        return TRIVIAL, tr
    a0 = strip_divisible(a)
    if a0 != a:
        tr.invariants["A reduced"] = to_text(a0)
    if a0 == A.ZERO:
        tr.add(R_ZERO_A, TRIVIAL, A=a)
        return TRIVIAL, tr
    if is_torsion_free(a0):
        cls, sub = classify_tf_by_tf(c, a0, depth)
        tr.merge(sub, "tf")
        return cls, tr
    if not is_torsion(a0):
        tr.add(R_MIXED, "Unknown", A=a0, why="coefficients have torsion and torsion-free parts")
        return Unknown("mixed torsion and torsion-free coefficients"), tr
    try:
        unb = _unbounded_primes(a0)
        rest = _remove_primes(a0, unb)
    except Unsupported as exc:
        tr.add(R_UNDECIDED, "Unknown", question="primary decomposition of A", why=str(exc))
        return Unknown(str(exc)), tr
    results = []
    for p in unb:
        comp = primary_component(a0, p)
        cls, sub = classify_tf_by_pgroup(c, comp, depth, p)
        tr.merge(sub, f"p={p}")
        results.append(cls)
    if rest != A.ZERO:
        cls, sub = classify_tf_by_bounded_torsion(c, rest, depth)
        tr.merge(sub, "bounded")
        results.append(cls)
    unknown = [r for r in results if not r.is_known]
    if unknown:
        return unknown[0], tr
    out = max(results, key=lambda x: x.key())
    if len(results) > 1:
        tr.add(R_COMBINE, out, parts=[str(r) for r in results])
    return out, tr


def solecki_rank(k, t, depth: int = DEFAULT_DEPTH, p: int | None = None) -> OrdinalLite:
    """beta when r != 0 (0 when Ext(K, T) vanishes)."""
    if isinstance(t, A.PGroup):
        from .groupdsl.semantics import pgroup_prime

        p = pgroup_prime(t)
    if p is None:
        raise ValueError("give the prime")
    beta = ulm_bound_beta(as_pgroup(t, p))
    r = symbolic_quotient_rank(k, p)
    if r == 0 or beta == 0:
        return OrdinalLite(0)
    if not beta.is_finite:
        raise Unsupported("transfinite beta")
    return beta


def verdict_json(c, a, cls: ComplexityClass, tr: JustificationTrace) -> dict:
    return {
        "class": str(cls),
        "benchmark": class_to_benchmark(cls),
        "pointclass": cls.pointclass,
        "rules": tr.rules,
        "invariants": tr.invariants,
        "trace": tr.steps,
        "depths": tr.depths,
    }


__all__ = [
    "ComplexityClass",
    "JustificationTrace",
    "TRIVIAL",
    "SMOOTH",
    "EZERO",
    "EZERO_SEQ",
    "PiLevel",
    "Unknown",
    "class_to_benchmark",
    "strip_divisible",
    "classify_tf_by_tf",
    "classify_tf_by_bounded_torsion",
    "classify_tf_by_pgroup",
    "classify",
    "solecki_rank",
    "verdict_json",
]
