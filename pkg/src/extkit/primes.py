"""Finite and cofinite sets of primes."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import count

from sympy import isprime, nextprime


@dataclass(frozen=True)
class PrimeSet:
    """Either a finite set of primes or the complement of one.

    ``members`` lists the primes in the set when ``cofinite`` is False and
    the excluded primes when it is True.
    """

    members: frozenset = frozenset()
    cofinite: bool = False

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(int(p) for p in self.members))
        for p in self.members:
            if not isprime(p):
                raise ValueError(f"{p} is not prime")

    @classmethod
    def of(cls, *ps) -> "PrimeSet":
        return cls(frozenset(ps))

    @classmethod
    def all(cls) -> "PrimeSet":
        return cls(frozenset(), True)

    @classmethod
    def all_except(cls, *ps) -> "PrimeSet":
        return cls(frozenset(ps), True)

    @property
    def is_empty(self) -> bool:
        return not self.cofinite and not self.members

    @property
    def is_finite(self) -> bool:
        return not self.cofinite

    def __contains__(self, p: int) -> bool:
        return (p in self.members) != self.cofinite

    def __or__(self, other: "PrimeSet") -> "PrimeSet":
        if not self.cofinite and not other.cofinite:
            return PrimeSet(self.members | other.members)
        if self.cofinite and other.cofinite:
            return PrimeSet(self.members & other.members, True)
        fin, cof = (self, other) if other.cofinite else (other, self)
        return PrimeSet(cof.members - fin.members, True)

    def __and__(self, other: "PrimeSet") -> "PrimeSet":
        return (self.complement() | other.complement()).complement()

    def __sub__(self, other: "PrimeSet") -> "PrimeSet":
        return self & other.complement()

    def complement(self) -> "PrimeSet":
        return PrimeSet(self.members, not self.cofinite)

    def __iter__(self):
        """Primes in increasing order (infinite when cofinite)."""
        if not self.cofinite:
            yield from sorted(self.members)
            return
        p = 2
        while True:
            if p not in self.members:
                yield p
            p = nextprime(p)

    def first(self, n: int) -> list[int]:
        out = []
        for p in self:
            if len(out) >= n:
                break
            out.append(p)
        return out

    def fair_sequence(self):
        """Primes of the set, each occurring infinitely often.

        Finite sets are cycled; cofinite sets are dovetailed
        (first one prime, then the first two, then three, ...).
        """
        if self.is_empty:
            return
        if not self.cofinite:
            ps = sorted(self.members)
            while True:
                yield from ps
        for k in count(1):
            yield from self.first(k)

    def __str__(self) -> str:
        body = ",".join(str(p) for p in sorted(self.members))
        if self.cofinite:
            return "all" if not self.members else f"all\\{{{body}}}"
        return "{" + body + "}"

    def to_json(self):
        return {"cofinite": self.cofinite, "primes": sorted(self.members)}

    @classmethod
    def from_json(cls, obj) -> "PrimeSet":
        return cls(frozenset(obj.get("primes", [])), bool(obj.get("cofinite", False)))
