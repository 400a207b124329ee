"""The shift map tau on Z^d, orbits, and necklace canonicalization."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable, Optional, Sequence

from .geometry import EMPTY_CELL, RegionCell, as_rational, cell_from_halfplanes, floor_affine, ge, gt


@dataclass(frozen=True)
class SrsParameter:
    r: tuple
    eps: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r", tuple(as_rational(v) for v in self.r))
        object.__setattr__(self, "eps", as_rational(self.eps))
        if not self.r:
            raise ValueError("r must have at least one entry")
        if not 0 <= self.eps < 1:
            raise ValueError(f"eps must lie in [0, 1), got {self.eps}")

    @property
    def dim(self) -> int:
        return len(self.r)


@dataclass(frozen=True, order=True)
class Cycle:
    """Primitive necklace stored as its minimal rotation."""

    entries: tuple

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self.entries)

    @property
    def is_trivial(self) -> bool:
        return self.entries == (0,)

    def negated(self) -> "Cycle":
        return canonical_cycle([-v for v in self.entries])

    def to_json(self) -> list:
        return list(self.entries)


def primitive_root(word: Sequence[int]) -> tuple:
    w = tuple(word)
    n = len(w)
    for p in range(1, n + 1):
        if n % p == 0 and w[:p] * (n // p) == w:
            return w[:p]
    return w


def canonical_cycle(entries: Iterable[int]) -> Cycle:
    root = primitive_root(tuple(int(v) for v in entries))
    if not root:
        raise ValueError("a cycle needs at least one entry")
    return Cycle(min(root[i:] + root[:i] for i in range(len(root))))


def tau_step(p: SrsParameter, z: Sequence[int]) -> tuple:
    if len(z) != p.dim:
        raise ValueError(f"dimension mismatch: r has {p.dim} entries, z has {len(z)}")
    return tuple(z[1:]) + (-floor_affine(p.r, z, p.eps),)


@dataclass(frozen=True)
class OrbitOutcome:
    kind: str  # "reaches_zero" | "periodic" | "cap_exceeded"
    steps: int
    cycle: Optional[Cycle] = None
    preperiod: int = 0

    def to_json(self) -> dict:
        out = {"kind": self.kind, "steps": self.steps}
        if self.kind == "periodic":
            out["cycle"] = self.cycle.to_json()
            out["preperiod"] = self.preperiod
        return out


class _IntegerTau:
    """tau with r and eps scaled to a common integer denominator."""

    def __init__(self, p: SrsParameter):
        den = lcm(p.eps.denominator, *(v.denominator for v in p.r))
        self.den = den
        self.coeffs = tuple(int(v * den) for v in p.r)
        self.shift = int(p.eps * den)

    def __call__(self, z):
        s = self.shift
        for c, v in zip(self.coeffs, z):
            s += c * v
        return z[1:] + (-(s // self.den),)


def orbit(p: SrsParameter, z0: Sequence[int], step_cap: int = 10**6) -> OrbitOutcome:
    if step_cap <= 0:
        raise ValueError("step_cap must be positive")
    if len(z0) != p.dim:
        raise ValueError(f"dimension mismatch: r has {p.dim} entries, z has {len(z0)}")
    step = _IntegerTau(p)
    zero = (0,) * p.dim
    z = tuple(int(v) for v in z0)
    seen = {}
    path = []
    for n in range(step_cap + 1):
        if z == zero:
            return OrbitOutcome("reaches_zero", n)
        if z in seen:
            start = seen[z]
            word = [state[0] for state in path[start:]]
            return OrbitOutcome("periodic", n, canonical_cycle(word), start)
        seen[z] = n
        path.append(z)
        if n == step_cap:
            break
        z = step(z)
    return OrbitOutcome("cap_exceeded", step_cap)


def cycle_realized_region(cycle, eps, d: int = 2) -> RegionCell:
    """Parameters r = (x, y) for which tau realizes ``cycle`` as a periodic orbit."""
    if d != 2:
        raise NotImplementedError("cutout regions are only implemented for d = 2")
    word = tuple(cycle)
    if not word:
        raise ValueError("empty cycle")
    eps = as_rational(eps)
    n = len(word)
    hs = []
    for i in range(n):
        z1, z2, z3 = word[i], word[(i + 1) % n], word[(i + 2) % n]
        if z1 == 0 and z2 == 0:
            # the condition no longer depends on r
            if z3 != 0:
                return EMPTY_CELL
            continue
        hs.append(ge(z1, z2, z3 + eps))
        hs.append(gt(-z1, -z2, 1 - z3 - eps))
    if not hs:
        raise ValueError("the trivial cycle is realized for every r")
    return cell_from_halfplanes(hs)
