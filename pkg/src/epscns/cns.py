"""eps-canonical number systems over Z[x]/(P).

Residues are coefficient tuples ``(a_0, ..., a_{d-1})``.  Digits are drawn
from ``N_eps = {-k, ..., |p0| - 1 - k}`` with ``k = floor(eps * |p0|)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, floor
from typing import Optional, Sequence

from .dynamics import SrsParameter
from .geometry import as_rational, format_rational

HALF = Fraction(1, 2)


@dataclass(frozen=True)
class MonicPolynomial:
    """x^d + p_{d-1} x^{d-1} + ... + p_0, stored as (p_0, ..., p_{d-1})."""

    coeffs: tuple

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if not cs:
            raise ValueError("degree must be at least 1")
        if abs(cs[0]) < 2:
            raise ValueError(f"|p0| must be at least 2, got {cs[0]}")
        object.__setattr__(self, "coeffs", cs)

    @property
    def degree(self) -> int:
        return len(self.coeffs)

    @property
    def p0(self) -> int:
        return self.coeffs[0]

    @classmethod
    def quadratic(cls, p0: int, p1: int) -> "MonicPolynomial":
        return cls((p0, p1))

    @classmethod
    def parse(cls, text: str) -> "MonicPolynomial":
        """Accept ``"x^2+2x+2"``, ``"x^2+p1*x+p0"``-style strings or a
        comma-separated list ``"p0,p1,...,p_{d-1}"``."""
        s = text.replace(" ", "")
        if re.fullmatch(r"-?\d+(,-?\d+)*", s):
            return cls(tuple(int(v) for v in s.split(",")))
        terms = re.findall(r"[+-]?[^+-]+", s)
        if not terms or "".join(terms) != s:
            raise ValueError(f"cannot parse polynomial {text!r}")
        powers = {}
        for term in terms:
            m = re.fullmatch(r"([+-]?)(\d*)(\*?x(\^(\d+))?)?", term)
            if not m or (not m.group(2) and not m.group(3)):
                raise ValueError(f"cannot parse term {term!r} in {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) else 1
            power = 0 if not m.group(3) else int(m.group(5) or 1)
            if m.group(3) and m.group(3).startswith("*") and not m.group(2):
                raise ValueError(f"cannot parse term {term!r} in {text!r}")
            powers[power] = powers.get(power, 0) + sign * coef
        d = max(powers)
        if d < 1 or powers[d] != 1:
            raise ValueError(f"polynomial must be monic of degree >= 1: {text!r}")
        return cls(tuple(powers.get(j, 0) for j in range(d)))

    def shifted(self, m: int) -> "MonicPolynomial":
        """P(x + m)."""
        full = list(self.coeffs) + [1]
        out = [0] * len(full)
        for j, c in enumerate(full):
            for i in range(j + 1):
                out[i] += c * comb(j, i) * m ** (j - i)
        return MonicPolynomial(tuple(out[:-1]))

    def __str__(self):
        parts = [f"x^{self.degree}"]
        for j in range(self.degree - 1, -1, -1):
            c = self.coeffs[j]
            mono = "" if j == 0 else ("x" if j == 1 else f"x^{j}")
            parts.append(f"{'+' if c >= 0 else '-'}{abs(c)}{mono}")
        return "".join(parts)


@dataclass(frozen=True)
class DigitSet:
    p0: int
    eps: Fraction
    k: int

    @property
    def digits(self) -> range:
        return range(-self.k, abs(self.p0) - self.k)

    def __contains__(self, v) -> bool:
        return v in self.digits

    def representative(self, a0: int) -> int:
        m = abs(self.p0)
        return (a0 + self.k) % m - self.k


def digit_set(p0: int, eps) -> DigitSet:
    eps = as_rational(eps)
    if abs(p0) < 2:
        raise ValueError(f"|p0| must be at least 2, got {p0}")
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    return DigitSet(p0, eps, floor(eps * abs(p0)))


def divide_step(P: MonicPolynomial, N: DigitSet, a: Sequence[int]):
    """Split ``a = d + x * next`` in Z[x]/(P) with ``d`` in N."""
    if len(a) != P.degree:
        raise ValueError("residue dimension does not match the degree")
    d0 = N.representative(a[0])
    q = (a[0] - d0) // P.p0
    cs = P.coeffs
    nxt = tuple(a[j + 1] - q * cs[j + 1] for j in range(P.degree - 1)) + (-q,)
    return d0, nxt


class ExpansionCapExceeded(Exception):
    pass


@dataclass(frozen=True)
class Expansion:
    digits: Optional[tuple] = None
    cycle: Optional[tuple] = None

    @property
    def ok(self) -> bool:
        return self.digits is not None

    def to_json(self) -> dict:
        if self.ok:
            return {"schema": "epscns.expansion/1", "digits": list(self.digits)}
        return {"schema": "epscns.expansion/1", "failure": {"cycle": [list(r) for r in self.cycle]}}


def expand(P: MonicPolynomial, eps, a: Sequence[int], step_cap: int = 100_000) -> Expansion:
    N = digit_set(P.p0, eps)
    state = tuple(int(v) for v in a)
    if len(state) != P.degree:
        raise ValueError("residue dimension does not match the degree")
    zero = (0,) * P.degree
    digits = []
    seen = {}
    path = []
    while state != zero:
        if state in seen:
            return Expansion(cycle=tuple(path[seen[state]:]))
        if len(digits) >= step_cap:
            raise ExpansionCapExceeded(f"no termination within {step_cap} steps")
        seen[state] = len(path)
        path.append(state)
        d, state = divide_step(P, N, state)
        digits.append(d)
    while digits and digits[-1] == 0:
        digits.pop()
    return Expansion(digits=tuple(digits))


def reduce_mod(P: MonicPolynomial, poly: Sequence[int]) -> tuple:
    """Remainder of an integer polynomial (low degree first) modulo P."""
    r = [int(v) for v in poly]
    d = P.degree
    for top in range(len(r) - 1, d - 1, -1):
        c = r[top]
        if c:
            r[top] = 0
            for j in range(d):
                r[top - d + j] -= c * P.coeffs[j]
    r = r[:d] + [0] * max(0, d - len(r))
    return tuple(r)


def srs_parameter(P: MonicPolynomial) -> tuple:
    p0 = P.p0
    cs = P.coeffs
    return (Fraction(1, p0),) + tuple(Fraction(cs[j], p0) for j in range(P.degree - 1, 0, -1))


# ---------------------------------------------------------------------------
# Closed forms for quadratics


def _k(p0: int, eps: Fraction) -> int:
    return floor(eps * abs(p0))


def is_eps_cns_closed_form(p0: int, p1: int, eps) -> bool:
    eps = as_rational(eps)
    if abs(p0) < 2:
        raise ValueError("|p0| must be at least 2")
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    a = abs(p0)
    k = _k(p0, eps)
    if eps < HALF or (eps == HALF and a % 2 == 1):
        if p0 >= 2:
            return -k - 1 <= p1 <= a - k
        return p0 <= -3 and Fraction(1, a) <= eps <= HALF and k + 2 - a <= p1 <= k - 1
    if p0 >= 2:
        return -a + k <= p1 <= k + 1
    return p0 <= -3 and HALF <= eps < Fraction(a - 1, a) and -k + 1 <= p1 <= -k - 2 + a


def is_cns_classic(p0: int, p1: int) -> bool:
    return p0 >= 2 and -1 <= p1 <= p0


def is_scns(p0: int, p1: int) -> bool:
    a = abs(p0)
    sgn = 1 if p0 > 0 else -1
    if a == 2:
        return p0 == 2 and -1 <= p1 <= 2
    if a % 2 == 1:
        return 2 * abs(p1) <= 2 * sgn + a - 1
    return 2 * abs(p1) <= 2 * (sgn - 1) + a or 2 * p1 == 2 + p0


def reduce_eps(p0: int, eps) -> Fraction:
    eps = as_rational(eps)
    if abs(p0) < 2:
        raise ValueError("|p0| must be at least 2")
    return Fraction(_k(p0, eps), abs(p0))


# ---------------------------------------------------------------------------
# Algorithmic test


@dataclass
class CnsVerdict:
    is_cns: Optional[bool]
    route: str  # "closed_form" | "witness_certificate" | "brute_force"
    evidence: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"schema": "epscns.cns/1", "is_cns": self.is_cns, "route": self.route, "evidence": self.evidence}


class RouteDisagreement(AssertionError):
    """The certificate route and the expansion route contradict each other."""


def box_expansions(P: MonicPolynomial, eps, radius: int, step_cap: int = 100_000,
                   magnitude_cap: int = 10**9):
    """Expand every residue with coordinates in [-radius, radius].

    Returns ``(all_terminate, residue, cycle, capped)``.  A residue with
    ``capped`` False is a refutation (its orbit is periodic; ``cycle`` is
    set when the period was traced from this start).  ``capped`` True means
    the first undecided start exceeded ``step_cap`` steps or grew past
    ``magnitude_cap``, which decides nothing.  The division map is
    deterministic, so classified states are memoized across starts.
    """
    import itertools

    N = digit_set(P.p0, eps)
    zero = (0,) * P.degree
    good = {zero}
    bad = set()
    for start in itertools.product(range(-radius, radius + 1), repeat=P.degree):
        if start in good:
            continue
        path, index = [], {}
        z = start
        while z not in good:
            if z in bad:
                return False, start, None, False
            if z in index:
                bad.update(path)
                return False, start, tuple(path[index[z]:]), False
            if len(path) >= step_cap or max(abs(v) for v in z) > magnitude_cap:
                return False, start, None, True
            index[z] = len(path)
            path.append(z)
            z = divide_step(P, N, z)[1]
        good.update(path)
    return True, None, None, False


BOX_MODES = ("always", "tiebreak", "off")


def is_eps_cns_algorithmic(P: MonicPolynomial, eps, box_radius: int = 25, caps=None,
                           box: str = "always") -> CnsVerdict:
    """Decide via the witness certificate for srs_parameter(P), cross-checked
    against brute-force expansion of a box of residues.

    ``box`` selects when the expansion route runs: on every call, only when
    the certificate is inconclusive, or never.
    """
    from .witness import DEFAULT_CAPS, decide_point

    if box not in BOX_MODES:
        raise ValueError(f"box must be one of {BOX_MODES}")
    caps = caps or DEFAULT_CAPS
    eps = as_rational(eps)
    cert = decide_point(SrsParameter(srs_parameter(P), eps), caps)
    evidence = {"certificate": cert.verdict, "polynomial": str(P), "eps": format_rational(eps)}
    if cert.cycle is not None:
        evidence["cycle"] = cert.cycle.to_json()
    if cert.reason:
        evidence["reason"] = cert.reason
    route1 = {"point_in_D0": True, "point_not_in_D0": False}.get(cert.verdict)

    if box == "always" or (box == "tiebreak" and route1 is None):
        ok, start, cycle, capped = box_expansions(P, eps, box_radius, caps.orbit_steps)
        evidence["box_radius"] = box_radius
        evidence["box_all_terminate"] = ok
        if capped:
            evidence["box_capped"] = list(start)
            # a capped orbit leaves route 2 undecided
            if route1 is False:
                return CnsVerdict(False, "witness_certificate", evidence)
            return CnsVerdict(None, "brute_force", evidence)
        if not ok:
            evidence["failing_residue"] = list(start)
            if cycle is not None:
                evidence["failure_cycle"] = [list(r) for r in cycle]
            if route1 is True:
                raise RouteDisagreement(f"{P} at eps={format_rational(eps)}: certificate says CNS, "
                                        f"residue {start} does not terminate")
            return CnsVerdict(False, "brute_force" if route1 is None else "witness_certificate", evidence)
        if route1 is None:
            return CnsVerdict(None, "brute_force", evidence)
    return CnsVerdict(route1, "witness_certificate", evidence)
