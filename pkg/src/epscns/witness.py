"""Witness sets, witness graphs and D0 certificates.

A hull H (convex hull of finitely many parameter vectors inside the
Schur-Takagi region E_d) determines a finite set of lattice vectors V(H)
that is closed under every tau successor available for some r in H.  For a
fixed eps the graph on V(H) whose edges are the transitions realizable at
eps exposes, through its elementary circuits, every cycle that can occur for
a parameter in H; H meets D0 exactly outside the cutout regions of those
cycles.
"""
from __future__ import annotations

import functools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, lcm
from typing import Optional

import networkx as nx

from .dynamics import Cycle, SrsParameter, canonical_cycle, cycle_realized_region, orbit
from .geometry import (
    RegionCell,
    as_rational,
    cell_meet,
    convex_hull,
    format_rational,
    polygon_cell,
)


@dataclass(frozen=True)
class Caps:
    witness_size: int = 10_000
    depth: int = 12
    cycle_length: int = 64
    cycle_count: int = 100_000
    orbit_steps: int = 100_000
    search_radius: int = 6

    def __post_init__(self):
        for name in ("witness_size", "depth", "cycle_length", "cycle_count", "orbit_steps", "search_radius"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


DEFAULT_CAPS = Caps()


# ---------------------------------------------------------------------------
# Schur-Takagi region


def schur_stable(coeffs) -> bool:
    """All roots of sum(coeffs[k] * t**k) strictly inside the unit disk.

    Exact Schur-Cohn reduction over the rationals.
    """
    a = [as_rational(c) for c in coeffs]
    while len(a) > 1 and a[-1] == 0:
        a.pop()
    while len(a) > 1:
        lead, const = a[-1], a[0]
        if abs(const) >= abs(lead):
            return False
        rev = a[::-1]
        a = [lead * a[k + 1] - const * rev[k + 1] for k in range(len(a) - 1)]
    return True


def _char_poly(r) -> list:
    # t^d + r_d t^(d-1) + ... + r_1
    return list(r) + [Fraction(1)]


def in_schur_region(r) -> bool:
    r = tuple(as_rational(v) for v in r)
    if len(r) == 2:
        x, y = r
        return abs(x) < 1 and abs(y) < x + 1
    return schur_stable(_char_poly(r))


def schur_position(r) -> str:
    """``"interior"``, ``"boundary"`` or ``"exterior"`` relative to E_d.

    Exact for d <= 2; for larger d anything not strictly stable is reported
    as ``"boundary"`` so that only refutation is attempted.
    """
    r = tuple(as_rational(v) for v in r)
    if in_schur_region(r):
        return "interior"
    if len(r) == 1:
        return "boundary" if abs(r[0]) == 1 else "exterior"
    if len(r) == 2:
        x, y = r
        return "boundary" if abs(x) <= 1 and abs(y) <= x + 1 else "exterior"
    return "boundary"


# ---------------------------------------------------------------------------
# Hulls


@dataclass(frozen=True)
class Hull:
    vertices: tuple

    def __post_init__(self):
        vs = tuple(tuple(as_rational(c) for c in v) for v in self.vertices)
        if not vs:
            raise ValueError("a hull needs at least one vertex")
        dims = {len(v) for v in vs}
        if len(dims) != 1:
            raise ValueError("hull vertices have mixed dimensions")
        if vs and len(vs[0]) == 2:
            vs = tuple(convex_hull(vs))
        object.__setattr__(self, "vertices", vs)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def cell(self) -> RegionCell:
        if self.dim != 2:
            raise NotImplementedError("cell views exist for d = 2 only")
        return polygon_cell(self.vertices)

    def inside_schur_region(self) -> bool:
        return all(in_schur_region(v) for v in self.vertices)

    def to_json(self) -> list:
        return [[format_rational(c) for c in v] for v in self.vertices]


class WitnessCapExceeded(Exception):
    """The witness set grew past the size cap; the hull should be subdivided."""


def _scaled(vectors, *extra) -> tuple:
    den = lcm(*(c.denominator for v in vectors for c in v), *(e.denominator for e in extra))
    return den, [tuple(int(c * den) for c in v) for v in vectors], [int(e * den) for e in extra]


def _seeds(d: int):
    for i in range(d):
        e = tuple(1 if j == i else 0 for j in range(d))
        yield e
        yield tuple(-c for c in e)


def witness_set(hull: Hull, size_cap: int = 10_000) -> frozenset:
    """Closure of the unit vectors under all successors possible over the hull."""
    if size_cap <= 0:
        raise ValueError("size_cap must be positive")
    if not hull.inside_schur_region():
        raise ValueError("hull vertices must lie strictly inside the Schur-Takagi region")
    return _witness_set(hull.vertices, size_cap)


@functools.lru_cache(maxsize=4096)
def _witness_set(vertices: tuple, size_cap: int) -> frozenset:
    den, rows, _ = _scaled(vertices)
    d = len(vertices[0])
    seen = set(_seeds(d))
    queue = deque(seen)
    while queue:
        z = queue.popleft()
        dots = [sum(c * v for c, v in zip(row, z)) for row in rows]
        lo = (-max(dots)) // den
        hi = -(min(dots) // den)
        tail = z[1:]
        for last in range(lo, hi + 1):
            w = tail + (last,)
            if w not in seen:
                seen.add(w)
                if len(seen) > size_cap:
                    raise WitnessCapExceeded(f"witness set exceeds {size_cap} vectors")
                queue.append(w)
    return frozenset(seen)


@dataclass(frozen=True)
class WitnessGraph:
    vertices: frozenset
    edges: frozenset
    eps: Fraction
    hull: Hull

    def successors(self) -> dict:
        out = {v: [] for v in self.vertices}
        for a, b in self.edges:
            out[a].append(b)
        return out

    def to_networkx(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


def build_graph(V, hull: Hull, eps) -> WitnessGraph:
    eps = as_rational(eps)
    den, rows, (shift,) = _scaled(hull.vertices, eps)
    vs = frozenset(V)
    edges = set()
    for z in vs:
        dots = [sum(c * v for c, v in zip(row, z)) + shift for row in rows]
        lo = -(max(dots) // den)
        hi = -(min(dots) // den)
        tail = z[1:]
        for last in range(lo, hi + 1):
            w = tail + (last,)
            if w in vs:
                edges.add((z, w))
    return WitnessGraph(vs, frozenset(edges), eps, hull)


def interval_union_graph(vertices_at, lo, hi, lo_closed: bool = True, hi_closed: bool = False,
                         size_cap: int = 10_000):
    """Union of the graphs G_eps(H(eps)) over an eps-interval.

    ``vertices_at(eps)`` returns the hull vertices in a fixed order, each
    affine in eps.  The vertex set and edge set only change where some
    ``r_i(eps).z`` or ``r_i(eps).z + eps`` crosses an integer, so sampling
    every breakpoint and every gap between consecutive breakpoints, refined
    until the vertex union is stable, gives the union exactly.

    Returns ``(vertices, edges, samples)``.
    """
    lo, hi = as_rational(lo), as_rational(hi)
    if not lo < hi:
        raise ValueError("empty eps-interval")
    base = [tuple(as_rational(c) for c in v) for v in vertices_at(lo)]
    top = [tuple(as_rational(c) for c in v) for v in vertices_at(hi)]
    slope = [tuple((b - a) / (hi - lo) for a, b in zip(u, w)) for u, w in zip(base, top)]
    probe = lo + (hi - lo) / 3
    if any(tuple(a + (probe - lo) * s for a, s in zip(u, sl)) != tuple(as_rational(c) for c in w)
           for u, sl, w in zip(base, slope, vertices_at(probe))):
        raise ValueError("hull vertices are not affine in eps")

    def admissible(e):
        return (lo < e or (lo_closed and e == lo)) and (e < hi or (hi_closed and e == hi))

    samples = {(lo + hi) / 2}
    if lo_closed:
        samples.add(lo)
    if hi_closed:
        samples.add(hi)
    done = set()
    union_v, union_e = set(), set()
    while samples - done:
        for e in sorted(samples - done):
            hull = Hull(tuple(vertices_at(e)))
            V = witness_set(hull, size_cap)
            g = build_graph(V, hull, e)
            union_v |= V
            union_e |= g.edges
            done.add(e)
        cuts = set()
        for z in union_v:
            for u, sl in zip(base, slope):
                alpha = sum(a * c for a, c in zip(u, z))
                beta = sum(b * c for b, c in zip(sl, z))
                # value at eps is alpha + beta*(eps - lo); also track value + eps
                for a0, b0 in ((alpha, beta), (alpha + lo, beta + 1)):
                    if b0 == 0:
                        continue
                    v_lo, v_hi = a0, a0 + b0 * (hi - lo)
                    for m in range(floor(min(v_lo, v_hi)), floor(max(v_lo, v_hi)) + 1):
                        e = lo + (m - a0) / b0
                        if lo <= e <= hi:
                            cuts.add(e)
        pts = sorted(cuts | {lo, hi})
        refined = {e for e in pts if admissible(e)}
        refined |= {(a + b) / 2 for a, b in zip(pts, pts[1:]) if a != b}
        samples |= refined
    return frozenset(union_v), frozenset(union_e), sorted(done)


def find_cycles(g: WitnessGraph, length_cap: int = 64, count_cap: int = 100_000):
    """Return ``(cycles, complete)``.

    Enumeration is exhaustive (``complete`` is True) when every strongly
    connected component fits under ``length_cap`` and fewer than
    ``count_cap`` elementary circuits exist.
    """
    dg = g.to_networkx()
    largest = max((len(c) for c in nx.strongly_connected_components(dg)), default=0)
    bound = None if largest <= length_cap else length_cap
    complete = bound is None
    found = set()
    for n, nodes in enumerate(nx.simple_cycles(dg, length_bound=bound)):
        if n >= count_cap:
            complete = False
            break
        found.add(canonical_cycle([v[0] for v in nodes]))
    return found, complete


def primitive_cycles(g: WitnessGraph, length_cap: int = 64) -> set:
    return find_cycles(g, length_cap)[0]


# ---------------------------------------------------------------------------
# Certificates

SUBSET = "subset_of_D0"
CUT_OUT = "cut_out"
IN_D0 = "point_in_D0"
NOT_IN_D0 = "point_not_in_D0"
INCONCLUSIVE = "inconclusive"


@dataclass
class Certificate:
    verdict: str
    cycles: list = field(default_factory=list)
    residual: list = field(default_factory=list)
    cycle: Optional[Cycle] = None
    reason: str = ""
    stats: dict = field(default_factory=dict)

    @property
    def conclusive(self) -> bool:
        return self.verdict != INCONCLUSIVE

    def to_json(self) -> dict:
        out = {
            "schema": "epscns.certificate/1",
            "verdict": self.verdict,
            "cycles": [c.to_json() for c in self.cycles],
            "residual": [c.describe() for c in self.residual],
            "stats": dict(self.stats),
        }
        if self.verdict == NOT_IN_D0:
            out["cycle"] = self.cycle.to_json() if self.cycle is not None else None
        if self.reason:
            out["reason"] = self.reason
        return out


def subdivide(hull: Hull) -> list:
    """Split a planar hull in two at the midpoint of its longest edge."""
    if hull.dim != 2:
        raise NotImplementedError("subdivision is implemented for d = 2 only")
    vs = list(hull.vertices)
    if len(vs) == 1:
        raise ValueError("a single point cannot be subdivided")

    def dist2(p, q):
        return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2

    def mid(p, q):
        return ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)

    if len(vs) == 2:
        m = mid(*vs)
        return [Hull((vs[0], m)), Hull((m, vs[1]))]
    n = len(vs)
    i = max(range(n), key=lambda k: (dist2(vs[k], vs[(k + 1) % n]), -k))
    m = mid(vs[i], vs[(i + 1) % n])
    # chord from the midpoint to the farthest vertex keeps both halves convex
    j = max((k for k in range(n) if k not in (i, (i + 1) % n)), key=lambda k: (dist2(vs[k], m), -k))
    first, second = [m], [vs[j]]
    k = (i + 1) % n
    while True:
        first.append(vs[k])
        if k == j:
            break
        k = (k + 1) % n
    k = j
    while k != i:
        k = (k + 1) % n
        second.append(vs[k])
    second.append(m)
    return [Hull(tuple(first)), Hull(tuple(second))]


def certify_hull(hull: Hull, eps, caps: Caps = DEFAULT_CAPS) -> Certificate:
    eps = as_rational(eps)
    if hull.dim != 2:
        raise NotImplementedError("hull certification is implemented for d = 2 only")
    if not hull.inside_schur_region():
        raise ValueError("hull vertices must lie strictly inside the Schur-Takagi region")
    return _certify(hull, eps, caps, 0)


def _certify(hull: Hull, eps: Fraction, caps: Caps, depth: int) -> Certificate:
    try:
        V = witness_set(hull, caps.witness_size)
    except WitnessCapExceeded:
        if depth >= caps.depth or len(hull.vertices) == 1:
            return Certificate(INCONCLUSIVE, reason="witness set cap reached at maximum subdivision depth",
                               stats={"vertices": caps.witness_size, "edges": 0, "subdivisions": depth})
        parts = [_certify(h, eps, caps, depth + 1) for h in subdivide(hull)]
        return _merge(parts)

    g = build_graph(V, hull, eps)
    cycles, complete = find_cycles(g, caps.cycle_length, caps.cycle_count)
    stats = {"vertices": len(g.vertices), "edges": len(g.edges), "subdivisions": depth}
    region = hull.cell()
    hits, residual = [], []
    for c in sorted(cycles, key=lambda c: (len(c), c.entries)):
        if c.is_trivial:
            continue
        part = cell_meet(region, cycle_realized_region(c, eps))
        if not part.is_empty:
            hits.append(c)
            residual.append(part)
    if not complete:
        return Certificate(INCONCLUSIVE, hits, residual,
                           reason=f"cycle enumeration truncated (length cap {caps.cycle_length})", stats=stats)
    if residual:
        return Certificate(CUT_OUT, hits, residual, stats=stats)
    return Certificate(SUBSET, stats=stats)


def _merge(parts: list) -> Certificate:
    stats = {
        "vertices": max(p.stats.get("vertices", 0) for p in parts),
        "edges": max(p.stats.get("edges", 0) for p in parts),
        "subdivisions": max(p.stats.get("subdivisions", 0) for p in parts),
        "leaves": sum(p.stats.get("leaves", 1) for p in parts),
    }
    cycles = sorted({c for p in parts for c in p.cycles}, key=lambda c: (len(c), c.entries))
    residual = [cell for p in parts for cell in p.residual]
    bad = [p for p in parts if not p.conclusive]
    if bad:
        return Certificate(INCONCLUSIVE, cycles, residual, reason=bad[0].reason, stats=stats)
    if residual:
        return Certificate(CUT_OUT, cycles, residual, stats=stats)
    return Certificate(SUBSET, stats=stats)


def orbit_search(p: SrsParameter, radius: int, step_cap: int) -> Optional[Cycle]:
    """Scan start vectors shell by shell for a nonzero periodic orbit."""
    import itertools

    d = p.dim
    for rad in range(1, radius + 1):
        for z in itertools.product(range(-rad, rad + 1), repeat=d):
            if max(abs(v) for v in z) != rad:
                continue
            out = orbit(p, z, step_cap)
            if out.kind == "periodic" and not out.cycle.is_trivial:
                return out.cycle
    return None


def decide_point(p: SrsParameter, caps: Caps = DEFAULT_CAPS) -> Certificate:
    position = schur_position(p.r)
    if position != "interior":
        radius = caps.search_radius if position == "boundary" else min(2, caps.search_radius)
        steps = caps.orbit_steps if position == "boundary" else min(1000, caps.orbit_steps)
        cyc = orbit_search(p, radius, steps)
        if cyc is not None:
            return Certificate(NOT_IN_D0, [cyc], cycle=cyc, reason="periodic orbit found by search")
        if position == "exterior":
            return Certificate(NOT_IN_D0, reason="outside the closed Schur-Takagi region")
        return Certificate(INCONCLUSIVE, reason="boundary parameter; no periodic orbit found")

    hull = Hull((p.r,))
    try:
        V = witness_set(hull, caps.witness_size)
    except WitnessCapExceeded:
        cyc = orbit_search(p, caps.search_radius, caps.orbit_steps)
        if cyc is not None:
            return Certificate(NOT_IN_D0, [cyc], cycle=cyc, reason="periodic orbit found by search")
        return Certificate(INCONCLUSIVE, reason=f"witness set exceeds {caps.witness_size} vectors")
    g = build_graph(V, hull, p.eps)
    cycles, complete = find_cycles(g, caps.cycle_length, caps.cycle_count)
    stats = {"vertices": len(g.vertices), "edges": len(g.edges), "subdivisions": 0}
    bad = sorted((c for c in cycles if not c.is_trivial), key=lambda c: (len(c), c.entries))
    if bad:
        return Certificate(NOT_IN_D0, bad, cycle=bad[0], stats=stats)
    if not complete:
        return Certificate(INCONCLUSIVE, reason="cycle enumeration truncated", stats=stats)
    return Certificate(IN_D0, stats=stats)
