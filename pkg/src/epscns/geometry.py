"""Exact rational geometry in the plane.

Everything here works over :class:`fractions.Fraction`.  A :class:`RegionCell`
is the intersection of finitely many half-planes, each either closed
(``a*x + b*y + c >= 0``) or strict (``> 0``).  The closed hull of a nonempty
cell is the intersection of the closed versions of its constraints, so a cell
is fully described by that closed polygon plus inclusion flags on its
vertices and edges.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import floor, gcd, lcm
from typing import Callable, Iterable, Sequence

Rational = Fraction
Point = tuple  # (Fraction, Fraction)

EMPTY, POINT, SEGMENT, POLYGON, UNBOUNDED = "empty", "point", "segment", "polygon", "unbounded"


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not accepted; pass a Fraction, int or 'p/q' string")
    return Fraction(value)


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"`` or ``"p"``. Decimal notation is rejected."""
    s = text.strip()
    if not s or any(ch in s for ch in ".eE"):
        raise ValueError(f"not a rational in p/q form: {text!r}")
    num, sep, den = s.partition("/")
    try:
        p = int(num)
        q = int(den) if sep else 1
    except ValueError:
        raise ValueError(f"not a rational in p/q form: {text!r}") from None
    if q == 0:
        raise ValueError(f"zero denominator: {text!r}")
    return Fraction(p, q)


def parse_vector(text: str) -> tuple:
    return tuple(parse_rational(part) for part in text.split(","))


def format_rational(q) -> str:
    q = as_rational(q)
    return f"{q.numerator}/{q.denominator}"


def floor_affine(r: Sequence, z: Sequence[int], eps) -> int:
    """Return ``floor(r.z + eps)`` computed exactly."""
    if len(r) != len(z):
        raise ValueError(f"dimension mismatch: r has {len(r)} entries, z has {len(z)}")
    total = as_rational(eps)
    for ri, zi in zip(r, z):
        total += as_rational(ri) * zi
    return floor(total)


@dataclass(frozen=True)
class HalfPlane:
    """``a*x + b*y + c >= 0`` (or ``> 0`` when ``strict``)."""

    a: Fraction
    b: Fraction
    c: Fraction
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))
        object.__setattr__(self, "c", as_rational(self.c))
        if self.a == 0 and self.b == 0:
            raise ValueError("degenerate half-plane: (a, b) = (0, 0)")

    def value(self, q) -> Fraction:
        return self.a * q[0] + self.b * q[1] + self.c

    def contains(self, q) -> bool:
        v = self.value(q)
        return v > 0 if self.strict else v >= 0

    def normalized(self) -> "HalfPlane":
        m = lcm(self.a.denominator, self.b.denominator, self.c.denominator)
        ints = [int(v * m) for v in (self.a, self.b, self.c)]
        g = gcd(*ints)
        return HalfPlane(*(Fraction(v, g) for v in ints), strict=self.strict)

    def closed(self) -> "HalfPlane":
        return HalfPlane(self.a, self.b, self.c, False)

    def opened(self) -> "HalfPlane":
        return HalfPlane(self.a, self.b, self.c, True)

    def line_key(self) -> tuple:
        """Key identifying the boundary line, independent of orientation."""
        n = self.normalized()
        a, b, c = n.a, n.b, n.c
        if a < 0 or (a == 0 and b < 0):
            a, b, c = -a, -b, -c
        return (a, b, c)


def ge(a, b, c) -> HalfPlane:
    return HalfPlane(a, b, c, False)


def gt(a, b, c) -> HalfPlane:
    return HalfPlane(a, b, c, True)


def _cross(o, p, q) -> Fraction:
    return (p[0] - o[0]) * (q[1] - o[1]) - (p[1] - o[1]) * (q[0] - o[0])


def convex_hull(points: Iterable) -> list:
    """Counterclockwise hull without collinear points, starting at the
    lexicographically smallest vertex."""
    pts = sorted(set((as_rational(p[0]), as_rational(p[1])) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    hull = lower[:-1] + upper[:-1]
    if len(hull) == 2 and hull[0] == hull[1]:
        return hull[:1]
    return hull


def _line_intersection(h1: HalfPlane, h2: HalfPlane):
    det = h1.a * h2.b - h2.a * h1.b
    if det == 0:
        return None
    x = (h1.b * h2.c - h2.b * h1.c) / det
    y = (h2.a * h1.c - h1.a * h2.c) / det
    return (x, y)


def _foot(h: HalfPlane):
    """Point of the boundary line closest to the origin."""
    n2 = h.a * h.a + h.b * h.b
    return (-h.a * h.c / n2, -h.b * h.c / n2)


def _clip(poly: list, h: HalfPlane) -> list:
    if not poly:
        return []
    out = []
    n = len(poly)
    for i in range(n):
        p, q = poly[i], poly[(i + 1) % n]
        fp, fq = h.value(p), h.value(q)
        if fp >= 0:
            out.append(p)
        if (fp > 0 and fq < 0) or (fp < 0 and fq > 0):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _dedupe(constraints: Iterable[HalfPlane]) -> list:
    seen: dict = {}
    for h in constraints:
        n = h.normalized()
        key = (n.a, n.b, n.c)
        seen[key] = seen.get(key, False) or n.strict
    return [HalfPlane(a, b, c, s) for (a, b, c), s in seen.items()]


@dataclass(frozen=True, eq=False)
class RegionCell:
    """Exact convex planar set with per-constraint strictness.

    ``vertices`` are only listed for bounded cells; ``vertex_included[i]``
    refers to ``vertices[i]`` and ``edge_included[i]`` to the open edge from
    ``vertices[i]`` to ``vertices[i+1]`` (one edge for a segment).
    """

    kind: str
    constraints: tuple = ()
    vertices: tuple = ()
    vertex_included: tuple = ()
    edge_included: tuple = ()
    _unbounded_key: frozenset = field(default=frozenset(), repr=False)

    def contains(self, q) -> bool:
        return cell_contains(self, q)

    @property
    def is_empty(self) -> bool:
        return self.kind == EMPTY

    def key(self) -> tuple:
        if self.kind == UNBOUNDED:
            return (self.kind, self._unbounded_key)
        return (self.kind, self.vertices, self.vertex_included, self.edge_included)

    def __eq__(self, other):
        if not isinstance(other, RegionCell):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def closure(self) -> "RegionCell":
        if self.is_empty:
            return self
        return cell_from_halfplanes([h.closed() for h in self.constraints])

    def is_closed(self) -> bool:
        return self.kind != EMPTY and all(self.vertex_included) and all(self.edge_included)

    def describe(self) -> dict:
        return {
            "kind": self.kind,
            "vertices": [[format_rational(x), format_rational(y)] for x, y in self.vertices],
            "vertex_included": list(self.vertex_included),
            "edge_included": list(self.edge_included),
            "constraints": [
                [format_rational(h.a), format_rational(h.b), format_rational(h.c), ">" if h.strict else ">="]
                for h in self.constraints
            ],
        }


EMPTY_CELL = RegionCell(EMPTY)


def cell_from_halfplanes(constraints: Iterable[HalfPlane]) -> RegionCell:
    """Exact intersection of half-planes, classified by dimension."""
    hs = _dedupe(constraints)
    if not hs:
        raise ValueError("the whole plane is not representable as a cell")

    # A box strictly containing every vertex of the arrangement and a point
    # of every boundary line; clipping to it preserves emptiness and the
    # affine hull of the closed intersection.
    extent = Fraction(1)
    for i, h in enumerate(hs):
        fx, fy = _foot(h)
        extent = max(extent, abs(fx), abs(fy))
        for g in hs[i + 1:]:
            p = _line_intersection(h, g)
            if p is not None:
                extent = max(extent, abs(p[0]), abs(p[1]))
    m = 2 * extent + 1
    poly = [(-m, -m), (m, -m), (m, m), (-m, m)]
    for h in hs:
        poly = _clip(poly, h.closed())
        if not poly:
            return EMPTY_CELL
    hull = convex_hull(poly)
    if not hull:
        return EMPTY_CELL

    strict = [h for h in hs if h.strict]
    for h in strict:
        if all(h.value(v) == 0 for v in hull):
            return EMPTY_CELL

    if any(abs(v[0]) == m or abs(v[1]) == m for v in hull):
        return RegionCell(UNBOUNDED, tuple(hs), _unbounded_key=frozenset(hs))

    kept = tuple(h for h in hs if any(h.value(v) == 0 for v in hull))
    vflags = tuple(all(h.value(v) > 0 for h in strict) for v in hull)
    n = len(hull)
    if n == 1:
        kind, edges = POINT, []
    elif n == 2:
        kind, edges = SEGMENT, [(hull[0], hull[1])]
    else:
        kind, edges = POLYGON, [(hull[i], hull[(i + 1) % n]) for i in range(n)]
    eflags = []
    for p, q in edges:
        mid = ((p[0] + q[0]) / 2, (p[1] + q[1]) / 2)
        eflags.append(all(h.value(mid) > 0 for h in strict))
    return RegionCell(kind, kept, tuple(hull), vflags, tuple(eflags))


def cell_meet(a: RegionCell, b: RegionCell) -> RegionCell:
    if a.is_empty or b.is_empty:
        return EMPTY_CELL
    return cell_from_halfplanes(list(a.constraints) + list(b.constraints))


def cell_contains(cell: RegionCell, q) -> bool:
    if cell.is_empty:
        return False
    q = (as_rational(q[0]), as_rational(q[1]))
    return all(h.contains(q) for h in cell.constraints)


def polygon_cell(points: Iterable) -> RegionCell:
    """Closed convex hull of a finite point set."""
    hull = convex_hull(points)
    if not hull:
        return EMPTY_CELL
    if len(hull) == 1:
        x, y = hull[0]
        return cell_from_halfplanes([ge(1, 0, -x), ge(-1, 0, x), ge(0, 1, -y), ge(0, -1, y)])
    hs = []
    if len(hull) == 2:
        p, q = hull
        a, b = -(q[1] - p[1]), q[0] - p[0]
        c = -(a * p[0] + b * p[1])
        hs += [ge(a, b, c), ge(-a, -b, -c)]
        # end caps along the segment direction
        dx, dy = q[0] - p[0], q[1] - p[1]
        hs += [ge(dx, dy, -(dx * p[0] + dy * p[1])), ge(-dx, -dy, dx * q[0] + dy * q[1])]
        return cell_from_halfplanes(hs)
    n = len(hull)
    for i in range(n):
        p, q = hull[i], hull[(i + 1) % n]
        a, b = -(q[1] - p[1]), q[0] - p[0]
        hs.append(ge(a, b, -(a * p[0] + b * p[1])))
    return cell_from_halfplanes(hs)


def segment_cell(p, q, include_p: bool = True, include_q: bool = True) -> RegionCell:
    p = (as_rational(p[0]), as_rational(p[1]))
    q = (as_rational(q[0]), as_rational(q[1]))
    base = polygon_cell([p, q])
    dx, dy = q[0] - p[0], q[1] - p[1]
    extra = []
    if not include_p:
        extra.append(gt(dx, dy, -(dx * p[0] + dy * p[1])))
    if not include_q:
        extra.append(gt(-dx, -dy, dx * q[0] + dy * q[1]))
    return cell_from_halfplanes(list(base.constraints) + extra) if extra else base


def point_cell(p) -> RegionCell:
    return polygon_cell([p])


# ---------------------------------------------------------------------------
# Arrangement sampling: an exact oracle for comparing finite unions,
# differences and other boolean combinations of cells.


def arrangement_points(halfplanes: Iterable[HalfPlane]) -> list:
    """One rational point in every face (vertex, edge, 2-cell) of the line
    arrangement spanned by the boundaries of ``halfplanes``."""
    lines = {}
    for h in halfplanes:
        lines.setdefault(h.line_key(), HalfPlane(*h.line_key()))
    ls = list(lines.values())
    if not ls:
        return [(Fraction(0), Fraction(0))]
    points = set()
    for i, l in enumerate(ls):
        base = _foot(l)
        da, db = -l.b, l.a
        ts = set()
        for j, g in enumerate(ls):
            if i == j:
                continue
            p = _line_intersection(l, g)
            if p is None:
                continue
            points.add(p)
            ts.add(((p[0] - base[0]) * da + (p[1] - base[1]) * db) / (da * da + db * db))
        ts = sorted(ts)
        if ts:
            params = [ts[0] - 1, ts[-1] + 1] + [(s + t) / 2 for s, t in zip(ts, ts[1:])]
        else:
            params = [Fraction(0)]
        for t in params:
            m = (base[0] + t * da, base[1] + t * db)
            points.add(m)
            delta = Fraction(1)
            for j, g in enumerate(ls):
                if i == j:
                    continue
                rate = g.a * l.a + g.b * l.b
                if rate != 0:
                    delta = min(delta, abs(g.value(m)) / abs(rate) / 2)
            points.add((m[0] + delta * l.a, m[1] + delta * l.b))
            points.add((m[0] - delta * l.a, m[1] - delta * l.b))
    return sorted(points)


def _constraints_of(cells) -> list:
    out = []
    for c in cells:
        out.extend(c.constraints)
    return out


def predicates_equal(f: Callable, g: Callable, halfplanes: Iterable[HalfPlane]) -> bool:
    """True iff predicates ``f`` and ``g`` agree on every face of the
    arrangement; exact whenever both are boolean combinations of
    ``halfplanes``."""
    return all(f(q) == g(q) for q in arrangement_points(halfplanes))


def union_contains(cells: Sequence[RegionCell], q) -> bool:
    return any(cell_contains(c, q) for c in cells)


def unions_equal(cells_a: Sequence[RegionCell], cells_b: Sequence[RegionCell]) -> bool:
    """Set equality of two finite unions of cells."""
    return predicates_equal(
        lambda q: union_contains(cells_a, q),
        lambda q: union_contains(cells_b, q),
        _constraints_of(list(cells_a) + list(cells_b)),
    )


def difference_equal(result: Sequence[RegionCell], minuend: Sequence[RegionCell],
                     subtrahend: Sequence[RegionCell]) -> bool:
    """``union(result) == union(minuend) minus union(subtrahend)``."""
    return predicates_equal(
        lambda q: union_contains(result, q),
        lambda q: union_contains(minuend, q) and not union_contains(subtrahend, q),
        _constraints_of(list(result) + list(minuend) + list(subtrahend)),
    )
