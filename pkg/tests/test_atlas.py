from fractions import Fraction as F

import pytest

from epscns import atlas
from epscns.atlas import (
    appendix_formula_counts,
    appendix_length,
    appendix_union_holds,
    bracket_consistent,
    delta_family,
    lattice_in_B,
    lattice_in_D,
    region,
    region_sample,
    reproduce_lemma,
    sample_points,
    srs_pola,
)
from epscns.geometry import cell_contains, cell_meet, difference_equal, point_cell, unions_equal

SAMPLED_EPS = [F(0), F(1, 10), F(1, 4), F(1, 3), F(2, 5), F(1, 2), F(3, 5), F(2, 3), F(3, 4), F(9, 10)]


def test_region_examples():
    assert region("Dstar", F(1, 4)).contains((0, 0))
    assert region("T", F(1, 4)).contains((F(-3, 8), F(1, 8)))
    b = region("B", F(1, 2))
    assert b.contains((F(1, 6), 0))
    assert not b.contains((F(1, 6) + F(1, 1000), 0))


def test_region_strictness_D():
    d = region("D", F(1, 4))
    e = F(1, 4)
    # -x - eps <= y < x + 1 - eps, -eps <= x < 1 - eps
    assert d.contains((-e, 0))
    assert not d.contains((1 - e, 0))
    assert d.contains((0, -e))
    assert not d.contains((0, 1 - e))


def test_region_errors():
    with pytest.raises(ValueError):
        region("Q", F(1, 4))
    with pytest.raises(ValueError):
        region("B", F(1))


@pytest.mark.parametrize("eps", SAMPLED_EPS[1:])
def test_branch_consistency(eps):
    ds, left, strip = region("Dstar", eps), region("L", eps), region("S", eps)
    assert region("B", eps).realized == cell_meet(ds.realized, strip.realized)
    assert region("D", eps).realized == cell_meet(ds.realized, left.realized)


@pytest.mark.parametrize("eps", SAMPLED_EPS)
def test_t_complement(eps):
    assert difference_equal([region("D", eps).realized], [region("Dstar", eps).realized], [region("T", eps).realized])


@pytest.mark.parametrize("eps", SAMPLED_EPS[1:])
def test_dstar_symmetry(eps):
    assert region("Dstar", eps).realized.closure() == region("Dstar", 1 - eps).realized.closure()


def test_lattice_geometry_agreement():
    for a in range(2, 13):
        for p0 in (a, -a):
            for j in range(4 * a):
                eps = F(j, 4 * a)
                d = region("D", eps)
                for p1 in range(-a - 3, a + 4):
                    assert lattice_in_D(p0, p1, eps) == d.contains((F(1, p0), F(p1, p0))), (p0, p1, eps)


def test_lattice_examples():
    assert lattice_in_D(5, -2, F(1, 4))
    assert lattice_in_D(-3, 0, F(1, 3)) and not lattice_in_D(-3, 1, F(1, 3))
    assert not lattice_in_D(2, 3, 0)
    assert lattice_in_D(7, 1, F(1, 3)) and lattice_in_B(7, 1, F(1, 3)) == (True, False)
    assert lattice_in_D(2, 1, F(1, 2)) and lattice_in_B(2, 1, F(1, 2))[1]
    assert lattice_in_B(3, 1, F(1, 2))[1] is False


def test_lattice_D_in_B_outside_exceptions():
    for a in range(2, 13):
        for p0 in (a, -a):
            for j in range(8 * a):
                eps = F(j, 8 * a)
                for p1 in range(-a - 3, a + 4):
                    if lattice_in_D(p0, p1, eps):
                        inside, exception = lattice_in_B(p0, p1, eps)
                        assert inside or exception, (p0, p1, eps)


def test_inclusion_gap_windows():
    assert atlas.in_inclusion_gap(3, F(1, 2))
    assert not atlas.in_inclusion_gap(3, F(1, 3))
    assert not atlas.in_inclusion_gap(6, F(1, 2))


# --- Delta family ----------------------------------------------------------------


def test_delta_family_examples():
    fam = delta_family(F(1, 4))
    assert set(fam.hulls[1].vertices) == {(F(-1, 2), F(1, 4)), (F(-1, 4), 0), (F(-1, 4), F(1, 2))}
    e = F(2, 25)
    fam = delta_family(e, 4)
    assert fam.length == 6 == appendix_length(4)
    assert fam.chain[2] == (F(2, 3) - e, F(5, 3) - 2 * e - F(2, 4) * e)
    assert fam.chain[0] == fam.points["Z"]


@pytest.mark.parametrize("eps", [F(1, 10), F(1, 4), F(1, 3), F(2, 5), F(9, 20)])
def test_delta_cover(eps):
    fam = delta_family(eps)
    assert unions_equal([fam.cell(i) for i in range(2, 15)], [region("B", eps).realized.closure()])
    assert fam.cell(1) == region("T", eps).realized.closure()


@pytest.mark.parametrize("eps", [F(3, 5), F(3, 4)])
def test_mirrored_cover(eps):
    fam = delta_family(eps)
    assert fam.mirrored and fam.base_eps == 1 - eps
    assert unions_equal([fam.cell(i) for i in range(2, 15)], [region("B", eps).realized.closure()])


@pytest.mark.parametrize("n", [4, 5, 6])
def test_appendix_union(n):
    lo, hi = atlas.appendix_interval(n)
    for eps in (lo, (lo + hi) / 2):
        assert appendix_union_holds(delta_family(eps, n))


def test_appendix_interval_enforced():
    with pytest.raises(ValueError):
        delta_family(F(1, 4), 4)
    with pytest.raises(ValueError):
        atlas.appendix_interval(3)


def test_formula_counts():
    c = appendix_formula_counts(4, 2)
    assert (c["a0"], c["a1"]) == (6, 3)
    assert c["vertices"] == 53 and c["edges"] == 90


def test_bracket_consistency():
    assert [s for s in range(2, appendix_length(4)) if bracket_consistent(4, s)] == [5]
    assert [s for s in range(2, appendix_length(5)) if bracket_consistent(5, s)] == [8]
    # the named value a0^(2) = 2n - 3 disagrees with the ceiling formula
    assert appendix_formula_counts(4, 2)["a0"] == 6 != 5
    assert appendix_formula_counts(5, 2)["a0"] == 8 != 7


# --- lemma reproduction ----------------------------------------------------------------


def test_lemma_delta1():
    rep = reproduce_lemma("delta1", F(2, 5))
    assert rep["ok"], rep["mismatches"]
    row = rep["hulls"][0]
    assert (row["vertices"], row["edges"]) == (7, 10)
    assert row["nontrivial_cycles"] == [[-1, 1], [0, 1]]


def test_lemma_delta19():
    rep = reproduce_lemma("delta19", F(2, 25), n=4)
    assert rep["ok"], rep["mismatches"]
    row = rep["hulls"][0]
    assert row["vertices"] == 69 and row["edges"] <= 116
    assert row["graph_cycles"] == [[-1, 1]]
    assert row["union"]["vertices"] == 69


def test_lemma_delta18s():
    rep = reproduce_lemma("delta18s", F(2, 25), n=4, s=2)
    assert rep["ok"], rep["mismatches"]
    assert rep["hulls"][0]["nontrivial_cycles"] == [[-1, 1]]
    assert rep["notes"]


@pytest.mark.parametrize("lemma,eps", [
    ("delta15", F(1, 4)), ("delta16", F(1, 5)), ("delta16", F(1, 10)), ("delta18", F(1, 8)),
    ("deltaCZ", F(1, 10)), ("mirror", F(3, 5)), ("mirror", F(3, 4)),
])
def test_lemma_reports_ok(lemma, eps):
    rep = reproduce_lemma(lemma, eps)
    if lemma == "delta18":
        # fixed-eps counts differ from the stated graph counts; cycles and residual agree
        assert {m["check"] for m in rep["mismatches"]} <= {"delta18 vertices", "delta18 edges"}
        assert [c for c in rep["checks"] if c["check"] == "delta18 residual"][0]["observed"]
    else:
        assert rep["ok"], rep["mismatches"]


def test_lemma_interval_errors():
    with pytest.raises(ValueError):
        reproduce_lemma("delta1", F(3, 5))
    with pytest.raises(ValueError):
        reproduce_lemma("mirror", F(1, 4))
    with pytest.raises(ValueError):
        reproduce_lemma("delta19", F(1, 4))
    with pytest.raises(ValueError):
        reproduce_lemma("nope", F(1, 4))
    with pytest.raises(ValueError):
        reproduce_lemma("delta18", F(1, 4))


def test_stated_graph_union_vertices():
    rows = atlas.stated_graph_report()
    assert len(rows) == len(atlas.STATED_GRAPHS)
    for row in rows:
        assert row["union_vertices"] == row["stated_vertices"], row


def test_stated_graph_edge_findings():
    rows = atlas.stated_graph_report()
    off = {(r["hull"], r["interval"]): r["union_edges"] for r in rows
           if (r["kind"] == "exact" and r["union_edges"] != r["stated_edges"])
           or (r["kind"] == "union" and r["union_edges"] > r["stated_edges"])}
    assert off == {
        (7, "(0/1,1/10)"): 34, (8, "[1/9,2/9)"): 34, (8, "(0/1,1/9)"): 65, (13, "[1/4,1/2)"): 11,
        (13, "[1/9,1/4)"): 20, (15, "[1/4,1/2)"): 12, (15, "(0/1,1/24)"): 63, (18, "[2/21,1/6)"): 81,
    }


# --- sampling ------------------------------------------------------------------------


def test_region_sample_half():
    for x, y, v in region_sample(F(1, 2), 8):
        if v != "inconclusive":
            assert (v == "in") == srs_pola(x, y), (x, y)


def test_region_sample_zero():
    b = region("B", F(0))
    for x, y, v in region_sample(F(0), 6, points=lambda q: q[0] <= F(2, 3)):
        if v != "inconclusive":
            assert (v == "in") == b.contains((x, y)), (x, y)


def test_region_sample_deterministic_and_origin():
    a = region_sample(F(1, 3), 4)
    assert a == region_sample(F(1, 3), 4)
    assert a == sorted(a, key=lambda t: (t[0], t[1]))
    assert (F(0), F(0), "in") in a


def test_region_sample_parallel_matches_serial():
    assert region_sample(F(2, 5), 4, jobs=2) == region_sample(F(2, 5), 4)


def test_sample_points_respect_boundary():
    cell = region("T", F(1, 4)).realized
    pts = sample_points(cell, 50, seed=3)
    assert len(pts) == 50
    assert all(cell_contains(cell, p) for p in pts)
    assert sample_points(cell, 50, seed=3) == pts
    assert sample_points(point_cell((0, 0)), 3) == [(0, 0)]
