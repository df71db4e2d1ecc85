"""Slice restrictions and their structural certificates.

The 3x3 case is checked against a hand-rolled cofactor expansion that
never touches the subset dynamic programme, and against frozen values
derived by hand for the two-block partition.
"""

import random
from fractions import Fraction

import pytest

from centinv.centralizer import XiIndex, build_gl_model, build_sp_model
from centinv.invariants import (
    BudgetExceededError,
    conjecture_explicit_check,
    expected_degrees,
    initial_algebra_rank,
    monomial_support_check,
    poisson_bracket,
    principal_minor_sums,
    signed_permutation_sum,
    symplectic_minor_sums,
    top_coefficient_crosscheck,
    verify_centrality,
)
from centinv.partitions import Partition, degrees_gl, partitions_of
from centinv.poly import SparsePoly


def slice_entry_polys(model):
    """Matrix entries of e + generic dual element, as polynomials."""
    n = model.partition.n
    e = model.realization.e
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            p = SparsePoly.constant(model.var_names, e.rows[i][j])
            for a, mat in enumerate(model.gf_dual):
                v = mat.rows[i][j]
                if v:
                    p = p + SparsePoly.variable(model.var_names, model.var_names[a]) * v
            row.append(p)
        out.append(row)
    return out


def cofactor_det(entries):
    """Independent oracle: recursive cofactor expansion along the first row."""
    n = len(entries)
    if n == 1:
        return entries[0][0]
    total = None
    for j in range(n):
        minor = [[entries[i][jj] for jj in range(n) if jj != j] for i in range(1, n)]
        term = entries[0][j] * cofactor_det(minor)
        if j % 2:
            term = -term
        total = term if total is None else total + term
    return total


def principal_minor_sum_oracle(entries, ell):
    from itertools import combinations

    n = len(entries)
    total = None
    for rows in combinations(range(n), ell):
        sub = [[entries[i][j] for j in rows] for i in rows]
        d = cofactor_det(sub)
        total = d if total is None else total + d
    return total


@pytest.mark.parametrize("parts", ["2,1", "3,1", "2,2"])
def test_minor_sums_match_cofactor_oracle(parts):
    m = build_gl_model(Partition.parse(parts))
    sr = principal_minor_sums(m)
    entries = slice_entry_polys(m)
    for ell in range(1, m.partition.n + 1):
        assert sr.full[ell - 1] == principal_minor_sum_oracle(entries, ell)


def test_frozen_values_for_two_block_partition():
    m = build_gl_model(Partition.parse("2,1"))
    sr = principal_minor_sums(m)
    names = m.var_names
    x = {lab: SparsePoly.variable(names, lab) for lab in names}
    # coordinates: x1=xi[1,1,0], x2=xi[1,1,1], x3=xi[1,2,0], x4=xi[2,1,1], x5=xi[2,2,0]
    assert sr.full[0] == x["x1"] + x["x5"]
    assert sr.full[1] == x["x1"] ** 2 * Fraction(1, 4) + x["x1"] * x["x5"] - x["x2"]
    assert sr.full[2] == (x["x1"] ** 2 * x["x5"] * Fraction(1, 4)
                          - x["x2"] * x["x5"] + x["x3"] * x["x4"])
    assert sr.initial[0] == x["x1"] + x["x5"]
    assert sr.initial[1] == -x["x2"]
    assert sr.initial[2] == -x["x2"] * x["x5"] + x["x3"] * x["x4"]
    assert sr.degrees == [1, 1, 2]
    assert all(sr.kazhdan_homogeneous)


def test_initial_term_quadratic_coefficients_nonzero():
    m = build_gl_model(Partition.parse("2,1"))
    sr = principal_minor_sums(m)
    top = sr.initial[2]
    a = m.index[XiIndex(1, 1, 1)]
    b = m.index[XiIndex(2, 2, 0)]
    c = m.index[XiIndex(1, 2, 0)]
    d = m.index[XiIndex(2, 1, 1)]
    mono = {m.var_names[a]: 1, m.var_names[b]: 1}
    mono2 = {m.var_names[c]: 1, m.var_names[d]: 1}
    coeffs = {frozenset(exps.items()): coeff for exps, coeff in top.monomials()}
    assert coeffs[frozenset(mono.items())] != 0
    assert coeffs[frozenset(mono2.items())] != 0
    assert len(coeffs) == 2


@pytest.mark.parametrize("n", range(1, 7))
def test_symbolic_degrees_match_table(n):
    for p in partitions_of(n):
        m = build_gl_model(p)
        sr = principal_minor_sums(m)
        assert tuple(sr.degrees) == degrees_gl(p).degrees, p
        assert all(sr.kazhdan_homogeneous), p


def test_regular_case_single_coordinates():
    m = build_gl_model(Partition.parse("4"))
    sr = principal_minor_sums(m)
    for ell, F in enumerate(sr.initial, start=1):
        monos = F.monomials()
        assert len(monos) == 1
        exps, _ = monos[0]
        (name, e), = exps.items()
        assert e == 1
        assert m.xi[int(name[1:]) - 1] == XiIndex(1, 1, ell - 1)


def test_budget_refusal():
    m = build_gl_model(Partition.parse("3,2"))
    with pytest.raises(BudgetExceededError) as err:
        principal_minor_sums(m, budget=4)
    assert err.value.n == 5 and err.value.budget == 4


def test_poisson_bracket_on_coordinates_is_structure_constants():
    m = build_gl_model(Partition.parse("2,1"))
    names = m.var_names
    for a in range(m.dim):
        for b in range(m.dim):
            P = SparsePoly.variable(names, names[a])
            Q = SparsePoly.variable(names, names[b])
            br = poisson_bracket(P, Q, m)
            expected = SparsePoly(names)
            for c, v in m.bracket_vec(a, b):
                expected = expected + SparsePoly.variable(names, names[c]) * v
            assert br == expected


def random_quadratic(model, rng):
    names = model.var_names
    entries = []
    for _ in range(rng.randint(1, 5)):
        deg = rng.randint(0, 2)
        exps: dict[str, int] = {}
        for _ in range(deg):
            v = rng.choice(names)
            exps[v] = exps.get(v, 0) + 1
        entries.append((exps, Fraction(rng.randint(-4, 4))))
    return SparsePoly.from_exponents(names, entries)


@pytest.mark.parametrize("parts", ["2,1", "2,2", "3,2"])
def test_poisson_jacobi_on_random_quadratics(parts):
    m = build_gl_model(Partition.parse(parts))
    rng = random.Random(42)
    for _ in range(200):
        P, Q, R = (random_quadratic(m, rng) for _ in range(3))
        jac = (poisson_bracket(P, poisson_bracket(Q, R, m), m)
               + poisson_bracket(Q, poisson_bracket(R, P, m), m)
               + poisson_bracket(R, poisson_bracket(P, Q, m), m))
        assert jac.is_zero()
        assert poisson_bracket(P, P, m).is_zero()


@pytest.mark.parametrize("parts", ["2,1", "4", "3,2,1", "2,2"])
def test_centrality(parts):
    m = build_gl_model(Partition.parse(parts))
    sr = principal_minor_sums(m)
    res = verify_centrality(sr, m, seed=3)
    assert res.passed and res.failing is None
    for ell, F in enumerate(sr.initial, start=1):
        for a in range(m.dim):
            P = SparsePoly.variable(m.var_names, m.var_names[a])
            assert poisson_bracket(P, F, m).is_zero(), (parts, a, ell)


def test_centrality_detects_noninvariant():
    m = build_gl_model(Partition.parse("2,1"))
    sr = principal_minor_sums(m)
    broken = list(sr.initial)
    broken[2] = broken[2] + SparsePoly.variable(m.var_names, "x3")
    import dataclasses
    bad = dataclasses.replace(sr, initial=broken)
    res = verify_centrality(bad, m, seed=3)
    assert not res.passed
    assert res.failing is not None


@pytest.mark.parametrize("parts", ["2,1", "2,2", "3,2,1", "5"])
def test_monomial_support(parts):
    m = build_gl_model(Partition.parse(parts))
    sr = principal_minor_sums(m)
    report = monomial_support_check(sr, m)
    assert report.passed, report.violations


def test_monomial_support_weights_example():
    m = build_gl_model(Partition.parse("2,1"))
    sr = principal_minor_sums(m)
    report = monomial_support_check(sr, m)
    for row in report.per_ell[2]:
        assert sorted(row["I"]) == [1, 2]
        weight = sum(m.h_weights[m.index[XiIndex(i, row["sigma"][i], row["shifts"][i])]]
                     for i in row["I"])
        assert weight == 2 * (3 - 2)


@pytest.mark.parametrize("parts", ["2,1", "3", "2,2", "2,1,1", "3,2"])
def test_signed_sum_proportionality(parts):
    m = build_gl_model(Partition.parse(parts))
    sr = principal_minor_sums(m)
    res = conjecture_explicit_check(sr, m)
    assert res.passed
    assert all(r is not None and r != 0 for r in res.ratios)


def test_signed_sum_for_two_blocks_by_hand():
    m = build_gl_model(Partition.parse("2,1"))
    S = signed_permutation_sum(m, ell=3, m=2)
    names = m.var_names
    x = {lab: SparsePoly.variable(names, lab) for lab in names}
    assert S == x["x2"] * x["x5"] - x["x3"] * x["x4"]


@pytest.mark.parametrize("parts", ["2", "2,1", "2,2", "3,1", "2,1,1"])
def test_top_coefficient_crosscheck(parts):
    m = build_gl_model(Partition.parse(parts))
    sr = principal_minor_sums(m)
    res = top_coefficient_crosscheck(m, sr)
    assert res.passed, res.detail
    assert all(v != 0 for v in res.scalars.values())


def test_top_coefficient_budget():
    m = build_gl_model(Partition.parse("3,2"))
    sr = principal_minor_sums(m)
    with pytest.raises(BudgetExceededError):
        top_coefficient_crosscheck(m, sr, budget=4)


@pytest.mark.parametrize("parts,expected", [("2,1", 3), ("4", 4), ("3,1", 4)])
def test_jacobian_generic_rank(parts, expected):
    m = build_gl_model(Partition.parse(parts))
    sr = principal_minor_sums(m)
    assert initial_algebra_rank(sr, m, seed=1) == expected


def test_symplectic_slice_odd_sums_vanish_and_degrees():
    from centinv.partitions import degrees_sp

    for parts in ("2", "2,1,1", "2,2", "4", "3,3"):
        p = Partition.parse(parts)
        sp = build_sp_model(p)
        sr = symplectic_minor_sums(sp)
        assert tuple(sr.degrees) == degrees_sp(p).degrees
        assert all(sr.kazhdan_homogeneous)
        res = verify_centrality(sr, sp.fixed, seed=5)
        assert res.passed


def test_expected_degrees_dispatch():
    m = build_gl_model(Partition.parse("2,1"))
    sr = principal_minor_sums(m)
    assert expected_degrees(sr) == (1, 1, 2)
    sp = build_sp_model(Partition.parse("2,1,1"))
    assert expected_degrees(symplectic_minor_sums(sp)) == (1, 3)
