"""Initial components of adjoint invariants on the slice e + g_f.

The sums of principal minors of a generic slice point are expanded
exactly (characteristic-polynomial coefficients via a subset dynamic
programme over columns); their lowest-degree homogeneous parts are the
distinguished elements of S(g_e) whose structural properties the rest
of the toolkit certifies: Poisson centrality, monomial support, the
signed-permutation expansion, and agreement with the top coefficient of
the expansion of an invariant along the opposite nilpotent.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations

from .centralizer import (
    CentralizerModel,
    SymplecticModel,
    XiIndex,
    _independent_rows,
    commutator,
)
from .linalg import RatMatrix, from_vectors
from .partitions import Partition, degrees_gl, degrees_sp
from .poly import SparsePoly, _MASK, _WIDTH


class BudgetExceededError(RuntimeError):
    """Symbolic stage refused: dimension above the configured budget."""

    def __init__(self, n: int, budget: int, what: str = "symbolic expansion"):
        super().__init__(f"{what} needs n={n} but the budget is {budget}")
        self.n = n
        self.budget = budget


# -- characteristic polynomial over sparse-poly entries -------------------


def _accumulate_product(acc: dict, terms: dict, factor: dict, parity: int) -> None:
    sign = -1 if parity else 1
    get = acc.get
    for kb, cb in factor.items():
        cb = sign * cb
        for ka, ca in terms.items():
            k = ka + kb
            c = ca * cb
            s = get(k)
            if s is None:
                acc[k] = c
            else:
                s = s + c
                if s:
                    acc[k] = s
                else:
                    del acc[k]


def char_poly_terms(entries: list[list[dict]], t_key: int) -> dict:
    """Term dict of det(t*Id - M) for a matrix of term-dict entries.

    Rows and columns are permuted symmetrically so sparse rows are
    expanded first; the expansion runs over column subsets.
    """
    n = len(entries)
    order = sorted(range(n), key=lambda i: sum(1 for j in range(n) if entries[i][j]))
    A: list[list[dict]] = []
    for i in order:
        row = []
        for j in order:
            ent = {k: -c for k, c in entries[i][j].items()}
            if i == j:
                ent[t_key] = ent.get(t_key, Fraction(0)) + 1
                if not ent[t_key]:
                    del ent[t_key]
            row.append(ent)
        A.append(row)
    level: dict[int, dict] = {0: {0: Fraction(1)}}
    for j in range(1, n + 1):
        nxt: dict[int, dict] = {}
        row = A[j - 1]
        for mask, poly in level.items():
            for c in range(n):
                bit = 1 << c
                if mask & bit:
                    continue
                ent = row[c]
                if not ent:
                    continue
                pos = (mask & (bit - 1)).bit_count() + 1
                acc = nxt.setdefault(mask | bit, {})
                _accumulate_product(acc, poly, ent, (j + pos) & 1)
        level = {m: t for m, t in nxt.items() if t}
    return level.get((1 << n) - 1, {})


def principal_minor_sum_polys(entries: list[list[dict]],
                              variables: tuple[str, ...]) -> list[SparsePoly]:
    """All n sums of principal minors of the matrix, as polynomials.

    ``variables`` lists the coordinate names; the characteristic
    variable is appended internally and eliminated again.
    """
    n = len(entries)
    t_index = len(variables)
    t_key = 1 << (_WIDTH * t_index)
    char_terms = char_poly_terms(entries, t_key)
    shift = _WIDTH * t_index
    buckets: list[dict] = [dict() for _ in range(n + 1)]
    for k, c in char_terms.items():
        power = (k >> shift) & _MASK
        buckets[power][k - (power << shift)] = c
    out = []
    for ell in range(1, n + 1):
        sign = -1 if ell % 2 else 1
        out.append(SparsePoly(variables, {k: sign * c for k, c in buckets[n - ell].items()}))
    return out


# -- slice restrictions ----------------------------------------------------


@dataclass
class SliceRestriction:
    """Minor sums restricted to the slice, with their initial terms."""

    partition: Partition
    algebra: str
    var_names: tuple[str, ...]
    full: list[SparsePoly]
    initial: list[SparsePoly]
    degrees: list[int]
    kazhdan_homogeneous: list[bool]

    @property
    def count(self) -> int:
        return len(self.full)


def _slice_entries(e: RatMatrix, duals: list[RatMatrix],
                   n: int) -> list[list[dict]]:
    entries: list[list[dict]] = [[dict() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            ent = entries[i][j]
            c = e.rows[i][j]
            if c:
                ent[0] = c
            for a, mat in enumerate(duals):
                v = mat.rows[i][j]
                if v:
                    ent[1 << (_WIDTH * a)] = v
    return entries


def _kazhdan_check(poly: SparsePoly, weights, expected: int) -> bool:
    """Every monomial satisfies sum_a m_a (wt_a + 2) = 2 * expected."""
    for exps, _ in poly.monomials():
        total = 0
        for name, e in exps.items():
            a = int(name[1:]) - 1
            total += e * (weights[a] + 2)
        if total != 2 * expected:
            return False
    return True


def principal_minor_sums(model: CentralizerModel, budget: int = 8) -> SliceRestriction:
    """Expand the n minor sums on e + g_f in the trace-dual coordinates."""
    p = model.partition
    if p.n > budget:
        raise BudgetExceededError(p.n, budget, "slice expansion")
    entries = _slice_entries(model.realization.e, model.gf_dual, p.n)
    polys = principal_minor_sum_polys(entries, model.var_names)
    initial = [q.lowest_degree_component() for q in polys]
    degrees = [q.total_degree() for q in initial]
    kazh = [
        _kazhdan_check(q, model.h_weights, ell)
        for ell, q in enumerate(polys, start=1)
    ]
    return SliceRestriction(
        partition=p, algebra="gl", var_names=model.var_names,
        full=polys, initial=initial, degrees=degrees, kazhdan_homogeneous=kazh,
    )


def symplectic_minor_sums(sp: SymplecticModel, budget: int = 8) -> SliceRestriction:
    """Even minor sums on the symplectic slice e + (g_f cap sp).

    The odd minor sums must vanish identically there; this is asserted.
    """
    p = sp.partition
    if p.n > budget:
        raise BudgetExceededError(p.n, budget, "symplectic slice expansion")
    fixed = sp.fixed
    entries = _slice_entries(sp.gl.realization.e, sp.gf_dual, p.n)
    polys = principal_minor_sum_polys(entries, fixed.var_names)
    for ell in range(1, p.n + 1, 2):
        if not polys[ell - 1].is_zero():
            raise ArithmeticError(f"odd minor sum {ell} does not vanish on the sp slice")
    even = [polys[2 * i - 1] for i in range(1, p.n // 2 + 1)]
    initial = [q.lowest_degree_component() for q in even]
    degrees = [q.total_degree() for q in initial]
    weights = fixed.h_weights
    kazh = [
        weights is not None and _kazhdan_check(q, weights, 2 * i)
        for i, q in enumerate(even, start=1)
    ]
    return SliceRestriction(
        partition=p, algebra="sp", var_names=fixed.var_names,
        full=even, initial=initial, degrees=degrees, kazhdan_homogeneous=kazh,
    )


def expected_degrees(sr: SliceRestriction) -> tuple[int, ...]:
    if sr.algebra == "gl":
        return degrees_gl(sr.partition).degrees
    return degrees_sp(sr.partition).degrees


# -- Poisson structure ------------------------------------------------------


def poisson_bracket(P: SparsePoly, Q: SparsePoly, model) -> SparsePoly:
    """Linear Poisson bracket of S(g_e): {x_a, x_b} = [xi_a, xi_b] coordinates."""
    names = model.var_names
    if P.variables != names or Q.variables != names:
        raise ValueError("polynomials are not over the model coordinates")
    dP = [P.partial_derivative(v) for v in names]
    dQ = [Q.partial_derivative(v) for v in names]
    acc: dict[int, Fraction] = {}
    r = len(names)
    for a in range(r):
        if dP[a].is_zero() and dQ[a].is_zero():
            continue
        for b in range(a + 1, r):
            vec = model.bracket_vec(a, b)
            if not vec:
                continue
            wedge = dP[a] * dQ[b] - dP[b] * dQ[a]
            if wedge.is_zero():
                continue
            for c, coeff in vec:
                key_c = 1 << (_WIDTH * c)
                for k, v in wedge.terms.items():
                    key = k + key_c
                    s = acc.get(key, Fraction(0)) + coeff * v
                    if s:
                        acc[key] = s
                    else:
                        acc.pop(key, None)
    return SparsePoly(names, acc)


def coordinate_bracket_with(model, a: int, Q: SparsePoly) -> SparsePoly:
    """{x_a, Q} without building the full wedge: ad-derivation of Q."""
    names = model.var_names
    acc: dict[int, Fraction] = {}
    for b in range(len(names)):
        vec = model.bracket_vec(a, b)
        if not vec:
            continue
        dQ = Q.partial_derivative(names[b])
        if dQ.is_zero():
            continue
        for c, coeff in vec:
            key_c = 1 << (_WIDTH * c)
            for k, v in dQ.terms.items():
                key = k + key_c
                s = acc.get(key, Fraction(0)) + coeff * v
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
    return SparsePoly(names, acc)


@dataclass
class CentralityResult:
    passed: bool
    failing: tuple | None          # (coordinate label, ell, bracket string)
    group_points_checked: int
    group_failures: list


def verify_centrality(sr: SliceRestriction, model, seed: int = 0,
                      group_points: int = 5) -> CentralityResult:
    """Exact {x_a, initial_ell} = 0 for all a, ell, plus a group-level probe.

    The group probe conjugates random points by exp(ad x) for fixed-space
    elements x of positive ad(h) weight (nilpotent, so the exponential is
    a finite rational sum) and compares values.
    """
    labels = getattr(model, "labels")
    for ell, F in enumerate(sr.initial, start=1):
        for a in range(len(model.var_names)):
            br = coordinate_bracket_with(model, a, F)
            if not br.is_zero():
                return CentralityResult(False, (labels[a], ell, str(br)), 0, [])

    rng = random.Random(seed)
    weights = model.h_weights
    group_failures: list = []
    checked = 0
    if weights is not None:
        positive = [a for a, w in enumerate(weights) if w > 0]
        r = len(model.var_names)
        for a in positive[:3]:
            A = _ad_matrix(model, a)
            # exp(-A), exact because ad of a positive-weight element is nilpotent
            M = RatMatrix.identity(r)
            term = RatMatrix.identity(r)
            fact = 1
            step = 0
            while True:
                step += 1
                term = term @ A
                if term.is_zero():
                    break
                fact *= step
                M = M + term.scale(Fraction(-1 if step % 2 else 1, fact))
            Mt = M.transpose()
            for _ in range(group_points):
                gamma = [Fraction(rng.randint(-10, 10)) for _ in range(r)]
                moved = Mt.apply(gamma)
                point = dict(zip(model.var_names, gamma))
                moved_point = dict(zip(model.var_names, moved))
                checked += 1
                for ell, F in enumerate(sr.initial, start=1):
                    if F.evaluate(point) != F.evaluate(moved_point):
                        group_failures.append((labels[a], ell))
    return CentralityResult(not group_failures, None, checked, group_failures)


def _ad_matrix(model, a: int) -> RatMatrix:
    r = len(model.var_names)
    rows = [[Fraction(0)] * r for _ in range(r)]
    for b in range(r):
        for c, v in model.bracket_vec(a, b):
            rows[c][b] = v
    return RatMatrix(rows)


# -- monomial support -------------------------------------------------------


@dataclass
class MonomialSupportReport:
    per_ell: list[list[dict]]
    violations: list[tuple]

    @property
    def passed(self) -> bool:
        return not self.violations


def monomial_support_check(sr: SliceRestriction, model: CentralizerModel) -> MonomialSupportReport:
    """Check every monomial of every initial term is a permutation monomial.

    Each monomial must be squarefree with pairwise distinct lower block
    indices I, upper indices permuting I, and ad(h) weight 2(ell - |I|).
    """
    per_ell: list[list[dict]] = []
    violations: list[tuple] = []
    for ell, F in enumerate(sr.initial, start=1):
        rows = []
        for exps, coeff in F.monomials():
            factors = []
            for name, e in sorted(exps.items(), key=lambda kv: int(kv[0][1:])):
                a = int(name[1:]) - 1
                idx = model.xi[a]
                if e != 1:
                    violations.append((ell, name, "repeated factor"))
                factors.extend([idx] * e)
            lowers = [ix.i for ix in factors]
            uppers = sorted(ix.j for ix in factors)
            weight = sum(model.h_weights[model.index[ix]] for ix in factors)
            ok_distinct = len(set(lowers)) == len(lowers)
            ok_perm = uppers == sorted(set(lowers))
            ok_weight = weight == 2 * (ell - len(factors))
            if not ok_distinct:
                violations.append((ell, str(exps), "lower indices repeat"))
            if not ok_perm:
                violations.append((ell, str(exps), "upper indices are not a permutation"))
            if not ok_weight:
                violations.append((ell, str(exps), f"weight {weight} != {2 * (ell - len(factors))}"))
            rows.append({
                "I": sorted(set(lowers)),
                "sigma": {ix.i: ix.j for ix in factors},
                "shifts": {ix.i: ix.s for ix in factors},
                "coeff": str(coeff),
            })
        per_ell.append(rows)
    return MonomialSupportReport(per_ell=per_ell, violations=violations)


# -- signed permutation expansion -------------------------------------------


def _perm_sign(perm: tuple[int, ...]) -> int:
    sign = 1
    seen = [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j = i
        clen = 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            clen += 1
        if clen % 2 == 0:
            sign = -sign
    return sign


def signed_permutation_sum(model: CentralizerModel, ell: int, m: int) -> SparsePoly:
    """Sum of sgn(sigma) * prod xi_i^{sigma(i), s_i} over supports of size m.

    Runs over subsets I of blocks with |I| = m, permutations sigma of I,
    and shift vectors with total ell - m, all factors admissible.
    """
    p = model.partition
    d = p.d
    target = ell - m
    acc: dict[int, Fraction] = {}
    for I in combinations(range(1, p.k + 1), m):
        for perm in permutations(range(m)):
            sign = _perm_sign(perm)
            ranges = []
            for t in range(m):
                i, j = I[t], I[perm[t]]
                lo = max(d[j - 1] - d[i - 1], 0)
                ranges.append((i, j, lo, d[j - 1]))
            lo_suffix = [0] * (m + 1)
            hi_suffix = [0] * (m + 1)
            for t in range(m - 1, -1, -1):
                lo_suffix[t] = lo_suffix[t + 1] + ranges[t][2]
                hi_suffix[t] = hi_suffix[t + 1] + ranges[t][3]

            def rec(t: int, remaining: int, key: int):
                if t == m:
                    s = acc.get(key, Fraction(0)) + sign
                    if s:
                        acc[key] = s
                    else:
                        acc.pop(key, None)
                    return
                i, j, lo, hi = ranges[t]
                for s_val in range(lo, hi + 1):
                    rest = remaining - s_val
                    if rest < lo_suffix[t + 1] or rest > hi_suffix[t + 1]:
                        continue
                    a = model.index[XiIndex(i, j, s_val)]
                    rec(t + 1, rest, key + (1 << (_WIDTH * a)))

            if lo_suffix[0] <= target <= hi_suffix[0]:
                rec(0, target, 0)
    return SparsePoly(model.var_names, acc)


@dataclass
class ProportionalityResult:
    passed: bool
    ratios: list[Fraction | None]
    first_failure: int | None


def conjecture_explicit_check(sr: SliceRestriction, model: CentralizerModel) -> ProportionalityResult:
    """Is each initial term proportional (nonzero ratio) to the signed sum?"""
    ratios: list[Fraction | None] = []
    for ell, F in enumerate(sr.initial, start=1):
        m = sr.degrees[ell - 1]
        S = signed_permutation_sum(model, ell, m)
        if S.is_zero() or F.is_zero():
            return ProportionalityResult(False, ratios + [None], ell)
        key0 = next(iter(S.terms))
        if key0 not in F.terms:
            return ProportionalityResult(False, ratios + [None], ell)
        ratio = F.terms[key0] / S.terms[key0]
        if S.scalar_mul(ratio) != F:
            return ProportionalityResult(False, ratios + [None], ell)
        ratios.append(ratio)
    return ProportionalityResult(True, ratios, None)


# -- expansion along the opposite nilpotent ---------------------------------


@dataclass
class TopCoefficientResult:
    passed: bool
    scalars: dict[int, Fraction]
    detail: str


def top_coefficient_crosscheck(model: CentralizerModel, sr: SliceRestriction,
                               ells: list[int] | None = None,
                               budget: int = 4) -> TopCoefficientResult:
    """Compare initial terms with top coefficients along the f direction.

    Expands the minor sums over all of gl_n in coordinates adapted to
    the splitting  K.f  +  g_e  +  (e-orthogonal part of [f, gl_n]);
    the leading coefficient in the f coordinate must involve only the
    centraliser coordinates and match the slice route up to a scalar.
    """
    p = model.partition
    n = p.n
    if n > budget:
        raise BudgetExceededError(n, budget, "full adjoint expansion")
    real = model.realization
    r = model.dim

    if real.e.is_zero():
        # zero nilpotent: the slice is the whole algebra and the initial
        # terms are the minor sums themselves; there is no f direction
        scalars = {}
        for ell in (ells or range(1, n + 1)):
            if sr.full[ell - 1] != sr.initial[ell - 1]:
                return TopCoefficientResult(False, scalars,
                                            f"minor sum {ell} is not homogeneous")
            scalars[ell] = Fraction(1)
        return TopCoefficientResult(True, scalars, "zero nilpotent: identity check")

    basis_mats = [real.f] + list(model.matrices)
    # complement: e-orthogonal part of the image of ad f
    image_rows = []
    for i in range(n):
        for j in range(n):
            E = RatMatrix([[Fraction(1) if (a, b) == (i, j) else Fraction(0)
                            for b in range(n)] for a in range(n)])
            image_rows.append([x for row in commutator(real.f, E).rows for x in row])
    image_basis = _independent_rows(image_rows)
    # the trace with e is a linear condition on the image of ad f
    cond = [sum(v[i * n + j] * real.e.rows[j][i] for i in range(n) for j in range(n))
            for v in image_basis]
    coeff_rows = from_vectors([cond])
    kernel = coeff_rows.kernel_basis()
    for vec in kernel:
        flat = [sum(c * image_basis[t][pos] for t, c in enumerate(vec) if c)
                for pos in range(n * n)]
        basis_mats.append(RatMatrix([flat[t * n:(t + 1) * n] for t in range(n)]))
    if len(basis_mats) != n * n:
        raise ArithmeticError("adapted basis of gl_n has wrong size")

    gram = RatMatrix([[_tr(a, b) for b in basis_mats] for a in basis_mats])
    ginv = gram.inverse()
    var_names = model.var_names + ("zf",) + tuple(
        f"w{t + 1}" for t in range(n * n - 1 - r))
    # order duals to match: zf sits after the centraliser coordinates
    order = [0] + list(range(1, r + 1)) + list(range(r + 1, n * n))
    name_of = {0: "zf"}
    for t in range(1, r + 1):
        name_of[t] = model.var_names[t - 1]
    for t in range(r + 1, n * n):
        name_of[t] = f"w{t - r}"

    entries: list[list[dict]] = [[dict() for _ in range(n)] for _ in range(n)]
    idx_of = {name: i for i, name in enumerate(var_names)}
    for t in order:
        dual = RatMatrix.zeros(n, n)
        for c in range(n * n):
            coeff = ginv.rows[c][t]
            if coeff:
                dual = dual + basis_mats[c].scale(coeff)
        key = 1 << (_WIDTH * idx_of[name_of[t]])
        for i in range(n):
            for j in range(n):
                v = dual.rows[i][j]
                if v:
                    entries[i][j][key] = v
    polys = principal_minor_sum_polys(entries, var_names)

    scalars: dict[int, Fraction] = {}
    for ell in (ells or range(1, n + 1)):
        P = polys[ell - 1]
        K = P.max_exponent("zf")
        p0 = P.coefficient_of("zf", K)
        if K != ell - sr.degrees[ell - 1]:
            return TopCoefficientResult(False, scalars,
                                        f"f-degree {K} at minor sum {ell}")
        for exps, _ in p0.monomials():
            if any(name.startswith("w") or name == "zf" for name in exps):
                return TopCoefficientResult(False, scalars,
                                            f"top coefficient of {ell} leaves the centraliser")
        reduced = SparsePoly(model.var_names, dict(p0.terms))
        F = sr.initial[ell - 1]
        key0 = next(iter(F.terms))
        if key0 not in reduced.terms:
            return TopCoefficientResult(False, scalars, f"support mismatch at {ell}")
        ratio = reduced.terms[key0] / F.terms[key0]
        if F.scalar_mul(ratio) != reduced:
            return TopCoefficientResult(False, scalars, f"not proportional at {ell}")
        scalars[ell] = ratio
    return TopCoefficientResult(True, scalars, "")


def _tr(a: RatMatrix, b: RatMatrix) -> Fraction:
    return sum(a.rows[i][j] * b.rows[j][i]
               for i in range(a.nrows) for j in range(a.ncols) if a.rows[i][j])


# -- algebraic independence --------------------------------------------------


def evaluate_jacobian(polys, variables: tuple[str, ...],
                      point: dict) -> list[list[Fraction]]:
    """Rows of partial derivatives at a point, one pass per polynomial.

    Each monomial is evaluated once and feeds every partial it touches;
    variables with value zero are handled exactly (a monomial with two
    zero factors contributes to no partial, one zero factor of exponent
    one contributes only to that partial).
    """
    vals = [Fraction(point[name]) for name in variables]
    rows = []
    for P in polys:
        if P.variables != variables:
            raise ValueError("polynomial is not over the expected coordinates")
        row = [Fraction(0)] * len(variables)
        for factors, coeff in P.factored_terms():
            zeros = [(i, e) for (i, e) in factors if not vals[i]]
            if len(zeros) >= 2:
                continue
            if len(zeros) == 1:
                i0, e0 = zeros[0]
                if e0 == 1:
                    prod = coeff
                    for i, e in factors:
                        if i != i0:
                            prod *= vals[i] ** e
                    row[i0] += prod
                continue
            prod = coeff
            for i, e in factors:
                prod *= vals[i] ** e
            for i, e in factors:
                row[i] += prod * e / vals[i]
        rows.append(row)
    return rows


def jacobian_rank_at(sr: SliceRestriction, model, point: dict) -> int:
    rows = evaluate_jacobian(sr.initial, model.var_names, point)
    return from_vectors(rows).rank()


def initial_algebra_rank(sr: SliceRestriction, model, seed: int = 0,
                         samples: int = 3) -> int:
    """Generic rank of the Jacobian of the initial terms (expected: rank)."""
    rng = random.Random(seed)
    best = 0
    for _ in range(samples):
        point = {v: Fraction(rng.randint(-10, 10)) for v in model.var_names}
        best = max(best, jacobian_rank_at(sr, model, point))
    return best
