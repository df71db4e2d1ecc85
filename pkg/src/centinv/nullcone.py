"""Null-cone geometry for centralisers in gl_n.

On the antidiagonal subspaces V_m (spanned by xi[i,j,s] with i+j = m+1)
the top minor-sum restrictions collapse to signed products along the
antidiagonal; peeling blocks from the last one upward this produces the
component decomposition of the restricted zero locus and an explicit
n-dimensional subspace meeting the null-cone only at the origin, which
is exactly the codimension statement making the initial terms a regular
sequence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

from .centralizer import CentralizerModel, XiIndex, build_gl_model
from .invariants import SliceRestriction, principal_minor_sums
from .linalg import RatMatrix
from .partitions import Partition
from .poly import SparsePoly


@dataclass
class AntiDiagonalSpace:
    level: int
    basis: list[XiIndex]


def antidiagonal_spaces(p: Partition) -> list[AntiDiagonalSpace]:
    """Levels 1..2k-1; level m holds the indices with i + j = m + 1."""
    d = p.d
    spaces = []
    for m in range(1, 2 * p.k):
        basis = []
        for i in range(max(1, m + 1 - p.k), min(p.k, m) + 1):
            j = m + 1 - i
            lo = max(d[j - 1] - d[i - 1], 0)
            for s in range(lo, d[j - 1] + 1):
                basis.append(XiIndex(i, j, s))
        spaces.append(AntiDiagonalSpace(m, basis))
    return spaces


def restriction_kill_set(p: Partition) -> list[XiIndex]:
    """Indices outside the direct sum of the first k antidiagonal levels."""
    keep = {idx for sp in antidiagonal_spaces(p)[: p.k] for idx in sp.basis}
    from .centralizer import enumerate_xi
    return [idx for idx in enumerate_xi(p) if idx not in keep]


def restrict_to_V(sr: SliceRestriction, model: CentralizerModel) -> list[SparsePoly]:
    """Initial terms with every coordinate of level above k set to zero."""
    kill = {model.var_names[model.index[idx]]: 0 for idx in restriction_kill_set(model.partition)}
    return [F.substitute(kill) for F in sr.initial]


# -- the top-block support --------------------------------------------------


def _antidiag_monomial_key(model: CentralizerModel, shifts: tuple[int, ...]) -> int | None:
    """Packed key of prod_i xi[k+1-i, i, d_i - s_i], or None when a factor dies."""
    from .poly import _WIDTH
    p = model.partition
    d = p.d
    key = 0
    for i, s_i in enumerate(shifts, start=1):
        shift_val = d[i - 1] - s_i
        idx = XiIndex(p.k + 1 - i, i, shift_val)
        a = model.index.get(idx)
        if a is None:
            return None
        key += 1 << (_WIDTH * a)
    return key


@dataclass
class SupportCheckResult:
    passed: bool
    per_q: list[dict]
    detail: str


def top_block_support_check(model: CentralizerModel,
                            sr: SliceRestriction) -> SupportCheckResult:
    """Restrictions of the top d_k+1 initial terms live on level k exactly.

    For 0 <= q <= d_k the restriction of initial term n-q must be a sum
    over all shift patterns of total q of the antidiagonal monomials,
    every coefficient nonzero.
    """
    p = model.partition
    restricted = restrict_to_V(sr, model)
    dk = p.d[-1]
    per_q = []
    for q in range(dk + 1):
        poly = restricted[p.n - q - 1]
        expected: dict[int, tuple[int, ...]] = {}
        for bars in _compositions(q, p.k):
            key = _antidiag_monomial_key(model, bars)
            if key is None:
                return SupportCheckResult(False, per_q, f"missing factor at q={q}")
            expected[key] = bars
        got = set(poly.terms)
        if got != set(expected):
            return SupportCheckResult(
                False, per_q,
                f"support mismatch at q={q}: {len(got)} monomials, expected {len(expected)}")
        coeffs = {str(expected[k]): str(poly.terms[k]) for k in expected}
        if any(not poly.terms[k] for k in expected):
            return SupportCheckResult(False, per_q, f"zero coefficient at q={q}")
        per_q.append({"q": q, "coefficients": coeffs})
    return SupportCheckResult(True, per_q, "")


def _compositions(total: int, slots: int):
    """All nonnegative integer tuples of the given length summing to total."""
    if slots == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, slots - 1):
            yield (first,) + rest


# -- component decomposition -------------------------------------------------


@dataclass(frozen=True)
class Component:
    shifts: tuple[int, ...]

    def vanishing(self, p: Partition) -> list[XiIndex]:
        d = p.d
        out = []
        for i, s_i in enumerate(self.shifts, start=1):
            for t in range(s_i):
                out.append(XiIndex(p.k + 1 - i, i, d[i - 1] - t))
        return out


@dataclass
class ComponentFamily:
    level: int
    components: list[Component]

    @property
    def count(self) -> int:
        return len(self.components)


def enumerate_components(p: Partition) -> ComponentFamily:
    """Components of the restricted zero locus on the top antidiagonal.

    They are indexed by the shift patterns of total d_k + 1; a single
    block means the null-cone is just the origin and the family is empty.
    """
    if p.k < 2:
        return ComponentFamily(level=0, components=[])
    dk = p.d[-1]
    comps = [Component(bars) for bars in _compositions(dk + 1, p.k)]
    assert len(comps) == comb(dk + p.k, p.k - 1)
    return ComponentFamily(level=dk, components=comps)


def component_zero_locus_check(model: CentralizerModel, sr: SliceRestriction) -> bool:
    """Every component kills all of the restricted top initial terms."""
    p = model.partition
    if p.k < 2:
        return True
    restricted = restrict_to_V(sr, model)
    dk = p.d[-1]
    for comp in enumerate_components(p).components:
        kill = {model.var_names[model.index[idx]]: 0 for idx in comp.vanishing(p)}
        for q in range(dk + 1):
            if not restricted[p.n - q - 1].substitute(kill).is_zero():
                return False
    return True


# -- transversal subspace ----------------------------------------------------


@dataclass
class StageWitness:
    block: int
    space_dim: int
    basis_labels: list[str]
    w_rows: list[list[str]]
    component_dets: list[tuple[str, str]]
    attempts: int
    used_fallback: bool
    support_checked: bool | None


@dataclass
class TransversalityCertificate:
    partition: Partition
    passed: bool
    total_dim: int
    stages: list[StageWitness] = field(default_factory=list)
    conclusion: str = ""


def _stage_components(p: Partition, m: int) -> list[Component]:
    sub = p.prefix(m)
    if sub.k < 2:
        return []
    return [Component(bars) for bars in _compositions(sub.d[-1] + 1, m)]


def _stage_space(p: Partition, m: int) -> list[XiIndex]:
    d = p.d
    basis = []
    for i in range(1, m + 1):
        j = m + 1 - i
        lo = max(d[j - 1] - d[i - 1], 0)
        for s in range(lo, d[j - 1] + 1):
            basis.append(XiIndex(i, j, s))
    return basis


def transversality_certificate(p: Partition, seed: int = 0, attempts: int = 100,
                               verify_support: bool = False,
                               budget: int = 8) -> TransversalityCertificate:
    """Find W = sum of W_m with W_m inside level m meeting no component.

    Peels the last block: at stage m a (d_m + 1)-dimensional subspace of
    level m must meet every component of the stage-m decomposition only
    at zero, an exact determinant test per component.  Random rational
    subspaces are tried first; the deterministic fallback takes rows of
    a Vandermonde matrix on distinct nodes, whose maximal minors are all
    nonzero.
    """
    rng = random.Random(seed)
    stages: list[StageWitness] = []
    for m in range(p.k, 0, -1):
        sub = p.prefix(m)
        space = _stage_space(p, m)
        pos = {idx: t for t, idx in enumerate(space)}
        dm = p.d[m - 1]
        want = dm + 1
        comps = _stage_components(p, m)
        cols_per_comp = []
        for comp in comps:
            cols = [pos[idx] for idx in comp.vanishing(sub)]
            assert len(cols) == want
            cols_per_comp.append(cols)

        found = None
        used_fallback = False
        tries = 0
        if comps:
            for _ in range(attempts):
                tries += 1
                rows = [[Fraction(rng.randint(-5, 5)) for _ in space] for _ in range(want)]
                dets = _component_dets(rows, cols_per_comp)
                if dets is not None:
                    found = (rows, dets)
                    break
            if found is None:
                used_fallback = True
                rows = [[Fraction((c + 1) ** t) for c in range(len(space))]
                        for t in range(want)]
                dets = _component_dets(rows, cols_per_comp)
                if dets is None:
                    return TransversalityCertificate(
                        p, False, 0, stages,
                        f"no transversal subspace at block {m}")
                found = (rows, dets)
        else:
            # single block: the whole level is transversal
            rows = [[Fraction(1) if c == t else Fraction(0) for c in range(len(space))]
                    for t in range(want)]
            found = (rows, [])

        support_ok = None
        if verify_support and m >= 2:
            sub_model = build_gl_model(sub)
            sub_sr = principal_minor_sums(sub_model, budget=budget)
            support_ok = top_block_support_check(sub_model, sub_sr).passed
            if not support_ok:
                return TransversalityCertificate(
                    p, False, 0, stages, f"support check failed at block {m}")

        rows, dets = found
        stages.append(StageWitness(
            block=m,
            space_dim=len(space),
            basis_labels=[idx.label() for idx in space],
            w_rows=[[str(x) for x in row] for row in rows],
            component_dets=[(str(c.shifts), str(d)) for c, d in zip(comps, dets)],
            attempts=tries,
            used_fallback=used_fallback,
            support_checked=support_ok,
        ))

    total = sum(d + 1 for d in p.d)
    assert total == p.n
    cert = TransversalityCertificate(
        p, True, total, stages,
        conclusion=(
            f"an {p.n}-dimensional subspace meets the null-cone only at 0, so the "
            f"null-cone has codimension {p.n} and the {p.n} initial terms form a "
            "regular sequence"),
    )
    return cert


def _component_dets(rows: list[list[Fraction]],
                    cols_per_comp: list[list[int]]) -> list[Fraction] | None:
    dets = []
    for cols in cols_per_comp:
        sub = RatMatrix([[row[c] for c in cols] for row in rows])
        d = sub.det()
        if not d:
            return None
        dets.append(d)
    return dets


@dataclass
class RegularSequenceReport:
    partition: Partition
    passed: bool
    codimension: int
    generators: int
    ambient_matrix_dim: int
    tangent_cone_dim: int
    detail: str


def regular_sequence_report(p: Partition,
                            cert: TransversalityCertificate) -> RegularSequenceReport:
    """Codimension-n null-cone makes the n initial terms a regular sequence.

    Also records the induced tangent-cone dimension n^2 - n at the
    nilpotent inside the full matrix nilpotent variety.
    """
    if not cert.passed:
        return RegularSequenceReport(p, False, 0, p.n, p.n * p.n, 0,
                                     "missing transversality certificate")
    n = p.n
    r = sum((2 * i - 1) * part for i, part in enumerate(p.parts, start=1))
    return RegularSequenceReport(
        partition=p,
        passed=True,
        codimension=n,
        generators=n,
        ambient_matrix_dim=n * n,
        tangent_cone_dim=n * n - n,
        detail=f"every component has codimension {n} = number of generators; "
               f"tangent cone dimension (n^2 - r) + (r - n) = {n * n - n} with r = {r}",
    )
