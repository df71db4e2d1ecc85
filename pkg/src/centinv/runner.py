"""Command orchestration: one partition, many certificates.

Commands map onto module operations; dependencies (model, slice) are
built lazily and shared.  A symbolic command above the budget yields a
resource ERROR certificate while the rest of the run continues.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from . import __version__
from .certificates import ERROR, FAIL, PASS, Certificate
from .centralizer import build_gl_model, build_sp_model
from .invariants import (
    BudgetExceededError,
    conjecture_explicit_check,
    initial_algebra_rank,
    monomial_support_check,
    principal_minor_sums,
    symplectic_minor_sums,
    top_coefficient_crosscheck,
    verify_centrality,
)
from .nullcone import (
    component_zero_locus_check,
    enumerate_components,
    regular_sequence_report,
    top_block_support_check,
    transversality_certificate,
)
from .partitions import (
    ClassicalType,
    Partition,
    check_valid_for,
    degrees_gl,
    degrees_sp,
    dim_centralizer_gl,
    dim_centralizer_so_sp,
    partitions_of,
    so_good_system_diagnostic,
)
from .regularity import (
    Functional,
    alpha_stabilizer_basis_check,
    alpha_vanishes_on_odd_part,
    build_alpha,
    build_beta,
    build_beta_prime_sum,
    choose_generators,
    default_alpha_coefficients,
    differential_criterion,
    index_report,
    plane_regularity_scan,
    random_functional,
    restrict_alpha_to_fixed,
    singular_locus_probe,
    stabilizer_dim,
)

GL_COMMANDS = (
    "degrees", "centrality", "support", "conjecture", "p0",
    "stabilizers", "index", "diffcrit", "plane", "lines", "nullcone",
)
SP_COMMANDS = (
    "degrees", "centrality", "stabilizers", "index", "diffcrit", "plane", "lines",
)
SO_COMMANDS = ("so-diagnostic",)

SYMBOLIC_COMMANDS = {"degrees-symbolic", "centrality", "support", "conjecture",
                     "diffcrit", "nullcone"}


@dataclass
class RunConfig:
    algebra: str = "gl"
    partitions: list[str] = field(default_factory=list)
    commands: list[str] = field(default_factory=list)
    all_commands: bool = False
    seed: int = 0
    budget_n: int = 8
    p0_budget: int = 4
    grid: int = 7
    lines: int = 10
    diffcrit_points: int = 50
    index_samples: int = 10
    max_n: int | None = None
    jobs: int = 1

    def echo(self) -> dict:
        return {
            "algebra": self.algebra,
            "partitions": list(self.partitions),
            "commands": list(self.commands),
            "all_commands": self.all_commands,
            "seed": self.seed,
            "budget_n": self.budget_n,
            "p0_budget": self.p0_budget,
            "grid": self.grid,
            "lines": self.lines,
            "diffcrit_points": self.diffcrit_points,
            "index_samples": self.index_samples,
            "max_n": self.max_n,
            "jobs": self.jobs,
        }


class UsageError(ValueError):
    pass


def commands_for(cfg: RunConfig, p: Partition) -> list[str]:
    base = {"gl": GL_COMMANDS, "sp": SP_COMMANDS, "so": SO_COMMANDS}[cfg.algebra]
    if cfg.all_commands:
        chosen = list(base)
        if cfg.algebra == "gl" and p.n > cfg.p0_budget and "p0" in chosen:
            chosen.remove("p0")
        if p.n > cfg.budget_n:
            chosen = [c for c in chosen if c not in SYMBOLIC_COMMANDS]
        return chosen
    unknown = [c for c in cfg.commands if c not in base]
    if unknown:
        raise UsageError(
            f"command(s) {unknown} not available for type {cfg.algebra}; "
            f"choose from {list(base)}")
    return [c for c in base if c in cfg.commands]


class PartitionContext:
    """Lazily built shared state for one partition."""

    def __init__(self, p: Partition, cfg: RunConfig):
        self.partition = p
        self.cfg = cfg
        self._gl = None
        self._sp = None
        self._slice = None
        self._alpha = None
        self._beta = None
        self._generators = None

    @property
    def algebra(self) -> str:
        return self.cfg.algebra

    @property
    def model(self):
        if self.cfg.algebra == "sp":
            if self._sp is None:
                self._sp = build_sp_model(self.partition)
            return self._sp.fixed
        if self._gl is None:
            self._gl = build_gl_model(self.partition)
        return self._gl

    @property
    def sp(self):
        if self._sp is None:
            self._sp = build_sp_model(self.partition)
        return self._sp

    @property
    def slice(self):
        if self._slice is None:
            if self.cfg.algebra == "sp":
                self._slice = symplectic_minor_sums(self.sp, budget=self.cfg.budget_n)
            else:
                self._slice = principal_minor_sums(self.model, budget=self.cfg.budget_n)
        return self._slice

    @property
    def alpha(self) -> Functional:
        if self._alpha is None:
            if self.cfg.algebra == "sp":
                self._alpha = restrict_alpha_to_fixed(self.sp)
            else:
                self._alpha = build_alpha(self.model, default_alpha_coefficients(self.model))
        return self._alpha

    @property
    def beta(self) -> Functional | None:
        if self.partition.k < 2:
            return None
        if self._beta is None:
            if self.cfg.algebra == "sp":
                self._beta = build_beta_prime_sum(self.sp).restricted
            else:
                self._beta = build_beta(self.model)
        return self._beta

    @property
    def generators(self) -> list[int]:
        if self._generators is None:
            self._generators = choose_generators(self.slice, self.model, self.alpha)
        return self._generators


def _cert(ctx: PartitionContext, claim: str, ok: bool, witnesses: dict) -> Certificate:
    return Certificate(
        claim=claim,
        status=PASS if ok else FAIL,
        partition=str(ctx.partition),
        algebra=ctx.algebra,
        witnesses=witnesses,
    )


def _resource_error(ctx: PartitionContext, claim: str, exc: BudgetExceededError) -> Certificate:
    return Certificate(
        claim=claim,
        status=ERROR,
        partition=str(ctx.partition),
        algebra=ctx.algebra,
        witnesses={"reason": str(exc), "n": exc.n, "budget": exc.budget},
        error_kind="resource",
    )


# -- individual commands -----------------------------------------------------


def cmd_degrees(ctx: PartitionContext) -> Certificate:
    p = ctx.partition
    if ctx.algebra == "sp":
        table = degrees_sp(p)
        dim = dim_centralizer_so_sp(p, ClassicalType.SP)
        rank = p.n // 2
    else:
        table = degrees_gl(p)
        dim = dim_centralizer_gl(p)
        rank = p.n
    witnesses = {
        "degrees": list(table.degrees),
        "degree_sum": table.total,
        "dim_centralizer": dim,
        "rank": rank,
        "sum_identity": 2 * table.total == dim + rank,
    }
    ok = witnesses["sum_identity"]
    if p.n <= ctx.cfg.budget_n:
        symbolic = list(ctx.slice.degrees)
        witnesses["symbolic_degrees"] = symbolic
        witnesses["symbolic_checked"] = True
        witnesses["kazhdan_homogeneous"] = all(ctx.slice.kazhdan_homogeneous)
        ok = ok and tuple(symbolic) == table.degrees and witnesses["kazhdan_homogeneous"]
    else:
        witnesses["symbolic_checked"] = False
    return _cert(ctx, "degree-table", ok, witnesses)


def cmd_centrality(ctx: PartitionContext) -> Certificate:
    res = verify_centrality(ctx.slice, ctx.model, seed=ctx.cfg.seed)
    witnesses = {
        "group_points_checked": res.group_points_checked,
        "jacobian_generic_rank": initial_algebra_rank(ctx.slice, ctx.model, seed=ctx.cfg.seed),
        "expected_rank": ctx.model.rank,
    }
    ok = res.passed and witnesses["jacobian_generic_rank"] == ctx.model.rank
    if res.failing:
        witnesses["failure"] = {
            "coordinate": res.failing[0], "invariant": res.failing[1],
            "bracket": res.failing[2],
        }
    if res.group_failures:
        witnesses["group_failures"] = res.group_failures
    return _cert(ctx, "poisson-centrality", ok, witnesses)


def cmd_support(ctx: PartitionContext) -> Certificate:
    report = monomial_support_check(ctx.slice, ctx.model)
    witnesses = {"violations": report.violations,
                 "monomials_per_invariant": [len(rows) for rows in report.per_ell]}
    return _cert(ctx, "monomial-support", report.passed, witnesses)


def cmd_conjecture(ctx: PartitionContext) -> Certificate:
    res = conjecture_explicit_check(ctx.slice, ctx.model)
    witnesses = {"ratios": [str(r) if r is not None else None for r in res.ratios]}
    if res.first_failure is not None:
        witnesses["first_failure"] = res.first_failure
    return _cert(ctx, "signed-sum-proportionality", res.passed, witnesses)


def cmd_p0(ctx: PartitionContext) -> Certificate:
    res = top_coefficient_crosscheck(ctx.model, ctx.slice, budget=ctx.cfg.p0_budget)
    witnesses = {"scalars": {str(k): str(v) for k, v in res.scalars.items()}}
    if res.detail:
        witnesses["detail"] = res.detail
    return _cert(ctx, "top-coefficient-crosscheck", res.passed, witnesses)


def cmd_stabilizers(ctx: PartitionContext) -> Certificate:
    p = ctx.partition
    model = ctx.model
    witnesses: dict = {}
    ok = True
    alpha = ctx.alpha
    stab_alpha = stabilizer_dim(alpha, model)
    witnesses["alpha_stabilizer_dim"] = stab_alpha
    witnesses["expected"] = model.rank
    ok = ok and stab_alpha == model.rank
    if ctx.algebra == "gl":
        span = alpha_stabilizer_basis_check(model, default_alpha_coefficients(model))
        witnesses["alpha_stabilizer_is_diagonal_span"] = span.passed
        ok = ok and span.passed
        if p.k >= 2:
            stab_beta = stabilizer_dim(ctx.beta, model)
            witnesses["beta_stabilizer_dim"] = stab_beta
            ok = ok and stab_beta == model.rank
        else:
            witnesses["beta_stabilizer_dim"] = None
    else:
        witnesses["alpha_vanishes_on_odd_part"] = alpha_vanishes_on_odd_part(ctx.sp)
        ok = ok and witnesses["alpha_vanishes_on_odd_part"]
        if p.k >= 2:
            bp = build_beta_prime_sum(ctx.sp)
            witnesses["beta_prime_terms"] = bp.gamma_terms
            witnesses["beta_prime_vanishes_on_odd_part"] = bp.vanishes_on_odd_part
            witnesses["beta_prime_torus_exponents_ok"] = bp.torus_exponents_ok
            witnesses["beta_prime_nonzero"] = bp.nonzero
            stab_beta = stabilizer_dim(bp.restricted, ctx.model)
            witnesses["beta_stabilizer_dim"] = stab_beta
            ok = (ok and bp.vanishes_on_odd_part and bp.torus_exponents_ok
                  and bp.nonzero and stab_beta == model.rank)
    return _cert(ctx, "regular-functionals", ok, witnesses)


def cmd_index(ctx: PartitionContext) -> Certificate:
    special = [ctx.alpha] + ([ctx.beta] if ctx.beta is not None else [])
    rep = index_report(ctx.model, samples=ctx.cfg.index_samples,
                       seed=ctx.cfg.seed, special=tuple(special))
    ok = (rep.index_estimate == ctx.model.rank
          and rep.certificate_point is not None
          and rep.certificate_point.provenance.startswith("ALPHA"))
    witnesses = {
        "index_estimate": rep.index_estimate,
        "expected": ctx.model.rank,
        "sampled_max_rank": rep.sampled_max_rank,
        "vinberg_bound": rep.vinberg_bound,
        "certificate_point": rep.certificate_point.provenance if rep.certificate_point else None,
        "certificate_coords": ([str(c) for c in rep.certificate_point.coords]
                               if rep.certificate_point else None),
        "stabilizer_dims": [[tag, dim] for tag, dim in rep.per_point],
    }
    return _cert(ctx, "index-equals-rank", ok, witnesses)


def cmd_diffcrit(ctx: PartitionContext) -> Certificate:
    model = ctx.model
    gens = ctx.generators
    rng = random.Random(ctx.cfg.seed)
    points = [ctx.alpha, Functional(tuple(Fraction(0) for _ in range(model.dim)), "ZERO")]
    points += [random_functional(model, rng) for _ in range(ctx.cfg.diffcrit_points)]
    failures = []
    for gamma in points:
        res = differential_criterion(ctx.slice, model, gamma, generators=gens)
        if not res.passed:
            failures.append({
                "point": gamma.provenance,
                "jacobian_rank": res.jacobian_rank,
                "stabilizer_dim": res.stabilizer_dim,
            })
        if gamma.provenance.startswith("ALPHA") and not (res.rank_full and res.stabilizer_minimal):
            failures.append({"point": "ALPHA", "expected": "both sides true"})
        if gamma.provenance == "ZERO" and ctx.partition.k >= 2:
            if res.rank_full or res.stabilizer_minimal:
                failures.append({"point": "ZERO", "expected": "both sides false"})
    witnesses = {"points_checked": len(points), "generators": gens,
                 "failures": failures}
    return _cert(ctx, "differential-criterion", not failures, witnesses)


def cmd_plane(ctx: PartitionContext) -> Certificate:
    model = ctx.model
    if ctx.partition.k < 2:
        rng = random.Random(ctx.cfg.seed)
        dims = [stabilizer_dim(random_functional(model, rng), model) for _ in range(5)]
        dims.append(stabilizer_dim(
            Functional(tuple(Fraction(0) for _ in range(model.dim)), "ZERO"), model))
        ok = all(d == model.rank for d in dims)
        return _cert(ctx, "plane-regularity", ok,
                     {"single_block": True, "stabilizer_dims": dims})
    scan = plane_regularity_scan(model, ctx.alpha, ctx.beta, grid=ctx.cfg.grid)
    witnesses = {
        "grid": scan.grid,
        "failures": scan.failures,
        "torus_eigenvector_check": scan.rho_eigenvector_check,
    }
    ok = scan.passed and scan.rho_eigenvector_check is not False
    return _cert(ctx, "plane-regularity", ok, witnesses)


def cmd_lines(ctx: PartitionContext) -> Certificate:
    rep = singular_locus_probe(ctx.model, lines=ctx.cfg.lines, seed=ctx.cfg.seed)
    witnesses = {
        "lines": ctx.cfg.lines,
        "singular_hits_per_line": [pr.singular_values for pr in rep.lines],
        "certified": [pr.certified for pr in rep.lines],
        "details": [pr.detail for pr in rep.lines if pr.detail],
    }
    return _cert(ctx, "singular-lines-clean", rep.all_clean, witnesses)


def cmd_nullcone(ctx: PartitionContext) -> Certificate:
    p = ctx.partition
    model = ctx.model
    sup = top_block_support_check(model, ctx.slice)
    fam = enumerate_components(p)
    zero_ok = component_zero_locus_check(model, ctx.slice)
    cert = transversality_certificate(
        p, seed=ctx.cfg.seed, verify_support=True, budget=ctx.cfg.budget_n)
    reg = regular_sequence_report(p, cert)
    ok = sup.passed and zero_ok and cert.passed and reg.passed
    witnesses = {
        "support_check": sup.passed,
        "support_detail": sup.detail,
        "component_count": fam.count,
        "components": [list(c.shifts) for c in fam.components],
        "components_kill_restrictions": zero_ok,
        "transversal_dim": cert.total_dim,
        "stages": [
            {
                "block": st.block,
                "space_dim": st.space_dim,
                "basis": st.basis_labels,
                "subspace_rows": st.w_rows,
                "attempts": st.attempts,
                "used_fallback": st.used_fallback,
                "component_dets": st.component_dets,
                "support_checked": st.support_checked,
            }
            for st in cert.stages
        ],
        "conclusion": cert.conclusion,
        "codimension": reg.codimension,
        "tangent_cone_dim": reg.tangent_cone_dim,
    }
    return _cert(ctx, "nullcone-regular-sequence", ok, witnesses)


def cmd_so_diagnostic(ctx: PartitionContext) -> Certificate:
    diag = so_good_system_diagnostic(ctx.partition)
    witnesses = {
        "dim_centralizer": diag.dim_centralizer,
        "rank": diag.rank,
        "even_degree_sum": diag.even_degree_sum,
        "pfaffian_adjusted_sum": diag.pfaffian_adjusted_sum,
        "bound": diag.bound,
        "verdict": diag.verdict,
        "lemma_flags": diag.lemma_flags,
    }
    return _cert(ctx, "so-minor-degree-diagnostic",
                 diag.verdict != "INCONSISTENT", witnesses)


_COMMAND_TABLE = {
    "degrees": cmd_degrees,
    "centrality": cmd_centrality,
    "support": cmd_support,
    "conjecture": cmd_conjecture,
    "p0": cmd_p0,
    "stabilizers": cmd_stabilizers,
    "index": cmd_index,
    "diffcrit": cmd_diffcrit,
    "plane": cmd_plane,
    "lines": cmd_lines,
    "nullcone": cmd_nullcone,
    "so-diagnostic": cmd_so_diagnostic,
}


def run_partition(p: Partition, cfg: RunConfig) -> tuple[list[Certificate], dict]:
    """All requested certificates for one partition, plus timings."""
    if cfg.algebra == "sp":
        check_valid_for(p, ClassicalType.SP)
    elif cfg.algebra == "so":
        check_valid_for(p, ClassicalType.SO)
    ctx = PartitionContext(p, cfg)
    certs: list[Certificate] = []
    timings: dict[str, float] = {}
    for name in commands_for(cfg, p):
        start = time.perf_counter()
        try:
            certs.append(_COMMAND_TABLE[name](ctx))
        except BudgetExceededError as exc:
            certs.append(_resource_error(ctx, name, exc))
        except (ArithmeticError, ValueError) as exc:
            # a violated construction invariant is itself a reportable outcome
            certs.append(Certificate(
                claim=name, status=ERROR, partition=str(p), algebra=ctx.algebra,
                witnesses={"reason": f"{type(exc).__name__}: {exc}"},
                error_kind="internal",
            ))
        timings[name] = time.perf_counter() - start
    return certs, timings


def _sweep_worker(args) -> tuple[str, list[dict], dict]:
    parts, cfg_echo = args
    cfg = RunConfig(**cfg_echo)
    p = Partition.parse(parts)
    certs, timings = run_partition(p, cfg)
    return parts, [c.to_json() for c in certs], timings


def build_report(cfg: RunConfig, partitions: list[Partition]) -> dict:
    """Run every partition and assemble the deterministic report."""
    cert_rows: list[dict] = []
    timing_rows: dict[str, dict] = {}
    if cfg.jobs > 1 and len(partitions) > 1:
        args = [(str(p), cfg.echo()) for p in partitions]
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            results = list(pool.map(_sweep_worker, args))
        for parts, certs, timings in results:
            cert_rows.extend(certs)
            timing_rows[parts] = timings
    else:
        for p in partitions:
            certs, timings = run_partition(p, cfg)
            cert_rows.extend(c.to_json() for c in certs)
            timing_rows[str(p)] = timings
    statuses = [c["status"] for c in cert_rows]
    report = {
        "schema_version": 1,
        "tool": {"name": "centinv", "version": __version__},
        "config": cfg.echo(),
        "certificates": cert_rows,
        "summary": {
            "pass": statuses.count(PASS),
            "fail": statuses.count(FAIL),
            "error": statuses.count(ERROR),
        },
        "timings": timing_rows,
    }
    return report


def exit_code(report: dict) -> int:
    if report["summary"]["error"]:
        return 3
    if report["summary"]["fail"]:
        return 1
    return 0


def sweep_partitions(cfg: RunConfig) -> list[Partition]:
    if cfg.max_n is None:
        raise UsageError("sweep needs --max-n")
    out: list[Partition] = []
    for n in range(1, cfg.max_n + 1):
        if cfg.algebra == "sp":
            out.extend(partitions_of(2 * n, ClassicalType.SP))
        elif cfg.algebra == "so":
            out.extend(partitions_of(n, ClassicalType.SO))
        else:
            out.extend(partitions_of(n))
    return out
