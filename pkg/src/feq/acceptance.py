"""Runners for the seven acceptance checks.

Each runner returns a :class:`CriterionResult`.  They are shared by
``tests/test_acceptance.py`` and ``scripts/run_acceptance.py``.
"""

from __future__ import annotations

import gc
import random
import time
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass, field

import numpy as np

from .algebra import ZOO, make_carrier
from .classify import Independent, build_probe, classify, coefficients_in_span
from .equations import SolutionTuple, build_context, verify
from .errors import ConstraintViolated, FeqError
from .families import CATALOG, construct
from .fixtures import fixture_suite, run_fixture
from .funcspace import (
    Additive,
    CommutatorAdditive,
    Multiplicative,
    check_transformation_property,
    enumerate_characters,
    is_central,
    phi_solve,
    product,
)
from .oracle import SweepConfig, sweep
from .sampling import COEFF_SAMPLER, branch_admissible, random_context, sample_params, standard_fixed
from .scalar import ONE, ZERO, ScalarMatrix, exact


@dataclass
class AcceptanceConfig:
    draws: int = 200
    roundtrip_draws: int = 200
    structured: int = 100
    unstructured: int = 50
    sweep_seed: int = 42
    phi_draws: int = 50
    phi_radius: int = 5
    transformation_samples: int = 100
    float_fraction: float = 0.10
    float_tolerance: float = 1e-9
    time_budget: float = 60.0
    seed: int = 1


# Contexts where each equation's constraints can be met.  S3 has only two
# characters, so equations needing three distinct ones skip it.
SOUNDNESS_CONTEXTS = {
    "E1": ("C6", "C2xC2", "C12"),
    "E2": ("C6", "C2xC2", "C12"),
    "E3": ("C6", "C2xC2", "S3", "C12"),
    "E4": ("C6", "C2xC2", "S3", "C12"),
    "E5": ("N^1", "N^2"),
    "E6": ("N^1", "N^2"),
    "E7": ("Z^1", "Z^2"),
    "E8": ("Z^1", "Z^2"),
    "E0": ("C6", "S3", "Z^1", "Z^2", "BS12"),
}

# One finite and one infinite carrier where admissible.  A finite carrier
# carries no nonzero additive map, so E6 and E8 use two infinite ones.
SWEEP_CONTEXTS = {
    "E2": ("C6", "Z^1"),
    "E4": ("C6", "Z^1"),
    "E6": ("N^1", "Z^1"),
    "E8": ("Z^1", "Z^2"),
}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    summary: str
    details: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self):
        verdict = "PASS" if self.passed else "FAIL"
        return f"criterion {self.number}: {verdict}  {self.title}  ({self.summary}; {self.seconds:.1f}s)"


@contextmanager
def _settled_heap():
    """Keep the cyclic collector from rescanning objects that predate the run."""
    gc.collect()
    gc.freeze()
    try:
        yield
    finally:
        gc.unfreeze()


def _admissible_context(eq, spec, branch, rng, tries=50):
    for _ in range(tries):
        ctx = random_context(eq, spec, rng)
        if branch_admissible(ctx, branch):
            return ctx
    return None


def _draw_tuples(spec_map, draws, rng, on_tuple):
    """Construct ``draws`` tuples per branch per context, passing each to ``on_tuple``."""
    skipped = Counter()
    for eq, branches in CATALOG.items():
        for branch in branches:
            for spec in spec_map[eq]:
                for _ in range(draws):
                    ctx = _admissible_context(eq, spec, branch, rng)
                    if ctx is None:
                        skipped[(branch.key, spec)] += 1
                        continue
                    params = sample_params(ctx, branch, rng)
                    on_tuple(branch, spec, ctx, params)
    return skipped


def branch_soundness(cfg: AcceptanceConfig, keep_fraction: float = 0.0):
    """Criterion 1.  Also returns a random subsample of tuples for float replay."""
    rng = random.Random(cfg.seed)
    keep_rng = random.Random(cfg.seed + 1)
    t0 = time.perf_counter()
    failures, kept, count = [], [], Counter()

    def check(branch, spec, ctx, params):
        tup = construct(ctx, branch, params, verify_result=False)
        rep = verify(ctx, tup)
        count[branch.key] += 1
        if not rep.passed:
            failures.append((branch.key, spec, rep.failure_count))
        if keep_fraction and keep_rng.random() < keep_fraction:
            kept.append((branch.key, spec, ctx, tup))

    with _settled_heap():
        skipped = _draw_tuples(SOUNDNESS_CONTEXTS, cfg.draws, rng, check)
    dt = time.perf_counter() - t0
    total = sum(count.values())
    ok = not failures and len(count) == 30 and dt < cfg.time_budget
    res = CriterionResult(1, "branch soundness", ok,
                          f"{total} tuples over {len(count)} branches, {len(failures)} failing, "
                          f"budget {cfg.time_budget:.0f}s",
                          {"failures": failures, "per_branch": dict(count), "skipped": dict(skipped)}, dt)
    return res, kept


def round_trip(cfg: AcceptanceConfig):
    """Criterion 2: classify(construct(.)) returns the branch and its non-gauge parameters."""
    rng = random.Random(cfg.seed + 2)
    t0 = time.perf_counter()
    mismatches, count = [], Counter()

    def check(branch, spec, ctx, params):
        tup = construct(ctx, branch, params, verify_result=False)
        count[branch.key] += 1
        try:
            got = classify(ctx, tup)
        except FeqError as exc:
            mismatches.append((branch.key, spec, type(exc).__name__))
            return
        same = got.branch == branch.index and all(
            got.params.get(k) == v for k, v in params.params.items() if k not in got.gauge)
        if not same:
            mismatches.append((branch.key, spec, got.key))

    # The per-branch draws are spread over the branch's contexts.
    for eq, branches in CATALOG.items():
        specs = SOUNDNESS_CONTEXTS[eq]
        for branch in branches:
            for i in range(cfg.roundtrip_draws):
                spec = specs[i % len(specs)]
                ctx = _admissible_context(eq, spec, branch, rng)
                if ctx is None:
                    continue
                check(branch, spec, ctx, sample_params(ctx, branch, rng))
    dt = time.perf_counter() - t0
    ok = not mismatches and len(count) == 30 and all(v == cfg.roundtrip_draws for v in count.values())
    return CriterionResult(2, "round-trip recovery", ok,
                           f"{sum(count.values())} tuples, {len(mismatches)} mismatches",
                           {"mismatches": mismatches[:20], "per_branch": dict(count)}, dt)


def oracle_sweeps(cfg: AcceptanceConfig):
    """Criterion 3."""
    t0 = time.perf_counter()
    rows = []
    ok = True
    for eq, specs in SWEEP_CONTEXTS.items():
        for spec in specs:
            c = make_carrier(spec)
            ctx = build_context(eq, c, standard_fixed(eq, c))
            rep = sweep(ctx, SweepConfig(structured=cfg.structured, unstructured=cfg.unstructured), cfg.sweep_seed)
            ok &= rep.clean and rep.samples == cfg.structured + cfg.unstructured
            rows.append({"equation": eq, "carrier": spec, "samples": rep.samples, "infeasible": rep.infeasible,
                         "certificates_ok": rep.certificates_ok, "tuples": rep.tuples,
                         "unclassifiable": rep.unclassifiable, "not_solutions": rep.not_solutions,
                         "classified": dict(sorted(rep.classified.items()))})
    dt = time.perf_counter() - t0
    bad = sum(r["unclassifiable"] + r["not_solutions"] for r in rows)
    certs = sum(r["infeasible"] - r["certificates_ok"] for r in rows)
    return CriterionResult(3, "oracle completeness sweeps", ok,
                           f"{len(rows)} contexts, {bad} unclassifiable, {certs} bad certificates",
                           {"sweeps": rows}, dt)


def preliminaries(cfg: AcceptanceConfig):
    """Criterion 4: character counts, additive maps, C12 ranks, chi*A independence."""
    t0 = time.perf_counter()
    problems = []
    for n in (1, 2, 3, 4, 5, 6, 12):
        got = len(enumerate_characters(make_carrier(f"C{n}")))
        if got != n:
            problems.append(f"C{n} has {got} characters")
    for spec, want in (("S3", 2), ("A5", 1), ("C2xC2", 4), ("D4", 4)):
        got = len(enumerate_characters(make_carrier(spec)))
        if got != want:
            problems.append(f"{spec} has {got} characters, expected {want}")
    for spec in (s for s in ZOO if make_carrier(s).is_finite):
        dim = additive_dimension(make_carrier(spec))
        if dim:
            problems.append(f"{spec} carries a {dim}-dimensional space of additive functions")
    c12 = make_carrier("C12")
    columns = [[ch(x) for x in c12.elements()] for ch in enumerate_characters(c12)]
    subsets, deficient = independent_subsets(columns)
    problems.extend(f"C12 subset {mask:#x} is rank deficient" for mask in deficient)
    z1 = make_carrier("Z^1")
    rng = random.Random(cfg.seed + 4)
    for _ in range(20):
        chi = Multiplicative(z1, [COEFF_SAMPLER.draw(rng, nonzero=True)])
        add = Additive(z1, [COEFF_SAMPLER.draw(rng, nonzero=True)])
        ctx = build_context("E8", z1, {"mu": Multiplicative(z1, [exact(1) / 7]), "chi": chi, "A": add})
        pool = {tuple(m.images): m for m in [chi] + [Multiplicative(z1, [COEFF_SAMPLER.draw(rng, nonzero=True)])
                                                      for _ in range(rng.randint(1, 4))]}
        basis = tuple(pool.values())
        probe = build_probe(ctx, basis)
        if coefficients_in_span(product(chi, add), basis, probe, ctx.domain()) is not Independent:
            problems.append("chi*A fell in a character span on Z^1")
    dt = time.perf_counter() - t0
    return CriterionResult(4, "preliminaries", not problems,
                           f"{subsets} C12 subsets, {len(problems)} problems", {"problems": problems}, dt)


def independent_subsets(columns):
    """Test every nonempty subset of ``columns`` for full column rank.

    Subsets are walked depth first in index order, so each one extends its
    parent by one column and is reduced against the parent's exact echelon
    basis.  Returns (subsets tested, masks of the deficient ones).
    """
    tested, deficient = 0, []

    def reduce(vec, basis):
        vec = list(vec)
        for piv, row in basis:
            if not vec[piv].is_zero():
                f = vec[piv] / row[piv]
                vec = [a - f * b for a, b in zip(vec, row)]
        return vec

    def walk(start, mask, basis):
        nonlocal tested
        for j in range(start, len(columns)):
            tested += 1
            vec = reduce(columns[j], basis)
            piv = next((i for i, v in enumerate(vec) if not v.is_zero()), None)
            if piv is None:
                deficient.append(mask | 1 << j)
                continue  # supersets are deficient too; they are not reported again
            walk(j + 1, mask | 1 << j, basis + [(piv, vec)])

    walk(0, 0, [])
    return tested, deficient


def additive_dimension(c):
    """Dimension of {A : A(xy) = A(x) + A(y)} on a finite carrier, from its Cayley table.

    Pairs (x, g) with g a generator suffice: induction on the word length of
    y gives the law for all y, and x = e forces A(e) = 0.
    """
    elems = list(c.elements())
    index = {x: i for i, x in enumerate(elems)}
    rows = []
    for x in elems:
        for y in c.generators:
            row = [ZERO] * len(elems)
            row[index[c.mul(x, y)]] = row[index[c.mul(x, y)]] + ONE
            row[index[x]] = row[index[x]] - ONE
            row[index[y]] = row[index[y]] - ONE
            rows.append(row)
    return len(elems) - ScalarMatrix(rows).rank()


def nonabelian_phi(cfg: AcceptanceConfig):
    """Criterion 5: the commutator-form phi on BS12."""
    t0 = time.perf_counter()
    bs = make_carrier("BS12")
    one, two = Multiplicative(bs, [1, 1]), Multiplicative(bs, [2, 1])
    ctx = build_context("E0", bs, {"chi1": one, "chi2": two}, radius=cfg.phi_radius)
    rng = random.Random(cfg.seed + 5)
    ball = bs.word_ball(cfg.phi_radius)
    small = bs.word_ball(2)
    problems = []
    noncentral = 0
    for _ in range(cfg.phi_draws):
        alpha = COEFF_SAMPLER.draw(rng)
        lam = COEFF_SAMPLER.draw(rng)
        phi = phi_solve(bs, one, two, {"alpha": alpha, "base": bs.a, "lam": lam}, check=False)
        for x in ball[:: max(1, len(ball) // 25)]:
            p, q = x
            if phi(x) != alpha * (exact(1) - two(x)) + lam * exact(q):
                problems.append("closed form mismatch")
                break
        if not verify(ctx, SolutionTuple({"f": phi})).passed:
            problems.append(f"E0 fails for alpha={alpha}, lam={lam}")
        cen = is_central(phi, small)
        if lam.is_zero():
            if not cen:
                problems.append("lam=0 phi reported non-central")
        else:
            x, y = cen.witness or (None, None)
            if cen or phi(bs.mul(x, y)) == phi(bs.mul(y, x)):
                problems.append(f"no centrality witness for lam={lam}")
            else:
                noncentral += 1
    samples = [(rng.choice(ball), bs.commutator(rng.choice(small), rng.choice(small)))
               for _ in range(cfg.transformation_samples)]
    bad = check_transformation_property(CommutatorAdditive(bs, 1), one, two, samples)
    if bad is not None:
        problems.append(f"transformation property fails at {bad}")
    dt = time.perf_counter() - t0
    return CriterionResult(5, "nonabelian phi on BS12", not problems,
                           f"{cfg.phi_draws} draws on a {len(ball)}-element ball, {noncentral} witnessed "
                           f"non-central, {cfg.transformation_samples} transformation samples",
                           {"problems": problems}, dt)


def fixtures(cfg: AcceptanceConfig):
    """Criterion 6."""
    t0 = time.perf_counter()
    results = [run_fixture(fx) for fx in fixture_suite()]
    failed = [(r.name, r.problems) for r in results if not r.passed]
    z1 = make_carrier("Z^1")
    try:
        from .fixtures import cosine_sine_triple

        cosine_sine_triple(Multiplicative(z1, [2]), Multiplicative(z1, [3]), Additive(z1, [1]), 1, 1)
        failed.append(("cosine-sine constraint", ["1+c1*c2^2 != 0 accepted"]))
    except ConstraintViolated:
        pass
    dt = time.perf_counter() - t0
    return CriterionResult(6, "motivating and reduction fixtures", not failed,
                           f"{len(results)} fixtures, {len(failed)} failing", {"failed": failed}, dt)


def float_replay(cfg: AcceptanceConfig, kept):
    """Criterion 7: replay kept soundness tuples on the float backend.

    The bound is on the absolute residual.  ``floor`` records the largest
    half-ULP of any product term, the rounding error no double-precision
    replay can avoid.
    """
    t0 = time.perf_counter()
    worst = worst_rel = 0.0
    bad = []
    for key, spec, ctx, tup in kept:
        fctx, ftup = ctx.to_float(cfg.float_tolerance), tup.to_float(cfg.float_tolerance)
        rep = verify(fctx, ftup, eps=cfg.float_tolerance)
        worst = max(worst, rep.max_abs_residual)
        worst_rel = max(worst_rel, rep.max_residual)
        if rep.max_abs_residual >= cfg.float_tolerance:
            bad.append({"branch": key, "carrier": spec, "abs": rep.max_abs_residual, "rel": rep.max_residual,
                        "floor": _rounding_floor(fctx, ftup)})
    dt = time.perf_counter() - t0
    return CriterionResult(7, "float backend coherence", bool(kept) and not bad,
                           f"{len(kept)} replayed, {len(bad)} over 1e-9 absolute, max |residual| {worst:.2e}, "
                           f"max relative {worst_rel:.1e}", {"bad": bad[:20]}, dt)


def _rounding_floor(ctx, tup):
    dom = ctx.domain()
    big = 0.0
    for xs, ys in ctx.terms:
        X, Y = ctx.lookup(xs, tup), ctx.lookup(ys, tup)
        big = max(big, max(abs(complex(X(x))) for x in dom) * max(abs(complex(Y(y))) for y in dom))
    return float(np.spacing(big) / 2)


def run_all(cfg: AcceptanceConfig | None = None, only=None):
    cfg = cfg or AcceptanceConfig()
    only = set(only or range(1, 8))
    out = []
    kept = []
    if 1 in only or 7 in only:
        res, kept = branch_soundness(cfg, cfg.float_fraction if 7 in only else 0.0)
        if 1 in only:
            out.append(res)
    runners = {2: round_trip, 3: oracle_sweeps, 4: preliminaries, 5: nonabelian_phi, 6: fixtures}
    for k in sorted(only):
        if k in runners:
            out.append(runners[k](cfg))
        elif k == 7:
            out.append(float_replay(cfg, kept))
    return sorted(out, key=lambda r: r.number)
