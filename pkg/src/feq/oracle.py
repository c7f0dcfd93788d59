"""Exact y-side solver and completeness sweeps.

With f and every x-side slot fixed, each equation is linear in the y-side
slots.  For one y the unknowns (Y_s(y))_s satisfy

    sum_s M[x, s] Y_s(y) = f(xy)   for every x in the domain,

where ``M[x, s]`` sums the x-side functions paired with slot s.  ``M`` does
not depend on y, so one elimination handles every y at once.
"""

from __future__ import annotations

import json
import os
import random
from collections import Counter
from dataclasses import dataclass, field

from .classify import build_probe, classify
from .equations import EquationContext, SolutionTuple
from .errors import FeqError, Infeasible, NotASolution, ProbeInsufficient, Unclassifiable
from .funcspace import (
    GFunction,
    Multiplicative,
    Table,
    enumerate_characters,
    lincomb,
    phi_solve,
    product,
)
from .scalar import ONE, ZERO, ScalarMatrix, solve_columns


@dataclass
class YSolutionSpace:
    """particular + span over y-dependent coefficients of ``null_vectors``.

    A member assigns, for each y, ``particular(y) + sum_k lam_k(y) v_k``.
    """

    ctx: EquationContext
    slots: tuple
    x_side: dict
    particular: dict  # slot -> Table on the domain
    null_vectors: list  # each a tuple over ``slots``
    matrix: ScalarMatrix
    domain: tuple

    @property
    def dimension(self):
        return len(self.null_vectors) * len(self.domain)

    def homogeneous_basis(self):
        """Per-slot tables spanning the homogeneous space (one per vector and y)."""
        out = []
        for v in self.null_vectors:
            for y in self.domain:
                out.append({s: Table(self.ctx.carrier, {y: v[i]}) for i, s in enumerate(self.slots)})
        return out

    def member(self, lam=None):
        """Tuple for coefficient tables ``lam`` (one dict y -> scalar per null vector)."""
        lam = lam or []
        vals = {s: {} for s in self.slots}
        for y in self.domain:
            for i, s in enumerate(self.slots):
                v = self.particular[s](y)
                for k, vec in enumerate(self.null_vectors):
                    if k < len(lam) and not vec[i].is_zero():
                        v = v + lam[k].get(y, ZERO) * vec[i]
                vals[s][y] = v
        slots = dict(self.x_side)
        for s in self.slots:
            slots[s] = Table(self.ctx.carrier, vals[s], default=None)
        return SolutionTuple({s: slots[s] for s in self.ctx.slots})

    def random_member(self, rng, sampler):
        lam = [{y: sampler.draw(rng) for y in self.domain} for _ in self.null_vectors]
        return self.member(lam)

    def contains(self, y_side: dict):
        """Exact membership: ``M u(y) = f(x y)`` (less known terms) for every y."""
        rows = self.matrix.rows()
        for y in self.domain:
            u = [y_side[s](y) for s in self.slots]
            for x, row in zip(self.domain, rows):
                acc = ZERO
                for m, v in zip(row, u):
                    acc = acc + m * v
                if acc != _target(self.ctx, self.x_side, x, y):
                    return False
        return True


def _x_function(ctx, name, x_side):
    if name in x_side:
        return x_side[name]
    if name in ctx.fixed:
        return ctx.fixed[name]
    raise ProbeInsufficient(f"x-side function {name!r} not supplied")


def _system(ctx, x_side, domain):
    ys = ctx.y_side_slots()
    index = {s: i for i, s in enumerate(ys)}
    rows = [[ZERO] * len(ys) for _ in domain]
    for xs, yslot in ctx.terms:
        if yslot not in index:
            continue
        fn = _x_function(ctx, xs, x_side)
        j = index[yslot]
        for r, x in enumerate(domain):
            rows[r][j] = rows[r][j] + fn(x)
    return ys, ScalarMatrix(rows)


def _target(ctx, x_side, x, y):
    """f(xy) minus the terms whose y-side function is already known."""
    ys = ctx.y_side_slots()
    v = x_side["f"](ctx.carrier.mul(x, y))
    for xs, yslot in ctx.terms:
        if yslot not in ys:
            v = v - _x_function(ctx, xs, x_side)(x) * _x_function(ctx, yslot, x_side)(y)
    return v


def solve_y_side(ctx: EquationContext, x_side: dict) -> YSolutionSpace:
    """All y-side slots compatible with the given x side, or ``Infeasible``.

    The certificate of an ``Infeasible`` is a row vector ``w`` over the
    domain with ``w M = 0`` and ``w . f(x y0) != 0``; ``exc.witness_y`` is y0.
    """
    if "f" not in x_side:
        raise ProbeInsufficient("the x side must include f")
    for s in ctx.x_side_slots():
        if s not in x_side:
            raise ProbeInsufficient(f"x-side slot {s!r} not supplied")
    c = ctx.carrier
    dom = tuple(ctx.domain())
    ys, M = _system(ctx, x_side, dom)
    rhs = [[_target(ctx, x_side, x, y) for x in dom] for y in dom]
    try:
        sol = solve_columns(M, rhs)
    except Infeasible as exc:
        exc.witness_y = dom[exc.column]
        exc.domain = dom
        raise
    particular = {}
    for i, s in enumerate(ys):
        particular[s] = Table(c, {y: sol.particular[j][i] for j, y in enumerate(dom)}, default=None)
    nulls = [tuple(v) for v in sol.nullspace]
    return YSolutionSpace(ctx, ys, dict(x_side), particular, nulls, M, dom)


def certificate_holds(ctx: EquationContext, x_side: dict, exc: Infeasible) -> bool:
    """Re-check an infeasibility certificate from scratch."""
    dom = exc.domain
    _, M = _system(ctx, x_side, dom)
    w = exc.certificate
    for col in range(M.shape[1]):
        acc = ZERO
        for wi, row in zip(w, M.rows()):
            acc = acc + wi * row[col]
        if not acc.is_zero():
            return False
    acc = ZERO
    for wi, x in zip(w, dom):
        acc = acc + wi * _target(ctx, x_side, x, exc.witness_y)
    return not acc.is_zero()


# ---------------------------------------------------------------------------
# sweeps


@dataclass
class SweepConfig:
    structured: int = 100
    unstructured: int = 50
    homogeneous: int = 3
    max_atoms: int = 3
    dump_dir: str | None = None


@dataclass
class SweepReport:
    equation: str
    carrier: str
    seed: int
    samples: int = 0
    infeasible: int = 0
    certificates_ok: int = 0
    tuples: int = 0
    classified: Counter = field(default_factory=Counter)
    unclassifiable: int = 0
    not_solutions: int = 0
    dumps: list = field(default_factory=list)
    dump_dir: str | None = None

    @property
    def clean(self):
        return self.unclassifiable == 0 and self.not_solutions == 0 and self.certificates_ok == self.infeasible


def _atoms(ctx, rng):
    """Building blocks of structured x-side samples."""
    from .sampling import random_additive, random_character

    c = ctx.carrier
    basis = [v for k, v in ctx.fixed.items() if isinstance(v, GFunction) and k not in ("A", "g")]
    atoms = list(basis)
    if c.is_finite:
        atoms.extend(enumerate_characters(c))
        chars = enumerate_characters(c)
    else:
        chars = [random_character(c, rng, character=c.is_group, allow_zero=not c.is_group) for _ in range(2)]
        atoms.extend(chars)
        for ch in chars + [v for v in basis if isinstance(v, Multiplicative)]:
            atoms.append(product(ch, random_additive(c, rng)))
    if c.is_group:
        mults = [v for v in basis if isinstance(v, Multiplicative)] + list(chars)
        for _ in range(2):
            a, b = rng.choice(mults), rng.choice(mults)
            if a.images != b.images:
                atoms.append(phi_solve(c, a, b, {"alpha": ONE}, check=False))
    return atoms


def _structured(ctx, rng, sampler, max_atoms):
    atoms = _atoms(ctx, rng)
    k = rng.randint(0, max_atoms)
    terms = [(sampler.draw(rng, nonzero=True), rng.choice(atoms)) for _ in range(k)]
    return lincomb(terms, ctx.carrier)


def _unstructured(ctx, rng, sampler):
    c = ctx.carrier
    dom = ctx.domain()
    support = c.elements() if c.is_finite else {c.mul(x, y) for x in dom for y in dom}
    return Table(c, {x: sampler.draw(rng) for x in support})


def _dump(ctx, tup, report, reason, index):
    from .serialize import solution_to_json

    if report.dump_dir is None:
        return None
    os.makedirs(report.dump_dir, exist_ok=True)
    path = os.path.join(report.dump_dir, f"{ctx.equation}_{ctx.carrier.spec}_{report.seed}_{index}.json")
    doc = solution_to_json(ctx, tup)
    doc["reason"] = reason
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
    return path


def sweep(ctx: EquationContext, config: SweepConfig | None = None, seed: int = 0) -> SweepReport:
    """Sample x sides, solve for the y side, classify every assembled tuple."""
    from .sampling import COEFF_SAMPLER

    config = config or SweepConfig()
    rng = random.Random(seed)
    rep = SweepReport(ctx.equation, ctx.carrier.spec, seed, dump_dir=config.dump_dir)
    probe = build_probe(ctx)
    kinds = ["structured"] * config.structured + ["unstructured"] * config.unstructured
    for i, kind in enumerate(kinds):
        x_side = {}
        for s in ctx.x_side_slots():
            if kind == "structured":
                x_side[s] = _structured(ctx, rng, COEFF_SAMPLER, config.max_atoms)
            else:
                x_side[s] = _unstructured(ctx, rng, COEFF_SAMPLER)
        rep.samples += 1
        try:
            space = solve_y_side(ctx, x_side)
        except Infeasible as exc:
            rep.infeasible += 1
            rep.certificates_ok += certificate_holds(ctx, x_side, exc)
            continue
        members = [space.member()]
        if space.null_vectors:
            members += [space.random_member(rng, COEFF_SAMPLER) for _ in range(config.homogeneous)]
        for j, tup in enumerate(members):
            rep.tuples += 1
            try:
                res = classify(ctx, tup, probe)
            except NotASolution:
                rep.not_solutions += 1
                path = _dump(ctx, tup, rep, "assembled tuple fails verification", f"{i}_{j}")
                if path:
                    rep.dumps.append(path)
                continue
            except (Unclassifiable, FeqError) as exc:
                rep.unclassifiable += 1
                path = _dump(ctx, tup, rep, str(exc), f"{i}_{j}")
                if path:
                    rep.dumps.append(path)
                continue
            rep.classified[res.key] += 1
    return rep
