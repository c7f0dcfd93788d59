"""Random contexts and random branch parameters.

Draws use exact rationals with numerators in [-9, 9] and denominators in
{1, 2, 3}.  ``sample_params`` can restrict to the generic stratum of a
branch, where the classifier is expected to recover the same branch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import BS12Carrier, Carrier, make_carrier
from .equations import build_context
from .errors import ConstraintViolated
from .families import BranchParams, get_branch, point_mass
from .funcspace import (
    Additive,
    Multiplicative,
    Table,
    enumerate_characters,
    phi_solve,
)
from gmpy2 import mpq

from .scalar import ONE, ZERO, exact


@dataclass(frozen=True)
class RationalSampler:
    num_range: int = 9
    denominators: tuple = (1, 2, 3)

    def draw(self, rng, nonzero=False):
        while True:
            v = exact(mpq(rng.randint(-self.num_range, self.num_range), rng.choice(self.denominators)))
            if not (nonzero and v.is_zero()):
                return v


# smaller range for character images keeps powers on word balls modest
IMAGE_SAMPLER = RationalSampler(num_range=3, denominators=(1, 2))
COEFF_SAMPLER = RationalSampler()

MAX_TRIES = 500


def _carrier(c):
    return make_carrier(c)


def random_character(c, rng, avoid=(), character=True, allow_zero=False):
    """Random multiplicative function on ``c`` distinct from every function in ``avoid``."""
    c = _carrier(c)
    avoid = [a.images for a in avoid]
    if c.is_finite:
        chars = [ch for ch in enumerate_characters(c) if ch.images not in avoid]
        if not chars:
            raise ValueError(f"{c.spec} has no character outside the excluded set")
        return rng.choice(chars)
    for _ in range(MAX_TRIES):
        if isinstance(c, BS12Carrier):
            images = [IMAGE_SAMPLER.draw(rng, nonzero=True), ONE]
        else:
            images = [IMAGE_SAMPLER.draw(rng, nonzero=not allow_zero or rng.random() < 0.8)
                      for _ in c.generators]
        if tuple(images) in avoid:
            continue
        return Multiplicative(c, images, character=character and all(not v.is_zero() for v in images))
    raise RuntimeError("could not draw a distinct multiplicative function")


def random_additive(c, rng, nonzero=True):
    c = _carrier(c)
    if c.is_finite:
        return Additive(c, [ZERO] * len(c.generators))
    for _ in range(MAX_TRIES):
        if isinstance(c, BS12Carrier):
            images = [COEFF_SAMPLER.draw(rng), ZERO]
        else:
            images = [COEFF_SAMPLER.draw(rng) for _ in c.generators]
        if not nonzero or any(not v.is_zero() for v in images):
            return Additive(c, images)
    raise RuntimeError("could not draw a nonzero additive function")


def random_table(ctx, rng, nonzero=False):
    while True:
        vals = {x: COEFF_SAMPLER.draw(rng) for x in ctx.domain()}
        if not nonzero or any(not v.is_zero() for v in vals.values()):
            return Table(ctx.carrier, vals)


def max_n(c):
    """Largest N with one spare character (so a chi outside {chi_j} exists)."""
    c = _carrier(c)
    if c.is_finite:
        return max(1, len(enumerate_characters(c)) - 1)
    return 3


def random_context(eq, carrier, rng, n=None, radius=None):
    """Random admissible fixed data for ``eq`` on ``carrier``."""
    for _ in range(MAX_TRIES):
        try:
            return _random_context(eq, carrier, rng, n, radius)
        except ConstraintViolated:
            continue
    raise RuntimeError(f"no admissible fixed data for {eq} on {carrier}")


def _random_context(eq, carrier, rng, n, radius):
    c = _carrier(carrier)
    eq = eq.upper()
    if eq in ("E1", "E2"):
        mu1 = random_character(c, rng)
        mu2 = random_character(c, rng, [mu1])
        chi = random_character(c, rng, [mu1, mu2])
        fixed = dict(mu1=mu1, mu2=mu2, chi=chi)
    elif eq in ("E3", "E4"):
        if n is None:
            n = rng.randint(1, min(3, max_n(c)))
        chis = []
        for _ in range(n):
            chis.append(random_character(c, rng, chis))
        fixed = dict(chis=chis)
    elif eq in ("E5", "E6"):
        mu = random_character(c, rng, character=c.is_group, allow_zero=not c.is_group)
        chi = random_character(c, rng, [mu], character=c.is_group, allow_zero=not c.is_group)
        while all(v.is_zero() for v in chi.images) and not c.is_group:
            chi = random_character(c, rng, [mu], character=False, allow_zero=True)
        fixed = dict(mu=mu, chi=chi, A=random_additive(c, rng))
    elif eq in ("E7", "E8"):
        mu = random_character(c, rng)
        chi = random_character(c, rng, [mu])
        fixed = dict(mu=mu, chi=chi, A=random_additive(c, rng))
    elif eq == "E0":
        chi1 = random_character(c, rng)
        r = rng.random()
        if r < 0.3:
            chi2 = chi1
        elif isinstance(c, BS12Carrier) and r < 0.65:
            chi2 = Multiplicative(c, [chi1.images[0] * 2, ONE])
        else:
            chi2 = random_character(c, rng, [chi1])
        fixed = dict(chi1=chi1, chi2=chi2)
    else:
        raise ValueError(f"unknown equation {eq!r}")
    return build_context(eq, c, fixed, radius)


# ---------------------------------------------------------------------------
# parameters


def _draw_params(names, rng):
    return {n: COEFF_SAMPLER.draw(rng) for n in names}


def _central_phi(c, chi1, chi2, alpha):
    return phi_solve(c, chi1, chi2, {"alpha": alpha}, check=False)


def _equal_phi(c, chi, rng):
    return phi_solve(c, chi, chi, {"additive": random_additive(c, rng, nonzero=True)}, check=False)


def _draw_aux(ctx, branch, p, rng, generic, random_gauge):
    c, F, key = ctx.carrier, ctx.fixed, branch.key
    aux = {}
    ok = True
    if key in ("E2-B1", "E1-B4"):
        mu = random_character(c, rng, [F["mu1"], F["mu2"], F["chi"]] if generic else ())
        al = COEFF_SAMPLER.draw(rng)
        same = mu.images == F["chi"].images
        aux["mu"] = mu
        aux["phi"] = _equal_phi(c, mu, rng) if same else _central_phi(c, mu, F["chi"], al)
        lead = p["c"] if key == "E2-B1" else p["a1"]
        ok = (lead + al) != ZERO
    elif key in ("E4-B2", "E3-B3"):
        chi = random_character(c, rng, F["chis"] if generic else ())
        aux["chi"] = chi
        total = p["a"] if key == "E4-B2" else p["alpha"]
        for j, cj in enumerate(F["chis"], 1):
            if chi.images == cj.images:
                aux[f"phi{j}"] = _equal_phi(c, chi, rng)
            else:
                al = COEFF_SAMPLER.draw(rng)
                aux[f"phi{j}"] = _central_phi(c, chi, cj, al)
                total = total + al
        ok = total != ZERO
    elif key in ("E8-B2", "E7-B4"):
        mu = F["mu"]
        if c.is_finite or rng.random() < 0.7:
            mu1 = random_character(c, rng, [mu, F["chi"]] if generic else ())
        else:
            mu1 = mu
        aux["mu1"] = mu1
        if mu1.images == mu.images:
            aux["phi"] = _equal_phi(c, mu, rng)
        else:
            al = COEFF_SAMPLER.draw(rng, nonzero=key == "E7-B4")
            aux["phi"] = _central_phi(c, mu1, mu, al)
            ok = key == "E7-B4" or (p["a"] + al) != ZERO
        if generic and mu1.images == F["chi"].images:
            ok = False
    elif key in ("E6-B1", "E5-B4"):
        avoid = [F["mu"], F["chi"]] if (generic or key == "E6-B1") else ()
        aux["m"] = random_character(c, rng, avoid, character=c.is_group, allow_zero=not c.is_group)
    elif key == "E0-B1":
        aux["A"] = random_additive(c, rng, nonzero=False)
    elif key == "E0-B2":
        aux["y0"] = None
    for name in branch.gauge:
        nonzero = name in branch.nonzero_slots
        if key == "E1-B5":
            t = random_table(ctx, rng) if random_gauge else point_mass(c, c.identity)
            vals = {x: t(x) for x in ctx.domain()}
            vals[c.identity] = p["b"]
            aux[name] = Table(c, vals)
        elif key == "E1-B2":
            if random_gauge:
                while True:
                    t = random_table(ctx, rng, nonzero=True)
                    vals = {x: t(x) for x in ctx.domain()}
                    vals[c.identity] = ZERO
                    if any(not v.is_zero() for v in vals.values()):
                        break
                aux[name] = Table(c, vals)
            else:
                dom = ctx.domain()
                aux[name] = point_mass(c, dom[1])
        elif random_gauge:
            aux[name] = random_table(ctx, rng, nonzero=nonzero)
    return aux, ok


def _generic_params_ok(ctx, branch, p):
    key = branch.key
    if key == "E1-B3":
        return not (p["a1"].is_zero() and p["a2"].is_zero())
    return True


def sample_params(ctx, branch, rng, generic=True, random_gauge=True) -> BranchParams:
    """Random admissible parameters; ``generic`` keeps the draw in the branch's generic stratum."""
    if isinstance(branch, int):
        branch = get_branch(ctx.equation, branch)
    names = branch.param_names(ctx.n)
    for _ in range(MAX_TRIES):
        p = _draw_params(names, rng)
        if branch.key == "E0-B2" and "lam" in p:
            c, F = ctx.carrier, ctx.fixed
            ratio_two = isinstance(c, BS12Carrier) and F["chi2"].images[0] == 2 * F["chi1"].images[0]
            if not ratio_two:
                p["lam"] = ZERO
        if branch.key == "E1-B5" and p["b"].is_zero():
            continue
        if branch.key == "E7-B3":
            p["b"] = p["beta"] * p["c"]
        aux, ok = _draw_aux(ctx, branch, p, rng, generic, random_gauge)
        if not ok and generic:
            continue
        if not all(pred(ctx, p, {**_placeholder_aux(ctx, branch, p), **aux}) for _, pred in branch.constraints):
            continue
        if generic and not _generic_params_ok(ctx, branch, p):
            continue
        return BranchParams(p, aux)
    raise RuntimeError(f"no admissible draw for {branch.key}")


def _placeholder_aux(ctx, branch, p):
    from .families import default_aux

    return default_aux(ctx, branch, p)


def branch_admissible(ctx, branch):
    """Whether the context can host a generic draw of ``branch`` at all."""
    c, F, key = ctx.carrier, ctx.fixed, branch.key
    if key in ("E2-B1", "E1-B4") and c.is_finite:
        return len(enumerate_characters(c)) > 3
    if key in ("E4-B2", "E3-B3") and c.is_finite:
        return len(enumerate_characters(c)) > ctx.n
    if key == "E0-B1":
        return F["chi1"].images == F["chi2"].images
    if key == "E0-B2":
        return F["chi1"].images != F["chi2"].images
    return True


def random_rng(seed):
    return random.Random(seed)


def _mult(c: Carrier, images):
    return Multiplicative(c, images, character=c.is_group)


def standard_fixed(eq: str, c: Carrier, n: int = 2) -> dict:
    """Deterministic fixed data for ``eq`` on ``c`` (characters in enumeration order)."""
    k = len(c.generators)
    if c.is_finite:
        chars = enumerate_characters(c)
        if eq in ("E1", "E2"):
            if len(chars) < 3:
                raise ConstraintViolated("three distinct characters", f"{c.spec} has {len(chars)}")
            return {"mu1": chars[0], "mu2": chars[1], "chi": chars[2]}
        if eq in ("E3", "E4"):
            if len(chars) < n:
                raise ConstraintViolated("N distinct characters", f"{c.spec} has {len(chars)}")
            return {"chis": list(chars[:n])}
        if eq == "E0":
            return {"chi1": chars[0], "chi2": chars[1] if len(chars) > 1 else chars[0]}
        # no nonzero additive function exists on a finite carrier
        return {"mu": chars[0], "chi": chars[-1], "A": Additive(c, [0] * k)}
    if c.spec == "BS12":
        mu, chi = _mult(c, [2, 1]), _mult(c, [3, 1])
        add = Additive(c, [1, 0])
    else:
        mu, chi = _mult(c, [2] * k), _mult(c, [3] * k)
        add = Additive(c, [1] + [0] * (k - 1))
    if eq in ("E1", "E2"):
        return {"mu1": mu, "mu2": chi, "chi": _mult(c, [5] * k if c.spec != "BS12" else [5, 1])}
    if eq in ("E3", "E4"):
        return {"chis": [_mult(c, [j + 2] * k if c.spec != "BS12" else [j + 2, 1]) for j in range(n)]}
    if eq == "E0":
        return {"chi1": _mult(c, [1] * k), "chi2": mu}
    return {"mu": mu, "chi": chi, "A": add}
