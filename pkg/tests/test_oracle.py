import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feq import oracle
from feq.algebra import make_carrier
from feq.equations import build_context, verify
from feq.errors import Infeasible, ProbeInsufficient, Unclassifiable
from feq.families import CATALOG, construct
from feq.funcspace import Table, enumerate_characters, lincomb, zero_function
from feq.oracle import SweepConfig, certificate_holds, solve_y_side, sweep
from feq.sampling import COEFF_SAMPLER, branch_admissible, random_context, sample_params

CONTEXTS = {"E1": "C6", "E2": "C6", "E3": "C12", "E4": "C6", "E5": "N^1", "E6": "N^1", "E7": "Z^1",
            "E8": "Z^1", "E0": "BS12"}
ALL = [b for eq in CATALOG for b in CATALOG[eq]]


def c6_e2():
    c = make_carrier("C6")
    ch = enumerate_characters(c)
    return build_context("E2", c, dict(mu1=ch[1], mu2=ch[5], chi=ch[2]))


def test_unique_solution_example():
    ctx = c6_e2()
    mu1, mu2 = ctx.fixed["mu1"], ctx.fixed["mu2"]
    space = solve_y_side(ctx, {"f": lincomb([(2, mu1), (1, mu2)])})
    assert space.dimension == 0
    dom = ctx.domain()
    tup = space.member()
    assert tup["h1"].equals_on(lincomb([(2, mu1), (-1, mu2)]), dom)
    assert tup["h2"].equals_on(lincomb([(-4, mu1), (4, mu2)]), dom)
    assert tup["h"].is_zero_on(dom)


def test_zero_f_leaves_h1_free():
    ctx = c6_e2()
    space = solve_y_side(ctx, {"f": zero_function(ctx.carrier)})
    assert space.dimension == len(ctx.domain())
    assert all(space.particular[s].is_zero_on(ctx.domain()) for s in space.slots)
    assert all(v[space.slots.index("h1")] != 0 for v in space.null_vectors)


def test_infeasible_with_certificate():
    ctx = c6_e2()
    c = ctx.carrier
    chi = ctx.fixed["chi"]
    f = Table(c, {x: chi(x) * k for k, x in enumerate(c.elements())})
    with pytest.raises(Infeasible) as info:
        solve_y_side(ctx, {"f": f})
    assert certificate_holds(ctx, {"f": f}, info.value)
    assert info.value.witness_y in c.elements()


def test_missing_x_side_is_reported():
    ctx = c6_e2()
    with pytest.raises(ProbeInsufficient):
        solve_y_side(ctx, {})
    e1 = build_context("E1", ctx.carrier, {k: ctx.fixed[k] for k in ("mu1", "mu2", "chi")})
    with pytest.raises(ProbeInsufficient):
        solve_y_side(e1, {"f": zero_function(ctx.carrier)})


@pytest.mark.parametrize("branch", ALL, ids=lambda b: b.key)
def test_oracle_contains_constructed_y_side(branch):
    rng = random.Random(21)
    spec = CONTEXTS[branch.equation]
    for _ in range(3):
        for _ in range(50):
            ctx = random_context(branch.equation, spec, rng, radius=3)
            if branch_admissible(ctx, branch):
                break
        tup = construct(ctx, branch, sample_params(ctx, branch, rng))
        x_side = {s: tup[s] for s in ctx.x_side_slots()}
        space = solve_y_side(ctx, x_side)
        assert space.contains({s: tup[s] for s in space.slots})


@given(st.integers(min_value=0, max_value=10**6))
def test_members_of_the_space_verify(seed):
    rng = random.Random(seed)
    ctx = random_context("E2", "C6", rng)
    b = CATALOG["E2"][rng.randrange(3)]
    while not branch_admissible(ctx, b):
        ctx = random_context("E2", "C6", rng)
    tup = construct(ctx, b, sample_params(ctx, b, rng))
    space = solve_y_side(ctx, {"f": tup["f"]})
    assert verify(ctx, space.random_member(rng, COEFF_SAMPLER), ctx.domain()).passed


def test_sweep_is_clean_and_deterministic():
    ctx = c6_e2()
    cfg = SweepConfig(structured=12, unstructured=6)
    a, b = sweep(ctx, cfg, seed=42), sweep(ctx, cfg, seed=42)
    assert a.clean and a.samples == 18
    assert (a.classified, a.infeasible, a.tuples) == (b.classified, b.infeasible, b.tuples)


def test_sweep_dumps_unclassifiable_tuples(tmp_path, monkeypatch):
    def refuse(ctx, tup, probe=None, check_solution=True):
        raise Unclassifiable(ctx.equation, "forced")

    monkeypatch.setattr(oracle, "classify", refuse)
    ctx = c6_e2()
    rep = sweep(ctx, SweepConfig(structured=4, unstructured=0, dump_dir=str(tmp_path)), seed=1)
    assert rep.unclassifiable > 0 and not rep.clean
    assert len(rep.dumps) == rep.unclassifiable
    doc = json.loads(open(rep.dumps[0], encoding="utf-8").read())
    assert doc["equation"] == "E2" and "forced" in doc["reason"]
