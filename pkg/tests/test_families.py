import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feq.algebra import make_carrier
from feq.equations import build_context, verify
from feq.errors import AuxiliaryInvalid, ConstraintViolated
from feq.families import CATALOG, BranchParams, construct, fixture_suite, get_branch, list_branches
from feq.funcspace import Additive, Multiplicative, Table, enumerate_characters, lincomb, phi_solve, product
from feq.sampling import branch_admissible, random_context, random_table, sample_params
from feq.scalar import exact

CONTEXTS = {"E1": ["C6", "C12"], "E2": ["C6", "C2xC2"], "E3": ["C6", "C12"], "E4": ["C6", "C2xC2"],
            "E5": ["N^1", "N^2"], "E6": ["N^1", "N^2"], "E7": ["Z^1", "Z^2"], "E8": ["Z^1", "Z^2"],
            "E0": ["C6", "S3", "Z^1", "BS12"]}
ALL = [b for eq in CATALOG for b in CATALOG[eq]]


def admissible_context(branch, spec, rng):
    for _ in range(50):
        ctx = random_context(branch.equation, spec, rng, radius=3)
        if branch_admissible(ctx, branch):
            return ctx
    pytest.skip(f"{branch.key} has no admissible context on {spec}")


def c6_context(eq="E2"):
    c = make_carrier("C6")
    ch = enumerate_characters(c)
    return build_context(eq, c, dict(mu1=ch[1], mu2=ch[5], chi=ch[2]))


def test_catalog_sizes():
    sizes = {eq: len(list_branches(eq)) for eq in CATALOG}
    assert sizes == {"E2": 3, "E1": 5, "E4": 2, "E3": 3, "E6": 3, "E5": 4, "E8": 3, "E7": 5, "E0": 2}
    assert sum(sizes.values()) == 30
    for eq in CATALOG:
        assert [b.index for b in list_branches(eq)] == list(range(1, sizes[eq] + 1))
        assert all(b.anchor for b in list_branches(eq))


def test_e2_branch_three_example():
    ctx = c6_context()
    mu1, mu2 = ctx.fixed["mu1"], ctx.fixed["mu2"]
    tup = construct(ctx, 3, BranchParams(dict(a=2, b=1, c=0)))
    dom = ctx.domain()
    assert tup["f"].equals_on(lincomb([(2, mu1), (1, mu2)]), dom)
    assert tup["h1"].equals_on(lincomb([(2, mu1), (-1, mu2)]), dom)
    assert tup["h2"].equals_on(lincomb([(-4, mu1), (4, mu2)]), dom)
    assert tup["h"].is_zero_on(dom)


def test_e8_branch_three_example():
    z1 = make_carrier("Z^1")
    mu, chi, A = Multiplicative(z1, [2]), Multiplicative(z1, [3]), Additive(z1, [1])
    ctx = build_context("E8", z1, dict(mu=mu, chi=chi, A=A))
    tup = construct(ctx, 3, dict(a=0, b=1, alpha=1))
    chiA = product(chi, A)
    dom = ctx.domain()
    assert tup["f"].equals_on(chi + chiA, dom) and tup["h1"].equals_on(chi + chiA, dom)
    assert tup["h2"].is_zero_on(dom) and tup["h"].equals_on(-chiA, dom)


def test_constraint_names_are_reported():
    ctx = c6_context()
    with pytest.raises(ConstraintViolated, match="a≠b"):
        construct(ctx, 3, dict(a=1, b=1, c=0))
    with pytest.raises(ConstraintViolated, match="parameters"):
        construct(ctx, 3, dict(a=1, b=2))
    with pytest.raises(ConstraintViolated, match="parameters"):
        construct(ctx, 3, dict(a=1, b=2, c=0, z=1))


@pytest.mark.parametrize("key,params,name", [
    ("E1-B2", dict(b=0, alpha=1, gamma=1), "b≠0"),
    ("E1-B3", dict(a1=1, a2=1, a3=1, d1=2, d2=2, d3=0), "d₁≠d₂"),
    ("E1-B4", dict(b=0, a1=1, a2=1, a3=1), "b≠0"),
])
def test_boundary_draws_are_rejected(key, params, name):
    ctx = build_context("E1", "C12", {k: enumerate_characters(make_carrier("C12"))[i]
                                      for i, k in enumerate(("mu1", "mu2", "chi"))})
    eq, k = key.split("-B")
    aux = {}
    if key == "E1-B4":
        mu = enumerate_characters(make_carrier("C12"))[5]
        aux = {"mu": mu, "phi": phi_solve(ctx.carrier, mu, ctx.fixed["chi"], {"alpha": 1})}
    with pytest.raises(ConstraintViolated, match=name):
        construct(ctx, int(k), BranchParams(params, aux))


def test_e7_branch_three_enforces_both_constraints():
    z1 = make_carrier("Z^1")
    ctx = build_context("E7", z1, dict(mu=Multiplicative(z1, [2]), chi=Multiplicative(z1, [3]), A=Additive(z1, [1])))
    good = dict(a=1, alpha=2, beta=3, gamma=1, b=6, c=2)
    construct(ctx, 3, good)
    with pytest.raises(ConstraintViolated, match="b=βc"):
        construct(ctx, 3, {**good, "b": 5})
    with pytest.raises(ConstraintViolated, match="βbc≠0"):
        construct(ctx, 3, {**good, "beta": 0, "b": 0})


def test_invalid_aux_is_rejected():
    ctx = c6_context()
    ch = enumerate_characters(ctx.carrier)
    bogus_phi = Table(ctx.carrier, {x: exact(1) for x in ctx.carrier.elements()})
    with pytest.raises(AuxiliaryInvalid):
        construct(ctx, 1, BranchParams(dict(c=1), {"mu": ch[3], "phi": bogus_phi}))


def test_e1_branch_five_ignores_nothing_it_uses():
    """With b fixed, changing a3 changes the chi coefficients of g1 and h."""
    c = make_carrier("C12")
    ch = enumerate_characters(c)
    ctx = build_context("E1", c, dict(mu1=ch[1], mu2=ch[2], chi=ch[3]))
    t1 = construct(ctx, 5, dict(b=2, a1=1, a2=3, a3=0))
    t2 = construct(ctx, 5, dict(b=2, a1=1, a2=3, a3=1))
    assert not t1["g1"].equals_on(t2["g1"], c.elements())


@pytest.mark.parametrize("branch", [b for b in ALL if b.gauge], ids=lambda b: b.key)
def test_gauge_slots_are_free(branch):
    rng = random.Random(hash(branch.key) % 1000)
    spec = CONTEXTS[branch.equation][0]
    ctx = admissible_context(branch, spec, rng)
    bp = sample_params(ctx, branch, rng)
    results = []
    for _ in range(2):
        aux = dict(bp.aux)
        for name in branch.gauge:
            old = aux.get(name)
            if isinstance(old, Table) or old is None:
                fresh = sample_params(ctx, branch, rng).aux.get(name)
                aux[name] = fresh
        tup = construct(ctx, branch, BranchParams(bp.params, aux))
        assert verify(ctx, tup).passed
        results.append(tup)


@pytest.mark.parametrize("branch", ALL, ids=lambda b: b.key)
def test_random_draws_verify(branch):
    rng = random.Random(7)
    for spec in CONTEXTS[branch.equation]:
        for _ in range(5):
            ctx = admissible_context(branch, spec, rng)
            tup = construct(ctx, branch, sample_params(ctx, branch, rng))
            assert verify(ctx, tup).passed


@given(st.integers(min_value=0, max_value=10**6))
def test_e2_branch_three_draws_verify(seed):
    rng = random.Random(seed)
    ctx = random_context("E2", "C12", rng)
    b = get_branch("E2", 3)
    assert verify(ctx, construct(ctx, b, sample_params(ctx, b, rng))).passed


@given(st.integers(min_value=0, max_value=10**6))
def test_e2_branch_two_any_h1(seed):
    rng = random.Random(seed)
    ctx = c6_context()
    h1 = random_table(ctx, rng, nonzero=True)
    tup = construct(ctx, 2, BranchParams(dict(c=exact(seed % 7 - 3)), {"h1": h1}))
    assert verify(ctx, tup).passed


def test_fixture_suite_is_exposed():
    names = [fx.name for fx in fixture_suite()]
    assert len(names) == len(set(names)) > 15
    assert fixture_suite(["sine addition"]) and all("sine addition" in fx.name for fx in fixture_suite(["sine addition"]))
