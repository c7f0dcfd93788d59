import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feq.algebra import make_carrier
from feq.classify import Independent, build_probe, classify, coefficients_in_span, reconstruct
from feq.equations import SolutionTuple, build_context, verify
from feq.errors import BackendMismatch, NotASolution, ProbeInsufficient, RankNotFull
from feq.families import CATALOG, construct
from feq.funcspace import Additive, Multiplicative, Table, enumerate_characters, lincomb, product, zero_function
from feq.sampling import branch_admissible, random_context, random_table, sample_params
from feq.scalar import ONE, ZERO, exact

CONTEXTS = {"E1": ["C6", "C2xC2"], "E2": ["C6", "C12"], "E3": ["C6", "C12"], "E4": ["C6", "C2xC2"],
            "E5": ["N^1", "N^2"], "E6": ["N^1", "N^2"], "E7": ["Z^1", "Z^2"], "E8": ["Z^1", "Z^2"],
            "E0": ["C6", "S3", "Z^1", "BS12"]}
ALL = [b for eq in CATALOG for b in CATALOG[eq]]


def c6_e2():
    c = make_carrier("C6")
    ch = enumerate_characters(c)
    return build_context("E2", c, dict(mu1=ch[1], mu2=ch[5], chi=ch[2]))


def z_context(eq, spec="Z^1"):
    c = make_carrier(spec)
    k = len(c.generators)
    fixed = dict(mu=Multiplicative(c, [2] * k), chi=Multiplicative(c, [3] * k), A=Additive(c, [1] + [0] * (k - 1)))
    return build_context(eq, c, fixed)


def test_span_examples():
    ctx = c6_e2()
    F = ctx.fixed
    basis = (F["mu1"], F["mu2"], F["chi"])
    probe = build_probe(ctx, basis)
    fn = lincomb([(3, F["mu1"]), (-1, F["mu2"])])
    assert coefficients_in_span(fn, basis, probe) == [exact(3), exact(-1), ZERO]
    assert coefficients_in_span(zero_function(ctx.carrier), basis, probe) == [ZERO] * 3
    other = enumerate_characters(ctx.carrier)[3]
    assert coefficients_in_span(other, basis, probe) is Independent
    assert not Independent


def test_chi_a_is_independent_of_characters_on_z1():
    ctx = z_context("E8")
    c = ctx.carrier
    chars = tuple(Multiplicative(c, [v]) for v in (1, 2, 3, -1, exact(1) / 2))
    probe = build_probe(ctx, chars)
    chiA = product(ctx.fixed["chi"], ctx.fixed["A"])
    assert coefficients_in_span(chiA, chars, probe, ctx.domain()) is Independent


def test_span_refuses_foreign_probe():
    ctx = c6_e2()
    F = ctx.fixed
    probe = build_probe(ctx)
    with pytest.raises(ProbeInsufficient):
        coefficients_in_span(F["mu1"], (F["mu1"], F["chi"]), probe)


def test_probe_examples():
    probe = build_probe(c6_e2())
    assert len(probe.elements) == 6 and probe.rank == 3
    z2 = z_context("E8", "Z^2")
    probe = build_probe(z2)
    assert probe.rank == 3 and probe.radius <= 3
    z1 = make_carrier("Z^1")
    chi = Multiplicative(z1, [3])
    with pytest.raises(RankNotFull):
        build_probe(z_context("E8"), (chi, product(chi, Additive(z1, [0]))))


def test_probe_rank_stabilizes_over_two_radii():
    ctx = z_context("E7", "Z^2")
    probe = build_probe(ctx)
    smaller = build_probe(ctx.with_radius(probe.radius - 1)) if probe.radius > 1 else probe
    assert smaller.rank == probe.rank


def test_e2_branch_two_example():
    ctx = c6_e2()
    c = ctx.carrier
    rng = random.Random(0)
    h1 = random_table(ctx, rng, nonzero=True)
    while h1(c.identity).is_zero():
        h1 = random_table(ctx, rng, nonzero=True)
    chi = ctx.fixed["chi"]
    tup = SolutionTuple({"f": 4 * chi, "h1": h1, "h2": zero_function(c), "h": 4 * (chi - h1)})
    res = classify(ctx, tup)
    assert res.key == "E2-B2" and res.params == {"c": exact(4)}
    assert "h1" in res.gauge and res.aux["h1"] is h1


def test_e2_branch_three_round_trip_example():
    ctx = c6_e2()
    res = classify(ctx, construct(ctx, 3, dict(a=2, b=1, c=5)))
    assert res.key == "E2-B3" and res.params == {"a": exact(2), "b": exact(1), "c": exact(5)}


def test_zero_e0_tuple_takes_first_branch():
    c = make_carrier("C6")
    ch = enumerate_characters(c)
    ctx = build_context("E0", c, dict(chi1=ch[2], chi2=ch[2]))
    res = classify(ctx, SolutionTuple({"f": zero_function(c)}))
    assert res.key == "E0-B1" and res.aux["A"].is_zero()
    ctx = build_context("E0", c, dict(chi1=ch[2], chi2=ch[3]))
    res = classify(ctx, SolutionTuple({"f": zero_function(c)}))
    assert res.key == "E0-B2" and res.params["alpha"] == ZERO


def test_non_solution_is_rejected():
    ctx = c6_e2()
    c = ctx.carrier
    tup = construct(ctx, 3, dict(a=2, b=1, c=5))
    bad = tup.replace(h2=tup["h2"] + Table(c, {c.identity: ONE}))
    with pytest.raises(NotASolution):
        classify(ctx, bad)


def test_float_backend_is_refused():
    ctx = c6_e2()
    tup = construct(ctx, 3, dict(a=2, b=1, c=5))
    with pytest.raises(BackendMismatch):
        classify(ctx.to_float(), tup.to_float())


def scale(ctx, tup, t):
    """f appears on both sides, so the symmetry fixes h1 and scales every other slot."""
    return SolutionTuple({s: tup[s] if s == "h1" else t * tup[s] for s in ctx.slots})


def n1_e6():
    n1 = make_carrier("N^1")
    return build_context("E6", n1, dict(mu=Multiplicative(n1, [2], character=False),
                                        chi=Multiplicative(n1, [3], character=False), A=Additive(n1, [1])))


@pytest.mark.parametrize("make", [c6_e2, n1_e6], ids=["E2", "E6"])
@given(t=st.fractions(min_value=-5, max_value=5, max_denominator=3).filter(lambda t: t != 0),
       seed=st.integers(min_value=0, max_value=10**6))
def test_scaling_maps_branch_three_parameters(make, t, seed):
    rng = random.Random(seed)
    t = exact(t)
    ctx = make()
    branch = CATALOG[ctx.equation][2]
    p = sample_params(ctx, branch, rng)
    tup = construct(ctx, branch, p)
    res = classify(ctx, scale(ctx, tup, t))
    assert res.key == branch.key
    assert all(res.params[k] == t * v for k, v in p.params.items())


def test_whole_tuple_scaling_is_not_a_symmetry():
    ctx = c6_e2()
    tup = construct(ctx, 3, dict(a=2, b=1, c=5))
    assert not verify(ctx, SolutionTuple({s: 2 * tup[s] for s in ctx.slots})).passed


@pytest.mark.parametrize("branch", ALL, ids=lambda b: b.key)
def test_round_trip_small(branch):
    rng = random.Random(11)
    for spec in CONTEXTS[branch.equation]:
        for _ in range(4):
            for _ in range(50):
                ctx = random_context(branch.equation, spec, rng, radius=3)
                if branch_admissible(ctx, branch):
                    break
            else:
                continue
            p = sample_params(ctx, branch, rng)
            tup = construct(ctx, branch, p)
            res = classify(ctx, tup)
            assert res.key == branch.key
            for k, v in p.params.items():
                if k not in res.gauge:
                    assert res.params[k] == v, (k, res.params[k], v)
            rebuilt = reconstruct(ctx, res)
            assert all(rebuilt[s].equals_on(tup[s], ctx.domain()) for s in ctx.slots)
            assert sum(1 for step in res.path if step == res.key) == 1
            assert sum(1 for step in res.path if step.startswith(branch.equation + "-B")) == 1


@given(st.integers(min_value=0, max_value=10**6))
def test_verify_failure_always_means_not_a_solution(seed):
    rng = random.Random(seed)
    ctx = random_context("E1", "C6", rng)
    tup = SolutionTuple({s: random_table(ctx, rng) for s in ctx.slots})
    if verify(ctx, tup).passed:
        return
    with pytest.raises(NotASolution):
        classify(ctx, tup)
