import json
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feq.algebra import make_carrier
from feq.classify import classify
from feq.equations import verify
from feq.families import CATALOG, construct
from feq.funcspace import Multiplicative, phi_solve
from feq.oracle import SweepConfig, sweep
from feq.sampling import branch_admissible, random_context, sample_params
from feq.serialize import (
    branch_result_from_json,
    branch_result_to_json,
    characters_to_json,
    function_from_json,
    function_to_json,
    params_from_json,
    params_to_json,
    report_from_json,
    report_to_json,
    solution_from_json,
    solution_to_json,
    sweep_report_from_json,
    sweep_report_to_json,
)

CONTEXTS = {"E1": "C12", "E2": "C6", "E3": "C6", "E4": "C2xC2", "E5": "N^2", "E6": "N^1", "E7": "Z^2",
            "E8": "Z^1", "E0": "BS12"}
ALL = [b for eq in CATALOG for b in CATALOG[eq]]


def dumps(doc):
    return json.dumps(doc, sort_keys=True)


def draw(branch, rng):
    for _ in range(50):
        ctx = random_context(branch.equation, CONTEXTS[branch.equation], rng, radius=3)
        if branch_admissible(ctx, branch):
            break
    p = sample_params(ctx, branch, rng)
    return ctx, p, construct(ctx, branch, p)


@pytest.mark.parametrize("branch", ALL, ids=lambda b: b.key)
def test_solution_round_trip(branch):
    rng = random.Random(99)
    ctx, p, tup = draw(branch, rng)
    doc = json.loads(dumps(solution_to_json(ctx, tup)))
    ctx2, tup2 = solution_from_json(doc)
    assert ctx2.equation == ctx.equation and ctx2.radius == ctx.radius
    dom = ctx.domain()
    assert all(tup2[s].equals_on(tup[s], dom) for s in ctx.slots)
    assert verify(ctx2, tup2).passed
    assert dumps(solution_to_json(ctx2, tup2)) == dumps(doc)


@pytest.mark.parametrize("branch", ALL, ids=lambda b: b.key)
def test_params_and_result_round_trip(branch):
    rng = random.Random(5)
    ctx, p, tup = draw(branch, rng)
    spec = ctx.carrier.spec
    doc = json.loads(dumps(params_to_json(spec, branch.index, p)))
    k, p2 = params_from_json(doc, spec)
    assert k == branch.index and p2.params == p.params
    res = classify(ctx, tup)
    rdoc = json.loads(dumps(branch_result_to_json(res, spec)))
    res2 = branch_result_from_json(rdoc, spec)
    assert (res2.key, res2.params, res2.gauge, res2.path) == (res.key, res.params, res.gauge, res.path)
    assert dumps(branch_result_to_json(res2, spec)) == dumps(rdoc)


def test_report_round_trip_keeps_failures():
    ctx, p, tup = draw(CATALOG["E2"][2], random.Random(3))
    c = ctx.carrier
    bad = tup.replace(h=tup["h"] + Multiplicative(c, ctx.fixed["chi"].images))
    rep = verify(ctx, bad)
    doc = json.loads(dumps(report_to_json(rep, c.spec)))
    rep2 = report_from_json(doc, c.spec)
    assert rep2.failure_count == rep.failure_count and rep2.failures == rep.failures
    assert doc["verdict"] == "fail"


def test_sweep_report_round_trip():
    ctx = random_context("E4", "C6", random.Random(2))
    rep = sweep(ctx, SweepConfig(structured=5, unstructured=3), seed=7)
    doc = json.loads(dumps(sweep_report_to_json(rep)))
    assert dumps(sweep_report_to_json(sweep_report_from_json(doc))) == dumps(doc)


@pytest.mark.parametrize("spec,count", [("C6", 6), ("S3", 2), ("A5", 1), ("C2xC2", 4)])
def test_characters_document(spec, count):
    from feq.funcspace import enumerate_characters
    from feq.scalar import parse_scalar

    c = make_carrier(spec)
    doc = json.loads(dumps(characters_to_json(c)))
    assert len(doc["characters"]) == count
    for ch, entry in zip(enumerate_characters(c), doc["characters"]):
        assert entry["label"] == ch.label
        for x in c.elements():
            assert parse_scalar(entry["values"][c.name(x)], conductor=doc["conductor"]) == ch(x)


def test_phi_function_round_trip():
    bs = make_carrier("BS12")
    one, two = Multiplicative(bs, [1, 1]), Multiplicative(bs, [2, 1])
    phi = phi_solve(bs, one, two, {"alpha": 3, "lam": "1/2"})
    doc = json.loads(dumps(function_to_json(phi)))
    assert doc["repr"] == "phi" and doc["form"] == "commutator"
    back = function_from_json(doc)
    assert back.equals_on(phi, bs.word_ball(3))


@given(st.lists(st.tuples(st.integers(-5, 5), st.integers(1, 4)), min_size=1, max_size=4))
def test_cyclotomic_tables_round_trip(pairs):
    c = make_carrier("C12")
    from feq.funcspace import Table, enumerate_characters, lincomb

    chars = enumerate_characters(c)
    fn = lincomb([(n, chars[(n * d) % 12]) for n, d in pairs], c)
    tab = Table(c, {x: fn(x) for x in c.elements()})
    doc = json.loads(dumps(function_to_json(tab)))
    assert function_from_json(doc).equals_on(tab, c.elements())
