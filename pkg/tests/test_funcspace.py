import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feq.algebra import make_carrier
from feq.errors import (
    BasePointInvalid,
    CarrierMismatch,
    RelationViolated,
    TransformationPropertyViolated,
    ZeroValueForCharacter,
)
from feq.funcspace import (
    Additive,
    CommutatorAdditive,
    Multiplicative,
    additive_from_images,
    check_phi,
    check_transformation_property,
    combine,
    enumerate_characters,
    is_central,
    multiplicative_from_images,
    phi_solve,
    product,
)
from feq.scalar import ONE, ZERO, ScalarMatrix, exact, zeta


def brute_force_character_count(c):
    """Count generator exponent assignments mod |G| that extend to homomorphisms."""
    n = c.order
    gens = list(c.generators)
    count = 0
    for ks in itertools.product(range(n), repeat=len(gens)):
        val = {c.identity: 0}
        frontier = [c.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g, k in zip(gens, ks):
                    y = c.mul(x, g)
                    if y not in val:
                        val[y] = (val[x] + k) % n
                        nxt.append(y)
            frontier = nxt
        if all(val[c.mul(x, y)] == (val[x] + val[y]) % n for x in c.elements() for y in c.elements()):
            count += 1
    return count


@pytest.mark.parametrize("spec", ["C6", "C12", "C2xC2", "S3", "D4"])
def test_character_count_matches_brute_force(spec):
    c = make_carrier(spec)
    assert len(enumerate_characters(c)) == brute_force_character_count(c)


def test_character_examples():
    c6 = make_carrier("C6")
    chars = enumerate_characters(c6)
    assert len(chars) == 6
    tables = {tuple(ch(x) for x in c6.elements()) for ch in chars}
    expected = {tuple(zeta(6, k * g) for g in range(6)) for k in range(6)}
    gen = c6.generators[0]
    order = [c6.identity]
    while len(order) < 6:
        order.append(c6.mul(order[-1], gen))
    assert {tuple(ch(x) for x in order) for ch in chars} == expected
    assert len(tables) == 6
    assert len(enumerate_characters(make_carrier("S3"))) == 2
    assert len(enumerate_characters(make_carrier("A5"))) == 1


@pytest.mark.parametrize("spec", ["C6", "C12", "C2xC2", "S3", "D4", "A5"])
def test_characters_are_distinct_homomorphisms(spec):
    c = make_carrier(spec)
    chars = enumerate_characters(c)
    assert len({tuple(ch(x) for x in c.elements()) for ch in chars}) == len(chars)
    for ch in chars:
        assert ch(c.identity) == ONE
        for x, y in itertools.product(c.elements(), repeat=2):
            assert ch(c.mul(x, y)) == ch(x) * ch(y)
            assert not ch(x).is_zero()


def test_every_subset_of_c12_characters_is_independent():
    c = make_carrier("C12")
    chars = enumerate_characters(c)
    rng = random.Random(5)
    subsets = [list(s) for k in (1, 2, 12) for s in itertools.combinations(range(12), k)]
    subsets += [rng.sample(range(12), rng.randint(3, 11)) for _ in range(200)]
    for s in subsets:
        M = ScalarMatrix([[chars[j](x) for j in s] for x in c.elements()])
        assert M.rank() == len(s)


def test_multiplicative_examples():
    z1 = make_carrier("Z^1")
    m = multiplicative_from_images(z1, [2])
    assert m.character and m((5,)) == exact(32) and m((-2,)) == exact(1) / 4
    n1 = make_carrier("N^1")
    z = multiplicative_from_images(n1, [0], character=False)
    assert z((0,)) == ONE and all(z((k,)).is_zero() for k in range(1, 5))
    with pytest.raises(ZeroValueForCharacter):
        multiplicative_from_images(n1, [0], character=True)
    bs = make_carrier("BS12")
    chi = multiplicative_from_images(bs, [2, 1])
    for x in bs.word_ball(3):
        expected = exact(2) ** x[0] if x[0] >= 0 else ONE / exact(2) ** (-x[0])
        assert chi(x) == expected
    with pytest.raises(RelationViolated):
        multiplicative_from_images(bs, [2, 3])


def test_additive_examples():
    z2 = make_carrier("Z^2")
    A = additive_from_images(z2, [1, -3])
    assert A((2, 5)) == exact(2 - 15)
    with pytest.raises(RelationViolated):
        additive_from_images(make_carrier("C6"), [1])
    n1 = make_carrier("N^1")
    assert additive_from_images(n1, [1])((7,)) == exact(7)
    with pytest.raises(RelationViolated):
        additive_from_images(make_carrier("BS12"), [0, 1])


@pytest.mark.parametrize("spec", ["C6", "C12", "C2xC2", "S3", "D4", "A5"])
def test_finite_carriers_have_only_zero_additive(spec):
    c = make_carrier(spec)
    for g in range(len(c.generators)):
        images = [ZERO] * len(c.generators)
        images[g] = ONE
        with pytest.raises(RelationViolated):
            Additive(c, images)


def test_combine_examples():
    c6 = make_carrier("C6")
    chars = enumerate_characters(c6)
    g = combine("scale", exact(1) / 2, combine("sum", chars[1], chars[2]))
    assert g(c6.identity) == ONE
    z1 = make_carrier("Z^1")
    chiA = combine("product", Multiplicative(z1, [2]), Additive(z1, [1]))
    assert chiA((3,)) == exact(24)
    with pytest.raises(CarrierMismatch):
        combine("sum", chars[0], Multiplicative(z1, [2]))
    central = combine("scale", 5, chars[1] - chars[2])
    phi = phi_solve(c6, chars[1], chars[2], {"alpha": 5})
    assert central.equals_on(phi, c6.elements())


def test_phi_examples():
    z1 = make_carrier("Z^1")
    chi = Multiplicative(z1, [3])
    A = Additive(z1, [1])
    phi = phi_solve(z1, chi, chi, {"additive": A})
    for n in range(-4, 5):
        assert phi((n,)) == chi((n,)) * n
    bs = make_carrier("BS12")
    one, two = Multiplicative(bs, [1, 1]), Multiplicative(bs, [2, 1])
    alpha = exact(7) / 3
    phi = phi_solve(bs, one, two, {"alpha": alpha, "base": bs.a, "lam": 1})
    for x in bs.word_ball(5):
        p, q = x
        assert phi(x) == alpha * (ONE - two(x)) + exact(q)
    assert check_phi(phi, one, two, bs.word_ball(4)) is None


def test_phi_errors():
    bs = make_carrier("BS12")
    one, two = Multiplicative(bs, [1, 1]), Multiplicative(bs, [2, 1])
    with pytest.raises(BasePointInvalid):
        phi_solve(bs, one, two, {"alpha": 1, "base": bs.b, "lam": 1})
    three = Multiplicative(bs, [3, 1])
    with pytest.raises(TransformationPropertyViolated):
        phi_solve(bs, one, three, {"alpha": 1, "lam": 1})


def test_transformation_property_on_bs12():
    bs = make_carrier("BS12")
    one, two = Multiplicative(bs, [1, 1]), Multiplicative(bs, [2, 1])
    cadd = CommutatorAdditive(bs, 3)
    rng = random.Random(3)
    ball = bs.word_ball(3)
    samples = [(rng.choice(ball), bs.commutator(rng.choice(ball), rng.choice(ball))) for _ in range(100)]
    assert check_transformation_property(cadd, one, two, samples) is None


def test_is_central_examples():
    c6 = make_carrier("C6")
    assert is_central(enumerate_characters(c6)[1])
    s3 = make_carrier("S3")
    sign = [ch for ch in enumerate_characters(s3) if ch.label != "1"][0]
    assert is_central(sign)
    bs = make_carrier("BS12")
    one, two = Multiplicative(bs, [1, 1]), Multiplicative(bs, [2, 1])
    phi = phi_solve(bs, one, two, {"alpha": 2, "base": bs.a, "lam": -1})
    res = is_central(phi, bs.word_ball(2))
    assert not res
    x, y = res.witness
    assert phi(bs.mul(x, y)) != phi(bs.mul(y, x))
    assert is_central(phi_solve(bs, one, two, {"alpha": 2}), bs.word_ball(2))


def test_chi_a_is_not_a_character_combination_on_z1():
    from feq.errors import Infeasible
    from feq.scalar import solve_columns

    z1 = make_carrier("Z^1")
    chi = Multiplicative(z1, [2])
    fn = product(chi, Additive(z1, [1]))
    chars = [Multiplicative(z1, [v]) for v in (1, 2, 3, exact(1) / 2, -1)]
    dom = z1.word_ball(6)
    M = ScalarMatrix([[ch(x) for ch in chars] for x in dom])
    with pytest.raises(Infeasible):
        solve_columns(M, [[fn(x) for x in dom]])


images = st.integers(min_value=-3, max_value=3).filter(lambda v: v != 0)


@given(images, images)
def test_multiplicative_law_on_z2(a, b):
    z2 = make_carrier("Z^2")
    m = Multiplicative(z2, [a, b])
    A = Additive(z2, [a, b])
    ball = z2.word_ball(2)
    for x in ball:
        for y in ball:
            xy = z2.mul(x, y)
            assert m(xy) == m(x) * m(y)
            assert A(xy) == A(x) + A(y)


@given(st.integers(min_value=1, max_value=4), st.fractions(min_value=-5, max_value=5, max_denominator=4),
       st.fractions(min_value=-5, max_value=5, max_denominator=4))
def test_phi_always_solves_e0(k, alpha, lam):
    bs = make_carrier("BS12")
    one, two = Multiplicative(bs, [1, 1]), Multiplicative(bs, [2, 1])
    phi = phi_solve(bs, one, two, {"alpha": alpha, "lam": lam}, check=False)
    assert check_phi(phi, one, two, bs.word_ball(2)) is None
    c6 = make_carrier("C6")
    chars = enumerate_characters(c6)
    phi = phi_solve(c6, chars[0], chars[k], {"alpha": alpha}, check=False)
    assert check_phi(phi, chars[0], chars[k], c6.elements()) is None
