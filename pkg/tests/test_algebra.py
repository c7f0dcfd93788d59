import itertools
import json
from fractions import Fraction

import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from feq.algebra import ZOO, abelianization, commutator, derived_subgroup, make_carrier, word_ball
from feq.errors import MalformedTable, NotAGroup, NotFinite, NotFormulaCarrier, UnknownSpec

FINITE = [s for s in ZOO if make_carrier(s).is_finite]
FORMULA = [s for s in ZOO if not make_carrier(s).is_finite]


def bs_matrix(x):
    """Affine map t -> 2^p t + q as a 2x2 matrix over Q."""
    p, q = x
    return ((Fraction(2) ** p, Fraction(q)), (Fraction(0), Fraction(1)))


def matmul(m, n):
    return tuple(tuple(sum(m[i][k] * n[k][j] for k in range(2)) for j in range(2)) for i in range(2))


def test_cyclic_group_of_order_six():
    c = make_carrier("C6")
    assert c.is_group and c.order == 6 and c.is_abelian


def test_bs12_product_matches_matrix_oracle():
    c = make_carrier("BS12")
    a, b = c.a, c.b
    x = c.mul(c.mul(c.mul(a, b), c.inv(a)), c.inv(b))
    assert x == (0, mpq(1))
    m = matmul(matmul(matmul(bs_matrix(a), bs_matrix(b)), bs_matrix(c.inv(a))), bs_matrix(c.inv(b)))
    assert m == bs_matrix(x)


def test_s3_is_nonabelian():
    c = make_carrier("S3")
    assert c.order == 6
    assert any(c.mul(x, y) != c.mul(y, x) for x in c.elements() for y in c.elements())


def test_commutators():
    c6 = make_carrier("C6")
    assert all(commutator(c6, x, y) == c6.identity for x in c6.elements() for y in c6.elements())
    bs = make_carrier("BS12")
    for x in bs.word_ball(3):
        assert commutator(bs, bs.a, x) == (0, x[1])
    s3 = make_carrier("S3")
    r, s = s3.parse("r"), s3.parse("s")
    assert commutator(s3, r, s) != s3.identity


def test_monoid_refuses_commutators():
    n1 = make_carrier("N^1")
    with pytest.raises(NotAGroup):
        commutator(n1, (1,), (2,))


def test_derived_subgroups():
    assert derived_subgroup(make_carrier("C6")).order == 1
    assert derived_subgroup(make_carrier("S3")).order == 3
    assert derived_subgroup(make_carrier("A5")).order == 60
    with pytest.raises(NotFinite):
        derived_subgroup(make_carrier("Z^1"))


def test_abelianization_factors():
    assert abelianization(make_carrier("C6")).factors == (6,)
    assert abelianization(make_carrier("S3")).factors == (2,)
    assert abelianization(make_carrier("C2xC2")).factors == (2, 2)
    assert abelianization(make_carrier("A5")).factors == ()


@pytest.mark.parametrize("spec", [s for s in FINITE if make_carrier(s).is_group])
def test_derived_times_abelianization_is_order(spec):
    c = make_carrier(spec)
    assert derived_subgroup(c).order * abelianization(c).order == c.order


@pytest.mark.parametrize("spec", [s for s in FINITE if make_carrier(s).is_group])
def test_abelianization_projection_is_homomorphism(spec):
    c = make_carrier(spec)
    ab = abelianization(c)
    for x, y in itertools.product(c.elements(), repeat=2):
        lhs = ab.project(c.mul(x, y))
        rhs = tuple((u + v) % d for u, v, d in zip(ab.project(x), ab.project(y), ab.factors))
        assert lhs == rhs


def test_word_balls():
    assert sorted(word_ball(make_carrier("Z^1"), 2)) == [(-2,), (-1,), (0,), (1,), (2,)]
    assert sorted(word_ball(make_carrier("N^1"), 3)) == [(0,), (1,), (2,), (3,)]
    with pytest.raises(NotFormulaCarrier):
        word_ball(make_carrier("C6"), 2)


def test_bs12_ball_of_radius_two_by_brute_force():
    c = make_carrier("BS12")
    letters = [bs_matrix(g) for g in (c.a, c.b, c.inv(c.a), c.inv(c.b))]
    ident = ((Fraction(1), Fraction(0)), (Fraction(0), Fraction(1)))
    forms = {ident}
    for n in (1, 2):
        for word in itertools.product(letters, repeat=n):
            m = ident
            for w in word:
                m = matmul(m, w)
            forms.add(m)
    ball = word_ball(c, 2)
    assert len(ball) == len(forms) == 17
    assert {bs_matrix(x) for x in ball} == forms


@pytest.mark.parametrize("spec", FORMULA)
def test_balls_are_nested(spec):
    c = make_carrier(spec)
    for r in range(3):
        assert set(c.word_ball(r)) <= set(c.word_ball(r + 1))
    assert c.identity in c.word_ball(0)


@pytest.mark.parametrize("spec", FINITE)
def test_commutators_trivial_iff_abelian(spec):
    c = make_carrier(spec)
    trivial = all(commutator(c, x, y) == c.identity for x in c.elements() for y in c.elements())
    assert trivial == c.is_abelian


@pytest.mark.parametrize("spec", FORMULA)
def test_formula_carriers_validate(spec):
    make_carrier(spec).validate(radius=2)


@given(st.lists(st.sampled_from(range(4)), max_size=6), st.lists(st.sampled_from(range(4)), max_size=6))
def test_bs12_normal_form_agrees_with_matrices(w1, w2):
    c = make_carrier("BS12")
    gens = [c.a, c.b, c.inv(c.a), c.inv(c.b)]
    x, m = c.identity, bs_matrix(c.identity)
    for i in w1 + w2:
        x = c.mul(x, gens[i])
        m = matmul(m, bs_matrix(gens[i]))
    assert bs_matrix(x) == m


def test_table_carriers(tmp_path):
    good = {"elements": ["e", "a"], "table": [[0, 1], [1, 0]]}
    path = tmp_path / "c2.json"
    path.write_text(json.dumps(good))
    c = make_carrier(str(path))
    assert c.order == 2 and c.is_group
    with pytest.raises(MalformedTable):
        make_carrier({"elements": ["e", "a", "b"], "table": [[0, 1, 2], [1, 2, 0], [2, 2, 1]]})
    with pytest.raises(MalformedTable):
        make_carrier({"elements": ["a", "b"], "table": [[1, 0], [0, 0]]})
    with pytest.raises(UnknownSpec):
        make_carrier("Q8x")
