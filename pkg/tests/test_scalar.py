import cmath
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from feq.errors import BackendMismatch, DivisionByZero, Infeasible
from feq.scalar import (
    ONE,
    ZERO,
    Cyclotomic,
    FloatScalar,
    ScalarMatrix,
    cyclotomic_polynomial,
    exact,
    format_scalar,
    parse_scalar,
    rank_and_solve,
    solve_columns,
    to_float,
    zeta,
)

CONDUCTORS = [1, 2, 3, 4, 5, 6, 8, 12, 24]

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=7)


@st.composite
def cyclotomics(draw, conductors=CONDUCTORS):
    n = draw(st.sampled_from(conductors))
    coeffs = draw(st.lists(rationals, min_size=n, max_size=n))
    return Cyclotomic(n, [Fraction(c) for c in coeffs])


def test_roots_of_unity_relations():
    assert (ONE + zeta(3) + zeta(3, 2)).is_zero()
    assert zeta(6) * zeta(6, 5) == ONE
    assert (ONE + zeta(4)) * (ONE - zeta(4)) == exact(2)


def test_cyclotomic_polynomials_match_known_values():
    assert tuple(int(x) for x in cyclotomic_polynomial(1)) == (-1, 1)
    assert tuple(int(x) for x in cyclotomic_polynomial(6)) == (1, -1, 1)
    assert tuple(int(x) for x in cyclotomic_polynomial(12)) == (1, 0, -1, 0, 1)


def test_rational_embeds_in_constant_term():
    q = exact(Fraction(3, 2)).embed(12)
    assert q.c[0] == Fraction(3, 2) and all(c == 0 for c in q.c[1:])


def test_float_images():
    assert complex(to_float(exact(Fraction(3, 2))).z) == 1.5
    assert abs(to_float(zeta(4)).z - 1j) < 1e-15
    assert abs(to_float(zeta(3)).z - complex(-0.5, 0.8660254037844386)) < 1e-15


@pytest.mark.parametrize("n", CONDUCTORS)
def test_float_image_of_every_power_is_exp(n):
    for k in range(n):
        assert abs(to_float(zeta(n, k)).z - cmath.exp(2j * cmath.pi * k / n)) < 1e-12


def test_division_by_zero_raises():
    with pytest.raises(DivisionByZero):
        ONE / ZERO
    with pytest.raises(DivisionByZero):
        ZERO.inverse()
    with pytest.raises(DivisionByZero):
        FloatScalar(1) / FloatScalar(0)


def test_mixing_backends_is_refused():
    with pytest.raises(BackendMismatch):
        ONE + FloatScalar(1.0)
    with pytest.raises(BackendMismatch):
        ScalarMatrix([[ONE, FloatScalar(1.0)]])


def test_float_equality_uses_relative_tolerance():
    assert FloatScalar(1.0) == FloatScalar(1.0 + 1e-12)
    assert FloatScalar(1.0) != FloatScalar(1.0 + 1e-6)


@given(cyclotomics(), cyclotomics(), cyclotomics())
def test_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + b == b + a and a * b == b * a
    assert a - a == ZERO
    if not a.is_zero():
        assert a * a.inverse() == ONE
        assert (b / a) * a == b


@given(cyclotomics())
def test_reduction_is_idempotent(a):
    again = Cyclotomic(a.n, a.c)
    assert again.c == a.c


@given(cyclotomics([1, 2, 3, 4, 6]), st.sampled_from([2, 3, 4, 5]))
def test_embed_then_project_is_identity(a, k):
    m = a.n * k
    assert a.embed(m).project(a.n).c == a.c
    assert a.embed(m) == a


@given(cyclotomics(), cyclotomics())
def test_float_replay_agrees(a, b):
    fa, fb = to_float(a), to_float(b)
    assert abs(to_float(a * b + a).z - (fa * fb + fa).z) < 1e-9 * max(1.0, abs((fa * fb + fa).z))


@given(cyclotomics())
def test_literal_round_trip(a):
    n = a.canonical().n
    assert parse_scalar(format_scalar(a, n), conductor=n) == a


def test_literal_grammar():
    assert parse_scalar("3/2") == exact(Fraction(3, 2))
    assert parse_scalar("-4") == exact(-4)
    assert parse_scalar("1+1*z^1+1*z^2", conductor=3).is_zero()
    assert parse_scalar("2*z", conductor=4) == 2 * zeta(4)
    f = parse_scalar("1.5-2i")
    assert isinstance(f, FloatScalar) and f.z == complex(1.5, -2)
    assert format_scalar(exact(3) - 2 * zeta(3), 3) == "3-2*z^1"


def test_rank_identity_and_duplicate_rows():
    eye = ScalarMatrix([[ONE if i == j else ZERO for j in range(3)] for i in range(3)])
    rank, x = rank_and_solve(eye, [exact(4), exact(5), exact(6)])
    assert rank == 3 and x == [exact(4), exact(5), exact(6)]
    dup = ScalarMatrix([[1, 2, 3], [1, 2, 3], [0, 1, 1]])
    assert dup.rank() == 2


def test_character_table_of_c6_has_full_rank():
    table = ScalarMatrix([[zeta(6, k * g) for k in range(6)] for g in range(6)])
    assert table.rank() == 6
    assert not table.determinant().is_zero()


def test_infeasible_certificate_annihilates_matrix():
    M = ScalarMatrix([[1, 1], [2, 2], [0, 1]])
    rhs = [exact(1), exact(3), exact(0)]
    with pytest.raises(Infeasible) as info:
        solve_columns(M, [rhs])
    w = info.value.certificate
    for j in range(2):
        assert sum((wi * M[i, j] for i, wi in enumerate(w)), ZERO).is_zero()
    assert not sum((wi * b for wi, b in zip(w, rhs)), ZERO).is_zero()


def test_nullspace_vectors_solve_homogeneous_system():
    M = ScalarMatrix([[1, 2, 3], [2, 4, 6]])
    sol = solve_columns(M, [[exact(1), exact(2)]])
    assert sol.rank == 1 and len(sol.nullspace) == 2
    for v in sol.nullspace:
        for row in M.rows():
            assert sum((a * b for a, b in zip(row, v)), ZERO).is_zero()


def test_float_rank_uses_pivot_threshold():
    F = FloatScalar
    M = ScalarMatrix([[F(1.0), F(2.0)], [F(1.0), F(2.0 + 1e-13)]])
    assert M.rank() == 1
