import itertools

from feq.acceptance import AcceptanceConfig, CriterionResult, additive_dimension, independent_subsets
from feq.algebra import make_carrier
from feq.funcspace import enumerate_characters
from feq.scalar import ONE, ZERO, ScalarMatrix, exact


def test_independent_subsets_finds_the_dependent_triple():
    cols = [[ONE, ZERO], [ZERO, ONE], [ONE, ONE]]
    tested, bad = independent_subsets(cols)
    assert bad == [0b111] and tested == 7


def test_independent_subsets_agrees_with_direct_rank():
    cols = [[exact(v) for v in row] for row in ([1, 2, 0], [2, 4, 0], [0, 0, 1], [1, 0, 1])]
    _, reported = independent_subsets(cols)
    for k in range(1, 5):
        for combo in itertools.combinations(range(4), k):
            mask = sum(1 << j for j in combo)
            full = ScalarMatrix([[cols[j][i] for j in combo] for i in range(3)]).rank() == k
            if mask in reported:
                assert not full
            if not full:
                assert any(m & mask == m for m in reported)


def test_c6_characters_have_no_dependent_subset():
    c = make_carrier("C6")
    cols = [[ch(x) for x in c.elements()] for ch in enumerate_characters(c)]
    assert independent_subsets(cols) == (63, [])


def test_additive_dimension_is_zero_on_finite_carriers():
    for spec in ("C6", "S3", "D4", "A5"):
        assert additive_dimension(make_carrier(spec)) == 0


def test_criterion_line_format():
    r = CriterionResult(3, "sweeps", False, "2 bad", seconds=1.25)
    assert r.line() == "criterion 3: FAIL  sweeps  (2 bad; 1.2s)"
    assert AcceptanceConfig().float_tolerance == 1e-9
