import pytest
from hypothesis import given

from mqindex.fox import (AlexanderData, GroupRingElement, NotAKnotGroup, abelianize_knot, alexander_matrix,
                         alexander_polynomial, check_knot_group, elementary_ideal_generators, fox_derivative,
                         trefoil_presentation, unknot_presentation)
from mqindex.freegroup import EMPTY, GroupPresentation, Word
from mqindex.laurent import ONE, T, LaurentPoly, PolyMatrix, associates, parse_laurent
from mqindex.notation import parse_pd, wirtinger_presentation

from conftest import FIGURE_EIGHT_PD, TREFOIL_PD, words

TRI = parse_laurent("t^2 - t + 1")
x, y = Word.gen(1), Word.gen(2)
E = GroupRingElement.of


def test_fox_axioms():
    assert fox_derivative(x, 1) == E(EMPTY)
    assert fox_derivative(~x, 1) == -E(~x)
    assert fox_derivative(y, 1).is_zero()


def test_trefoil_relator_derivative():
    r = Word((1, 2, 1, -2, -1, -2))
    assert fox_derivative(r, 1) == E(EMPTY) + E(x * y) - E(x * y * x * ~y * ~x)
    assert abelianize_knot(fox_derivative(r, 1)) == TRI


def test_abelianization_examples():
    assert abelianize_knot(E(EMPTY) + E(x * y) - E(x * y * x * ~y * ~x)) == ONE + T * T - T
    assert abelianize_knot(GroupRingElement()).is_zero()
    assert abelianize_knot(E(x) - E(y)).is_zero()


@given(words(rank=3, max_len=10))
def test_fundamental_formula(w):
    # sum_j (dw/dx_j)(x_j - 1) = w - 1 in the group ring
    total = GroupRingElement()
    for j in (1, 2, 3):
        total = total + fox_derivative(w, j) * (E(Word.gen(j)) - E(EMPTY))
    assert total == E(w) - E(EMPTY)


@given(words(rank=3, max_len=8), words(rank=3, max_len=8))
def test_product_rule(u, v):
    for j in (1, 2, 3):
        assert fox_derivative(u * v, j) == fox_derivative(u, j) + fox_derivative(v, j).left_mul(u)


def test_trefoil_two_generator_matrix():
    a = alexander_matrix(trefoil_presentation())
    assert (a.full_matrix.rows, a.full_matrix.cols) == (1, 2)
    assert a.full_matrix[0, 0] == TRI
    assert associates(a.presentation_matrix[0, 0], TRI)
    assert alexander_polynomial(a) == TRI


def test_unknot():
    a = alexander_matrix(unknot_presentation())
    assert (a.full_matrix.rows, a.full_matrix.cols) == (0, 1)
    assert (a.presentation_matrix.rows, a.presentation_matrix.cols) == (0, 0)
    assert alexander_polynomial(a) == ONE


def test_figure_eight():
    a = alexander_matrix(wirtinger_presentation(parse_pd(FIGURE_EIGHT_PD)))
    assert alexander_polynomial(a) == parse_laurent("t^2 - 3*t + 1")


def test_column_deletion_independence():
    full = alexander_matrix(wirtinger_presentation(parse_pd(FIGURE_EIGHT_PD))).full_matrix
    polys = {alexander_polynomial(AlexanderData.from_full(full, j)) for j in range(full.cols)}
    assert len(polys) == 1


def test_rows_vanish_at_t_equal_one():
    full = alexander_matrix(wirtinger_presentation(parse_pd(TREFOIL_PD))).full_matrix
    for r in full.to_rows():
        assert sum(e(1) for e in r) == 0


def test_elementary_ideals_trefoil():
    a = alexander_matrix(trefoil_presentation())
    assert [associates(g, TRI) for g in elementary_ideal_generators(a, 0)] == [True]
    assert elementary_ideal_generators(a, 1) == [ONE]
    with pytest.raises(ValueError):
        elementary_ideal_generators(a, -1)


def test_elementary_ideals_granny_module():
    gens = elementary_ideal_generators(PolyMatrix.diag(TRI, TRI), 1)
    assert sorted(map(str, gens)) == sorted(map(str, [TRI, TRI, LaurentPoly(), LaurentPoly()]))


def test_rejects_non_knot_groups():
    with pytest.raises(NotAKnotGroup):
        check_knot_group(GroupPresentation(2, ()))
    with pytest.raises(NotAKnotGroup):
        check_knot_group(GroupPresentation(1, (Word((1, 1)),)))
    with pytest.raises(NotAKnotGroup):
        check_knot_group(GroupPresentation(2, (Word((1, 1, -2)),)))
