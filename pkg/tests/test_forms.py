import random
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cibound.errors import FieldMismatch, FormSyntaxError, InhomogeneousError, InvalidInput, UnsupportedField
from cibound.exactnum import GF, QQ
from cibound.forms import (
    FormTuple,
    HomogeneousForm,
    Matrix,
    evaluate,
    format_form,
    jacobian_minors,
    jacobian_rank_at,
    monomials,
    parse_form,
    parse_tuple,
    partial_derivative,
    random_form,
    substitute_linear,
)

GOLDEN = Path(__file__).parent / "golden"
SMALL_FIELDS = [GF(2), GF(3), GF(5), GF(7), GF(2, 2), GF(3, 2)]


def x(i, n, F):
    e = [0] * (n + 1)
    e[i] = 1
    return HomogeneousForm(n, 1, F, {tuple(e): 1})


def test_evaluate_examples():
    F5, F7 = GF(5), GF(7)
    assert evaluate(HomogeneousForm.zero(2, 3, F5), [1, 2, 3]) == F5(0)
    assert evaluate(parse_form("x0*x1 - x2^2", 2, F5), [1, 1, 1]) == F5(0)
    assert evaluate(parse_form("x0^3 + x1^3 + x2^3", 2, F7), [1, 1, 1]) == F7(3)


def test_evaluate_over_an_extension_and_mismatch():
    F, K = GF(3), GF(3, 2)
    f = parse_form("x0^2 + x1^2", 1, F)
    roots = [r for r in range(K.order) if K.add(K.mul(r, r), 1) == 0]
    assert evaluate(f, [K(1), K.element(roots[0])]) == K(0)
    with pytest.raises(FieldMismatch):
        evaluate(f, [GF(5)(1), GF(5)(2)])


def test_partial_derivative_examples():
    p = 5
    F = GF(p)
    assert partial_derivative(parse_form("x0^5", 1, F), 0).is_zero()
    assert partial_derivative(parse_form("x0^2*x1", 1, QQ), 1) == parse_form("x0^2", 1, QQ)
    assert partial_derivative(parse_form("x0^3*x1", 1, QQ), 0) == parse_form("3*x0^2*x1", 1, QQ)


def test_substitute_linear_examples():
    f = parse_form("x0^2 + 3*x0*x1 - x1^2", 1, QQ)
    assert substitute_linear(f, Matrix.identity(QQ, 2)) == f
    swap = [[0, 1], [1, 0]]
    assert substitute_linear(parse_form("x0^2", 1, QQ), swap) == parse_form("x1^2", 1, QQ)
    assert substitute_linear(parse_form("x0*x1", 1, QQ), [[1, 1], [0, 1]]) == parse_form("x0*x1 + x1^2", 1, QQ)


def test_substitute_linear_rejects_other_fields():
    f = parse_form("x0*x1", 1, GF(5))
    with pytest.raises(FieldMismatch):
        substitute_linear(f, Matrix(GF(7), [[1, 0], [0, 1]]))


def test_jacobian_rank_examples():
    F7 = GF(7)
    lin = FormTuple([parse_form("x0 + 2*x1", 1, F7)])
    assert jacobian_rank_at(lin, [1, 0]) == 1
    fermat = FormTuple([parse_form("x0^3 + x1^3 + x2^3", 2, F7)])
    assert jacobian_rank_at(fermat, [1, -1, 0]) == 1
    pair = parse_tuple("x0^2; x1^2", 2, F7)
    assert jacobian_rank_at(pair, [0, 0, 1]) == 0
    with pytest.raises(InvalidInput):
        jacobian_rank_at(pair, [0, 0, 0])


def test_parse_examples():
    F = GF(7)
    conic = parse_form("x0^2 + x1^2 + x2^2", None, F)
    assert conic.n == 2 and conic.d == 2 and len(conic.coeffs) == 3
    klein = parse_form("x0^3*x1 + x1^3*x2 + x2^3*x0", None, F)
    assert klein.d == 4 and klein.coefficient((1, 0, 3)) == F(1)
    with pytest.raises(InhomogeneousError) as exc:
        parse_form("x0 + x1^2", None, F)
    assert exc.value.degrees == [1, 2]


@pytest.mark.parametrize(
    "text,pos",
    [("x0^2 + ", 7), ("x0^^2", 3), ("x0 $ x1", 3), ("2*", 2)],
)
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(FormSyntaxError) as exc:
        parse_form(text, 1, GF(5))
    assert exc.value.position == pos
    assert isinstance(exc.value, SyntaxError)


def test_parse_coefficients():
    assert parse_form("3/2*x0 - 1/3*x1", 1, QQ).coefficient((1, 0)).value == Fraction(3, 2)
    F = GF(3, 2)
    f = parse_form("(a + 1)*x0^2 + (2*a)*x1^2", 1, F)
    assert f.coeffs[(2, 0)] == F.parse("a + 1")
    assert parse_form(format_form(f), 1, F) == f


def test_format_emits_graded_lex_with_signs():
    f = parse_form("x1^2 - x0*x1 + 6*x0^2", 1, GF(7))
    assert format_form(f) == "-x0^2 - x0*x1 + x1^2"
    assert format_form(HomogeneousForm.zero(1, 2, GF(7))) == "0"


def test_random_form_contract_and_golden():
    F = GF(5)
    f = random_form(2, 3, F, 42)
    assert f.d == 3 and f.n == 2
    assert random_form(2, 3, F, 42) == f
    golden = (GOLDEN / "random_form_n2_d3_gf5_seed42.txt").read_text().strip()
    assert format_form(f) == golden
    with pytest.raises(UnsupportedField):
        random_form(1, 2, QQ, 0)


def test_monomial_order_is_graded_lex():
    assert monomials(2, 2) == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


def test_jacobian_minors_of_a_single_form_are_its_partials():
    f = parse_form("x0^3 + 2*x0*x1*x2 + x2^3", 2, GF(7))
    assert jacobian_minors(FormTuple([f])) == list(f.partials())


# -- properties ---------------------------------------------------------------

form_params = st.tuples(
    st.sampled_from(SMALL_FIELDS), st.integers(1, 3), st.integers(1, 4), st.integers(0, 10**6)
)


def _form_and_matrices(params):
    F, n, d, seed = params
    rng = random.Random(seed)
    f = random_form(n, d, F, rng)
    A = Matrix.random_invertible(F, n + 1, rng)
    B = Matrix.random_invertible(F, n + 1, rng)
    return f, A, B, rng


@settings(max_examples=60, deadline=None)
@given(form_params)
def test_right_action(params):
    f, A, B, _ = _form_and_matrices(params)
    assert substitute_linear(substitute_linear(f, A), B) == substitute_linear(f, A @ B)


@settings(max_examples=60, deadline=None)
@given(form_params)
def test_euler_identity(params):
    f, _, _, _ = _form_and_matrices(params)
    F = f.field
    if f.d % F.characteristic == 0:
        return
    total = HomogeneousForm.zero(f.n, f.d, F)
    for i, g in enumerate(f.partials()):
        total = total + x(i, f.n, F) * g
    assert total == f.scale(f.d)


@settings(max_examples=60, deadline=None)
@given(form_params)
def test_evaluate_commutes_with_substitution(params):
    f, A, _, rng = _form_and_matrices(params)
    F = f.field
    point = [F.element(F.random(rng)) for _ in range(f.n + 1)]
    image = A.apply(point)
    assert evaluate(substitute_linear(f, A), point) == evaluate(f, image)


@settings(max_examples=40, deadline=None)
@given(form_params)
def test_chain_rule(params):
    f, A, _, _ = _form_and_matrices(params)
    F = f.field
    fa = substitute_linear(f, A)
    for j in range(f.n + 1):
        rhs = HomogeneousForm.zero(f.n, max(f.d - 1, 0), F)
        for i, g in enumerate(f.partials()):
            rhs = rhs + substitute_linear(g, A).scale(A[i, j])
        assert partial_derivative(fa, j) == rhs


@settings(max_examples=60, deadline=None)
@given(form_params)
def test_parse_format_roundtrip(params):
    f, _, _, _ = _form_and_matrices(params)
    assert parse_form(format_form(f), f.n, f.field, f.d) == f
