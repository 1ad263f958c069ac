import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cibound.errors import DegenerateDenominator, InvalidInput, UnsupportedSize
from cibound.exactnum import GF, QQ
from cibound.forms import FormTuple, HomogeneousForm, Matrix, parse_form, parse_tuple, random_form
from cibound.resultant import (
    IntegerPolynomial,
    Verdict,
    cache_path,
    cached_discriminant_polynomial,
    common_zero_search,
    discriminant_polynomial,
    discriminant_value,
    is_singular,
    load_discriminant_cache,
    macaulay_resultant,
    write_discriminant_cache,
)


# -- independent oracle -------------------------------------------------------


def frac_det(rows):
    """Plain Gaussian elimination over Fraction."""
    a = [[Fraction(x) for x in r] for r in rows]
    n = len(a)
    sign, det = 1, Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        det *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * det


def sylvester(f, g):
    """Sylvester determinant of binary forms given as coefficient lists from x0^d down to x1^d."""
    m, n = len(f) - 1, len(g) - 1
    size = m + n
    rows = []
    for i in range(n):
        rows.append([0] * i + list(f) + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + list(g) + [0] * (size - n - 1 - i))
    return frac_det(rows)


def binary(coeffs, field=QQ):
    d = len(coeffs) - 1
    return HomogeneousForm(1, d, field, {(d - i, i): c for i, c in enumerate(coeffs)})


def partial_coeffs(c):
    d = len(c) - 1
    fx = [(d - i) * c[i] for i in range(d)]
    fy = [i * c[i] for i in range(1, d + 1)]
    return fx, fy


# -- examples -----------------------------------------------------------------


def test_linear_forms_give_the_determinant():
    rows = [[2, 1, 0], [1, 3, 1], [0, 1, 4]]
    forms = [HomogeneousForm(2, 1, QQ, {tuple(int(k == j) for k in range(3)): r[j] for j in range(3)}) for r in rows]
    assert macaulay_resultant(forms).value == frac_det(rows)


@pytest.mark.parametrize("a,b", [(1, 1), (2, 3), (3, 2), (4, 1)])
def test_pure_powers_have_resultant_one(a, b):
    F = GF(7)
    assert macaulay_resultant([parse_form(f"x0^{a}", 1, F), parse_form(f"x1^{b}", 1, F)]) == F(1)


def test_pure_powers_in_three_variables():
    forms = parse_tuple("x0^2; x1^3; x2", 2, QQ)
    assert macaulay_resultant(forms).value == 1


def test_quadratic_discriminant_examples():
    # Res(2a x0 + b x1, b x0 + 2c x1) = 4ac - b^2
    for a, b, c in [(1, 0, 1), (1, 2, 1), (3, 5, -2)]:
        f = binary([a, b, c])
        assert discriminant_value(f).value == 4 * a * c - b * b


def test_discriminant_examples():
    assert discriminant_value(parse_form("x0^2 + x1^2 + x2^2", 2, QQ)).value == 8
    assert abs(discriminant_value(parse_form("x0*x1", 1, QQ)).value) == 1
    assert discriminant_value(parse_form("x0^2", 1, QQ)).value == 0
    with pytest.raises(InvalidInput):
        discriminant_value(parse_form("x0 + x1", 1, QQ))


def test_resultant_vanishes_on_a_common_zero():
    F = GF(11)
    forms = parse_tuple("x0^2 - x1^2; x0*x1 - x1^2", 1, F)
    assert macaulay_resultant(forms) == F(0)
    assert macaulay_resultant([HomogeneousForm.zero(1, 2, F), parse_form("x0", 1, F)]) == F(0)


def test_resultant_input_checks():
    with pytest.raises(InvalidInput):
        macaulay_resultant([parse_form("x0", 1, QQ)])
    with pytest.raises(InvalidInput):
        macaulay_resultant([])


def test_degenerate_denominator_after_retries(monkeypatch):
    import cibound.resultant as res

    monkeypatch.setattr(res, "_ratio", lambda forms, F: None)
    with pytest.raises(DegenerateDenominator):
        macaulay_resultant(parse_tuple("x0^2; x1^2", 1, GF(5)))


def test_degenerate_minor_is_handled_by_a_coordinate_change():
    # the reduced minor vanishes here for some coordinate orders; the value must not depend on it
    F = GF(3)
    forms = parse_tuple("x1^2 + x0*x2; x0^2 + x2^2; x1^2 + x2^2", 2, F)
    A = Matrix(F, [[0, 1, 0], [1, 0, 0], [0, 0, 1]])
    base = macaulay_resultant(forms)
    moved = macaulay_resultant([f.compose(A) for f in forms])
    assert moved == base * A.det() ** 8


def test_smoothness_examples():
    F3 = GF(3)
    res = is_singular(FormTuple([parse_form("x0^4 + x1^4 + x2^4", 2, F3)]))
    assert res.verdict is Verdict.SMOOTH and res.method == "resultant"
    sing = is_singular(FormTuple([parse_form("x0^3 + x1^3 + x2^3", 2, F3)]))
    assert sing.verdict is Verdict.SINGULAR
    assert sing.witness is not None
    assert is_singular(FormTuple([parse_form("x0^2 + x1^2 + x2^2", 2, GF(7))])).is_smooth


def test_search_verdict_in_small_characteristic():
    F2 = GF(2)
    res = is_singular(FormTuple([parse_form("x0*x1 + x2^2", 2, F2)]), None)
    assert res.verdict is Verdict.SMOOTH
    res = is_singular(FormTuple([parse_form("x0^2 + x1^2", 1, F2)]), None)
    assert res.verdict is Verdict.SINGULAR


def test_common_zero_search_examples():
    F = GF(3)
    pt, e = common_zero_search(FormTuple([parse_form("x0^2 + x1^2", 1, F)]), 2)
    assert e == 2
    K = pt[0].field
    assert (pt[0] * pt[0] + pt[1] * pt[1]) == K(0)
    assert common_zero_search(FormTuple([parse_form("x0^2 + x1^2", 1, F)]), 1) is None
    pt, e = common_zero_search(parse_tuple("x0 - x1; x0 - x2", 2, GF(5)), 1)
    assert e == 1 and pt[0] == pt[1] == pt[2]


# -- Sylvester oracle ---------------------------------------------------------


@pytest.mark.parametrize("seed", range(12))
def test_binary_resultant_matches_sylvester(seed):
    rng = random.Random(seed)
    da, db = rng.randint(1, 4), rng.randint(1, 4)
    f = [rng.randint(-9, 9) for _ in range(da + 1)]
    g = [rng.randint(-9, 9) for _ in range(db + 1)]
    mac = macaulay_resultant([binary(f), binary(g)]).value
    syl = sylvester(f, g)
    # the two normalizations agree up to the sign of Res(x0^a, x1^b) under Sylvester
    norm = sylvester([1] + [0] * da, [0] * db + [1])
    assert mac * norm == syl


def test_cubic_discriminant_matches_sylvester():
    rng = random.Random(7)
    poly = discriminant_polynomial(1, 3)
    ratios = set()
    for _ in range(10):
        c = [rng.randint(-9, 9) for _ in range(4)]
        fx, fy = partial_coeffs(c)
        syl = sylvester(fx, fy)
        val = poly.evaluate(c)
        assert (val == 0) == (syl == 0)
        if val:
            ratios.add(Fraction(syl, val))
    assert len(ratios) == 1
    assert abs(ratios.pop()) == 3


def test_quadratic_symbolic_discriminant():
    poly = discriminant_polynomial(1, 2)
    assert poly.content() == 1
    assert poly.format() == "4*c0*c2 - c1^2"
    rng = random.Random(3)
    ratios = set()
    for _ in range(20):
        a, b, c = (rng.randint(-30, 30) for _ in range(3))
        val = poly.evaluate([a, b, c])
        assert val == discriminant_value(binary([a, b, c])).value
        assert abs(val) == abs(b * b - 4 * a * c)
        if val:
            ratios.add(Fraction(val, b * b - 4 * a * c))
    assert ratios == {-1}


def test_symbolic_discriminant_rejects_large_sizes():
    with pytest.raises(UnsupportedSize):
        discriminant_polynomial(3, 3)


def test_ternary_quadric_discriminant_is_four_times_a_determinant():
    poly = discriminant_polynomial(2, 2)
    assert poly.content() == 1
    rng = random.Random(5)
    for _ in range(5):
        c = [rng.randint(-5, 5) for _ in range(6)]
        # x0^2, x0x1, x0x2, x1^2, x1x2, x2^2
        M = [[2 * c[0], c[1], c[2]], [c[1], 2 * c[3], c[4]], [c[2], c[4], 2 * c[5]]]
        assert abs(poly.evaluate(c)) == abs(frac_det(M) / 2)


# -- cache ----------------------------------------------------------------------


def test_cache_round_trip_is_byte_identical(tmp_path):
    poly, path = cached_discriminant_polynomial(1, 3, tmp_path)
    assert path == cache_path(1, 3, tmp_path)
    first = path.read_bytes()
    again, _ = cached_discriminant_polynomial(1, 3, tmp_path)
    assert again == poly
    write_discriminant_cache(load_discriminant_cache(path), 1, 3, tmp_path)
    assert path.read_bytes() == first


def test_cache_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv("CIBOUND_CACHE_DIR", str(tmp_path))
    _, path = cached_discriminant_polynomial(1, 2)
    assert path.parent == tmp_path and path.exists()


def test_corrupt_cache_is_rejected(tmp_path):
    bad = tmp_path / "disc_n1_d2.txt"
    bad.write_text("1 0 2\n0 1 4\n")
    with pytest.raises(InvalidInput):
        load_discriminant_cache(bad)
    bad.write_text("1 0 x\n")
    with pytest.raises(InvalidInput):
        load_discriminant_cache(bad)


def test_integer_polynomial_text_round_trip():
    p = IntegerPolynomial(3, {(1, 0, 1): 4, (0, 2, 0): -1})
    assert IntegerPolynomial.from_text(p.to_text()) == p


# -- properties ---------------------------------------------------------------

F101 = GF(101)


def random_system(rng, F, n, max_d=3):
    return [random_form(n, rng.randint(1, max_d), F, rng) for _ in range(n + 1)]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 2), st.integers(0, 10**6))
def test_covariance(n, seed):
    rng = random.Random(seed)
    forms = random_system(rng, F101, n)
    A = Matrix.random_invertible(F101, n + 1, rng)
    exponent = 1
    for f in forms:
        exponent *= f.d
    lhs = macaulay_resultant([f.compose(A) for f in forms])
    assert lhs == macaulay_resultant(forms) * A.det() ** exponent


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 2), st.integers(0, 10**6), st.integers(1, 100))
def test_scaling_one_form(n, seed, lam):
    rng = random.Random(seed)
    forms = random_system(rng, F101, n)
    i = rng.randrange(n + 1)
    exponent = 1
    for j, f in enumerate(forms):
        if j != i:
            exponent *= f.d
    scaled = list(forms)
    scaled[i] = forms[i].scale(lam)
    assert macaulay_resultant(scaled) == macaulay_resultant(forms) * F101(lam) ** exponent


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_binary_resultant_zero_iff_common_root(seed):
    rng = random.Random(seed)
    F = GF(5)
    f, g = (random_form(1, rng.randint(1, 3), F, rng) for _ in range(2))
    found = common_zero_search(FormTuple([f, g]), f.d * g.d)
    assert (macaulay_resultant([f, g]) == F(0)) == (found is not None)
