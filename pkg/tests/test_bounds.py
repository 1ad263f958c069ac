from fractions import Fraction
from math import comb, factorial, lcm

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cibound.bounds import (
    Provenance,
    check_specializations,
    curve_bound,
    divisibility_verdict,
    projective_bound,
    projective_bound_exact,
    specialized_bound,
    surface_bound,
    threefold_bound,
    vector_bound,
)
from cibound.errors import InvalidInput


def oracle_vector(n, d):
    # product over k = n - i, written from the other end
    out = 1
    for k in range(n, -1, -1):
        out *= ((d - 1) ** (k + 1) + (-1) ** k) * (d - 1) ** (n - k)
    return out


def oracle_projective(n, d):
    num, den = 1, n + 1
    for i in range(n):
        c = comb(n + 1, i)
        num *= ((-1) ** (n - i) + (d - 1) ** (n - i + 1)) * lcm(c * (d - 1) ** i, (n + 1) * (d - 1) ** n)
        den *= c
    return Fraction(num, den)


def test_vector_examples():
    assert vector_bound(1, 3) == 18
    assert vector_bound(2, 3) == 648
    assert vector_bound(2, 4) == 24192


def test_projective_examples():
    assert projective_bound(1, 3) == 6
    assert projective_bound(1, 4) == 24
    assert projective_bound(2, 3) == 432
    assert projective_bound(2, 4) == 18144
    assert projective_bound(3, 3) == 414720


def test_specialized_examples():
    assert curve_bound(3) == 432 and curve_bound(4) == 18144
    assert specialized_bound("curve", 4).provenance is Provenance.SPECIALIZED_CURVE
    assert specialized_bound("surface", 3).value == 414720
    with pytest.raises(InvalidInput):
        specialized_bound("fourfold", 3)


@pytest.mark.parametrize("n,d", [(1, 2), (2, 1), (0, 5), (2, -3)])
def test_small_degree_or_dimension_is_invalid(n, d):
    with pytest.raises(InvalidInput):
        vector_bound(n, d)
    with pytest.raises(InvalidInput):
        projective_bound(n, d)


def test_specializations_agree():
    assert list(check_specializations()) == []
    assert surface_bound(5) == projective_bound(3, 5)
    assert threefold_bound(6) == projective_bound(4, 6)


def test_integrality_grid():
    for n in range(1, 7):
        for d in range(3, 21):
            assert projective_bound_exact(n, d).denominator == 1


def test_divisibility_examples():
    klein = divisibility_verdict(168, None, 18144)
    assert klein.divides and klein.quotient == 108 and klein.prime_to_p == 168
    fermat = divisibility_verdict(6048, 3, 18144)
    assert fermat.prime_to_p == 224 and fermat.quotient == 81
    unit = divisibility_verdict(1, 5, 6)
    assert unit.divides and unit.quotient == 6
    assert not divisibility_verdict(7, 2, 6).divides
    assert divisibility_verdict(7, 2, 6).quotient is None
    with pytest.raises(InvalidInput):
        divisibility_verdict(0, 2, 6)


def test_report_dict_keys():
    assert set(divisibility_verdict(6, 5, 18).as_dict()) == {
        "observed_order", "p", "prime_to_p_part", "bound", "divides", "quotient",
    }


nd = st.tuples(st.integers(1, 6), st.integers(3, 20))


@given(nd)
def test_matches_independent_formulas(params):
    n, d = params
    assert vector_bound(n, d) == oracle_vector(n, d)
    assert projective_bound_exact(n, d) == oracle_projective(n, d)


@given(nd)
def test_positive(params):
    n, d = params
    assert vector_bound(n, d) > 0 and projective_bound(n, d) > 0


@given(st.integers(1, 6), st.integers(3, 19))
def test_vector_bound_grows_with_degree(n, d):
    assert vector_bound(n, d) < vector_bound(n, d + 1)


# The lcm factors of the projective bound can shrink from d to d+1, e.g.
# lcm(3, 2(d-1)) is 102 at d = 18 and 36 at d = 19 for surfaces.
PROJECTIVE_DROPS = {(3, 18), (5, 10), (5, 15), (6, 15)}


def test_projective_bound_grows_except_at_lcm_drops():
    drops = {
        (n, d) for n in range(1, 7) for d in range(3, 20)
        if projective_bound(n, d) >= projective_bound(n, d + 1)
    }
    assert drops == PROJECTIVE_DROPS


@given(nd)
def test_fermat_symmetries_divide_the_bounds(params):
    # diagonal roots of unity and coordinate permutations of x0^d + ... + xn^d
    n, d = params
    assert vector_bound(n, d) % (d ** (n + 1) * factorial(n + 1)) == 0
    assert projective_bound(n, d) % (d**n * factorial(n + 1)) == 0
