import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cibound.bounds import projective_bound, vector_bound
from cibound.errors import InsufficientSmoothSamples, InvalidInput, OrbitBudgetExceeded, UnsupportedField
from cibound.exactnum import GF, QQ, field_of_order
from cibound.forms import Matrix, parse_form, random_form, substitute_linear
from cibound.grouporbit import (
    GroupKind,
    GroupSpec,
    Method,
    closure,
    generators,
    group_order,
    linear_stabilizer,
    projective_stabilizer,
    random_group_element,
    stabilizer_pair,
    verify_divisibility,
)


# -- brute-force oracle ---------------------------------------------------------


def brute_force(f):
    """(|{A : f∘A = f}|, |{[A] : f∘A ∈ F*·f}|) by listing every invertible matrix."""
    F = f.field
    r = f.n + 1
    elems = [F.element(x) for x in range(F.order)]
    multiples = {f.scale(F.element(c)) for c in range(1, F.order)}
    lin = proj = 0
    for entries in itertools.product(elems, repeat=r * r):
        A = Matrix(F, [entries[i * r:(i + 1) * r] for i in range(r)])
        if A.det() == F.zero:
            continue
        g = substitute_linear(f, A)
        if g == f:
            lin += 1
        if g in multiples:
            proj += 1
    return lin, proj // (F.order - 1)


# -- groups -------------------------------------------------------------------


def test_group_orders():
    assert group_order(GroupSpec.of("GL", 2, 2)) == 6
    assert group_order(GroupSpec.of("PGL", 2, 5)) == 120
    assert group_order(GroupSpec.of("PGL", 3, 3)) == 5616
    assert group_order(GroupSpec.of("SL", 2, 3)) == 24
    assert group_order(GroupSpec.of("PGL", 3, 2)) == 168
    assert str(GroupSpec.of("pgl", 3, 9)) == "PGL_3(GF(3^2))"


@pytest.mark.parametrize(
    "kind,rank,q",
    [("GL", 2, 2), ("PGL", 2, 5), ("SL", 2, 3), ("SL", 2, 9), ("PGL", 2, 9), ("GL", 2, 4), ("PGL", 3, 3)],
)
def test_generators_close_to_the_whole_group(kind, rank, q):
    spec = GroupSpec.of(kind, rank, q)
    assert len(closure(spec)) == group_order(spec)


def test_group_spec_validation():
    with pytest.raises(UnsupportedField):
        GroupSpec(GroupKind.GL, 2, QQ)
    with pytest.raises(InvalidInput):
        GroupSpec.of("GL", 1, 5)


def test_sl_generators_have_determinant_one():
    spec = GroupSpec.of("SL", 3, 4)
    assert all(g.det() == spec.field.one for g in generators(spec))
    rng = random.Random(1)
    assert random_group_element(spec, rng).det() == spec.field.one


# -- stabilizer examples --------------------------------------------------------


def test_three_points_on_the_line():
    f = parse_form("x0^2*x1 - x0*x1^2", 1, GF(5))
    lin, proj = stabilizer_pair(f)
    assert proj.stabilizer_order == 6
    assert lin.stabilizer_order == 6
    assert vector_bound(1, 3) % 6 == 0 and projective_bound(1, 3) % 6 == 0
    ex = projective_stabilizer(f, method="exhaustive")
    assert ex.stabilizer_order == 6 and ex.method is Method.EXHAUSTIVE


def test_binary_quadric_over_gf3():
    f = parse_form("x0^2 + x1^2", 1, GF(3))
    assert linear_stabilizer(f, GroupSpec.of("GL", 2, 3)).stabilizer_order == 8
    assert brute_force(f)[0] == 8


@pytest.mark.parametrize(
    "text,q",
    [("x0^2*x1 - x0*x1^2", 3), ("x0^3 + x1^3", 5), ("x0^4 + x0*x1^3", 3), ("x0*x1", 2), ("x0^3 + x0*x1^2 + x1^3", 2)],
)
def test_agrees_with_brute_force(text, q):
    f = parse_form(text, 1, GF(q))
    lin, proj = stabilizer_pair(f)
    assert (lin.stabilizer_order, proj.stabilizer_order) == brute_force(f)


def test_brute_force_agreement_in_three_variables():
    f = parse_form("x0*x1 + x2^2", 2, GF(2))
    lin, proj = stabilizer_pair(f)
    assert (lin.stabilizer_order, proj.stabilizer_order) == brute_force(f)


def test_generators_found_fix_the_form():
    f = parse_form("x0^3 + x1^3 + x2^3", 2, GF(7))
    lin, proj = stabilizer_pair(f)
    assert proj.generators_found
    for A in proj.generators_found:
        g = substitute_linear(f, A)
        assert g.normalized() == f.normalized()
    for A in lin.generators_found:
        assert substitute_linear(f, A) == f


def test_sl_stabilizer_bfs_and_exhaustive():
    f = parse_form("x0^3 + x1^3", 1, GF(7))
    spec = GroupSpec.of("SL", 2, 7)
    bfs = linear_stabilizer(f, spec)
    ex = linear_stabilizer(f, spec, method="exhaustive")
    assert bfs.stabilizer_order == ex.stabilizer_order


def test_literal_gl_orbit_agrees():
    f = parse_form("x0^4 + 2*x0*x1^3", 1, GF(3, 2))
    spec = GroupSpec.of("GL", 2, 9)
    assert linear_stabilizer(f, spec).stabilizer_order == linear_stabilizer(f, spec, literal=True).stabilizer_order


def test_budget_is_enforced():
    f = parse_form("x0^3 + x1^3 + x2^3 + x0*x1*x2", 2, GF(5))
    with pytest.raises(OrbitBudgetExceeded):
        stabilizer_pair(f, budget=50)


def test_bad_inputs():
    f = parse_form("x0^3 + x1^3", 1, GF(5))
    with pytest.raises(InvalidInput):
        linear_stabilizer(f, GroupSpec.of("GL", 3, 5))
    with pytest.raises(InvalidInput):
        linear_stabilizer(f, GroupSpec.of("GL", 2, 7))
    with pytest.raises(InvalidInput):
        linear_stabilizer(f, GroupSpec.of("PGL", 2, 5))
    with pytest.raises(InvalidInput):
        linear_stabilizer(f.scale(0), GroupSpec.of("GL", 2, 5))
    with pytest.raises(InvalidInput):
        projective_stabilizer(f, method="guess")


def test_orbit_stabilizer_is_asserted():
    f = parse_form("x0^3 + x1^3", 1, GF(5))
    rep = projective_stabilizer(f)
    with pytest.raises(AssertionError):
        type(rep)(rep.group, f, rep.orbit_size + 1, rep.stabilizer_order)


def test_fermat_quartic_gf9_symmetries_lie_in_the_stabilizer():
    F = GF(3, 2)
    f = parse_form("x0^4 + x1^4 + x2^4", 2, F)
    roots = [F.element(c) for c in range(1, F.order) if F.pow(c, 4) == F.one]
    assert len(roots) == 4
    for perm in itertools.permutations(range(3)):
        P = Matrix(F, [[int(perm[i] == j) for j in range(3)] for i in range(3)])
        assert substitute_linear(f, P) == f
    for a, b in itertools.product(roots, repeat=2):
        D = Matrix(F, [[a, 0, 0], [0, b, 0], [0, 0, 1]])
        assert substitute_linear(f, D) == f


# -- properties ---------------------------------------------------------------

SMALL = [(1, 3, 2), (1, 3, 3), (1, 3, 4), (1, 4, 5), (1, 3, 7), (2, 3, 2), (1, 5, 3)]


@settings(max_examples=15, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10**6))
def test_exhaustive_and_bfs_agree(params, seed):
    n, d, q = params
    f = random_form(n, d, field_of_order(q), seed)
    if f.is_zero():
        return
    lin, proj = stabilizer_pair(f)
    gl = GroupSpec.of("GL", n + 1, q)
    assert linear_stabilizer(f, gl, method="exhaustive").stabilizer_order == lin.stabilizer_order
    assert projective_stabilizer(f, method="exhaustive").stabilizer_order == proj.stabilizer_order


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(SMALL), st.integers(0, 10**6))
def test_conjugation_invariance(params, seed):
    n, d, q = params
    rng = random.Random(seed)
    F = field_of_order(q)
    f = random_form(n, d, F, rng)
    if f.is_zero():
        return
    A = Matrix.random_invertible(F, n + 1, rng)
    a_lin, a_proj = stabilizer_pair(f, with_generators=False)
    b_lin, b_proj = stabilizer_pair(substitute_linear(f, A), with_generators=False)
    assert (a_lin.stabilizer_order, a_proj.stabilizer_order) == (b_lin.stabilizer_order, b_proj.stabilizer_order)


# -- verification -------------------------------------------------------------


def test_verify_binary_cubics_over_gf7():
    reports = verify_divisibility(1, 3, 7, 20, seed=0)
    assert len(reports) == 20
    tested = [r for r in reports if r.status == "tested"]
    assert len(tested) >= 10
    for r in tested:
        assert 18 % r.linear_order == 0
        assert 6 % r.projective_order == 0


def test_singular_forms_are_skipped():
    F = GF(7)
    forms = [parse_form("x0^3", 1, F), parse_form("x0^3 + x1^3", 1, F), parse_form("x0^2*x1 + x1^3", 1, F)]
    reports = verify_divisibility(1, 3, 7, 3, forms=forms)
    assert [r.status for r in reports] == ["skipped-singular", "tested", "tested"]


def test_too_few_smooth_samples():
    F = GF(7)
    forms = [parse_form("x0^3", 1, F), parse_form("x0^2*x1", 1, F), parse_form("x0^3 + x1^3", 1, F)]
    with pytest.raises(InsufficientSmoothSamples) as exc:
        verify_divisibility(1, 3, 7, 3, forms=forms)
    assert len(exc.value.reports) == 3


def test_verify_rejects_quadrics():
    with pytest.raises(InvalidInput):
        verify_divisibility(1, 2, 7, 5)


def test_workers_do_not_change_results():
    one = [r.as_dict() for r in verify_divisibility(1, 4, 5, 6, seed=3)]
    two = [r.as_dict() for r in verify_divisibility(1, 4, 5, 6, seed=3, workers=2)]
    assert one == two
