"""Infinitesimal projective symmetries of complete intersections.

A matrix A gives the derivation D_A = Σ A[i][m] x_m ∂/∂x_i on forms.  We
solve for all A such that each D_A f_j lies in the span of the f_l that
share f_j's degree; the scalars always qualify (Euler's identity), so the
projective dimension is the solution dimension minus one.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .errors import CharMismatch, InvalidInput
from .exactnum import Field
from .forms import FormTuple, HomogeneousForm, Matrix, monomial_index


@dataclass
class TangentReport:
    solution_dimension: int
    projective_dimension: int
    basis: list = field(default_factory=list)

    def as_dict(self):
        return {
            "solution_dimension": self.solution_dimension,
            "projective_dimension": self.projective_dimension,
            "basis": [A.tolist() for A in self.basis],
        }


def derivation(f: HomogeneousForm, A) -> HomogeneousForm:
    """D_A f = Σ_{i,m} A[i][m] x_m ∂f/∂x_i."""
    F = f.field
    A = A.rows if isinstance(A, Matrix) else A
    r = f.n + 1
    out = {}
    for mono, c in f.coeffs.items():
        for i in range(r):
            if not mono[i]:
                continue
            ci = F.mul(c, F.from_int(mono[i]))
            if ci == 0:
                continue
            for m in range(r):
                a = F.coerce(A[i][m])
                if a == 0:
                    continue
                e = list(mono)
                e[i] -= 1
                e[m] += 1
                e = tuple(e)
                out[e] = F.add(out.get(e, F.zero), F.mul(a, ci))
    return HomogeneousForm._raw(f.n, f.d, F, out)


def _as_tuple(t) -> FormTuple:
    if isinstance(t, HomogeneousForm):
        return FormTuple([t])
    return t if isinstance(t, FormTuple) else FormTuple(list(t))


def _system(t: FormTuple):
    """Rows of the tangency system; unknowns are the A entries then the λ_jl."""
    F = t.field
    r = t.n + 1
    nA = r * r
    lam = [(j, l) for j in range(t.k) for l in range(t.k) if t[j].d == t[l].d]
    lam_col = {jl: nA + s for s, jl in enumerate(lam)}
    ncols = nA + len(lam)
    rows = []
    for j, f in enumerate(t):
        idx = monomial_index(f.n, f.d)
        block = [[F.zero] * ncols for _ in idx]
        for mono, c in f.coeffs.items():
            for i in range(r):
                if not mono[i]:
                    continue
                ci = F.mul(c, F.from_int(mono[i]))
                if ci == 0:
                    continue
                for m in range(r):
                    e = list(mono)
                    e[i] -= 1
                    e[m] += 1
                    row = block[idx[tuple(e)]]
                    col = i * r + m
                    row[col] = F.add(row[col], ci)
        for l, g in enumerate(t):
            if (j, l) not in lam_col:
                continue
            col = lam_col[(j, l)]
            for mono, c in g.coeffs.items():
                row = block[idx[mono]]
                row[col] = F.sub(row[col], c)
        rows.extend(row for row in block if any(x != 0 for x in row))
    return rows, ncols, nA


def infinitesimal_symmetries(t) -> TangentReport:
    """Matrices A with D_A f_j in the span of the same-degree f_l, by exact elimination."""
    t = _as_tuple(t)
    if any(f.is_zero() for f in t):
        raise InvalidInput("forms must be nonzero")
    F = t.field
    r = t.n + 1
    rows, ncols, nA = _system(t)
    null = linalg.nullspace(F, rows, ncols) if rows else [
        [F.one if i == c else F.zero for i in range(ncols)] for c in range(ncols)
    ]
    projected = [v[:nA] for v in null]
    red, _ = linalg.rref(F, projected) if projected else ([], [])
    basis = [Matrix._raw(F, [v[i * r:(i + 1) * r] for i in range(r)]) for v in red]
    ident = [F.one if i % (r + 1) == 0 else F.zero for i in range(nA)]
    assert linalg.rank(F, red + [ident]) == len(red), "the identity must solve the tangency system"
    return TangentReport(len(red), len(red) - 1, basis)


def is_tangent(t, A) -> bool:
    """Does D_A f_j lie in the span of the same-degree f_l for every j?"""
    t = _as_tuple(t)
    F = t.field
    for f in t:
        same = [g for g in t if g.d == f.d]
        target = derivation(f, A)
        cols = [g.dense() for g in same]
        if linalg.rank(F, cols + [target.dense()]) != linalg.rank(F, cols):
            return False
    return True


def exceptional_quadric_pair(r: int, a, b, field: Field) -> FormTuple:
    """The pair Σ_{i<r} x_i x_{i+r}, Σ a_i x_i x_{i+r} + Σ b_i x_i² in 2r variables (char 2)."""
    if field.characteristic != 2:
        raise CharMismatch(f"the quadric-pair family lives in characteristic 2, not {field.characteristic}")
    if r < 1:
        raise InvalidInput("r must be >= 1")
    n = 2 * r - 1
    a, b = list(a), list(b)
    if len(a) != r or len(b) != n + 1:
        raise InvalidInput(f"need len(a) == {r} and len(b) == {n + 1}")
    q1, q2 = {}, {}
    for i in range(r):
        e = [0] * (n + 1)
        e[i] = e[i + r] = 1
        q1[tuple(e)] = 1
        q2[tuple(e)] = a[i]
    for i in range(n + 1):
        e = [0] * (n + 1)
        e[i] = 2
        q2[tuple(e)] = b[i]
    return FormTuple([HomogeneousForm(n, 2, field, q1), HomogeneousForm(n, 2, field, q2)])


def diagonal_fields(r: int, field: Field) -> list[Matrix]:
    """The r fields x_i ∂_i + x_{i+r} ∂_{i+r}, i < r, as diagonal matrices."""
    out = []
    for i in range(r):
        rows = [[field.zero] * (2 * r) for _ in range(2 * r)]
        rows[i][i] = rows[i + r][i + r] = field.one
        out.append(Matrix._raw(field, rows))
    return out


def quadric_pair_is_smooth(a, b, field: Field) -> bool:
    """Closed-form smoothness test for :func:`exceptional_quadric_pair`.

    In characteristic 2 both gradients are linear in the paired
    coordinates, and they become dependent exactly on points supported
    where the a_i agree; such points lie on the pair iff two a_i coincide
    or some b_j vanishes.
    """
    if field.characteristic != 2:
        raise CharMismatch("the quadric-pair family lives in characteristic 2")
    a = [field.coerce(x) for x in a]
    b = [field.coerce(x) for x in b]
    return len(set(a)) == len(a) and all(x != 0 for x in b)
