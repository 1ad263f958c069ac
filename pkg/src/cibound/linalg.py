"""Exact dense linear algebra on lists of raw field values.

Determinants over QQ use fraction-free Bareiss elimination on integer
rows (denominators are cleared per row first); finite fields use plain
Gaussian elimination.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

from .exactnum import PrimeField


def _det_bareiss(rows: list[list[int]]) -> int:
    n = len(rows)
    a = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _det_rational(rows) -> Fraction:
    scale = Fraction(1)
    int_rows = []
    for r in rows:
        den = lcm(*(Fraction(x).denominator for x in r)) if r else 1
        scale /= den
        int_rows.append([int(Fraction(x) * den) for x in r])
    return scale * _det_bareiss(int_rows)


def _det_mod_p(rows, p):
    a = [list(r) for r in rows]
    n = len(a)
    det = 1
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        akk = a[k][k]
        det = det * akk % p
        inv = pow(akk, p - 2, p)
        row_k = a[k]
        for i in range(k + 1, n):
            f = a[i][k] * inv % p
            if f:
                row_i = a[i]
                for j in range(k, n):
                    row_i[j] = (row_i[j] - f * row_k[j]) % p
    return det % p


def _det_generic(F, rows):
    a = [list(r) for r in rows]
    n = len(a)
    det = F.one
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return F.zero
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = F.neg(det)
        akk = a[k][k]
        det = F.mul(det, akk)
        inv = F.inv(akk)
        for i in range(k + 1, n):
            f = F.mul(a[i][k], inv)
            if f != 0:
                row_i, row_k = a[i], a[k]
                for j in range(k, n):
                    if row_k[j] != 0:
                        row_i[j] = F.sub(row_i[j], F.mul(f, row_k[j]))
    return det


def det(F, rows):
    """Determinant of a square matrix given as rows of raw values of F."""
    n = len(rows)
    if n == 0:
        return F.one
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if F.characteristic == 0:
        return _det_rational(rows)
    if isinstance(F, PrimeField):
        return _det_mod_p(rows, F.p)
    return _det_generic(F, rows)


def rref(F, rows):
    """Reduced row echelon form.  Returns (reduced rows, pivot columns)."""
    a = [list(r) for r in rows]
    if not a:
        return a, []
    ncols = len(a[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = F.inv(a[r][c])
        a[r] = [F.mul(inv, x) for x in a[r]]
        row_r = a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [F.sub(x, F.mul(f, y)) if y != 0 else x for x, y in zip(a[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(F, rows) -> int:
    if isinstance(F, PrimeField):
        return _rank_mod_p(rows, F.p)
    return len(rref(F, rows)[1])


def _rank_mod_p(rows, p):
    a = [list(r) for r in rows]
    if not a:
        return 0
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] % p), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        row_r = a[r]
        for i in range(r + 1, len(a)):
            f = a[i][c] * inv % p
            if f:
                row_i = a[i]
                for j in range(c, ncols):
                    row_i[j] = (row_i[j] - f * row_r[j]) % p
        r += 1
        if r == len(a):
            break
    return r


def nullspace(F, rows, ncols: int | None = None):
    """Basis of {v : rows · v = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(rows[0])
    red, pivots = rref(F, rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for fc in free:
        v = [F.zero] * ncols
        v[fc] = F.one
        for row, pc in zip(red, pivots):
            if row[fc] != 0:
                v[pc] = F.neg(row[fc])
        basis.append(v)
    return basis


def matmul(F, A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = F.zero
            for t in range(k):
                if A[i][t] != 0 and B[t][j] != 0:
                    acc = F.add(acc, F.mul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def inverse(F, rows):
    """Inverse of a square matrix via RREF of [A | I]; ValueError if singular."""
    n = len(rows)
    aug = [list(r) + [F.one if i == j else F.zero for j in range(n)] for i, r in enumerate(rows)]
    red, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [r[n:] for r in red[:n]]
