"""Macaulay resultants, discriminants and smoothness decisions.

The resultant of n+1 forms in n+1 variables is computed with Macaulay's
two-determinant formula ``det(M) / det(M')``.  When the reduced minor M'
is singular the forms are moved by a random invertible A and the factor
``det(A)^(d_0···d_n)`` is divided back out.
"""

from __future__ import annotations

import enum
import os
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, prod
from pathlib import Path

from . import linalg
from . import univariate as uv
from .errors import (
    DegenerateDenominator,
    FieldMismatch,
    InvalidInput,
    UnsupportedField,
    UnsupportedSize,
)
from .exactnum import QQ, Field, FieldElement, extension, restrict
from .forms import (
    FormTuple,
    HomogeneousForm,
    Matrix,
    jacobian_minors,
    monomial_index,
    monomials,
)

MAX_RETRIES = 8
# Retries over fields smaller than this use matrices over an extension.
RETRY_FIELD_FLOOR = 64


@dataclass
class MacaulayMatrix:
    degree: int  # critical degree D = sum(d_i) - n
    columns: tuple  # all degree-D monomials, graded-lex
    rows: list  # (monomial, form index) per row, same order as columns
    matrix: list  # square, raw values
    reduced: list  # indices of monomials divisible by x_i^d_i for >= 2 indices i

    def reduced_matrix(self):
        return [[self.matrix[i][j] for j in self.reduced] for i in self.reduced]


def _check_square_system(forms):
    forms = list(forms)
    if not forms:
        raise InvalidInput("no forms given")
    F, n = forms[0].field, forms[0].n
    for f in forms:
        if f.field != F:
            raise FieldMismatch(f"forms over {F} and {f.field}")
        if f.n != n:
            raise InvalidInput("forms must share n")
        if f.d < 1:
            raise InvalidInput("resultant needs degrees >= 1")
    if len(forms) != n + 1:
        raise InvalidInput(f"resultant needs n+1 = {n + 1} forms, got {len(forms)}")
    return forms, F, n


def macaulay_matrix(forms) -> MacaulayMatrix:
    forms, F, n = _check_square_system(forms)
    degs = [f.d for f in forms]
    D = sum(degs) - n
    cols = monomials(n, D)
    index = monomial_index(n, D)
    rows, matrix, reduced = [], [], []
    for ci, alpha in enumerate(cols):
        divisible = [i for i in range(n + 1) if alpha[i] >= degs[i]]
        i = divisible[0]
        if len(divisible) >= 2:
            reduced.append(ci)
        shift = alpha[:i] + (alpha[i] - degs[i],) + alpha[i + 1:]
        row = [F.zero] * len(cols)
        for mono, c in forms[i].coeffs.items():
            row[index[tuple(a + b for a, b in zip(mono, shift))]] = c
        rows.append((shift, i))
        matrix.append(row)
    return MacaulayMatrix(D, cols, rows, matrix, reduced)


def _ratio(forms, F):
    mm = macaulay_matrix(forms)
    den = linalg.det(F, mm.reduced_matrix())
    if den == 0:
        return None
    return F.div(linalg.det(F, mm.matrix), den)


def macaulay_resultant(forms, seed: int = 0) -> FieldElement:
    """Res(F_0, ..., F_n), normalised so that Res(x_0^d_0, ..., x_n^d_n) = 1."""
    if isinstance(forms, FormTuple):
        forms = list(forms)
    forms, F, n = _check_square_system(forms)
    if any(f.is_zero() for f in forms):
        return FieldElement(F, F.zero)
    r = _ratio(forms, F)
    if r is not None:
        return FieldElement(F, r)
    exponent = prod(f.d for f in forms)
    rng = random.Random(seed)
    K = F
    if F.is_finite and F.order < RETRY_FIELD_FLOOR:
        e = 1
        while F.order**e < RETRY_FIELD_FLOOR:
            e += 1
        K = extension(F, e)
    lifted = [f.change_field(K) for f in forms]
    for _ in range(MAX_RETRIES):
        A = Matrix.random_invertible(K, n + 1, rng)
        moved = [f.compose(A) for f in lifted]
        r = _ratio(moved, K)
        if r is None:
            continue
        r = K.div(r, K.pow(A.det(), exponent))
        return FieldElement(F, restrict(F, K, r))
    raise DegenerateDenominator(
        f"det(M') vanished for the input and {MAX_RETRIES} random changes of coordinates"
    )


def discriminant_value(f: HomogeneousForm) -> FieldElement:
    """Res(∂f/∂x_0, ..., ∂f/∂x_n); not normalised by any power of d."""
    if f.d < 2:
        raise InvalidInput("discriminant needs degree >= 2")
    return macaulay_resultant(list(f.partials()))


# ---------------------------------------------------------------------------
# point search


def _split_by_last(coeffs: dict, n: int):
    """Group terms by the exponent of x_n: {k: [(c, prefix exponents)]}."""
    out = {}
    for mono, c in coeffs.items():
        out.setdefault(mono[n], []).append((c, mono[:n]))
    return out


def _search_field(forms, K: Field, n: int):
    """First zero of all ``forms`` (over K) in ascending canonical order of P^n(K)."""
    if n == 0:
        return None
    groups = [_split_by_last(f.coeffs, n) for f in forms]
    degs = [f.d for f in forms]
    # (0 : ... : 0 : 1)
    if all(d not in g for g, d in zip(groups, degs)):
        return (0,) * n + (1,)
    maxdeg = max(degs)
    elems = list(K.elements())
    add, mul = K.add, K.mul
    for lead in range(n - 1, -1, -1):
        for rest in product(elems, repeat=n - 1 - lead):
            prefix = (0,) * lead + (1,) + rest
            powers = []
            for x in prefix:
                pw = [1]
                for _ in range(maxdeg):
                    pw.append(mul(pw[-1], x))
                powers.append(pw)
            g = None
            for grp, d in zip(groups, degs):
                u = [0] * (d + 1)
                for k, terms in grp.items():
                    acc = 0
                    for c, pe in terms:
                        v = c
                        for j, e in enumerate(pe):
                            if e:
                                v = mul(v, powers[j][e])
                                if v == 0:
                                    break
                        if v:
                            acc = add(acc, v)
                    u[k] = acc
                uv.trim(K, u)
                if not u:
                    continue
                g = uv.monic(K, u) if g is None else uv.gcd(K, g, u)
                if len(g) == 1:
                    break
            if g is None:
                return prefix + (0,)
            if len(g) == 1:
                continue
            rts = uv.roots(K, g)
            if rts:
                return prefix + (rts[0],)
    return None


def common_zero_search(t, max_ext_degree: int):
    """First common projective zero over GF(q^e), e = 1..max_ext_degree.

    Returns ``(point, e)`` with coordinates as elements of GF(q^e), or None.
    Points are visited with e ascending and, within one field, in ascending
    lexicographic order of their representatives with first nonzero
    coordinate 1.
    """
    forms = list(t) if not isinstance(t, HomogeneousForm) else [t]
    F = forms[0].field
    n = forms[0].n
    if not F.is_finite:
        raise UnsupportedField("point search needs a finite field")
    for f in forms:
        if f.field != F:
            raise FieldMismatch(f"forms over {F} and {f.field}")
    forms = [f for f in forms if not f.is_zero()]
    if any(f.d == 0 for f in forms):
        return None
    for e in range(1, max_ext_degree + 1):
        K = extension(F, e)
        lifted = [f.change_field(K) for f in forms]
        if not lifted:
            pt = (0,) * n + (1,)
        else:
            pt = _search_field(lifted, K, n)
        if pt is not None:
            return tuple(FieldElement(K, x) for x in pt), e
    return None


# ---------------------------------------------------------------------------
# smoothness


class Verdict(str, enum.Enum):
    SMOOTH = "smooth"
    SINGULAR = "singular"
    INCONCLUSIVE = "inconclusive"


@dataclass
class SingularityResult:
    verdict: Verdict
    method: str  # "resultant", "search" or "linear"
    witness: tuple | None = None
    extension_degree: int | None = None
    discriminant: FieldElement | None = None
    bezout_bound: int | None = None
    searched_up_to: int | None = None
    notes: list = field(default_factory=list)

    @property
    def is_smooth(self):
        return self.verdict is Verdict.SMOOTH

    @property
    def is_singular(self):
        return self.verdict is Verdict.SINGULAR

    def as_dict(self):
        return {
            "verdict": self.verdict.value,
            "method": self.method,
            "witness": None if self.witness is None else [str(x) for x in self.witness],
            "witness_field": None if self.witness is None else str(self.witness[0].field),
            "extension_degree": self.extension_degree,
            "discriminant": None if self.discriminant is None else str(self.discriminant),
            "bezout_bound": self.bezout_bound,
            "searched_up_to": self.searched_up_to,
            "notes": list(self.notes),
        }


def singular_locus_equations(t: FormTuple):
    """f_1..f_k together with every k×k minor of the Jacobian."""
    eqs = list(t) + jacobian_minors(t)
    return [g for g in eqs if not g.is_zero()]


def bezout_bound(equations, n: int) -> int:
    """Product of the n largest degrees; bounds the field degree of any point of a finite zero set."""
    degs = sorted((g.d for g in equations if not g.is_zero()), reverse=True)
    if any(d == 0 for d in degs):
        return 0
    return prod(degs[:n]) if degs else 1


def is_singular(t, max_ext_degree: int | None = 4) -> SingularityResult:
    """Decide whether V(t) is singular.

    Hypersurfaces with char ∤ d (or char 0) are decided exactly by the
    discriminant.  Otherwise a nonzero discriminant still proves
    smoothness; failing that, points of the singular locus are searched
    over GF(q^e) for e <= max_ext_degree, and a negative search counts as
    Smooth only when it covers the Bézout bound of the singular-locus
    equations.  ``max_ext_degree=None`` searches up to that bound, so the
    verdict is never Inconclusive.
    """
    if isinstance(t, HomogeneousForm):
        t = FormTuple([t])
    if any(f.is_zero() for f in t):
        raise InvalidInput("zero forms lie in the discriminant locus by definition")
    F = t.field
    notes = []
    disc = None
    if t.k == 1:
        f = t[0]
        if f.d == 1:
            return SingularityResult(Verdict.SMOOTH, "linear")
        p = F.characteristic
        try:
            disc = discriminant_value(f)
        except DegenerateDenominator as exc:
            notes.append(f"resultant unavailable: {exc}")
        if disc is not None:
            if disc != 0:
                return SingularityResult(Verdict.SMOOTH, "resultant", discriminant=disc)
            if p == 0 or f.d % p:
                return SingularityResult(Verdict.SINGULAR, "resultant", discriminant=disc)
            notes.append("gradient forms share a zero and char | d: searching for singular points")
    if not F.is_finite:
        raise UnsupportedField("point search over QQ is not supported")
    eqs = singular_locus_equations(t)
    bound = bezout_bound(eqs, t.n)
    if max_ext_degree is None:
        max_ext_degree = max(bound, 1)
    hit = common_zero_search(eqs, max_ext_degree) if eqs else ((FieldElement(F, 0),) * t.n + (FieldElement(F, 1),), 1)
    if hit is not None:
        point, e = hit
        return SingularityResult(
            Verdict.SINGULAR, "search", witness=point, extension_degree=e,
            discriminant=disc, bezout_bound=bound, searched_up_to=e, notes=notes,
        )
    verdict = Verdict.SMOOTH if max_ext_degree >= bound else Verdict.INCONCLUSIVE
    return SingularityResult(
        verdict, "search", discriminant=disc, bezout_bound=bound,
        searched_up_to=max_ext_degree, notes=notes,
    )


# ---------------------------------------------------------------------------
# symbolic discriminant

SUPPORTED_SYMBOLIC = {(1, 2), (1, 3), (1, 4), (2, 2)}
_PRIME = (1 << 61) - 1


@dataclass
class IntegerPolynomial:
    """Integer polynomial in the coefficient variables c_0..c_{N-1}."""

    nvars: int
    coeffs: dict  # exponent tuple -> nonzero int

    def terms(self):
        """Graded-lex order (total degree, then descending lex)."""
        return sorted(self.coeffs.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)

    def evaluate(self, values):
        total = 0
        for mono, c in self.coeffs.items():
            v = c
            for x, e in zip(values, mono):
                if e:
                    v *= x**e
            total += v
        return total

    def content(self) -> int:
        g = 0
        for c in self.coeffs.values():
            g = gcd(g, c)
        return g

    def leading_coefficient(self):
        return self.terms()[0][1] if self.coeffs else 0

    def is_normalized(self) -> bool:
        return bool(self.coeffs) and self.content() == 1 and self.leading_coefficient() > 0

    def normalized(self) -> IntegerPolynomial:
        g = self.content()
        if g == 0:
            return self
        if self.leading_coefficient() < 0:
            g = -g
        return IntegerPolynomial(self.nvars, {m: c // g for m, c in self.coeffs.items()})

    def reduce_mod(self, p: int) -> IntegerPolynomial:
        return IntegerPolynomial(self.nvars, {m: c % p for m, c in self.coeffs.items() if c % p})

    def to_text(self) -> str:
        return "".join(" ".join(map(str, m)) + f" {c}\n" for m, c in self.terms())

    @classmethod
    def from_text(cls, text: str) -> IntegerPolynomial:
        coeffs = {}
        nvars = None
        for lineno, line in enumerate(text.splitlines(), 1):
            if not line.strip():
                continue
            parts = line.split()
            try:
                *exps, c = [int(x) for x in parts]
            except ValueError as exc:
                raise InvalidInput(f"line {lineno}: expected integers") from exc
            if nvars is None:
                nvars = len(exps)
            elif len(exps) != nvars:
                raise InvalidInput(f"line {lineno}: {len(exps)} exponents, expected {nvars}")
            if c == 0 or tuple(exps) in coeffs:
                raise InvalidInput(f"line {lineno}: zero or repeated term")
            coeffs[tuple(exps)] = c
        return cls(nvars or 0, coeffs)

    def format(self, names=None) -> str:
        names = names or [f"c{i}" for i in range(self.nvars)]
        out = []
        for k, (mono, c) in enumerate(self.terms()):
            mon = "*".join(n if e == 1 else f"{n}^{e}" for n, e in zip(names, mono) if e)
            a = abs(c)
            body = mon if a == 1 and mon else (f"{a}*{mon}" if mon else str(a))
            if k == 0:
                out.append(("-" if c < 0 else "") + body)
            else:
                out.append((" - " if c < 0 else " + ") + body)
        return "".join(out) or "0"


def _solve_mod(rows, rhs, ncols, p):
    """Solve an overdetermined consistent system mod p; None if rank-deficient."""
    a = [list(r) + [b] for r, b in zip(rows, rhs)]
    piv_row = 0
    where = [-1] * ncols
    for c in range(ncols):
        piv = next((i for i in range(piv_row, len(a)) if a[i][c]), None)
        if piv is None:
            return None
        a[piv_row], a[piv] = a[piv], a[piv_row]
        inv = pow(a[piv_row][c], p - 2, p)
        a[piv_row] = [x * inv % p for x in a[piv_row]]
        row_r = a[piv_row]
        for i in range(len(a)):
            if i != piv_row and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], row_r)]
        where[c] = piv_row
        piv_row += 1
    if any(a[i][-1] for i in range(piv_row, len(a))):
        raise ArithmeticError("interpolation system is inconsistent")
    return [a[where[c]][-1] for c in range(ncols)]


def discriminant_polynomial(n: int, d: int, seed: int = 20240607) -> IntegerPolynomial:
    """Content-1 integer discriminant in the coefficients of a degree-d form in n+1 variables.

    Coefficient variables follow the graded-lex order of the monomials.
    Found by interpolating :func:`discriminant_value` at random integer
    coefficient vectors (solved mod a 61-bit prime, lifted symmetrically and
    checked exactly at fresh points).
    """
    if (n, d) not in SUPPORTED_SYMBOLIC:
        raise UnsupportedSize(f"symbolic discriminant supported only for (n, d) in {sorted(SUPPORTED_SYMBOLIC)}")
    basis = monomials(n, d)
    N = len(basis)
    delta = (n + 1) * (d - 1) ** n
    unknowns = monomials(N - 1, delta)
    rng = random.Random(seed)

    def sample():
        vals = [rng.randint(-40, 40) for _ in range(N)]
        f = HomogeneousForm._raw(n, d, QQ, {m: Fraction(v) for m, v in zip(basis, vals)})
        r = discriminant_value(f).value
        assert r.denominator == 1
        return vals, int(r)

    def mono_val(vals, mono, p=None):
        v = 1
        for x, e in zip(vals, mono):
            if e:
                v *= x**e
        return v % p if p else v

    samples = [sample() for _ in range(len(unknowns) + 12)]
    rows = [[mono_val(v, m, _PRIME) for m in unknowns] for v, _ in samples]
    rhs = [r % _PRIME for _, r in samples]
    sol = _solve_mod(rows, rhs, len(unknowns), _PRIME)
    if sol is None:
        raise ArithmeticError("interpolation points are degenerate")
    half = _PRIME // 2
    coeffs = {m: (c - _PRIME if c > half else c) for m, c in zip(unknowns, sol) if c}
    poly = IntegerPolynomial(N, coeffs)
    for _ in range(6):
        vals, r = sample()
        if poly.evaluate(vals) != r:
            raise ArithmeticError("interpolated discriminant failed an exact check")
    return poly.normalized()


def cache_dir() -> Path:
    return Path(os.environ.get("CIBOUND_CACHE_DIR", "./.cibound-cache"))


def cache_path(n: int, d: int, directory=None) -> Path:
    return Path(directory if directory is not None else cache_dir()) / f"disc_n{n}_d{d}.txt"


def write_discriminant_cache(poly: IntegerPolynomial, n: int, d: int, directory=None) -> Path:
    path = cache_path(n, d, directory)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(poly.to_text().encode("ascii"))
    return path


def load_discriminant_cache(path) -> IntegerPolynomial:
    poly = IntegerPolynomial.from_text(Path(path).read_text(encoding="ascii"))
    if poly.content() != 1:
        raise InvalidInput(f"{path}: content is {poly.content()}, expected 1")
    if poly.leading_coefficient() <= 0:
        raise InvalidInput(f"{path}: leading coefficient is not positive")
    return poly


def cached_discriminant_polynomial(n: int, d: int, directory=None, refresh: bool = False):
    """Load ``disc_n{n}_d{d}.txt`` if present, otherwise compute and write it."""
    path = cache_path(n, d, directory)
    if path.exists() and not refresh:
        return load_discriminant_cache(path), path
    poly = discriminant_polynomial(n, d)
    return poly, write_discriminant_cache(poly, n, d, directory)
