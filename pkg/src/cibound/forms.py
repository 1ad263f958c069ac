"""Homogeneous forms over an exact field.

A form is a sparse map from exponent vectors (length n+1) to nonzero raw
coefficients of its field.  Monomials are ordered graded-lexicographically
with x0 > x1 > ... > xn; among monomials of one degree this is descending
lexicographic order on the exponent vectors.

Linear substitution follows the convention ``(f∘A)(x) = f(A·x)``, so
``(f∘A)∘B = f∘(AB)``.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache
from itertools import product

from . import linalg
from .errors import (
    FieldMismatch,
    FormSyntaxError,
    InhomogeneousError,
    InvalidInput,
    UnsupportedField,
)
from .exactnum import Field, FieldElement, embedding


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    """All exponent vectors of degree d in n+1 variables, graded-lex order."""
    def rec(nvars, deg):
        if nvars == 1:
            yield (deg,)
            return
        for first in range(deg, -1, -1):
            for rest in rec(nvars - 1, deg - first):
                yield (first,) + rest

    return tuple(rec(n + 1, d))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict:
    return {m: i for i, m in enumerate(monomials(n, d))}


def _add_exp(a, b):
    return tuple(x + y for x, y in zip(a, b))


class HomogeneousForm:
    """Degree-d form in x0..xn with coefficients in ``field``.

    ``coeffs`` maps exponent tuples to raw field values; zero coefficients
    are dropped on construction.
    """

    __slots__ = ("n", "d", "field", "coeffs", "_hash", "_partials")

    def __init__(self, n: int, d: int, field: Field, coeffs=None):
        if n < 0 or d < 0:
            raise InvalidInput(f"need n >= 0 and d >= 0, got n={n}, d={d}")
        self.n = n
        self.d = d
        self.field = field
        clean = {}
        for mono, c in (coeffs or {}).items():
            mono = tuple(mono)
            if len(mono) != n + 1 or sum(mono) != d or min(mono) < 0:
                raise InhomogeneousError([sum(mono), d])
            c = field.coerce(c)
            if c != 0:
                clean[mono] = c
        self.coeffs = clean
        self._hash = None
        self._partials = None

    @classmethod
    def _raw(cls, n, d, field, coeffs):
        f = cls.__new__(cls)
        f.n, f.d, f.field = n, d, field
        f.coeffs = {m: c for m, c in coeffs.items() if c != 0}
        f._hash = None
        f._partials = None
        return f

    @classmethod
    def zero(cls, n, d, field):
        return cls._raw(n, d, field, {})

    @classmethod
    def monomial(cls, exps, field, coeff=1):
        exps = tuple(exps)
        return cls(len(exps) - 1, sum(exps), field, {exps: coeff})

    @classmethod
    def from_dense(cls, n, d, field, values):
        return cls._raw(n, d, field, dict(zip(monomials(n, d), values)))

    # -- basic protocol -------------------------------------------------

    def terms(self):
        """(monomial, raw coefficient) pairs in graded-lex order."""
        return sorted(self.coeffs.items(), reverse=True)

    def dense(self):
        return [self.coeffs.get(m, 0) for m in monomials(self.n, self.d)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, mono) -> FieldElement:
        return FieldElement(self.field, self.coeffs.get(tuple(mono), self.field.zero))

    def leading_coefficient(self):
        """Raw coefficient of the graded-lex leading monomial (None for the zero form)."""
        if not self.coeffs:
            return None
        return self.coeffs[max(self.coeffs)]

    def normalized(self) -> HomogeneousForm:
        """The scalar multiple whose leading coefficient is 1."""
        lead = self.leading_coefficient()
        if lead is None or lead == self.field.one:
            return self
        return self._scale_raw(self.field.inv(lead))

    def _check(self, other):
        if not isinstance(other, HomogeneousForm):
            raise TypeError(f"expected a form, got {type(other).__name__}")
        if other.field != self.field:
            raise FieldMismatch(f"forms over {self.field} and {other.field}")
        if other.n != self.n:
            raise InvalidInput(f"forms in {self.n + 1} and {other.n + 1} variables")

    def __eq__(self, other):
        if not isinstance(other, HomogeneousForm):
            return NotImplemented
        return (
            self.n == other.n and self.d == other.d
            and self.field == other.field and self.coeffs == other.coeffs
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.d, self.field, tuple(self.terms())))
        return self._hash

    def __repr__(self):
        return f"HomogeneousForm({format_form(self)!r}, n={self.n}, field={self.field})"

    def __str__(self):
        return format_form(self)

    # -- arithmetic -----------------------------------------------------

    def __add__(self, other):
        self._check(other)
        if other.d != self.d and other.coeffs and self.coeffs:
            raise InhomogeneousError([self.d, other.d])
        F = self.field
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            out[m] = F.add(out.get(m, F.zero), c)
        return HomogeneousForm._raw(self.n, self.d if self.coeffs or not other.coeffs else other.d, F, out)

    def __neg__(self):
        F = self.field
        return HomogeneousForm._raw(self.n, self.d, F, {m: F.neg(c) for m, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> HomogeneousForm:
        """c·f for an int, Fraction or FieldElement c (ints are integers, not raw codes)."""
        return self._scale_raw(self.field.coerce(c))

    def _scale_raw(self, c) -> HomogeneousForm:
        F = self.field
        return HomogeneousForm._raw(self.n, self.d, F, {m: F.mul(c, v) for m, v in self.coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.scale(other)
        self._check(other)
        return HomogeneousForm._raw(self.n, self.d + other.d, self.field, _poly_mul(self.field, self.coeffs, other.coeffs))

    __rmul__ = __mul__

    def change_field(self, K: Field) -> HomogeneousForm:
        """The same form viewed over an extension field K."""
        if K == self.field:
            return self
        emb = embedding(self.field, K)
        return HomogeneousForm._raw(self.n, self.d, K, {m: emb(c) for m, c in self.coeffs.items()})

    def partials(self):
        if self._partials is None:
            self._partials = tuple(partial_derivative(self, i) for i in range(self.n + 1))
        return self._partials

    def compose(self, A) -> HomogeneousForm:
        return substitute_linear(self, A)

    def __call__(self, *point):
        return evaluate(self, point[0] if len(point) == 1 and isinstance(point[0], (list, tuple)) else point)


def _poly_mul(F, a: dict, b: dict) -> dict:
    out = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = _add_exp(ma, mb)
            v = F.mul(ca, cb)
            if m in out:
                out[m] = F.add(out[m], v)
            else:
                out[m] = v
    return {m: c for m, c in out.items() if c != 0}


# ---------------------------------------------------------------------------
# matrices


class Matrix:
    """Square matrix over one field; entries stored as raw values."""

    __slots__ = ("field", "rows", "_hash")

    def __init__(self, field: Field, rows):
        self.field = field
        rows = tuple(tuple(field.coerce(x) for x in r) for r in rows)
        if not rows or any(len(r) != len(rows) for r in rows):
            raise InvalidInput("matrix must be square and non-empty")
        self.rows = rows
        self._hash = None

    @classmethod
    def _raw(cls, field, rows):
        M = cls.__new__(cls)
        M.field = field
        M.rows = tuple(tuple(r) for r in rows)
        M._hash = None
        return M

    @classmethod
    def identity(cls, field, size):
        return cls._raw(field, [[field.one if i == j else field.zero for j in range(size)] for i in range(size)])

    @classmethod
    def random_invertible(cls, field, size, rng: random.Random):
        if not field.is_finite:
            while True:
                M = cls._raw(field, [[field.from_int(rng.randint(-5, 5)) for _ in range(size)] for _ in range(size)])
                if M.det() != 0:
                    return M
        while True:
            M = cls._raw(field, [[field.random(rng) for _ in range(size)] for _ in range(size)])
            if M.det() != 0:
                return M

    @property
    def size(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return FieldElement(self.field, self.rows[i][j])

    def __matmul__(self, other: Matrix) -> Matrix:
        if other.field != self.field:
            raise FieldMismatch(f"matrices over {self.field} and {other.field}")
        return Matrix._raw(self.field, linalg.matmul(self.field, self.rows, other.rows))

    def apply(self, vector):
        F = self.field
        v = [F.coerce(x) for x in vector]
        out = []
        for row in self.rows:
            acc = F.zero
            for a, x in zip(row, v):
                if a != 0 and x != 0:
                    acc = F.add(acc, F.mul(a, x))
            out.append(FieldElement(F, acc))
        return out

    def det(self):
        return linalg.det(self.field, self.rows)

    def transpose(self):
        return Matrix._raw(self.field, list(zip(*self.rows)))

    def scale(self, c):
        F = self.field
        return Matrix._raw(F, [[F.mul(c, x) for x in r] for r in self.rows])

    def change_field(self, K):
        emb = embedding(self.field, K)
        return Matrix._raw(K, [[emb(x) for x in r] for r in self.rows])

    def is_scalar(self):
        c = self.rows[0][0]
        return all(x == (c if i == j else 0) for i, r in enumerate(self.rows) for j, x in enumerate(r))

    def tolist(self):
        return [[self.field.format(x) for x in r] for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.field == other.field and self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.field, self.rows))
        return self._hash

    def __repr__(self):
        return f"Matrix({self.field}, {self.tolist()})"


def as_matrix(A, field: Field) -> Matrix:
    if isinstance(A, Matrix):
        if A.field != field:
            raise FieldMismatch(f"matrix over {A.field}, form over {field}")
        return A
    return Matrix(field, A)


# ---------------------------------------------------------------------------
# form tuples


class FormTuple:
    """(f_1, ..., f_k) sharing n and field, 1 <= k <= n+1."""

    __slots__ = ("forms",)

    def __init__(self, forms):
        forms = tuple(forms)
        if not forms:
            raise InvalidInput("empty form tuple")
        f0 = forms[0]
        for f in forms[1:]:
            if f.field != f0.field:
                raise FieldMismatch(f"tuple mixes {f0.field} and {f.field}")
            if f.n != f0.n:
                raise InvalidInput("all forms in a tuple must share n")
        if len(forms) > f0.n + 1:
            raise InvalidInput(f"k = {len(forms)} exceeds n+1 = {f0.n + 1}")
        self.forms = forms

    @property
    def n(self):
        return self.forms[0].n

    @property
    def field(self):
        return self.forms[0].field

    @property
    def degrees(self):
        return tuple(f.d for f in self.forms)

    @property
    def k(self):
        return len(self.forms)

    def __iter__(self):
        return iter(self.forms)

    def __len__(self):
        return len(self.forms)

    def __getitem__(self, i):
        return self.forms[i]

    def __eq__(self, other):
        return isinstance(other, FormTuple) and self.forms == other.forms

    def __hash__(self):
        return hash(self.forms)

    def compose(self, A) -> FormTuple:
        return FormTuple(substitute_linear(f, A) for f in self.forms)

    def change_field(self, K) -> FormTuple:
        return FormTuple(f.change_field(K) for f in self.forms)

    def __repr__(self):
        return f"FormTuple({[format_form(f) for f in self.forms]}, field={self.field})"


# ---------------------------------------------------------------------------
# operations


def _point_field(f: HomogeneousForm, point):
    if len(point) != f.n + 1:
        raise InvalidInput(f"point has {len(point)} coordinates, form needs {f.n + 1}")
    fields = {x.field for x in point if isinstance(x, FieldElement)}
    if len(fields) > 1:
        raise FieldMismatch(f"point mixes fields {sorted(map(str, fields))}")
    K = fields.pop() if fields else f.field
    try:
        emb = embedding(f.field, K)
    except FieldMismatch:
        raise
    except Exception as exc:
        raise FieldMismatch(f"{f.field} does not embed in {K}") from exc
    raw = [K.coerce(x) for x in point]
    return K, emb, raw


def evaluate_raw(F: Field, coeffs: dict, point) -> object:
    """Evaluate a coefficient dict (raw values of F) at a raw point over F."""
    n1 = len(point)
    acc = F.zero
    pw_cache = [dict() for _ in range(n1)]
    for mono, c in coeffs.items():
        v = c
        for j, e in enumerate(mono):
            if e:
                cache = pw_cache[j]
                pj = cache.get(e)
                if pj is None:
                    pj = cache[e] = F.pow(point[j], e)
                v = F.mul(v, pj)
                if v == 0:
                    break
        acc = F.add(acc, v)
    return acc


def evaluate(f: HomogeneousForm, point) -> FieldElement:
    """Value of f at a point whose coordinates lie in f's field or an extension of it."""
    K, emb, raw = _point_field(f, point)
    coeffs = f.coeffs if K == f.field else {m: emb(c) for m, c in f.coeffs.items()}
    return FieldElement(K, evaluate_raw(K, coeffs, raw))


def partial_derivative(f: HomogeneousForm, i: int) -> HomogeneousForm:
    """Formal ∂f/∂x_i; exponents are reduced into the field, so p | e kills a term."""
    if not 0 <= i <= f.n:
        raise InvalidInput(f"variable index {i} out of range 0..{f.n}")
    F = f.field
    out = {}
    for mono, c in f.coeffs.items():
        e = mono[i]
        if e == 0:
            continue
        v = F.mul(F.from_int(e), c)
        if v != 0:
            out[mono[:i] + (e - 1,) + mono[i + 1:]] = v
    return HomogeneousForm._raw(f.n, max(f.d - 1, 0), F, out)


def gradient(f: HomogeneousForm):
    return f.partials()


def substitute_linear(f: HomogeneousForm, A) -> HomogeneousForm:
    """f∘A, i.e. x_j ↦ Σ_k A[j][k] x_k."""
    A = as_matrix(A, f.field)
    if A.size != f.n + 1:
        raise InvalidInput(f"matrix of size {A.size} acting on forms in {f.n + 1} variables")
    F = f.field
    n1 = f.n + 1
    units = [tuple(1 if t == k else 0 for t in range(n1)) for k in range(n1)]
    linear = [{units[k]: a for k, a in enumerate(row) if a != 0} for row in A.rows]
    powers = [{0: {(0,) * n1: F.one}, 1: linear[j]} for j in range(n1)]

    def power(j, e):
        cache = powers[j]
        if e not in cache:
            half = power(j, e // 2)
            sq = _poly_mul(F, half, half)
            cache[e] = _poly_mul(F, sq, linear[j]) if e % 2 else sq
        return cache[e]

    out = {}
    for mono, c in f.coeffs.items():
        acc = {(0,) * n1: c}
        for j, e in enumerate(mono):
            if e:
                acc = _poly_mul(F, acc, power(j, e))
                if not acc:
                    break
        for m, v in acc.items():
            if m in out:
                out[m] = F.add(out[m], v)
            else:
                out[m] = v
    return HomogeneousForm._raw(f.n, f.d, F, out)


def jacobian_rank_at(t, point) -> int:
    """Rank of (∂f_i/∂x_j)(point), exact Gaussian elimination over the point's field."""
    if isinstance(t, HomogeneousForm):
        t = FormTuple([t])
    rows = []
    K = None
    for f in t:
        K, emb, raw = _point_field(f, point)
        row = []
        for g in f.partials():
            coeffs = g.coeffs if K == g.field else {m: emb(c) for m, c in g.coeffs.items()}
            row.append(evaluate_raw(K, coeffs, raw))
        rows.append(row)
    if all(x == 0 for x in raw):
        raise InvalidInput("the Jacobian rank is taken at a nonzero point")
    return linalg.rank(K, rows)


def jacobian_minors(t: FormTuple):
    """All k×k minors of the Jacobian matrix of t, as forms."""
    from itertools import combinations

    k, n = t.k, t.n
    grads = [f.partials() for f in t]
    deg = sum(f.d - 1 for f in t)
    out = []
    for cols in combinations(range(n + 1), k):
        out.append(_form_det([[grads[i][c] for c in cols] for i in range(k)], n, deg, t.field))
    return out


def _form_det(M, n, deg, F):
    k = len(M)
    if k == 1:
        g = M[0][0]
        return HomogeneousForm._raw(n, deg, F, g.coeffs)
    total = {}
    for j in range(k):
        minor = [row[:j] + row[j + 1:] for row in M[1:]]
        sub = _form_det(minor, n, deg - max(M[0][j].d, 0), F)
        term = _poly_mul(F, M[0][j].coeffs, sub.coeffs)
        for m, v in term.items():
            v = F.neg(v) if j % 2 else v
            total[m] = F.add(total.get(m, F.zero), v)
    return HomogeneousForm._raw(n, deg, F, total)


def random_form(n: int, d: int, field: Field, rng_seed) -> HomogeneousForm:
    """Uniform independent coefficients over every degree-d monomial."""
    if not field.is_finite:
        raise UnsupportedField("random forms need a finite field")
    rng = rng_seed if isinstance(rng_seed, random.Random) else random.Random(rng_seed)
    return HomogeneousForm._raw(n, d, field, {m: field.random(rng) for m in monomials(n, d)})


# ---------------------------------------------------------------------------
# text format

_TOKEN = re.compile(
    r"\s*(?:(?P<lit>\([^()]*\))|(?P<var>x(?P<idx>\d+))|(?P<num>\d+)|(?P<op>[-+*/^])|(?P<bad>\S))"
)


def _tokenize(text):
    pos = 0
    toks = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        if m.group("bad"):
            raise FormSyntaxError(f"unexpected character {m.group('bad')!r}", text, m.start("bad"))
        kind = next(k for k in ("lit", "var", "num", "op") if m.group(k) is not None)
        start = m.start(kind)
        if kind == "lit":
            toks.append(("lit", m.group("lit")[1:-1], start + 1))
        elif kind == "var":
            toks.append(("var", int(m.group("idx")), start))
        elif kind == "num":
            toks.append(("num", int(m.group("num")), start))
        else:
            toks.append(("op", m.group("op"), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


def parse_form(text: str, n: int | None, field: Field, d: int | None = None) -> HomogeneousForm:
    """Parse ``c*x0^a*x1^b + ...``.

    Coefficients may be integers, ``p/q`` rationals, or a parenthesised
    field literal such as ``(a^2 + 1)`` for GF(p^m).  When n is None it is
    taken from the largest variable index used.
    """
    toks = _tokenize(text)
    i = 0
    F = field

    def peek():
        return toks[i]

    def take():
        nonlocal i
        t = toks[i]
        i += 1
        return t

    terms = []
    first = True
    while True:
        sign = 1
        t = peek()
        if t[0] == "op" and t[1] in "+-":
            take()
            sign = -1 if t[1] == "-" else 1
        elif not first:
            if t[0] == "end":
                break
            raise FormSyntaxError("expected '+' or '-'", text, t[2])
        first = False
        t = peek()
        if t[0] == "end":
            raise FormSyntaxError("expected a term", text, t[2])
        coeff = F.one
        have_coeff = False
        if t[0] == "num":
            take()
            value = Fraction(t[1])
            if peek()[0] == "op" and peek()[1] == "/":
                take()
                den = take()
                if den[0] != "num" or den[1] == 0:
                    raise FormSyntaxError("expected a nonzero denominator", text, den[2])
                value /= den[1]
            coeff = F.from_int(value)
            have_coeff = True
        elif t[0] == "lit":
            take()
            try:
                coeff = F.parse(t[1])
            except InvalidInput as exc:
                raise FormSyntaxError(f"bad field literal {t[1]!r}", text, t[2]) from exc
            have_coeff = True
        exps = {}
        need_factor = not have_coeff
        if have_coeff and peek()[0] == "op" and peek()[1] == "*":
            take()
            need_factor = True
        while True:
            t = peek()
            if t[0] != "var":
                if need_factor:
                    raise FormSyntaxError("expected a variable x<idx>", text, t[2])
                break
            take()
            e = 1
            if peek()[0] == "op" and peek()[1] == "^":
                take()
                u = take()
                if u[0] != "num":
                    raise FormSyntaxError("expected an exponent", text, u[2])
                e = u[1]
            exps[t[1]] = exps.get(t[1], 0) + e
            need_factor = False
            if peek()[0] == "op" and peek()[1] == "*":
                take()
                need_factor = True
            else:
                break
        if sign < 0:
            coeff = F.neg(coeff)
        terms.append((exps, coeff, t[2]))

    max_idx = max((v for e, _, _ in terms for v in e), default=0)
    if n is None:
        n = max_idx
    if max_idx > n:
        pos = next(p for e, _, p in terms if max(e, default=0) > n)
        raise FormSyntaxError(f"variable x{max_idx} exceeds x{n}", text, pos)
    degrees = [sum(e.values()) for e, _, _ in terms]
    if len(set(degrees)) > 1:
        raise InhomogeneousError(degrees)
    deg = degrees[0] if degrees else 0
    coeffs_only_constant = all(not e for e, _, _ in terms)
    if d is not None:
        if not coeffs_only_constant and deg != d:
            raise InhomogeneousError([deg, d])
        if coeffs_only_constant and d != 0:
            # only the literal zero is accepted as a form of positive degree
            if any(c != 0 for _, c, _ in terms):
                raise InhomogeneousError([0, d])
        deg = d
    out = {}
    for e, c, _ in terms:
        mono = tuple(e.get(j, 0) for j in range(n + 1))
        if sum(mono) != deg:
            continue
        out[mono] = F.add(out.get(mono, F.zero), c)
    return HomogeneousForm._raw(n, deg, F, out)


def _format_coeff(F: Field, c):
    """(negative?, text or '' for unit)."""
    if F.characteristic == 0:
        neg = c < 0
        a = -c if neg else c
        return neg, "" if a == 1 else str(a)
    p = F.characteristic
    if c < p:
        neg = c > p // 2
        a = p - c if neg else c
        return neg, "" if a == 1 else str(a)
    return False, f"({F.format(c)})"


def format_monomial(mono):
    parts = []
    for j, e in enumerate(mono):
        if e == 1:
            parts.append(f"x{j}")
        elif e > 1:
            parts.append(f"x{j}^{e}")
    return "*".join(parts)


def format_form(f: HomogeneousForm) -> str:
    if f.is_zero():
        return "0"
    out = []
    for k, (mono, c) in enumerate(f.terms()):
        neg, ctext = _format_coeff(f.field, c)
        mtext = format_monomial(mono)
        if not mtext:
            body = ctext or "1"
        elif ctext:
            body = f"{ctext}*{mtext}"
        else:
            body = mtext
        if k == 0:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


def parse_tuple(text: str, n: int | None, field: Field) -> FormTuple:
    """Forms separated by ``;``.  n defaults to the largest index used in any form."""
    parts = [s for s in text.split(";") if s.strip()]
    if not parts:
        raise FormSyntaxError("empty tuple", text, 0)
    if n is None:
        n = max(max((int(v) for v in re.findall(r"x(\d+)", s)), default=0) for s in parts)
    return FormTuple(parse_form(s, n, field) for s in parts)


def all_points(field: Field, n: int):
    """Canonical representatives of P^n(field) (first nonzero coordinate 1), ascending lex."""
    elems = list(field.elements())
    for lead in range(n, -1, -1):
        for rest in product(elems, repeat=n - lead):
            yield (0,) * lead + (1,) + rest
