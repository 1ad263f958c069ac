"""Exact scalar arithmetic: integers, rationals, GF(p) and GF(p^m).

Field objects expose arithmetic on *raw* values (``int`` codes for finite
fields, ``Fraction`` for QQ) so the polynomial and linear-algebra kernels
can run without wrapper overhead.  :class:`FieldElement` is the tagged,
user-facing value that refuses to mix fields.

GF(p^m) elements are polynomial residues modulo a fixed monic irreducible
polynomial; the raw code of ``c_0 + c_1 a + ... + c_{m-1} a^{m-1}`` is the
integer ``sum c_i p^i``.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache

from .errors import DivisionByZero, FieldMismatch, InvalidInput

# Log/exp tables are built for extension fields up to this order.
TABLE_LIMIT = 1 << 16

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin (exact for n < 3.3e24, probabilistic beyond)."""
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power q into (p, m); raise InvalidInput otherwise."""
    if q < 2:
        raise InvalidInput(f"{q} is not a prime power")
    p = next((r for r in range(2, int(q**0.5) + 1) if q % r == 0), q)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1 or not is_prime(p):
        raise InvalidInput(f"{q} is not a prime power")
    return p, m


def prime_to_p_part(N: int, p: int) -> int:
    """N with every factor of p removed."""
    if not isinstance(N, int) or N <= 0:
        raise InvalidInput(f"prime_to_p_part needs N >= 1, got {N!r}")
    if not is_prime(p):
        raise InvalidInput(f"{p} is not prime")
    while N % p == 0:
        N //= p
    return N


def p_adic_valuation(N: int, p: int) -> int:
    v = 0
    while N % p == 0:
        N //= p
        v += 1
    return v


# ---------------------------------------------------------------------------
# polynomials over GF(p) as coefficient lists, low degree first


def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], p - 2, p)
    while len(_trim(a)) - 1 >= df:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - df
        for i, fi in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fi) % p
    return a


def _pmulmod(a, b, f, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _pmod(out, f, p)


def _ppowmod(a, e, f, p):
    result = [1]
    base = _pmod(a, f, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, f, p)
        base = _pmulmod(base, base, f, p)
        e >>= 1
    return result


def _pgcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
        _trim(b)
    return a


def _prime_factors(m):
    out, r = [], 2
    while r * r <= m:
        if m % r == 0:
            out.append(r)
            while m % r == 0:
                m //= r
        r += 1
    if m > 1:
        out.append(m)
    return out


def is_irreducible(poly, p: int) -> bool:
    """Rabin's test for a monic polynomial (coefficients low→high) over GF(p)."""
    f = _trim(list(poly))
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if _trim(_ppowmod(x, p**m, f, p)) != x:
        return False
    for r in _prime_factors(m):
        h = _ppowmod(x, p ** (m // r), f, p)
        h = h + [0] * max(0, 2 - len(h))
        h[1] = (h[1] - 1) % p
        if len(_pgcd(f, h, p)) != 1:
            return False
    return True


@lru_cache(maxsize=None)
def find_irreducible(p: int, m: int) -> tuple[int, ...]:
    """First monic irreducible of degree m over GF(p).

    Candidates ``x^m + c_{m-1} x^{m-1} + ... + c_0`` are scanned with the
    vector ``(c_{m-1}, ..., c_0)`` in increasing lexicographic order.
    Returns coefficients low→high, including the leading 1.
    """
    if not is_prime(p) or m < 1:
        raise InvalidInput(f"need prime p and m >= 1, got p={p}, m={m}")
    for code in range(p**m):
        low = [(code // p**i) % p for i in range(m)]
        cand = tuple(low) + (1,)
        if is_irreducible(cand, p):
            return cand
    raise AssertionError("unreachable: irreducible polynomials exist in every degree")


def format_poly(coeffs, var="x") -> str:
    terms = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}*{mono}")
    return " + ".join(terms) if terms else "0"


# ---------------------------------------------------------------------------
# fields


class Field:
    """Common interface; concrete fields implement arithmetic on raw values."""

    characteristic: int
    order: int | None
    degree: int
    zero = 0
    one = 1

    def __call__(self, value) -> FieldElement:
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element given where {self} expected")
            return value
        if isinstance(value, str):
            return FieldElement(self, self.parse(value))
        return FieldElement(self, self.from_int(value))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        if e < 0:
            a, e = self.inv(a), -e
        result = self.one
        while e:
            if e & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            e >>= 1
        return result

    def is_zero(self, a) -> bool:
        return a == 0

    def coerce(self, value):
        """Raw value from an int, Fraction, string or FieldElement of this field."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatch(f"{value.field} element given where {self} expected")
            return value.value
        if isinstance(value, str):
            return self.parse(value)
        return self.from_int(value)

    @property
    def is_finite(self) -> bool:
        return self.order is not None

    def element(self, raw) -> FieldElement:
        return FieldElement(self, raw)

    def __repr__(self):
        return self.spec

    def __str__(self):
        return self.spec


class RationalField(Field):
    characteristic = 0
    order = None
    degree = 1
    spec = "QQ"
    zero = Fraction(0)
    one = Fraction(1)

    def from_int(self, k):
        return Fraction(k)

    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0 in QQ")
        return 1 / a

    def pow(self, a, e):
        if a == 0 and e < 0:
            raise DivisionByZero("inverse of 0 in QQ")
        return a**e

    def parse(self, text):
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"bad rational {text!r}") from exc

    def format(self, a):
        return str(a)

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("QQ")

    def __reduce__(self):
        return (RationalField, ())


class PrimeField(Field):
    degree = 1

    def __init__(self, p: int):
        if not is_prime(p):
            raise InvalidInput(f"{p} is not prime")
        self.p = self.characteristic = self.order = p
        self.spec = f"GF({p})"
        self.modulus = (0, 1)
        self._generator = None

    def from_int(self, k):
        if isinstance(k, Fraction):
            if k.denominator % self.p == 0:
                raise DivisionByZero(f"{k} has no image in {self}")
            return k.numerator * pow(k.denominator, -1, self.p) % self.p
        return int(k) % self.p

    def add(self, a, b):
        s = a + b
        return s - self.p if s >= self.p else s

    def sub(self, a, b):
        s = a - b
        return s + self.p if s < 0 else s

    def neg(self, a):
        return (self.p - a) if a else 0

    def mul(self, a, b):
        return a * b % self.p

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        return pow(a, e, self.p)

    def parse(self, text):
        try:
            return int(text.strip()) % self.p
        except ValueError as exc:
            raise InvalidInput(f"bad element {text!r} of {self}") from exc

    def format(self, a):
        return str(a)

    def elements(self):
        return range(self.p)

    def random(self, rng: random.Random):
        return rng.randrange(self.p)

    def digits(self, a):
        return (a,)

    def generator(self):
        """Smallest multiplicative generator of GF(p)*."""
        if self._generator is None:
            if self.p == 2:
                self._generator = 1
            else:
                factors = _prime_factors(self.p - 1)
                self._generator = next(
                    g for g in range(2, self.p)
                    if all(pow(g, (self.p - 1) // r, self.p) != 1 for r in factors)
                )
        return self._generator

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p, 1))

    def __reduce__(self):
        return (GF, (self.p, 1))


class ExtensionField(Field):
    """GF(p^m), m >= 2, with the modulus returned by :func:`find_irreducible`."""

    def __init__(self, p: int, m: int, modulus=None):
        if not is_prime(p) or m < 2:
            raise InvalidInput(f"need prime p and m >= 2, got p={p}, m={m}")
        modulus = tuple(modulus) if modulus is not None else find_irreducible(p, m)
        if len(modulus) != m + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p):
            raise InvalidInput(f"modulus {modulus} is not monic irreducible of degree {m}")
        self.p = self.characteristic = p
        self.degree = m
        self.order = p**m
        self.modulus = modulus
        self.spec = f"GF({p}^{m})"
        self._pows = [p**i for i in range(m)]
        self._exp = None
        self._log = None
        self._zech = None
        self._generator = None

    # digit helpers
    def digits(self, a):
        p = self.p
        out = []
        for _ in range(self.degree):
            a, r = divmod(a, p)
            out.append(r)
        return out

    def undigits(self, ds):
        return sum(int(c) * w for c, w in zip(ds, self._pows))

    def _slow_mul(self, a, b):
        r = _pmulmod(_trim(self.digits(a)), _trim(self.digits(b)), list(self.modulus), self.p)
        return self.undigits(r)

    def _build_tables(self):
        q = self.order
        g = None
        factors = _prime_factors(q - 1)
        for cand in range(2, q):
            if all(self._slow_pow(cand, (q - 1) // r) != 1 for r in factors):
                g = cand
                break
        if g is None:  # q == 2 is not an extension field, so unreachable
            raise AssertionError("no primitive element")
        exp = [0] * (2 * (q - 1))
        log = [None] * q
        x = 1
        for i in range(q - 1):
            exp[i] = x
            log[x] = i
            x = self._slow_mul(x, g)
        for i in range(q - 1, 2 * (q - 1)):
            exp[i] = exp[i - (q - 1)]
        p = self.p
        zech = [0] * (q - 1)
        for z in range(q - 1):
            c = exp[z]
            c1 = c - c % p + (c % p + 1) % p
            zech[z] = -1 if c1 == 0 else log[c1]
        self._generator = g
        self._exp, self._log, self._zech = exp, log, zech

    def _slow_pow(self, a, e):
        result = 1
        while e:
            if e & 1:
                result = self._slow_mul(result, a)
            a = self._slow_mul(a, a)
            e >>= 1
        return result

    def _tables(self):
        if self._exp is None and self.order <= TABLE_LIMIT:
            self._build_tables()
        return self._exp is not None

    def generator(self):
        if self._generator is None:
            if self._tables():
                return self._generator
            q = self.order
            factors = _prime_factors(q - 1)
            rng = random.Random(self.order)
            for cand in range(2, q) if q < 10**6 else iter(lambda: rng.randrange(2, q), None):
                if all(self._slow_pow(cand, (q - 1) // r) != 1 for r in factors):
                    self._generator = cand
                    break
        return self._generator

    def log(self, a):
        if a == 0:
            raise DivisionByZero("log of 0")
        self._tables()
        return self._log[a]

    # arithmetic
    def from_int(self, k):
        if isinstance(k, Fraction):
            if k.denominator % self.p == 0:
                raise DivisionByZero(f"{k} has no image in {self}")
            return k.numerator * pow(k.denominator, -1, self.p) % self.p
        return int(k) % self.p

    def add(self, a, b):
        if self.p == 2:
            return a ^ b
        if a == 0:
            return b
        if b == 0:
            return a
        if self._exp is not None or self._tables():
            la, lb = self._log[a], self._log[b]
            z = self._zech[(lb - la) % (self.order - 1)]
            return 0 if z < 0 else self._exp[la + z]
        p = self.p
        out, w = 0, 1
        for _ in range(self.degree):
            a, ra = divmod(a, p)
            b, rb = divmod(b, p)
            out += ((ra + rb) % p) * w
            w *= p
        return out

    def neg(self, a):
        if self.p == 2 or a == 0:
            return a
        p = self.p
        out, w = 0, 1
        for _ in range(self.degree):
            a, r = divmod(a, p)
            out += ((p - r) % p) * w
            w *= p
        return out

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        if self._exp is not None or self._tables():
            return self._exp[self._log[a] + self._log[b]]
        return self._slow_mul(a, b)

    def inv(self, a):
        if a == 0:
            raise DivisionByZero(f"inverse of 0 in {self}")
        if self._exp is not None or self._tables():
            return self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return self._slow_pow(a, self.order - 2)

    def pow(self, a, e):
        if a == 0:
            if e < 0:
                raise DivisionByZero(f"inverse of 0 in {self}")
            return 1 if e == 0 else 0
        if self._exp is not None or self._tables():
            return self._exp[(self._log[a] * e) % (self.order - 1)]
        return super().pow(a, e)

    def elements(self):
        return range(self.order)

    def random(self, rng: random.Random):
        return rng.randrange(self.order)

    def parse(self, text):
        """Parse a polynomial in the generator ``a``, e.g. ``a^2 + 2*a + 1``."""
        s = text.replace(" ", "")
        if not s:
            raise InvalidInput("empty field element")
        total = 0
        for sign, body in re.findall(r"([+-]?)([^+-]+)", s):
            m = re.fullmatch(r"(\d+)?\*?(a(?:\^(\d+))?)?", body)
            if not m or (m.group(1) is None and m.group(2) is None):
                raise InvalidInput(f"bad element {text!r} of {self}")
            coeff = int(m.group(1)) if m.group(1) else 1
            exp = 0 if m.group(2) is None else int(m.group(3) or 1)
            value = self.mul(self.from_int(coeff), self.pow(self.p, exp))
            total = self.sub(total, value) if sign == "-" else self.add(total, value)
        return total

    def format(self, a):
        return format_poly(self.digits(a), var="a")

    def __eq__(self, other):
        return (
            isinstance(other, ExtensionField)
            and other.p == self.p
            and other.degree == self.degree
            and other.modulus == self.modulus
        )

    def __hash__(self):
        return hash(("GF", self.p, self.degree, self.modulus))

    def __reduce__(self):
        return (GF, (self.p, self.degree))


QQ = RationalField()


@lru_cache(maxsize=None)
def GF(p: int, m: int = 1) -> Field:
    """The shared GF(p^m) instance (one fixed modulus per (p, m))."""
    if m == 1:
        return PrimeField(p)
    return ExtensionField(p, m)


def field_of_order(q: int) -> Field:
    return GF(*prime_power(q))


_FIELD_RE = re.compile(r"^\s*(?:(QQ)|GF\(\s*(\d+)\s*(?:\^\s*(\d+)\s*)?\))\s*$")


def parse_field(spec: str) -> Field:
    """``QQ`` | ``GF(p)`` | ``GF(p^m)``."""
    m = _FIELD_RE.match(spec)
    if not m:
        raise InvalidInput(f"bad field spec {spec!r}")
    if m.group(1):
        return QQ
    p, deg = int(m.group(2)), int(m.group(3) or 1)
    if not is_prime(p) or deg < 1:
        raise InvalidInput(f"bad field spec {spec!r}: need prime p and m >= 1")
    return GF(p, deg)


def extension(field: Field, e: int) -> Field:
    """GF(q^e) for field = GF(q)."""
    if not field.is_finite:
        raise InvalidInput("only finite fields have finite extensions")
    return GF(field.characteristic, field.degree * e)


# ---------------------------------------------------------------------------
# embeddings between finite fields


def poly_roots(field: Field, coeffs) -> list:
    """All roots in ``field`` of a univariate polynomial (raw coefficients, low→high).

    Returned sorted by raw code.  Small fields are scanned; larger ones use
    the gcd with t^q - t followed by equal-degree splitting.
    """
    from . import univariate as uv

    f = uv.trim(field, list(coeffs))
    if len(f) <= 1:
        if not f:
            raise InvalidInput("every element is a root of the zero polynomial")
        return []
    return uv.roots(field, f)


@lru_cache(maxsize=None)
def _embedding_image(small: Field, big: Field):
    if small.characteristic != big.characteristic or big.degree % small.degree:
        raise FieldMismatch(f"{small} does not embed in {big}")
    if small.degree == 1:
        return None
    beta = poly_roots(big, small.modulus)[0]
    powers = [big.pow(beta, i) for i in range(small.degree)]
    table = []
    for a in range(small.order):
        acc = 0
        for c, bp in zip(small.digits(a), powers):
            if c:
                acc = big.add(acc, big.mul(big.from_int(c), bp))
        table.append(acc)
    return tuple(table)


def embed(small: Field, big: Field, raw):
    """Image of a raw element of ``small`` in the extension ``big``."""
    if small == big:
        return raw
    if small is QQ or big is QQ:
        raise FieldMismatch(f"{small} does not embed in {big}")
    table = _embedding_image(small, big)
    return raw if table is None else table[raw]


def embedding(small: Field, big: Field):
    """Return a raw-value map small -> big (identity when equal)."""
    if small == big:
        return lambda a: a
    table = _embedding_image(small, big)
    if table is None:
        return lambda a: a
    return table.__getitem__


@lru_cache(maxsize=None)
def _restriction_table(small: Field, big: Field):
    image = _embedding_image(small, big)
    if image is None:
        return None
    return {b: a for a, b in enumerate(image)}


def restrict(small: Field, big: Field, raw):
    """Preimage in ``small`` of a raw element of ``big``; InvalidInput if none."""
    if small == big:
        return raw
    table = _restriction_table(small, big)
    if table is None:
        if 0 <= raw < small.characteristic:
            return raw
    elif raw in table:
        return table[raw]
    raise InvalidInput(f"{big.format(raw)} does not lie in {small}")


# ---------------------------------------------------------------------------
# tagged values


class FieldElement:
    """An element of one specific field.  Operations between fields raise FieldMismatch."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value):
        self.field = field
        self.value = value

    def _other(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatch(f"cannot combine {self.field} and {other.field} elements")
            return other.value
        if isinstance(other, (int, Fraction)):
            return self.field.from_int(other)
        return NotImplemented

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else FieldElement(self.field, self.field.div(o, self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def inverse(self):
        return field_inverse(self)

    def is_zero(self):
        return self.field.is_zero(self.value)

    def __bool__(self):
        return not self.is_zero()

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, (int, Fraction)):
            try:
                return self.value == self.field.from_int(other)
            except DivisionByZero:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"{self.field}({self.field.format(self.value)})"

    def __str__(self):
        return self.field.format(self.value)


def field_inverse(a: FieldElement) -> FieldElement:
    return FieldElement(a.field, a.field.inv(a.value))
