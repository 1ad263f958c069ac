"""Dense univariate polynomials over a finite field (raw coefficients, low→high).

Used by the projective point search and by the subfield embeddings.
"""

from __future__ import annotations

import random

SCAN_LIMIT = 4096


def trim(F, a):
    while a and a[-1] == 0:
        a.pop()
    return a


def monic(F, a):
    if not a:
        return a
    c = F.inv(a[-1])
    return [F.mul(c, x) for x in a]


def divmod_(F, a, b):
    a = list(a)
    db = len(b) - 1
    inv_lead = F.inv(b[-1])
    quot = [0] * max(0, len(a) - db)
    while len(trim(F, a)) - 1 >= db:
        shift = len(a) - 1 - db
        c = F.mul(a[-1], inv_lead)
        quot[shift] = c
        for i, bi in enumerate(b):
            if bi:
                a[shift + i] = F.sub(a[shift + i], F.mul(c, bi))
    return quot, a


def mod(F, a, b):
    return divmod_(F, a, b)[1]


def mul(F, a, b):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                if bj:
                    out[i + j] = F.add(out[i + j], F.mul(ai, bj))
    return trim(F, out)


def mulmod(F, a, b, m):
    return mod(F, mul(F, a, b), m)


def powmod(F, a, e, m):
    result = [1]
    base = mod(F, a, m)
    while e:
        if e & 1:
            result = mulmod(F, result, base, m)
        base = mulmod(F, base, base, m)
        e >>= 1
    return result


def gcd(F, a, b):
    a, b = trim(F, list(a)), trim(F, list(b))
    while b:
        a, b = b, mod(F, a, b)
    return monic(F, a)


def evaluate(F, a, x):
    acc = 0
    for c in reversed(a):
        acc = F.add(F.mul(acc, x), c)
    return acc


def split_roots_part(F, f):
    """gcd(f, t^q - t): the product of the distinct linear factors of f over F."""
    f = monic(F, trim(F, list(f)))
    if len(f) <= 1:
        return f
    tq = powmod(F, [0, 1], F.order, f)
    tq = tq + [0] * max(0, 2 - len(tq))
    tq[1] = F.sub(tq[1], 1)
    return gcd(F, f, trim(F, tq))


def _equal_degree_split(F, f, rng):
    """Split a monic squarefree product of distinct linear factors into roots."""
    if len(f) == 2:
        return [F.neg(f[0])]
    q = F.order
    while True:
        a = rng.randrange(q)
        if F.characteristic == 2:
            # trace map t + t^2 + ... + t^(q/2) applied to a*t
            term = mod(F, [0, a], f)
            acc = list(term)
            for _ in range(F.degree - 1):
                term = mulmod(F, term, term, f)
                acc = _add(F, acc, term)
            g = gcd(F, f, acc)
        else:
            h = powmod(F, [a, 1], (q - 1) // 2, f)
            h = h + [0] * max(0, 1 - len(h))
            h[0] = F.sub(h[0], 1)
            g = gcd(F, f, trim(F, h))
        if 1 < len(g) < len(f):
            other, _ = divmod_(F, f, g)
            return _equal_degree_split(F, g, rng) + _equal_degree_split(F, monic(F, trim(F, other)), rng)


def _add(F, a, b):
    n = max(len(a), len(b))
    a = a + [0] * (n - len(a))
    b = b + [0] * (n - len(b))
    return trim(F, [F.add(x, y) for x, y in zip(a, b)])


def roots(F, f):
    """Distinct roots of f in F, sorted by raw code."""
    f = trim(F, list(f))
    if len(f) <= 1:
        return []
    if len(f) == 2:
        return [F.neg(F.div(f[0], f[1]))]
    g = split_roots_part(F, f)
    if len(g) <= 1:
        return []
    if len(g) == 2:
        return [F.neg(g[0])]
    if F.order <= SCAN_LIMIT:
        return [x for x in F.elements() if evaluate(F, g, x) == 0]
    rng = random.Random(len(g) * 7919 + F.order)
    return sorted(_equal_degree_split(F, g, rng))
