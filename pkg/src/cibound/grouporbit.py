"""Matrix groups over GF(q) acting on forms, and stabilizer orders.

The main engine is a level-synchronous orbit BFS.  A form is a dense
coefficient vector; each generator acts through a precomputed matrix on
the monomial basis, applied to a whole frontier at once with numpy.
Orbit elements are hashed to integer keys and kept in a sorted array.

For projective orbits every element is stored with a scalar: if the tree
path g_v from the root satisfies f∘g_v = μ_v·v, a non-tree edge v --s--> w
with v∘s = c·w yields a stabilizer element with multiplier μ_v·c/μ_w.
Those multipliers generate the subgroup Λ ⊆ GF(q)* of scalars λ with
f∘A = λf, so one projective BFS gives both the PGL stabilizer and the
exact linear (GL) stabilizer: |Stab_GL(f)| = |GL| / (|orbit|·|Λ|).
"""

from __future__ import annotations

import enum
import itertools
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd, prod

import numpy as np

from . import linalg
from .bounds import DivisibilityReport, divisibility_verdict, projective_bound, vector_bound
from .errors import (
    DivisibilityViolation,
    InsufficientSmoothSamples,
    InvalidInput,
    OrbitBudgetExceeded,
    UnsupportedField,
    UnsupportedSize,
)
from .exactnum import TABLE_LIMIT, Field, field_of_order
from .forms import HomogeneousForm, Matrix, format_form, monomial_index, monomials, random_form, substitute_linear
from .resultant import Verdict, is_singular

EXHAUSTIVE_CEILING = 10**6
DEFAULT_BUDGET = 5_000_000
MAX_GENERATORS_REPORTED = 8


class GroupKind(str, enum.Enum):
    GL = "GL"
    SL = "SL"
    PGL = "PGL"


class Method(str, enum.Enum):
    EXHAUSTIVE = "Exhaustive"
    ORBIT_BFS = "OrbitBFS"


@dataclass(frozen=True)
class GroupSpec:
    kind: GroupKind
    rank: int
    field: Field

    def __post_init__(self):
        object.__setattr__(self, "kind", GroupKind(str(self.kind).upper()) if not isinstance(self.kind, GroupKind) else self.kind)
        if not self.field.is_finite:
            raise UnsupportedField("matrix groups are only supported over finite fields")
        if self.rank < 2:
            raise InvalidInput(f"rank must be >= 2, got {self.rank}")

    @classmethod
    def of(cls, kind, rank: int, q) -> GroupSpec:
        F = q if isinstance(q, Field) else field_of_order(q)
        return cls(GroupKind(str(kind).upper()), rank, F)

    @property
    def q(self) -> int:
        return self.field.order

    def __str__(self):
        return f"{self.kind.value}_{self.rank}({self.field.spec})"


def group_order(spec: GroupSpec) -> int:
    q, m = spec.q, spec.rank
    gl = prod(q**m - q**i for i in range(m))
    return gl if spec.kind is GroupKind.GL else gl // (q - 1)


def canonical_pgl(A: Matrix) -> Matrix:
    """Scale so the first nonzero entry in row-major order is 1."""
    F = A.field
    lead = next(x for r in A.rows for x in r if x != 0)
    return A if lead == F.one else A.scale(F.inv(lead))


def _normalize(spec: GroupSpec, A: Matrix) -> Matrix:
    return canonical_pgl(A) if spec.kind is GroupKind.PGL else A


def transvection(F: Field, size: int, i: int, j: int, c) -> Matrix:
    rows = [[F.one if a == b else F.zero for b in range(size)] for a in range(size)]
    rows[i][j] = c
    return Matrix._raw(F, rows)


def generators(spec: GroupSpec) -> list[Matrix]:
    """Transvections E_ij(ω^k), k = 1..m, plus diag(ω, 1, ..., 1) for GL and PGL.

    ω is the field's multiplicative generator.  The m values ω^k form a
    basis of GF(p^m) over GF(p), which makes the transvections generate SL
    even when the field is not prime.
    """
    F, r = spec.field, spec.rank
    w = F.generator()
    scalars = []
    c = F.one
    for _ in range(F.degree):
        c = F.mul(c, w)
        scalars.append(c)
    gens = [transvection(F, r, i, j, c) for i in range(r) for j in range(r) if i != j for c in scalars]
    if spec.kind is not GroupKind.SL:
        rows = [[F.one if a == b else F.zero for b in range(r)] for a in range(r)]
        rows[0][0] = w
        gens.append(Matrix._raw(F, rows))
    out = []
    for g in gens:
        g = _normalize(spec, g)
        if g not in out:
            out.append(g)
    return out


def closure(spec: GroupSpec, gens=None, limit: int = EXHAUSTIVE_CEILING) -> set:
    """All products of ``gens`` (by BFS on matrices); meant for small groups."""
    gens = generators(spec) if gens is None else [_normalize(spec, g) for g in gens]
    ident = _normalize(spec, Matrix.identity(spec.field, spec.rank))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for A in frontier:
            for g in gens:
                B = _normalize(spec, A @ g)
                if B not in seen:
                    seen.add(B)
                    nxt.append(B)
                    if len(seen) > limit:
                        raise OrbitBudgetExceeded(limit, len(seen))
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# vectorized field arithmetic on arrays of raw codes


class _VecField:
    def __init__(self, F: Field):
        q = F.order
        if q > TABLE_LIMIT:
            raise UnsupportedSize(f"vectorized arithmetic needs q <= {TABLE_LIMIT}, got {q}")
        self.F = F
        self.q, self.p, self.m = q, F.characteristic, F.degree
        g = F.generator()
        exp = [1]
        for _ in range(q - 2):
            exp.append(F.mul(exp[-1], g))
        self.exp = np.array(exp, dtype=np.int64)
        self.log = np.zeros(q, dtype=np.int64)
        self.log[self.exp] = np.arange(q - 1)
        self.inv = np.zeros(q, dtype=np.int64)
        self.inv[self.exp] = self.exp[(-np.arange(q - 1)) % (q - 1)]
        self.pows = self.p ** np.arange(self.m, dtype=np.int64)
        self.digits = (np.arange(q, dtype=np.int64)[:, None] // self.pows) % self.p

    def mul(self, a, b):
        a, b = np.asarray(a), np.asarray(b)
        if self.m == 1:
            return a * b % self.p
        r = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, r)

    def add(self, a, b):
        if self.m == 1:
            return (np.asarray(a) + b) % self.p
        return ((self.digits[a] + self.digits[b]) % self.p) @ self.pows

    def neg(self, a):
        if self.m == 1:
            return (-np.asarray(a)) % self.p
        return ((-self.digits[a]) % self.p) @ self.pows


def _action_matrix(n: int, d: int, F: Field, g: Matrix) -> np.ndarray:
    """S with column i = coefficients of (basis_i)∘g, so dense(f∘g) = S·dense(f)."""
    basis = monomials(n, d)
    idx = monomial_index(n, d)
    S = np.zeros((len(basis), len(basis)), dtype=np.int64)
    for i, mono in enumerate(basis):
        h = substitute_linear(HomogeneousForm._raw(n, d, F, {mono: F.one}), g)
        for m2, c in h.coeffs.items():
            S[idx[m2], i] = c
    return S


class _Action:
    """Applies f ↦ f∘g to a batch of dense coefficient rows."""

    def __init__(self, vf: _VecField, S: np.ndarray):
        self.vf = vf
        N = S.shape[0]
        if vf.m == 1:
            self.lin = S.T.astype(np.float64)
        else:
            m = vf.m
            # multiplication by c as an m×m matrix over GF(p): column k = digits(c·a^k)
            basis_codes = vf.pows
            L = np.zeros((N * m, N * m), dtype=np.int64)
            for j in range(N):
                for i in range(N):
                    c = S[j, i]
                    if c:
                        L[j * m:(j + 1) * m, i * m:(i + 1) * m] = vf.digits[vf.mul(c, basis_codes)].T
            self.lin = L.T.astype(np.float64)

    def __call__(self, V: np.ndarray) -> np.ndarray:
        vf = self.vf
        p = vf.p
        if vf.m == 1:
            return (V.astype(np.float64) @ self.lin).astype(np.int64) % p
        B, N = V.shape
        D = vf.digits[V].reshape(B, N * vf.m).astype(np.float64)
        out = (D @ self.lin).astype(np.int64) % p
        return out.reshape(B, N, vf.m) @ vf.pows


def _canonicalize(vf: _VecField, V: np.ndarray):
    """Scale rows to leading coefficient 1; returns (rows, log of the removed lead)."""
    idx = (V != 0).argmax(axis=1)
    lead = V[np.arange(V.shape[0]), idx]
    return vf.mul(vf.inv[lead][:, None], V), vf.log[lead]


class _KeyIndex:
    """Insert-if-absent map from orbit elements to ids."""

    def __init__(self, q: int, N: int):
        self.integer = q**N < 2**62
        if self.integer:
            self.weights = np.array([q ** (N - 1 - i) for i in range(N)], dtype=np.int64)
            self.keys = np.empty(0, dtype=np.int64)
            self.ids = np.empty(0, dtype=np.int64)
        else:
            self.table = {}

    def key(self, V):
        if self.integer:
            return V @ self.weights
        rows = np.ascontiguousarray(V, dtype=np.uint16)
        return np.array([r.tobytes() for r in rows], dtype=object)

    def lookup(self, keys):
        if self.integer:
            pos = np.searchsorted(self.keys, keys)
            pos = np.minimum(pos, max(len(self.keys) - 1, 0))
            if len(self.keys) == 0:
                return np.full(len(keys), -1, dtype=np.int64)
            hit = self.keys[pos] == keys
            return np.where(hit, self.ids[pos], -1)
        return np.array([self.table.get(k, -1) for k in keys], dtype=np.int64)

    def insert(self, keys, ids):
        if self.integer:
            allk = np.concatenate([self.keys, keys])
            alli = np.concatenate([self.ids, ids])
            order = np.argsort(allk, kind="stable")
            self.keys, self.ids = allk[order], alli[order]
        else:
            for k, i in zip(keys, ids):
                self.table[k] = int(i)

    def unique(self, keys):
        """(first-occurrence indices, inverse) like np.unique."""
        if self.integer:
            _, first, inv = np.unique(keys, return_index=True, return_inverse=True)
            return first, inv.ravel()
        seen = {}
        first, inv = [], []
        for i, k in enumerate(keys):
            if k not in seen:
                seen[k] = len(first)
                first.append(i)
            inv.append(seen[k])
        return np.array(first, dtype=np.int64), np.array(inv, dtype=np.int64)


@dataclass
class _OrbitResult:
    size: int
    scalar_gcd: int
    parent: np.ndarray
    via: np.ndarray
    edges: list
    levels: int


def _orbit_bfs(f: HomogeneousForm, gens: list[Matrix], projective: bool, budget: int, max_edges: int = 256) -> _OrbitResult:
    F = f.field
    vf = _VecField(F)
    q = F.order
    actions = [_Action(vf, _action_matrix(f.n, f.d, F, g)) for g in gens]
    root = np.array([f.dense()], dtype=np.int64)
    mu_root = np.zeros(1, dtype=np.int64)
    if projective:
        # f = lead·root, so the identity path has μ = lead
        root, mu_root = _canonicalize(vf, root)
    index = _KeyIndex(q, root.shape[1])
    index.insert(index.key(root), np.zeros(1, dtype=np.int64))
    mu_all = [mu_root]
    parent = [np.array([-1], dtype=np.int64)]
    via = [np.array([-1], dtype=np.int64)]
    total = 1
    ratio_gcd = 0
    edges = []
    frontier, f_ids, f_mu = root, np.zeros(1, dtype=np.int64), mu_root
    levels = 0
    while len(frontier):
        levels += 1
        mu_lookup = np.concatenate(mu_all)
        cands = []
        for gi, act in enumerate(actions):
            W = act(frontier)
            if projective:
                W, c = _canonicalize(vf, W)
                mu = (f_mu + c) % (q - 1)
            else:
                mu = np.zeros(len(W), dtype=np.int64)
            keys = index.key(W)
            found = index.lookup(keys)
            hit = found >= 0
            if hit.any():
                if projective:
                    r = (mu[hit] - mu_lookup[found[hit]]) % (q - 1)
                    ratio_gcd = gcd(ratio_gcd, int(np.gcd.reduce(r)))
                if len(edges) < max_edges:
                    for t in np.nonzero(hit)[0][: max_edges - len(edges)]:
                        edges.append((int(f_ids[t]), gi, int(found[t])))
            new = ~hit
            if new.any():
                cands.append((W[new], keys[new], mu[new], f_ids[new], np.full(int(new.sum()), gi, dtype=np.int64)))
        if not cands:
            break
        W = np.concatenate([c[0] for c in cands])
        keys = np.concatenate([c[1] for c in cands])
        mu = np.concatenate([c[2] for c in cands])
        par = np.concatenate([c[3] for c in cands])
        gen = np.concatenate([c[4] for c in cands])
        first, inv = index.unique(keys)
        if projective:
            r = (mu - mu[first][inv]) % (q - 1)
            ratio_gcd = gcd(ratio_gcd, int(np.gcd.reduce(r)))
        ids = np.arange(total, total + len(first), dtype=np.int64)
        if len(edges) < max_edges:
            dup = np.nonzero(np.arange(len(keys)) != first[inv])[0]
            for t in dup[: max_edges - len(edges)]:
                edges.append((int(par[t]), int(gen[t]), int(ids[inv[t]])))
        total += len(first)
        if total > budget:
            raise OrbitBudgetExceeded(budget, total)
        index.insert(keys[first], ids)
        mu_all.append(mu[first])
        parent.append(par[first])
        via.append(gen[first])
        frontier, f_ids, f_mu = W[first], ids, mu[first]
    return _OrbitResult(total, ratio_gcd, np.concatenate(parent), np.concatenate(via), edges, levels)


def _transversal(res: _OrbitResult, gens, u: int, F: Field, size: int) -> Matrix:
    word = []
    while u > 0:
        word.append(int(res.via[u]))
        u = int(res.parent[u])
    A = Matrix.identity(F, size)
    for gi in reversed(word):
        A = A @ gens[gi]
    return A


def _fixes(f: HomogeneousForm, A: Matrix, projective: bool) -> bool:
    g = substitute_linear(f, A)
    return g.normalized() == f.normalized() if projective else g == f


def _schreier_elements(f, res: _OrbitResult, gens, projective: bool, spec: GroupSpec, limit=MAX_GENERATORS_REPORTED):
    F, r = f.field, f.n + 1
    found = []
    for u, gi, w in res.edges:
        tu = _transversal(res, gens, u, F, r)
        tw = _transversal(res, gens, w, F, r)
        A = tu @ gens[gi] @ Matrix._raw(F, linalg.inverse(F, tw.rows))
        A = _normalize(spec, A)
        trivial = A.is_scalar() if projective else A == Matrix.identity(F, r)
        if trivial or A in found:
            continue
        assert _fixes(f, A, projective), "Schreier element does not stabilize the form"
        found.append(A)
        if len(found) >= limit:
            break
    return found


# ---------------------------------------------------------------------------
# exhaustive enumeration


def _vec_det(vf: _VecField, M: np.ndarray) -> np.ndarray:
    """Leibniz determinant of a batch (B, r, r)."""
    r = M.shape[1]
    total = np.zeros(M.shape[0], dtype=np.int64)
    for perm in itertools.permutations(range(r)):
        term = M[:, 0, perm[0]]
        for i in range(1, r):
            term = vf.mul(term, M[:, i, perm[i]])
        inversions = sum(1 for a in range(r) for b in range(a + 1, r) if perm[a] > perm[b])
        total = vf.add(total, vf.neg(term) if inversions % 2 else term)
    return total


def _enumerate_group(spec: GroupSpec, vf: _VecField, chunk: int = 1 << 16):
    """Yield batches (B, r, r) of raw matrices covering the group exactly once."""
    q, r = spec.q, spec.rank
    vectors = np.array(list(itertools.product(range(q), repeat=r)), dtype=np.int64)
    nonzero = vectors[1:]
    if spec.kind is GroupKind.PGL:
        lead = nonzero[np.arange(len(nonzero)), (nonzero != 0).argmax(axis=1)]
        first_rows = nonzero[lead == 1]
    else:
        first_rows = nonzero
    rest_count = q ** (r * (r - 1))
    for row in first_rows:
        for start in range(0, rest_count, chunk):
            codes = np.arange(start, min(start + chunk, rest_count), dtype=np.int64)
            digits = (codes[:, None] // (q ** np.arange(r * (r - 1) - 1, -1, -1, dtype=np.int64))) % q
            M = np.empty((len(codes), r, r), dtype=np.int64)
            M[:, 0, :] = row
            M[:, 1:, :] = digits.reshape(len(codes), r - 1, r)
            det = _vec_det(vf, M)
            keep = det == 1 if spec.kind is GroupKind.SL else det != 0
            if keep.any():
                yield M[keep]


def _point_table(f: HomogeneousForm, vf: _VecField):
    """All points of GF(q)^{n+1} (lex codes) and f's value at each."""
    q, r = f.field.order, f.n + 1
    pts = np.array(list(itertools.product(range(q), repeat=r)), dtype=np.int64)
    vals = np.zeros(len(pts), dtype=np.int64)
    for mono, c in f.coeffs.items():
        term = np.full(len(pts), c, dtype=np.int64)
        for j, e in enumerate(mono):
            for _ in range(e):
                term = vf.mul(term, pts[:, j])
        vals = vf.add(vals, term)
    return pts, vals


def _exhaustive(f: HomogeneousForm, spec: GroupSpec, projective: bool, ceiling: int):
    order = group_order(spec)
    if order > ceiling:
        raise UnsupportedSize(f"{spec} has order {order} > exhaustive ceiling {ceiling}")
    F = f.field
    vf = _VecField(F)
    q, r = F.order, f.n + 1
    pts, vals = _point_table(f, vf)
    weights = q ** np.arange(r - 1, -1, -1, dtype=np.int64)
    j0 = int(np.argmax(vals != 0)) if (vals != 0).any() else None
    count = 0
    found = []
    identity_like = 0
    for M in _enumerate_group(spec, vf):
        step = max(1, (1 << 21) // len(pts))
        for s in range(0, len(M), step):
            B = M[s:s + step]
            img = np.zeros((len(B), len(pts), r), dtype=np.int64)
            for i in range(r):
                acc = np.zeros((len(B), len(pts)), dtype=np.int64)
                for k in range(r):
                    acc = vf.add(acc, vf.mul(B[:, i, k][:, None], pts[None, :, k]))
                img[:, :, i] = acc
            image_vals = vals[img @ weights]
            if j0 is None:
                ok = np.ones(len(B), dtype=bool)
            elif projective:
                lam = vf.mul(image_vals[:, j0], vf.inv[vals[j0]])
                ok = (lam != 0) & (image_vals == vf.mul(lam[:, None], vals[None, :])).all(axis=1)
            else:
                ok = (image_vals == vals[None, :]).all(axis=1)
            for A in B[ok]:
                mat = Matrix._raw(F, A.tolist())
                if _fixes(f, mat, projective):
                    count += 1
                    trivial = mat.is_scalar() if projective else mat == Matrix.identity(F, r)
                    if trivial:
                        identity_like += 1
                    elif len(found) < MAX_GENERATORS_REPORTED:
                        found.append(mat)
    assert identity_like >= 1, "identity missing from the stabilizer"
    return count, found


# ---------------------------------------------------------------------------
# reports


@dataclass
class StabilizerReport:
    group: GroupSpec
    form: HomogeneousForm
    orbit_size: int
    stabilizer_order: int
    generators_found: list = field(default_factory=list)
    elapsed: float = 0.0
    method: Method = Method.ORBIT_BFS
    scalar_subgroup_order: int | None = None
    notes: list = field(default_factory=list)

    def __post_init__(self):
        total = group_order(self.group)
        if self.orbit_size * self.stabilizer_order != total:
            raise AssertionError(
                f"orbit-stabilizer failed: {self.orbit_size} * {self.stabilizer_order} != |{self.group}| = {total}"
            )

    def as_dict(self):
        F = self.group.field
        out = {
            "group": str(self.group),
            "kind": self.group.kind.value,
            "rank": self.group.rank,
            "field": F.spec,
            "group_order": group_order(self.group),
            "form": format_form(self.form),
            "orbit_size": self.orbit_size,
            "stabilizer_order": self.stabilizer_order,
            "method": self.method.value,
            "generators_found": [A.tolist() for A in self.generators_found],
        }
        if self.scalar_subgroup_order is not None:
            out["scalar_subgroup_order"] = self.scalar_subgroup_order
        if self.notes:
            out["notes"] = list(self.notes)
        return out


def _prepare(f: HomogeneousForm, spec: GroupSpec):
    if f.is_zero():
        raise InvalidInput("the zero form is fixed by everything; stabilizers need f != 0")
    if f.field != spec.field:
        raise InvalidInput(f"form over {f.field}, group over {spec.field}")
    if f.n + 1 != spec.rank:
        raise InvalidInput(f"form in {f.n + 1} variables, group of rank {spec.rank}")


def stabilizer_pair(f: HomogeneousForm, budget: int = DEFAULT_BUDGET, with_generators: bool = True):
    """GL linear stabilizer and PGL stabilizer from a single projective orbit BFS."""
    F = f.field
    gl = GroupSpec(GroupKind.GL, f.n + 1, F)
    pgl = GroupSpec(GroupKind.PGL, f.n + 1, F)
    _prepare(f, gl)
    t0 = time.perf_counter()
    # GL generators, not their PGL normal forms: the multiplier group must
    # be computed inside all of GL
    gens = generators(gl)
    res = _orbit_bfs(f, gens, projective=True, budget=budget)
    q = F.order
    g = gcd(q - 1, res.scalar_gcd)
    lam = (q - 1) // g
    if f.d % g:
        raise AssertionError("scalar matrices must contribute ω^d to the multiplier group")
    found = _schreier_elements(f, res, gens, True, pgl) if with_generators else []
    elapsed = time.perf_counter() - t0
    proj = StabilizerReport(pgl, f, res.size, group_order(pgl) // res.size, found, elapsed, Method.ORBIT_BFS)
    lin_orbit = res.size * lam
    lin_found = []
    for A in found:
        g_A = substitute_linear(f, A)
        ratio = F.div(g_A.leading_coefficient(), f.leading_coefficient())
        # rescale A by a d-th root of 1/ratio when one exists in F
        for c in range(1, q):
            if F.mul(F.pow(c, f.d), ratio) == F.one:
                lin_found.append(A.scale(c))
                break
    lin = StabilizerReport(
        gl, f, lin_orbit, group_order(gl) // lin_orbit, lin_found, elapsed, Method.ORBIT_BFS,
        scalar_subgroup_order=lam,
    )
    return lin, proj


def linear_stabilizer(f: HomogeneousForm, spec: GroupSpec, method: str = "bfs", budget: int = DEFAULT_BUDGET,
                      ceiling: int = EXHAUSTIVE_CEILING, literal: bool = False) -> StabilizerReport:
    """Order of {A in spec : f∘A = f}.

    For GL the default BFS works on the projectivized orbit and recovers
    the multiplier group; ``literal=True`` instead walks the orbit of f
    itself (useful as a cross-check, but up to q-1 times larger).
    """
    if spec.kind is GroupKind.PGL:
        raise InvalidInput("use projective_stabilizer for PGL")
    _prepare(f, spec)
    method = str(method).lower()
    if method == "exhaustive":
        t0 = time.perf_counter()
        count, found = _exhaustive(f, spec, False, ceiling)
        order = group_order(spec)
        return StabilizerReport(spec, f, order // count, count, found, time.perf_counter() - t0, Method.EXHAUSTIVE)
    if method != "bfs":
        raise InvalidInput(f"unknown method {method!r}")
    if spec.kind is GroupKind.GL and not literal:
        return stabilizer_pair(f, budget)[0]
    t0 = time.perf_counter()
    gens = generators(spec)
    res = _orbit_bfs(f, gens, projective=False, budget=budget)
    found = _schreier_elements(f, res, gens, False, spec)
    order = group_order(spec)
    return StabilizerReport(spec, f, res.size, order // res.size, found, time.perf_counter() - t0, Method.ORBIT_BFS)


def projective_stabilizer(f: HomogeneousForm, spec: GroupSpec | None = None, method: str = "bfs",
                          budget: int = DEFAULT_BUDGET, ceiling: int = EXHAUSTIVE_CEILING) -> StabilizerReport:
    """Order of {[A] in PGL : f∘A = λf for some λ}."""
    spec = spec or GroupSpec(GroupKind.PGL, f.n + 1, f.field)
    if spec.kind is not GroupKind.PGL:
        raise InvalidInput("projective_stabilizer needs a PGL group")
    _prepare(f, spec)
    method = str(method).lower()
    if method == "exhaustive":
        t0 = time.perf_counter()
        count, found = _exhaustive(f, spec, True, ceiling)
        order = group_order(spec)
        return StabilizerReport(spec, f, order // count, count, found, time.perf_counter() - t0, Method.EXHAUSTIVE)
    if method != "bfs":
        raise InvalidInput(f"unknown method {method!r}")
    return stabilizer_pair(f, budget)[1]


# ---------------------------------------------------------------------------
# verification harness


@dataclass
class BoundReport:
    index: int
    seed: int
    form: str
    status: str  # "tested", "skipped-singular" or "skipped-inconclusive"
    smoothness: str
    linear_order: int | None = None
    projective_order: int | None = None
    linear: DivisibilityReport | None = None
    projective: DivisibilityReport | None = None
    elapsed: float = 0.0

    @property
    def divides(self) -> bool:
        return self.status != "tested" or (self.linear.divides and self.projective.divides)

    def as_dict(self):
        out = {
            "index": self.index,
            "seed": self.seed,
            "form": self.form,
            "status": self.status,
            "smoothness": self.smoothness,
        }
        if self.status == "tested":
            out["linear_order"] = self.linear_order
            out["projective_order"] = self.projective_order
            out["linear"] = self.linear.as_dict()
            out["projective"] = self.projective.as_dict()
            out["verdict"] = "divides" if self.divides else "violation"
        return out


def sample_seed(seed: int, i: int) -> int:
    return seed * 1000003 + i


def check_form(f: HomogeneousForm, index: int = 0, seed: int = 0, max_ext_degree: int | None = 4,
               budget: int = DEFAULT_BUDGET) -> BoundReport:
    """Smoothness filter, both stabilizers, and both divisibility verdicts for one form."""
    t0 = time.perf_counter()
    text = format_form(f)
    verdict = is_singular(f, max_ext_degree).verdict
    if verdict is not Verdict.SMOOTH:
        status = "skipped-singular" if verdict is Verdict.SINGULAR else "skipped-inconclusive"
        return BoundReport(index, seed, text, status, verdict.value, elapsed=time.perf_counter() - t0)
    lin, proj = stabilizer_pair(f, budget, with_generators=False)
    p = f.field.characteristic
    lrep = divisibility_verdict(lin.stabilizer_order, p, vector_bound(f.n, f.d))
    prep = divisibility_verdict(proj.stabilizer_order, p, projective_bound(f.n, f.d))
    return BoundReport(
        index, seed, text, "tested", verdict.value, lin.stabilizer_order, proj.stabilizer_order,
        lrep, prep, time.perf_counter() - t0,
    )


def _sample_job(args):
    n, d, q, seed, i, max_ext_degree, budget = args
    s = sample_seed(seed, i)
    f = random_form(n, d, field_of_order(q), s)
    if f.is_zero():
        return BoundReport(i, s, "0", "skipped-singular", Verdict.SINGULAR.value)
    return check_form(f, i, s, max_ext_degree, budget)


def verify_divisibility(n: int, d: int, q: int, samples: int, seed: int = 0, max_ext_degree: int | None = 4,
                        budget: int = DEFAULT_BUDGET, workers: int = 1, forms=None) -> list[BoundReport]:
    """Sample random forms over GF(q) and check both bounds on each smooth one.

    ``forms`` replaces the random draws with given forms (they are
    filtered the same way).  Results come back in sample order whatever
    the number of workers.
    """
    if d < 3:
        raise InvalidInput(f"the bounds need d >= 3, got {d}")
    if n < 1 or samples < 1:
        raise InvalidInput("need n >= 1 and samples >= 1")
    F = field_of_order(q)
    if forms is not None:
        reports = []
        for i, f in enumerate(forms):
            if f.field != F or f.n != n or f.d != d:
                raise InvalidInput(f"form {i} does not live in degree {d}, n={n} over {F}")
            if f.is_zero():
                reports.append(BoundReport(i, -1, "0", "skipped-singular", Verdict.SINGULAR.value))
            else:
                reports.append(check_form(f, i, -1, max_ext_degree, budget))
    else:
        jobs = [(n, d, q, seed, i, max_ext_degree, budget) for i in range(samples)]
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                reports = list(pool.map(_sample_job, jobs))
        else:
            reports = [_sample_job(j) for j in jobs]
    for rep in reports:
        if not rep.divides:
            raise DivisibilityViolation(
                f"stabilizer order does not divide the bound for sample {rep.index}", rep.form, rep.as_dict()
            )
    tested = sum(1 for r in reports if r.status == "tested")
    wanted = samples if forms is None else len(reports)
    if 2 * tested < wanted:
        raise InsufficientSmoothSamples(f"only {tested} of {wanted} samples were provably smooth", reports)
    return reports


def random_group_element(spec: GroupSpec, rng: random.Random) -> Matrix:
    F, r = spec.field, spec.rank
    while True:
        A = Matrix.random_invertible(F, r, rng)
        if spec.kind is GroupKind.SL:
            det = A.det()
            rows = [list(row) for row in A.rows]
            rows[0] = [F.div(x, det) for x in rows[0]]
            A = Matrix._raw(F, rows)
        return _normalize(spec, A)
