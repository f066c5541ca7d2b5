"""The rank-28 Gaussian-integer lattice with a rootless even unimodular real form.

Vectors carry 28 complex coordinates, 7 quaternion components of 4 each
(the coefficients of i, j, k, l), stored as twice their true values so that
every lattice member has entries in Z[i].  Arrays of vectors have shape
(..., 28, 2) with int64 [re, im] pairs.

The Hermitian form is (1/4) sum x_t conj(y_t) on doubled coordinates and the
real form is its real part.  Viewed as a rank-56 Z-lattice with basis
{b_j, i b_j} the real form is even with determinant 1 and minimum 4.
"""

import json
import os
import tempfile
import hashlib
import itertools
from fractions import Fraction
from importlib import resources
from math import comb

import numpy as np
import numba

DIM = 28
BLOCKS = 7
MIN_NORM = 4
# number of vectors of norm 4, pinned by an independent enumeration run
MINIMAL_VECTOR_COUNT = 16240


class ConstructionError(RuntimeError):
    """The generating data does not produce an even unimodular rootless lattice."""


# ---------------------------------------------------------------------------
# generators


def table_generators():
    """The 21 generating vectors as an int64 array (21, 28, 2), doubled."""
    text = resources.files(__package__).joinpath("data", "cw_generators.json").read_text()
    vecs = json.loads(text)["vectors"]
    return np.array([[e for row in v for e in row] for v in vecs], dtype=np.int64)


def hermitian(x, y):
    """Hermitian pairing of two doubled vectors, as a complex number with
    integer or quarter-integer parts returned exactly as (Fraction, Fraction)."""
    xr, xi = x[..., 0], x[..., 1]
    yr, yi = y[..., 0], y[..., 1]
    re = int(np.sum(xr * yr + xi * yi))
    im = int(np.sum(xi * yr - xr * yi))
    return Fraction(re, 4), Fraction(im, 4)


def norm(x):
    """Real norm (= Hermitian norm) of doubled vectors; exact Fraction for one
    vector, int64 array of 4*norm for a stack."""
    if x.ndim == 2:
        return Fraction(int(np.sum(x * x)), 4)
    return np.sum(x * x, axis=(-2, -1))


# ---------------------------------------------------------------------------
# the monomial group: quaternion right multiplication, sign changes, rotation

_QUAT = {"1": (1, 0, 0, 0), "j": (0, 1, 0, 0), "k": (0, 0, 1, 0), "l": (0, 0, 0, 1)}
# the three generating sign sets {n, n+3, n+5, n+6} for n = 0, 1, 2
_SIGN_SETS = [frozenset((n + d) % 7 for d in (0, 3, 5, 6)) for n in range(3)]


def _qmul(a, b):
    # quaternion product on (1, j, k, l) with jk = l, kl = j, lj = k
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return (a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0)


def _block_action(letter, sign):
    """(perm, unit exponents) on one 4-block for right multiplication by
    sign*letter.  Coordinates x give the quaternion (i x0) 1 + x1 j + x2 k + x3 l."""
    perm, units = [0] * 4, [0] * 4
    q = tuple(sign * c for c in _QUAT[letter])
    for t in range(4):
        x = [0] * 4
        x[t] = 1
        std = (1j * x[0], x[1], x[2], x[3])
        y = _qmul(std, q)
        y = (-1j * y[0], y[1], y[2], y[3])
        hits = [s for s in range(4) if y[s] != 0]
        assert len(hits) == 1
        s = hits[0]
        perm[t] = s
        units[t] = {1: 0, 1j: 1, -1: 2, -1j: 3}[complex(y[s])]
    return perm, units


class MonomialElement:
    """Right multiplication by sign*letter, then sign changes on the components
    of the chosen sign sets, then rotation (new q_m = old q_{m+rotation})."""

    __slots__ = ("letter", "sign", "mask", "rotation", "perm", "units")

    def __init__(self, letter="1", sign=1, mask=0, rotation=0):
        if letter not in _QUAT or sign not in (1, -1) or not 0 <= mask < 8:
            raise ValueError("bad monomial element")
        self.letter, self.sign, self.mask, self.rotation = letter, sign, mask, rotation % 7
        bperm, bunits = _block_action(letter, sign)
        flips = [0] * BLOCKS
        for t in range(3):
            if mask >> t & 1:
                for c in _SIGN_SETS[t]:
                    flips[c] ^= 1
        perm = np.empty(DIM, np.int64)
        units = np.empty(DIM, np.int64)
        for b in range(BLOCKS):
            nb = (b - self.rotation) % 7
            for t in range(4):
                perm[4 * b + t] = 4 * nb + bperm[t]
                units[4 * b + t] = (bunits[t] + 2 * flips[b]) % 4
        self.perm, self.units = perm, units

    def __repr__(self):
        return "MonomialElement(%r, %d, %d, %d)" % (self.letter, self.sign, self.mask, self.rotation)

    def key(self):
        return tuple(self.perm) + tuple(self.units)

    def apply(self, v):
        """Image of doubled vector(s) v, shape (..., 28, 2)."""
        return monomial_action(self.perm, self.units, v)


def _unit_times(v, e):
    # multiply Gaussian integers (..., 2) by i^e, e an integer array broadcast over v[..., 0]
    re, im = v[..., 0], v[..., 1]
    e = e % 4
    out_re = np.where(e == 0, re, np.where(e == 1, -im, np.where(e == 2, -re, im)))
    out_im = np.where(e == 0, im, np.where(e == 1, re, np.where(e == 2, -im, -re)))
    return np.stack([out_re, out_im], axis=-1)


def monomial_action(perm, units, v):
    """v'[perm[t]] = i^units[t] * v[t]."""
    v = np.asarray(v)
    out = np.empty_like(v)
    out[..., perm, :] = _unit_times(v, units)
    return out


def monomial_group():
    """All 448 elements."""
    return [MonomialElement(q, s, m, r)
            for q in "1jkl" for s in (1, -1) for m in range(8) for r in range(7)]


def compose(g, h):
    """(perm, units) of g after h."""
    perm = g.perm[h.perm]
    units = (h.units + g.units[h.perm]) % 4
    return perm, units


# ---------------------------------------------------------------------------
# Gaussian-integer echelon form


def _gmul(a, b):
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _gnorm(a):
    return a[0] * a[0] + a[1] * a[1]


def _gdivround(a, b):
    n = _gnorm(b)
    num = _gmul(a, (b[0], -b[1]))
    return ((2 * num[0] + n) // (2 * n), (2 * num[1] + n) // (2 * n))


def _gxgcd(a, b):
    r0, r1 = a, b
    s0, s1 = (1, 0), (0, 0)
    t0, t1 = (0, 0), (1, 0)
    while r1 != (0, 0):
        q = _gdivround(r0, r1)
        qr = _gmul(q, r1)
        r0, r1 = r1, (r0[0] - qr[0], r0[1] - qr[1])
        qs = _gmul(q, s1)
        s0, s1 = s1, (s0[0] - qs[0], s0[1] - qs[1])
        qt = _gmul(q, t1)
        t0, t1 = t1, (t0[0] - qt[0], t0[1] - qt[1])
    return r0, s0, t0


def _lincomb(s, u, t, v, start):
    out = list(u)
    for k in range(start, len(u)):
        a, b = _gmul(s, u[k]), _gmul(t, v[k])
        out[k] = (a[0] + b[0], a[1] + b[1])
    return out


class _Echelon:
    """Upper-triangular Z[i]-basis of a growing module, reduced modulo an
    integer M with M * Z[i]^n inside the module once the rank is full."""

    def __init__(self, n):
        self.n = n
        self.rows = [None] * n
        self.modulus = None

    def _reduce(self, v, j):
        if self.modulus is None:
            return v
        m = self.modulus
        return v[:j + 1] + [(a % m, b % m) for a, b in v[j + 1:]]

    def insert(self, v):
        v = list(v)
        for j in range(self.n):
            if v[j] == (0, 0):
                continue
            row = self.rows[j]
            if row is None:
                self.rows[j] = self._reduce(v, j)
                self._update_modulus()
                return
            p = row[j]
            g, s, t = _gxgcd(p, v[j])
            if _gnorm(g) == _gnorm(p):
                # p divides v_j
                q = _gdivround(v[j], p)
                v = _lincomb((1, 0), v, (-q[0], -q[1]), row, j)
            else:
                a = _gdivround(p, g)
                b = _gdivround(v[j], g)
                new = _lincomb(s, row, t, v, j)
                v = _lincomb(b, row, (-a[0], -a[1]), v, j)
                self.rows[j] = self._reduce(new, j)
                self._update_modulus()
            assert v[j] == (0, 0)
            v = self._reduce(v, j)

    def _update_modulus(self):
        if any(r is None for r in self.rows):
            return
        det = (1, 0)
        for j, r in enumerate(self.rows):
            det = _gmul(det, r[j])
        m = _gnorm(det)
        if self.modulus is None or m < self.modulus:
            self.modulus = m

    def finish(self):
        """Add M e_j and fully reduce; returns the rows (upper triangular)."""
        if any(r is None for r in self.rows):
            raise ConstructionError("module does not have full rank")
        m = self.modulus
        for j in range(self.n):
            e = [(0, 0)] * self.n
            e[j] = (m, 0)
            self.insert(e)
        # reduce entries above each pivot, left to right
        rows = self.rows
        for i in range(self.n):
            for j in range(i + 1, self.n):
                q = _gdivround(rows[i][j], rows[j][j])
                if q != (0, 0):
                    rows[i] = _lincomb((1, 0), rows[i], (-q[0], -q[1]), rows[j], j)
        return rows


# ---------------------------------------------------------------------------
# exact integer determinant


def _int_det(M):
    """Bareiss determinant of an integer matrix (list of lists of Python ints)."""
    A = [list(r) for r in M]
    n = len(A)
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for r in range(k + 1, n):
                if A[r][k] != 0:
                    A[k], A[r] = A[r], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------
# LLL and Fincke-Pohst enumeration


@numba.njit(cache=True)
def _gso(B):
    n = B.shape[0]
    Bf = B.astype(np.float64)
    Bs = np.zeros_like(Bf)
    mu = np.zeros((n, n))
    bb = np.zeros(n)
    for i in range(n):
        v = Bf[i].copy()
        for j in range(i):
            mu[i, j] = np.dot(Bf[i], Bs[j]) / bb[j]
            v -= mu[i, j] * Bs[j]
        Bs[i] = v
        bb[i] = np.dot(v, v)
    return mu, bb


@numba.njit(cache=True)
def _lll(B, delta):
    B = B.copy()
    n = B.shape[0]
    mu, bb = _gso(B)
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            q = np.rint(mu[k, j])
            if q != 0.0:
                qi = np.int64(q)
                B[k] -= qi * B[j]
                for t in range(j):
                    mu[k, t] -= q * mu[j, t]
                mu[k, j] -= q
        if bb[k] >= (delta - mu[k, k - 1] ** 2) * bb[k - 1]:
            k += 1
        else:
            tmp = B[k].copy()
            B[k] = B[k - 1]
            B[k - 1] = tmp
            mu, bb = _gso(B)
            k = max(k - 1, 1)
    return B


def lll_reduce(B, delta=0.99):
    """LLL-reduce the rows of an integer matrix (Euclidean inner product)."""
    return _lll(np.asarray(B, dtype=np.int64), delta)


@numba.njit(cache=True)
def _enum_kernel(mu, bstar, R, prefix, top, out):
    """Nonzero x with x[top:] = prefix[top:] and sum_k (x_k - c_k)^2 b_k <= R;
    of each +-pair only one is produced when the prefix is zero."""
    n = bstar.shape[0]
    x = prefix.copy()
    c = np.zeros(n)
    l = np.zeros(n + 1)
    dx = np.zeros(n, np.int64)
    ddx = np.zeros(n, np.int64)
    sig = np.zeros((n + 1, n))
    rr = np.full(n + 1, n - 1, np.int64)
    eps = 1e-6
    # partial norm and centre for the fixed levels
    for k in range(n - 1, top - 1, -1):
        ck = 0.0
        for i in range(k + 1, n):
            ck -= x[i] * mu[i, k]
        d = x[k] - ck
        l[k] = l[k + 1] + d * d * bstar[k]
    count = 0
    nodes = 0
    if top == 0:
        if eps < l[0] <= R + eps:
            for i in range(n):
                out[0, i] = x[i]
            return 1, 1
        return 0, 1
    if l[top] > R + eps:
        return 0, 1
    k = top - 1
    for i in range(n - 1, k, -1):
        sig[i, k] = sig[i + 1, k] + x[i] * mu[i, k]
    rr[top] = top
    c[k] = -sig[k + 1, k]
    x[k] = int(np.rint(c[k]))
    s = 1 if c[k] >= x[k] else -1
    dx[k] = s
    ddx[k] = s
    while True:
        d = x[k] - c[k]
        lk = l[k + 1] + d * d * bstar[k]
        nodes += 1
        if lk <= R + eps:
            if k == 0:
                if lk > eps:
                    if count < out.shape[0]:
                        for i in range(n):
                            out[count, i] = x[i]
                    count += 1
            else:
                l[k] = lk
                for i in range(rr[k], k - 1, -1):
                    sig[i, k - 1] = sig[i + 1, k - 1] + x[i] * mu[i, k - 1]
                if rr[k] > rr[k - 1]:
                    rr[k - 1] = rr[k]
                rr[k] = k
                k -= 1
                c[k] = -sig[k + 1, k]
                x[k] = int(np.rint(c[k]))
                s = 1 if c[k] >= x[k] else -1
                dx[k] = s
                ddx[k] = s
                continue
        else:
            k += 1
            if k >= top:
                break
        if l[k + 1] == 0.0:
            x[k] += 1
        else:
            x[k] += dx[k]
            ddx[k] = -ddx[k]
            dx[k] = ddx[k] - dx[k]
    return count, nodes


def _cholesky_data(G):
    C = np.linalg.cholesky(np.asarray(G, dtype=np.float64))
    diag = np.diag(C)
    return C / diag, diag ** 2


def _prefixes(mu, bstar, R, depth):
    """Feasible assignments of the top `depth` coordinates, one per +-pair."""
    n = len(bstar)
    out = []

    def rec(k, x, lpart, nonzero):
        if k < n - depth:
            out.append(x.copy())
            return
        ck = -sum(x[i] * mu[i, k] for i in range(k + 1, n))
        rad = np.sqrt(max(R - lpart, 0.0) / bstar[k]) + 1e-9
        lo, hi = int(np.ceil(ck - rad)), int(np.floor(ck + rad))
        for v in range(lo, hi + 1):
            if not nonzero and v < 0:
                continue
            d = v - ck
            lk = lpart + d * d * bstar[k]
            if lk <= R + 1e-6:
                x[k] = v
                rec(k - 1, x, lk, nonzero or v != 0)
                x[k] = 0

    rec(n - 1, np.zeros(n, np.int64), 0.0, False)
    return out


def short_vectors(G, R, depth=0, cap=1 << 16):
    """All nonzero x with x G x^T <= R, one of each +-pair (x is the first
    nonzero-from-the-top positive for the prefix levels).  Returns (X, nodes)."""
    mu, bstar = _cholesky_data(G)
    n = len(bstar)
    found, nodes = [], 0
    for prefix in _prefixes(mu, bstar, float(R), depth):
        X, nd = _run_job(mu, bstar, float(R), prefix, n - depth, cap)
        found.append(X)
        nodes += nd
    X = np.concatenate(found) if found else np.zeros((0, n), np.int64)
    return X, nodes


def _run_job(mu, bstar, R, prefix, top, cap):
    while True:
        out = np.zeros((cap, len(bstar)), np.int64)
        cnt, nodes = _enum_kernel(mu, bstar, R, prefix, top, out)
        if cnt <= cap:
            return out[:cnt], nodes
        cap = cnt


# ---------------------------------------------------------------------------
# the lattice


def _orbit(gens, group):
    seen = set()
    out = []
    for g in group:
        imgs = g.apply(gens)
        for v in imgs:
            key = v.tobytes()
            if key not in seen:
                seen.add(key)
                out.append(v)
    return np.array(out)


def _interleave(v):
    return v.reshape(v.shape[:-2] + (2 * DIM,))


def _times_i(v):
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


class CWLattice:
    """Z[i]-basis (28 doubled vectors), Hermitian and real Gram data."""

    def __init__(self, basis):
        self.basis = np.asarray(basis, dtype=np.int64)
        real = np.concatenate([self.basis, _times_i(self.basis)])
        self.real_basis = _interleave(real)              # 56 x 56, doubled
        g4 = self.real_basis @ self.real_basis.T
        if np.any(g4 % 4):
            raise ConstructionError("real Gram matrix is not integral")
        self.real_gram = g4 // 4
        self._reduced = None

    @property
    def rank(self):
        b = np.array([[complex(*e) for e in row] for row in self.basis])
        return int(np.linalg.matrix_rank(b))

    def hermitian_gram(self):
        """28 x 28 Hermitian Gram matrix as nested lists of (Fraction, Fraction)."""
        return [[hermitian(x, y) for y in self.basis] for x in self.basis]

    def determinant(self):
        return _int_det(self.real_gram.tolist())

    def is_even(self):
        return bool(np.all(np.diag(self.real_gram) % 2 == 0))

    def reduced(self):
        """(LLL-reduced real coefficient basis change U, reduced Gram)."""
        if self._reduced is None:
            # reduce the real basis itself (Euclidean = 4 * real form)
            red = lll_reduce(self.real_basis)
            U = _solve_integer(self.real_basis, red)
            gram = red @ red.T // 4
            self._reduced = (red, U, gram)
        return self._reduced

    def contains(self, v):
        """Membership of a doubled vector."""
        coeffs = np.linalg.solve(self.real_basis.T.astype(float), _interleave(np.asarray(v)).astype(float))
        r = np.rint(coeffs)
        return bool(np.allclose(coeffs, r, atol=1e-6)
                    and np.array_equal(r.astype(np.int64) @ self.real_basis, _interleave(np.asarray(v))))

    def minimum(self):
        """Smallest nonzero norm: the shortest reduced basis vector unless a
        shorter vector turns up in a search strictly below it (norms are even)."""
        red, _, gram = self.reduced()
        upper = int(np.min(np.diag(gram)))
        X, _ = short_vectors(gram, float(upper - 2))
        if len(X) == 0:
            return upper
        return int(min(int(x @ gram @ x) for x in X))

    def count_up_to(self, bound):
        red, _, gram = self.reduced()
        X, _ = short_vectors(gram, float(bound))
        return 2 * len(X)

    def self_dual_check(self):
        """Dual basis (inverse Gram times basis) lies in the lattice: with an
        integral Gram this is equivalent to |det| = 1."""
        return abs(self.determinant()) == 1


def _solve_integer(A, B):
    """Integer U with U A = B (A square, unimodular relation expected)."""
    U = np.rint(np.linalg.solve(A.T.astype(float), B.T.astype(float)).T).astype(np.int64)
    if not np.array_equal(U @ A, B):
        raise ConstructionError("basis change is not integral")
    return U


def build_lattice(check=True):
    """Close the generators under the monomial group, reduce to a Z[i]-basis,
    and verify rank 28, evenness, determinant 1 and the absence of norm-2 vectors."""
    gens = table_generators()
    orbit = _orbit(gens, monomial_group())
    ech = _Echelon(DIM)
    for v in orbit:
        ech.insert([tuple(int(t) for t in e) for e in v])
    rows = ech.finish()
    L = CWLattice(np.array([[list(e) for e in r] for r in rows], dtype=np.int64))
    if check:
        if L.rank != DIM:
            raise ConstructionError("rank %d" % L.rank)
        if not L.is_even():
            raise ConstructionError("real form is not even")
        det = L.determinant()
        if det != 1:
            raise ConstructionError("determinant %d" % det)
        if L.count_up_to(2) != 0:
            raise ConstructionError("lattice has roots")
    return L


# ---------------------------------------------------------------------------
# minimal vectors


def _lattice_fingerprint(L):
    return hashlib.sha256(L.real_gram.tobytes()).hexdigest()[:16]


def default_workers():
    return max(1, int(os.environ.get("RUVOA_WORKERS", "1")))


def _job(args):
    mu, bstar, R, prefix, top, idx = args
    X, nodes = _run_job(mu, bstar, R, prefix, top, 1 << 14)
    return idx, X, nodes


def enumerate_minimal(L, bound=MIN_NORM, workers=None, checkpoint=None, depth=2, progress=None):
    """All vectors of norm <= bound (bound defaults to the minimum 4), as doubled
    vectors (n, 28, 2) in canonical sorted order.

    The search tree is split by the values of the top `depth` coordinates in
    the LLL-reduced basis; finished jobs are recorded in the JSON checkpoint
    file (if given) so an interrupted run resumes where it stopped.
    """
    red, _, gram = L.reduced()
    mu, bstar = _cholesky_data(gram)
    n = len(bstar)
    prefixes = _prefixes(mu, bstar, float(bound), depth)
    state = {"lattice": _lattice_fingerprint(L), "bound": bound, "depth": depth, "done": {}}
    if checkpoint and os.path.exists(checkpoint):
        with open(checkpoint) as fh:
            old = json.load(fh)
        if all(old.get(k) == state[k] for k in ("lattice", "bound", "depth")):
            state = old
    todo = [i for i in range(len(prefixes)) if str(i) not in state["done"]]
    jobs = [(mu, bstar, float(bound), prefixes[i], n - depth, i) for i in todo]

    def record(idx, X):
        state["done"][str(idx)] = X.tolist()
        if checkpoint:
            _atomic_json(checkpoint, state)
        if progress:
            progress(len(state["done"]), len(prefixes))

    workers = workers or default_workers()
    if workers > 1 and len(jobs) > 1:
        import multiprocessing as mp
        with mp.get_context("spawn").Pool(workers) as pool:
            for idx, X, _ in pool.imap_unordered(_job, jobs):
                record(idx, X)
    else:
        for job in jobs:
            idx, X, _ = _job(job)
            record(idx, X)
    coeffs = [np.array(state["done"][str(i)], dtype=np.int64).reshape(-1, n) for i in range(len(prefixes))]
    X = np.concatenate(coeffs)
    V = (X @ red) // 1
    V = np.concatenate([V, -V]).reshape(-1, DIM, 2)
    return canonical_sort(V)


def _atomic_json(path, obj):
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        json.dump(obj, fh)
    os.replace(tmp, path)


def canonical_sort(V):
    flat = _interleave(V)
    order = np.lexsort(flat.T[::-1])
    return V[order]


def write_vectors(path, V):
    """JSON lines, one vector per line as 28 [re, im] pairs (doubled)."""
    with open(path, "w") as fh:
        for v in V:
            fh.write(json.dumps(v.tolist(), separators=(",", ":")) + "\n")


def read_vectors(path):
    with open(path) as fh:
        return np.array([json.loads(line) for line in fh if line.strip()], dtype=np.int64)


def theta_series(L, max_norm, vectors=None):
    """Coefficients [c_0, c_1, ...] of sum q^{N(v)/2} through q^{max_norm/2}."""
    if max_norm % 2:
        raise ValueError("max_norm must be even")
    if vectors is None:
        vectors = enumerate_minimal(L, bound=max_norm)
    norms4 = norm(vectors)
    coeffs = [1] + [0] * (max_norm // 2)
    for n4 in norms4.tolist():
        coeffs[n4 // 8] += 1
    return coeffs


# ---------------------------------------------------------------------------
# the quartic invariant


def quartic_indices(n=DIM):
    """Sorted multi-indices a <= b <= c <= d, lexicographic (31465 for n = 28)."""
    return np.array(list(itertools.combinations_with_replacement(range(n), 4)), dtype=np.int64)


def _multinomial(idx):
    out = np.empty(len(idx), np.int64)
    for r, t in enumerate(idx):
        _, cnt = np.unique(t, return_counts=True)
        m = 24
        for c in cnt:
            m //= int(np.prod(range(1, c + 1)))
        out[r] = m
    return out


class QuarticInvariant:
    """Coefficients of sum_v v^4 and sum_v (v*)^4 on the monomial basis x^alpha,
    alpha running over quartic_indices().  Coordinates are doubled, so each
    block is 2^4 times the coefficient on true coordinates (``scale``)."""

    scale = 16

    def __init__(self, indices, power_sums, multinomials):
        self.indices = indices
        self.power_sums = power_sums            # complex128 holding Gaussian integers
        self.multinomials = multinomials

    @property
    def coefficients(self):
        return self.multinomials * self.power_sums

    @property
    def dual_coefficients(self):
        return np.conj(self.coefficients)

    def is_nonzero(self):
        return bool(np.any(self.power_sums != 0))

    def corner_value(self):
        """sum_v v_0^4, the coefficient of x_0^4 (true coordinates times 16)."""
        return self.power_sums[0]

    def items(self):
        """Sorted (multi-index, [re, im]) pairs of the v^4 block, zeros omitted."""
        c = self.coefficients
        nz = np.nonzero(c)[0]
        return [(tuple(int(t) for t in self.indices[r]), [int(c[r].real), int(c[r].imag)]) for r in nz]

    def to_json(self):
        return {"scale": self.scale, "block": "v^4; the (v*)^4 block is its conjugate",
                "terms": [[list(k), v] for k, v in self.items()]}


def build_delta(vectors):
    """Power sums sum_v v_a v_b v_c v_d over the minimal vectors, via the
    product of the pair-product matrix with itself (exact in float64)."""
    V = np.asarray(vectors)
    z = V[..., 0].astype(np.float64) + 1j * V[..., 1].astype(np.float64)
    pairs = np.array(list(itertools.combinations_with_replacement(range(DIM), 2)))
    pair_index = {tuple(p): r for r, p in enumerate(pairs)}
    P = z[:, pairs[:, 0]] * z[:, pairs[:, 1]]
    T = P.T @ P
    idx = quartic_indices()
    rows = np.array([pair_index[(a, b)] for a, b, _, _ in idx])
    cols = np.array([pair_index[(c, d)] for _, _, c, d in idx])
    sums = T[rows, cols]
    if np.max(np.abs(sums)) > 2 ** 50:
        raise OverflowError("power sums exceed exact float range")
    return QuarticInvariant(idx, np.round(sums.real) + 1j * np.round(sums.imag), _multinomial(idx))


def _quartic_rank(idx, n=DIM):
    # position of sorted multi-indices in quartic_indices(n) order
    idx = np.asarray(idx)
    rank = np.zeros(len(idx), np.int64)
    prev = np.zeros(len(idx), np.int64)
    for pos in range(4):
        left = 4 - pos
        for v in range(n):
            # all tuples whose entry at pos is v (>= prev) and precede idx[pos]
            sel = (v >= prev) & (v < idx[:, pos])
            rank[sel] += comb(n - v + left - 2, left - 1)
        prev = idx[:, pos]
    return rank


def delta_invariant_under(delta, g):
    """Exact check that g maps the power-sum tensor to itself:
    S[perm(alpha)] == prod units * S[alpha]."""
    idx = delta.indices
    img = np.sort(g.perm[idx], axis=1)
    e = g.units[idx].sum(axis=1) % 4
    unit = np.array([1, 1j, -1, -1j])[e]
    target = _quartic_rank(img)
    return bool(np.array_equal(delta.power_sums[target], unit * delta.power_sums))


def entries_real_or_imaginary(vectors):
    """True when every coordinate of every vector is real or purely imaginary."""
    V = np.asarray(vectors)
    return bool(not np.any((V[..., 0] != 0) & (V[..., 1] != 0)))
