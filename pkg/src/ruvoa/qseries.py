"""Exact two-variable q/p series, factored products, and eta evaluation.

Series carry exponents on fixed ladders: q in steps of 1/24 and p in steps
of 1/2.  Coefficients are Gaussian rationals.  Everything below a series'
cutoff is exact; nothing above it is ever reported.

A FactoredForm keeps a product of atoms (1 - zeta p^a q^b)^e symbolically so
that zeros and poles at p = 1 can be cancelled before substituting p = 1.
"""

import cmath
import math
from fractions import Fraction
from numbers import Rational

Q_DEN = 24
P_DEN = 2


class ConfigurationError(ValueError):
    """Operands live on different exponent ladders."""


class NotInvertibleError(ArithmeticError):
    pass


class UnsupportedPhaseError(ValueError):
    """Phase whose exponential is not in {1, i, -1, -i}."""


class NotExpandableError(ArithmeticError):
    """An atom with no q-dependence and a negative exponent has no finite
    expansion in p at fixed q-order."""


class DivergesOrVanishes(ArithmeticError):
    """The p -> 1 limit is 0 (order > 0) or infinite (order < 0)."""

    def __init__(self, order):
        self.order = order
        kind = "vanishes" if order > 0 else "diverges"
        super().__init__("limit %s: net order %d at p = 1" % (kind, order))


class PrecisionError(ArithmeticError):
    pass


def _num(x):
    # ints stay ints; integral Fractions collapse to int
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, Rational):
        return _num(Fraction(x))
    if isinstance(x, float):
        raise TypeError("floats are not exact coefficients")
    raise TypeError("cannot use %r as a rational" % (x,))


class GaussRat:
    """Exact Gaussian rational re + im*i."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        if isinstance(re, GaussRat):
            re, im = re.re, re.im
        elif isinstance(re, complex):
            raise TypeError("complex floats are not exact")
        self.re = _num(re)
        self.im = _num(im)

    @staticmethod
    def coerce(x):
        if isinstance(x, GaussRat):
            return x
        return GaussRat(x)

    @classmethod
    def root_of_unity(cls, a):
        """exp(2 pi i a) for a quarter-integer a."""
        a = Fraction(a)
        if (4 * a).denominator != 1:
            raise UnsupportedPhaseError("phase %s is not a quarter-integer" % a)
        return _QUARTER_ROOTS[int(4 * a) % 4]

    def __repr__(self):
        return "GaussRat(%s, %s)" % (self.re, self.im)

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return "%s*i" % self.im
        return "(%s + %s*i)" % (self.re, self.im)

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def __eq__(self, other):
        if isinstance(other, GaussRat):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Fraction)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self):
        return hash((self.re, self.im))

    def __neg__(self):
        return GaussRat(-self.re, -self.im)

    def __add__(self, other):
        o = GaussRat.coerce(other)
        return GaussRat(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = GaussRat.coerce(other)
        return GaussRat(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        return GaussRat.coerce(other) - self

    def __mul__(self, other):
        o = GaussRat.coerce(other)
        return GaussRat(self.re * o.re - self.im * o.im,
                        self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def conj(self):
        return GaussRat(self.re, -self.im)

    def norm(self):
        return _num(self.re * self.re + self.im * self.im)

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("GaussRat division by zero")
        return GaussRat(Fraction(self.re) / n, Fraction(-self.im) / n)

    def __truediv__(self, other):
        return self * GaussRat.coerce(other).inverse()

    def __rtruediv__(self, other):
        return GaussRat.coerce(other) * self.inverse()

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        out, base = ONE, self
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def to_complex(self):
        return complex(float(self.re), float(self.im))

    def to_json(self):
        re, im = Fraction(self.re), Fraction(self.im)
        return [re.numerator, re.denominator, im.numerator, im.denominator]

    @classmethod
    def from_json(cls, v):
        return cls(Fraction(v[0], v[1]), Fraction(v[2], v[3]))


ZERO = GaussRat(0)
ONE = GaussRat(1)
I = GaussRat(0, 1)
_QUARTER_ROOTS = (ONE, I, GaussRat(-1), GaussRat(0, -1))


def _mul_raw(ar, ai, br, bi):
    if ai == 0 and bi == 0:
        return ar * br, 0
    return ar * br - ai * bi, ar * bi + ai * br


def _ladder(x, den, what):
    x = Fraction(x) * den
    if x.denominator != 1:
        raise ConfigurationError("%s exponent %s is off the 1/%d ladder"
                                 % (what, x / den, den))
    return int(x)


class TwoVarSeries:
    """Truncated series sum c[m,n] p^(m/pDen) q^(n/qDen), exact for n <= qCutoff.

    terms maps (pNum, qNum) -> GaussRat; zero coefficients are never stored.
    """

    __slots__ = ("_terms", "qCutoff", "pDen", "qDen")

    def __init__(self, terms, qCutoff, pDen=P_DEN, qDen=Q_DEN):
        self.pDen = pDen
        self.qDen = qDen
        self.qCutoff = int(qCutoff)
        clean = {}
        for (m, n), c in terms.items():
            if n > self.qCutoff:
                continue
            c = GaussRat.coerce(c)
            if c:
                clean[(int(m), int(n))] = c
        self._terms = clean

    # construction helpers

    @classmethod
    def one(cls, qCutoff):
        return cls({(0, 0): ONE}, qCutoff)

    @classmethod
    def monomial(cls, coeff, pExp, qExp, qCutoff):
        key = (_ladder(pExp, P_DEN, "p"), _ladder(qExp, Q_DEN, "q"))
        return cls({key: GaussRat.coerce(coeff)}, qCutoff)

    @property
    def terms(self):
        return dict(self._terms)

    @property
    def qFloor(self):
        if not self._terms:
            return self.qCutoff + 1
        return min(n for (_, n) in self._terms)

    def is_zero(self):
        return not self._terms

    def _check(self, other):
        if (self.pDen, self.qDen) != (other.pDen, other.qDen):
            raise ConfigurationError("exponent ladders differ: (%d,%d) vs (%d,%d)"
                                     % (self.pDen, self.qDen, other.pDen, other.qDen))

    def coefficient(self, pExp, qExp):
        """Coefficient of p^pExp q^qExp (rational exponents)."""
        m = Fraction(pExp) * self.pDen
        n = Fraction(qExp) * self.qDen
        if n > self.qCutoff:
            raise ValueError("q^%s lies above the cutoff" % qExp)
        if m.denominator != 1 or n.denominator != 1:
            return ZERO
        return self._terms.get((int(m), int(n)), ZERO)

    def coeff_num(self, pNum, qNum):
        if qNum > self.qCutoff:
            raise ValueError("qNum %d lies above the cutoff %d" % (qNum, self.qCutoff))
        return self._terms.get((pNum, qNum), ZERO)

    def layers(self):
        """{qNum: {pNum: coeff}} in increasing qNum order."""
        out = {}
        for (m, n), c in sorted(self._terms.items(), key=lambda t: (t[0][1], t[0][0])):
            out.setdefault(n, {})[m] = c
        return out

    def q_orders(self):
        return sorted({n for (_, n) in self._terms})

    def is_p_free(self):
        return all(m == 0 for (m, _) in self._terms)

    # arithmetic

    def __eq__(self, other):
        if not isinstance(other, TwoVarSeries):
            return NotImplemented
        return (self.pDen, self.qDen, self.qCutoff) == (other.pDen, other.qDen, other.qCutoff) \
            and self._terms == other._terms

    def agrees_with(self, other, qCutoff=None):
        """Equality of all coefficients up to the common (or given) cutoff."""
        self._check(other)
        cut = min(self.qCutoff, other.qCutoff)
        if qCutoff is not None:
            if qCutoff > cut:
                raise ValueError("requested cutoff exceeds known precision")
            cut = qCutoff
        a = {k: v for k, v in self._terms.items() if k[1] <= cut}
        b = {k: v for k, v in other._terms.items() if k[1] <= cut}
        return a == b

    def truncate(self, qCutoff):
        return TwoVarSeries(self._terms, min(qCutoff, self.qCutoff), self.pDen, self.qDen)

    def __neg__(self):
        return TwoVarSeries({k: -v for k, v in self._terms.items()}, self.qCutoff,
                            self.pDen, self.qDen)

    def __add__(self, other):
        if not isinstance(other, TwoVarSeries):
            other = TwoVarSeries({(0, 0): other}, self.qCutoff, self.pDen, self.qDen)
        self._check(other)
        cut = min(self.qCutoff, other.qCutoff)
        out = dict(self._terms)
        for k, v in other._terms.items():
            out[k] = out[k] + v if k in out else v
        return TwoVarSeries(out, cut, self.pDen, self.qDen)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = GaussRat.coerce(c)
        return TwoVarSeries({k: v * c for k, v in self._terms.items()}, self.qCutoff,
                            self.pDen, self.qDen)

    def shift(self, pNum, qNum):
        """Multiply by the exact monomial p^(pNum/pDen) q^(qNum/qDen)."""
        return TwoVarSeries({(m + pNum, n + qNum): v for (m, n), v in self._terms.items()},
                            self.qCutoff + qNum, self.pDen, self.qDen)

    def __mul__(self, other):
        if isinstance(other, TwoVarSeries):
            return series_mul(self, other)
        return self.scale(other)

    __rmul__ = __mul__

    def __pow__(self, e):
        if e < 0:
            return series_invert(self) ** (-e)
        out = None
        base = self
        while e:
            if e & 1:
                out = base if out is None else series_mul(out, base)
            e >>= 1
            if e:
                base = series_mul(base, base)
        if out is None:
            return TwoVarSeries.one(self.qCutoff - self.qFloor)
        return out

    def subs_p_one(self):
        """Naive substitution p = 1 (finite per q-layer)."""
        out = {}
        for (m, n), v in self._terms.items():
            out[(0, n)] = out[(0, n)] + v if (0, n) in out else v
        return TwoVarSeries(out, self.qCutoff, self.pDen, self.qDen)

    def q_coefficients(self, start=None):
        """Coefficients of a p-free series as a list indexed by qNum - start."""
        if not self.is_p_free():
            raise ValueError("series depends on p")
        start = self.qFloor if start is None else start
        out = [ZERO] * (self.qCutoff - start + 1)
        for (_, n), v in self._terms.items():
            out[n - start] = v
        return out

    # serialization

    def to_json(self):
        items = sorted(self._terms.items(), key=lambda t: (t[0][1], t[0][0]))
        return {"pDen": self.pDen, "qDen": self.qDen,
                "terms": [[m, n, c.to_json()] for (m, n), c in items],
                "qCutoff": self.qCutoff}

    @classmethod
    def from_json(cls, d):
        terms = {(t[0], t[1]): GaussRat.from_json(t[2]) for t in d["terms"]}
        return cls(terms, d["qCutoff"], d["pDen"], d["qDen"])

    def __repr__(self):
        return "TwoVarSeries(%d terms, qFloor=%d, qCutoff=%d)" % (
            len(self._terms), self.qFloor, self.qCutoff)


def series_mul(a, b):
    """Exact product, truncated where either factor's precision runs out."""
    a._check(b)
    cut = min(a.qCutoff + b.qFloor, b.qCutoff + a.qFloor)
    re, im = {}, {}
    bl = sorted(b._terms.items(), key=lambda t: t[0][1])
    for (m1, n1), c1 in a._terms.items():
        lim = cut - n1
        r1, i1 = c1.re, c1.im
        for (m2, n2), c2 in bl:
            if n2 > lim:
                break
            k = (m1 + m2, n1 + n2)
            r, i = _mul_raw(r1, i1, c2.re, c2.im)
            re[k] = re.get(k, 0) + r
            if i:
                im[k] = im.get(k, 0) + i
    terms = {k: GaussRat(v, im.get(k, 0)) for k, v in re.items()}
    for k, v in im.items():
        if k not in terms:
            terms[k] = GaussRat(0, v)
    return TwoVarSeries(terms, cut, a.pDen, a.qDen)


def _poly_mul(x, y):
    # Laurent polynomials in p as {pNum: GaussRat}
    out = {}
    for m1, c1 in x.items():
        for m2, c2 in y.items():
            k = m1 + m2
            out[k] = out[k] + c1 * c2 if k in out else c1 * c2
    return out


def series_invert(a):
    """Multiplicative inverse; the lowest q-layer must be a single monomial."""
    if a.is_zero():
        raise NotInvertibleError("zero series")
    floor = a.qFloor
    lay = a.layers()
    lead = lay[floor]
    if len(lead) != 1:
        raise NotInvertibleError("lowest q-layer is not a monomial")
    (m0, c0), = lead.items()
    c0inv = c0.inverse()
    prec = a.qCutoff - floor
    # normalized a' = 1 + r with r supported on positive offsets
    r = {}
    for n, layer in lay.items():
        if n == floor:
            continue
        r[n - floor] = {m - m0: c * c0inv for m, c in layer.items()}
    roffs = sorted(r)
    b = {0: {0: ONE}}
    for s in range(1, prec + 1):
        acc = {}
        for t in roffs:
            if t > s:
                break
            if s - t in b:
                for k, v in _poly_mul(r[t], b[s - t]).items():
                    acc[k] = acc[k] + v if k in acc else v
        acc = {k: -v for k, v in acc.items() if v}
        if acc:
            b[s] = acc
    terms = {}
    for s, layer in b.items():
        for m, c in layer.items():
            terms[(m - m0, s - floor)] = c * c0inv
    return TwoVarSeries(terms, prec - floor, a.pDen, a.qDen)


def eta_series(k, cutoff):
    """q^(k/24) prod_{n>=1} (1 - q^(k n)) through qNum <= cutoff."""
    if k < 1:
        raise ValueError("k must be positive")
    coeffs = {0: 1}
    step = Q_DEN * k
    rel = cutoff - k
    n = 1
    while n * step <= rel:
        new = dict(coeffs)
        for e, c in coeffs.items():
            if e + n * step <= rel:
                new[e + n * step] = new.get(e + n * step, 0) - c
        coeffs = {e: c for e, c in new.items() if c}
        n += 1
    return TwoVarSeries({(0, e + k): c for e, c in coeffs.items() if e <= rel}, cutoff)


class Atom:
    """(1 - zeta p^pExp q^qExp)^exponent."""

    __slots__ = ("zeta", "pExp", "qExp", "exponent")

    def __init__(self, zeta, pExp, qExp, exponent):
        self.zeta = GaussRat.coerce(zeta)
        self.pExp = Fraction(pExp)
        self.qExp = Fraction(qExp)
        self.exponent = int(exponent)
        if self.qExp < 0:
            raise ValueError("atoms need qExp >= 0")

    def key(self):
        return (self.qExp, self.pExp, self.zeta.re, self.zeta.im)

    def vanishes_at_p1(self):
        return self.qExp == 0 and self.zeta == ONE

    def __repr__(self):
        return "Atom(%s, p^%s q^%s)^%d" % (self.zeta, self.pExp, self.qExp, self.exponent)


def _binomial_series(zeta, mstep, nstep, e, rel_cut):
    """(1 - zeta x)^e with x = p^(mstep/pDen) q^(nstep/qDen), truncated at q-offset rel_cut."""
    terms = {(0, 0): ONE}
    if nstep == 0:
        if e < 0:
            raise NotExpandableError("negative power of a q-free atom")
        top = e
    else:
        top = rel_cut // nstep
        if e >= 0:
            top = min(top, e)
    coef = Fraction(1)
    zpow = ONE
    for j in range(1, top + 1):
        coef = coef * (e - j + 1) / j
        zpow = zpow * zeta
        c = zpow * (-coef if j % 2 else coef)
        if c:
            terms[(j * mstep, j * nstep)] = c
    return TwoVarSeries(terms, rel_cut)


class FactoredForm:
    """coeff * p^pExp * q^qExp * prod of atoms, complete up to a relative q-order.

    atomsComplete is the relative q-order (in 1/24 units, measured from the
    prefactor) up to which every relevant atom is listed.
    """

    __slots__ = ("coeff", "pExp", "qExp", "atoms", "atomsComplete")

    def __init__(self, coeff, pExp, qExp, atoms, atomsComplete):
        self.coeff = GaussRat.coerce(coeff)
        self.pExp = Fraction(pExp)
        self.qExp = Fraction(qExp)
        merged = {}
        for at in atoms:
            k = at.key()
            merged[k] = merged.get(k, 0) + at.exponent
        self.atoms = tuple(Atom(GaussRat(k[2], k[3]), k[1], k[0], e)
                           for k, e in sorted(merged.items()) if e != 0)
        self.atomsComplete = int(atomsComplete)

    @classmethod
    def monomial(cls, coeff, pExp=0, qExp=0, atomsComplete=10 ** 9):
        return cls(coeff, pExp, qExp, (), atomsComplete)

    @property
    def qCutoff(self):
        """Absolute qNum through which expansion is exact."""
        return _ladder(self.qExp, Q_DEN, "q") + self.atomsComplete

    def __mul__(self, other):
        if not isinstance(other, FactoredForm):
            return FactoredForm(self.coeff * GaussRat.coerce(other), self.pExp, self.qExp,
                                self.atoms, self.atomsComplete)
        return FactoredForm(self.coeff * other.coeff, self.pExp + other.pExp,
                            self.qExp + other.qExp, self.atoms + other.atoms,
                            min(self.atomsComplete, other.atomsComplete))

    __rmul__ = __mul__

    def inverse(self):
        return FactoredForm(self.coeff.inverse(), -self.pExp, -self.qExp,
                            [Atom(a.zeta, a.pExp, a.qExp, -a.exponent) for a in self.atoms],
                            self.atomsComplete)

    def __pow__(self, e):
        if e < 0:
            return self.inverse() ** (-e)
        return FactoredForm(self.coeff ** e, self.pExp * e, self.qExp * e,
                            [Atom(a.zeta, a.pExp, a.qExp, a.exponent * e) for a in self.atoms],
                            self.atomsComplete if e else 10 ** 9)

    def vanishing_order(self):
        """Net exponent of atoms that vanish at p = 1."""
        return sum(a.exponent for a in self.atoms if a.vanishes_at_p1())

    def expand(self, cutoff=None):
        """Exact TwoVarSeries up to absolute qNum cutoff (default: qCutoff)."""
        cutoff = self.qCutoff if cutoff is None else cutoff
        if cutoff > self.qCutoff:
            raise ValueError("atoms are only complete through qNum %d" % self.qCutoff)
        q0 = _ladder(self.qExp, Q_DEN, "q")
        rel = cutoff - q0
        s = TwoVarSeries.one(rel)
        for a in self.atoms:
            if a.qExp * Q_DEN > rel:
                continue
            s = series_mul(s, _binomial_series(a.zeta, _ladder(a.pExp, P_DEN, "p"),
                                               _ladder(a.qExp, Q_DEN, "q"), a.exponent, rel))
        return s.scale(self.coeff).shift(_ladder(self.pExp, P_DEN, "p"), q0)

    def __repr__(self):
        return "FactoredForm(%s p^%s q^%s, %d atoms)" % (self.coeff, self.pExp, self.qExp,
                                                          len(self.atoms))


def _quotient_at_one(n):
    """(1 - t^n)/(1 - t) as a Laurent polynomial in t, evaluated at t = 1.

    For n < 0 use 1 - t^n = -t^n (1 - t^-n).  Division is done explicitly.
    """
    if n == 0:
        raise DivergesOrVanishes(10 ** 9)
    m = abs(n)
    # long division of 1 - t^m by 1 - t: quotient 1 + t + ... + t^(m-1)
    num = [1] + [0] * (m - 1) + [-1]
    quot = []
    rem = num[:]
    for d in range(m):
        c = rem[d]
        quot.append(c)
        rem[d] -= c
        rem[d + 1] += c
    assert all(x == 0 for x in rem)
    val = sum(quot)
    return val if n > 0 else -val


def limit_p_to_one(f, cutoff=None):
    """Exact q-series of lim_{p->1} f for a FactoredForm.

    Atoms (1 - p^a) that vanish at p = 1 are divided by (1 - p^(1/pDen)) and
    the quotients evaluated at p = 1; this requires their exponents to sum to
    zero, otherwise DivergesOrVanishes carries the net order.
    """
    cutoff = f.qCutoff if cutoff is None else cutoff
    if cutoff > f.qCutoff:
        raise ValueError("atoms are only complete through qNum %d" % f.qCutoff)
    order = f.vanishing_order()
    if order != 0:
        raise DivergesOrVanishes(order)
    const = f.coeff
    qatoms = []
    for a in f.atoms:
        if a.vanishes_at_p1():
            const = const * GaussRat(_quotient_at_one(_ladder(a.pExp, P_DEN, "p"))) ** a.exponent
        elif a.qExp == 0:
            base = ONE - a.zeta
            const = const * base ** a.exponent
        else:
            qatoms.append(Atom(a.zeta, 0, a.qExp, a.exponent))
    g = FactoredForm(const, 0, f.qExp, qatoms, f.atomsComplete)
    return g.expand(cutoff)


def theta_factored(k, a, halfTauShift, cutoff):
    """Triple-product factorization of theta(k z + 1/2 + a [+ k tau/2] | k tau).

    prod_{m>=0} (1 - Q^(m+1)) (1 - zeta P Q^(m+1-s)) (1 - zeta^-1 P^-1 Q^(m+s)),
    P = p^k, Q = q^k, zeta = exp(2 pi i a), s = 0 with the shift, 1/2 without.
    Atoms are listed through qNum <= cutoff.
    """
    zeta = GaussRat.root_of_unity(a)
    zinv = zeta.inverse()
    s = Fraction(0) if halfTauShift else Fraction(1, 2)
    atoms = []
    m = 0
    while True:
        added = False
        for zz, pe, qe in ((ONE, 0, k * (m + 1)),
                           (zeta, k, k * (m + 1 - s)),
                           (zinv, -k, k * (m + s))):
            if qe * Q_DEN <= cutoff:
                atoms.append(Atom(zz, pe, qe, 1))
                added = True
        if not added:
            break
        m += 1
    return FactoredForm(ONE, 0, 0, atoms, cutoff)


def eta_factored(k, cutoff):
    """eta(k tau) as a FactoredForm, atoms through qNum <= cutoff (relative)."""
    atoms = [Atom(ONE, 0, k * n, 1) for n in range(1, cutoff // (Q_DEN * k) + 1)]
    return FactoredForm(ONE, 0, Fraction(k, Q_DEN), atoms, cutoff)


def theta_sum(k, a, halfTauShift, cutoff):
    """theta(k z + 1/2 + a [+ k tau/2] | k tau) from its defining sum."""
    zeta = GaussRat.root_of_unity(a)
    terms = {}
    m = 0
    while True:
        hit = False
        for mm in ((m, -m) if m else (0,)):
            # e^{2 pi i (kz + 1/2 + a) m} e^{pi i k tau m^2} [e^{pi i k tau m}]
            qe = Fraction(k * mm * mm, 2) + (Fraction(k * mm, 2) if halfTauShift else 0)
            qn = qe * Q_DEN
            if qn <= cutoff:
                hit = True
                c = zeta ** mm * (-1 if mm % 2 else 1)
                terms[(k * mm * P_DEN, int(qn))] = c
        if not hit and m > 0:
            break
        m += 1
    return TwoVarSeries(terms, cutoff)


# ---------------------------------------------------------------- numerics

_TWO_PI_I = 2j * math.pi


def log_eta_product(tau, max_terms=200000):
    """log eta(tau) by the direct q-product; raises PrecisionError when the
    product would need more than max_terms factors."""
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    q = cmath.exp(_TWO_PI_I * tau)
    aq = abs(q)
    need = int(math.ceil(37.0 / (2 * math.pi * tau.imag))) + 2
    if need > max_terms:
        raise PrecisionError("Im(tau) = %g needs %d product terms" % (tau.imag, need))
    acc = _TWO_PI_I * tau / 24
    qn = 1.0 + 0j
    for _ in range(need):
        qn *= q
        acc += cmath.log(1 - qn)
        if abs(qn) < 1e-18 * (1 - aq):
            break
    return acc


def log_eta(tau):
    """log eta(tau) after moving tau into the standard fundamental domain.

    Uses eta(tau + 1) = e^{i pi/12} eta(tau) and eta(-1/tau) = sqrt(-i tau) eta(tau);
    only the exponential of the result is meaningful (branch of log).
    """
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    acc = 0j
    for _ in range(10000):
        n = round(tau.real)
        if n:
            tau = tau - n
            acc += 1j * math.pi * n / 12
        if abs(tau) < 1 - 1e-15:
            acc -= 0.5 * cmath.log(-1j * tau)
            tau = -1 / tau
        else:
            break
    return acc + log_eta_product(tau)


def numeric_eval(factors, tau, constant=1, method="reduced"):
    """Evaluate constant * prod eta(k tau)^m in double precision.

    factors is an iterable of (k, m).  method="product" uses the direct
    q-product for each factor; "reduced" first maps into the fundamental domain.
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    if hasattr(factors, "factors"):
        constant = factors.constant
        factors = factors.factors
    f = log_eta if method == "reduced" else log_eta_product
    acc = 0j
    for k, m in factors:
        acc += m * f(k * tau)
    c = constant.to_complex() if isinstance(constant, GaussRat) else complex(float(constant))
    return c * cmath.exp(acc)
