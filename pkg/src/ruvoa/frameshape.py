"""Weak Frame shapes prod_j (k_j)_{a_j}^{m_j} and the trace functions phi, psi.

A factor (k)_a stands for the k solutions x of x^k = exp(2 pi i a), so that
theta(k z + 1/2 + a | k tau) factors over exactly those eigenvalues.  The
shape text uses TeX conventions: "1_{1/4}^4 4^6", "4^{14}/2^{14}", and an
unbraced superscript is a single digit ("4^112^5" is 4^1 12^5).
"""

import re
from fractions import Fraction

from . import qseries
from .qseries import GaussRat, ONE, FactoredForm

# eigenvalue rules: x^k = exp(2 pi i a)  versus  x^k = exp(2 pi i a k)
ROOT_RULE = "root"
SCALED_RULE = "scaled"


class FrameShapeError(ValueError):
    pass


class InconsistentShapeError(FrameShapeError):
    """Eigenvalue multiset would need a negative multiplicity."""


class WeakFrameShape:
    """Canonical multiset of (k, a, m) with a a quarter-integer in [0, 1)."""

    __slots__ = ("factors",)

    def __init__(self, factors):
        merged = {}
        for k, a, m in factors:
            k, a, m = int(k), Fraction(a) % 1, int(m)
            if k < 1:
                raise FrameShapeError("cycle length must be positive")
            if (4 * a).denominator != 1:
                raise qseries.UnsupportedPhaseError("phase %s is not a quarter-integer" % a)
            merged[(k, a)] = merged.get((k, a), 0) + m
        self.factors = tuple((k, a, m) for (k, a), m in sorted(merged.items()) if m)

    @property
    def dimension(self):
        return sum(k * m for k, _, m in self.factors)

    def __eq__(self, other):
        return isinstance(other, WeakFrameShape) and self.factors == other.factors

    def __hash__(self):
        return hash(self.factors)

    def __repr__(self):
        return "WeakFrameShape(%r)" % (self.format(),)

    def format(self):
        def term(k, a, m):
            s = str(k)
            if a:
                s += "_{%s}" % a
            return s + "^{%d}" % m
        top = "".join(term(k, a, m) for k, a, m in self.factors if m > 0)
        bot = "".join(term(k, a, -m) for k, a, m in self.factors if m < 0)
        return top + ("/" + bot if bot else "")

    def negate(self):
        """Shape of -g: eigenvalues negated, so a -> a + k/2."""
        return WeakFrameShape([(k, a + Fraction(k, 2), m) for k, a, m in self.factors])

    def level(self):
        from math import lcm
        out = 1
        for k, a, _ in self.factors:
            out = lcm(out, k * (a.denominator if a else 1))
        return out


_TERM = re.compile(r"(\d+)(?:_(\{[^{}]*\}|\d))?(?:\^(\{-?\d+\}|\d))?")


def _parse_part(text, sign):
    out = []
    pos = 0
    text = text.replace(" ", "")
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m or m.end() == pos:
            raise FrameShapeError("cannot parse %r at position %d" % (text, pos))
        k = int(m.group(1))
        a = Fraction(0)
        if m.group(2):
            sub = m.group(2).strip("{}")
            try:
                a = Fraction(sub)
            except ValueError:
                raise FrameShapeError("bad phase %r" % sub) from None
        e = 1
        if m.group(3):
            e = int(m.group(3).strip("{}"))
        out.append((k, a, sign * e))
        pos = m.end()
    return out


def _split_top(text):
    depth = 0
    cuts = []
    for i, ch in enumerate(text):
        if ch == "{":
            depth += 1
        elif ch == "}":
            depth -= 1
        elif ch == "/" and depth == 0:
            cuts.append(i)
    if len(cuts) > 1:
        raise FrameShapeError("more than one '/' in %r" % text)
    if not cuts:
        return text, ""
    return text[:cuts[0]], text[cuts[0] + 1:]


def parse_frame_shape(text, dimension=None):
    """Parse TeX-style shape text; optionally assert sum k*m == dimension."""
    text = text.strip().strip("$")
    if not text:
        raise FrameShapeError("empty shape")
    top, bot = _split_top(text)
    if not top:
        raise FrameShapeError("missing numerator in %r" % text)
    fs = WeakFrameShape(_parse_part(top, 1) + (_parse_part(bot, -1) if bot else []))
    if dimension is not None and fs.dimension != dimension:
        raise FrameShapeError("%r has dimension %d, expected %d" % (text, fs.dimension, dimension))
    return fs


class EigenMultiset:
    """Roots of unity exp(2 pi i t), t in [0,1) as Fractions, with multiplicities."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        self.entries = {Fraction(t) % 1: m for t, m in entries.items() if m}

    @property
    def total(self):
        return sum(self.entries.values())

    def is_genuine(self):
        return all(m > 0 for m in self.entries.values())

    def multiplicity(self, t):
        return self.entries.get(Fraction(t) % 1, 0)

    def determinant_angle(self):
        """t with det = exp(2 pi i t)."""
        return sum((t * m for t, m in self.entries.items()), Fraction(0)) % 1

    def order(self):
        from math import lcm
        out = 1
        for t in self.entries:
            out = lcm(out, t.denominator)
        return out


def eigenvalues(fs, rule=ROOT_RULE, allow_negative=False):
    """Eigenvalue multiset of a shape; (k)_a^m gives m copies of each k-th root
    of exp(2 pi i a) (rule "root") or of exp(2 pi i a k) (rule "scaled")."""
    acc = {}
    for k, a, m in fs.factors:
        target = a if rule == ROOT_RULE else a * k
        for j in range(k):
            t = ((target + j) / k) % 1
            acc[t] = acc.get(t, 0) + m
    ems = EigenMultiset(acc)
    if not allow_negative and not ems.is_genuine():
        raise InconsistentShapeError("shape %s has negative eigenvalue multiplicities"
                                     % fs.format())
    return ems


# exact polynomials in y over Gaussian rationals: list of coefficients, low first

def _pmul(a, b):
    out = [qseries.ZERO] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j, y in enumerate(b):
            if y:
                out[i + j] = out[i + j] + x * y
    return out


def _pdivexact(a, b):
    a = list(a)
    while len(b) > 1 and not b[-1]:
        b = b[:-1]
    db = len(b) - 1
    lead = b[-1].inverse()
    quot = [qseries.ZERO] * max(1, len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] * lead
        if c:
            quot[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = a[i - db + j] - c * b[j]
    if any(a[:db]):
        raise InconsistentShapeError("characteristic polynomial does not divide")
    return quot


def det_one_minus(fs, rule=ROOT_RULE):
    """prod over eigenvalues of (1 - y x), as a polynomial in y (exact division)."""
    num, den = [ONE], [ONE]
    for k, a, m in fs.factors:
        target = a if rule == ROOT_RULE else a * k
        zeta = GaussRat.root_of_unity(target)
        # prod_{x^k = zeta} (1 - y x) = 1 - zeta y^k
        f = [ONE] + [qseries.ZERO] * (k - 1) + [-zeta]
        for _ in range(abs(m)):
            if m > 0:
                num = _pmul(num, f)
            else:
                den = _pmul(den, f)
    return _pdivexact(num, den)


def trace_exterior(fs, sign, rule=ROOT_RULE):
    """Trace on the exterior algebra: prod_i (1 + sign * xi_i), exactly."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    poly = det_one_minus(fs, rule)
    y = GaussRat(-sign)
    acc = qseries.ZERO
    for c in reversed(poly):
        acc = acc * y + c
    return acc


def _theta_over_eta(k, a, shifted, cutoff):
    th = qseries.theta_factored(k, a, shifted, cutoff)
    return th * qseries.eta_factored(k, cutoff).inverse()


def phi_factored(fs, cutoff):
    """phi as a FactoredForm; atoms complete through relative qNum cutoff."""
    out = FactoredForm(ONE, 0, 0, (), cutoff)
    for k, a, m in fs.factors:
        out = out * _theta_over_eta(k, a, False, cutoff) ** m
    return out


def phi(fs, cutoff):
    """prod_j theta(k_j z + 1/2 + a_j | k_j tau)^m_j / eta(k_j tau)^m_j through
    absolute qNum cutoff."""
    lead = -sum(k * m for k, _, m in fs.factors)  # q^(-sum k m / 24)
    rel = cutoff - lead
    if rel < 0:
        return qseries.TwoVarSeries({}, cutoff)
    return phi_factored(fs, rel).expand(cutoff)


def psi(fs, cutoff):
    """prod_j p^(k m/2) q^(k m/8) theta(k z + 1/2 + a + k tau/2 | k tau)^m / eta(k tau)^m.

    Returned as a FactoredForm whose atoms are complete through relative
    qNum cutoff (measured from the q-prefactor).
    """
    out = FactoredForm(ONE, 0, 0, (), cutoff)
    for k, a, m in fs.factors:
        pre = FactoredForm(ONE, Fraction(k * m, 2), Fraction(k * m, 8), (), cutoff)
        out = out * pre * _theta_over_eta(k, a, True, cutoff) ** m
    return out
