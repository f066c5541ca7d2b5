"""Two-variable trace series per class, their p -> 1 limits, eta-quotient
recognition, numerical modular checks and coefficient decompositions.

For an element h of the cover with Frame shape S_h (and -h with the negated
shape) the traces are
    W:  1/phi(S_h)      twisted W:  1/psi(S_h)
    A:  phi(S_-h)       twisted A:  psi(S_-h)
so with g^ a lift of minimal order, F^A = lim_{p->1} psi(S_g^) and
F^forall = lim_{p->1} 1/psi(S_g^).
"""

import csv
import io
import json
import math
from fractions import Fraction
from importlib import resources

from . import qseries, frameshape
from .qseries import GaussRat, ZERO, Q_DEN, DivergesOrVanishes

W, W_TWISTED, A_SPACE, A_TWISTED = "W", "W_twisted", "A", "A_twisted"
SPACES = (W, W_TWISTED, A_SPACE, A_TWISTED)
SIDE_A, SIDE_ALL = "A", "forall"

DEFAULT_TOLERANCE = 1e-9
SAMPLE_POINTS = (0.1 + 0.5j, -0.23 + 0.9j, 0.37 + 1.7j, 0.05 + 0.31j)


class UnknownClassError(KeyError):
    pass


class RecognitionError(ValueError):
    """A limit series is not an eta quotient over the allowed levels."""


def _data(name):
    return json.loads(resources.files(__package__).joinpath("data", name).read_text())


# ---------------------------------------------------------------------------
# class records


class ClassRecord:
    """A class of the simple group, its minimal-order lift and the traces of
    +-lift on the exterior algebra (None when the class is omitted, i.e. both
    traces vanish)."""

    def __init__(self, ru, lift, minus_lift, su28, so56, trace_plus, trace_minus):
        self.ru = ru
        self.lift = lift
        self.minus_lift = minus_lift
        self.su28 = su28
        self.so56 = so56
        self.trace_plus = trace_plus
        self.trace_minus = trace_minus

    @property
    def omitted(self):
        return self.trace_plus is None

    def shape(self, sign=1):
        return self.su28 if sign == 1 else self.su28.negate()

    def __repr__(self):
        return "ClassRecord(%s)" % self.ru


def load_classes():
    """All classes of the Frame-shape table in table order."""
    wedge = {}
    for row in _data("wedge_traces.json")["rows"]:
        wedge.setdefault(row["ru"], []).append(row)
    out = []
    for row in _data("frame_shapes.json")["rows"]:
        su = frameshape.parse_frame_shape(row["su28"], 28)
        so = frameshape.parse_frame_shape(row["so56"], 56)
        w = wedge.get(row["ru"], [])
        lift = minus = None
        tp = tm = None
        for r in w:
            if r["element"] == "both":
                lift = minus = r["lift"]
                tp = tm = r["trace"]
            elif r["element"] == "g":
                lift, tp = r["lift"], r["trace"]
            else:
                minus, tm = r["lift"], r["trace"]
        out.append(ClassRecord(row["ru"], lift, minus, su, so, tp, tm))
    return out


def get_class(name):
    for c in load_classes():
        if c.ru == name:
            return c
    raise UnknownClassError(name)


# ---------------------------------------------------------------------------
# trace series


def mt_series(c, space=W, sign=1, cutoff=None):
    """Trace of sign*g^ on the given space.  Untwisted spaces give a
    TwoVarSeries through absolute qNum cutoff (default: 4 above the leading
    order); twisted spaces give a FactoredForm whose atoms are complete
    through relative qNum cutoff."""
    if space not in SPACES:
        raise ValueError("unknown space %r" % space)
    h, minus_h = c.shape(sign), c.shape(-sign)
    if space == W:
        # 1/phi starts at q^(dim/24); inversion adds 2 dim to the cutoff
        cut = cutoff if cutoff is not None else h.dimension + 4 * Q_DEN
        return qseries.series_invert(frameshape.phi(h, cut - 2 * h.dimension))
    if space == A_SPACE:
        cut = cutoff if cutoff is not None else 4 * Q_DEN - minus_h.dimension
        return frameshape.phi(minus_h, cut)
    rel = cutoff if cutoff is not None else 4 * Q_DEN
    if space == W_TWISTED:
        return frameshape.psi(h, rel).inverse()
    return frameshape.psi(minus_h, rel)


def character_table(max_degree=Fraction(7, 2), N=28):
    """{(degree, charge): coefficient} of 1/phi(1^N), degree measured above
    the leading power q^(-N/24)."""
    fs = frameshape.WeakFrameShape([(1, 0, N)])
    lead = N
    cut = lead + int(Fraction(max_degree) * Q_DEN)
    inv = qseries.series_invert(frameshape.phi(fs, cut - 2 * N))
    out = {}
    for (pn, qn), v in inv.terms.items():
        if qn <= cut:
            out[(Fraction(qn - lead, Q_DEN), Fraction(pn, qseries.P_DEN))] = v
    return out


# ---------------------------------------------------------------------------
# eta quotients


class EtaQuotient:
    """constant * prod eta(k tau)^e."""

    def __init__(self, factors, constant=1):
        merged = {}
        for k, e in (factors.items() if isinstance(factors, dict) else factors):
            merged[int(k)] = merged.get(int(k), 0) + int(e)
        self.factors = tuple((k, e) for k, e in sorted(merged.items()) if e)
        self.constant = constant if isinstance(constant, GaussRat) else GaussRat(Fraction(constant))

    def __eq__(self, other):
        return (isinstance(other, EtaQuotient) and self.factors == other.factors
                and self.constant == other.constant)

    def __repr__(self):
        return "EtaQuotient(%s, %s)" % (dict(self.factors), self.constant)

    @property
    def weight(self):
        return Fraction(sum(e for _, e in self.factors), 2)

    @property
    def q_order(self):
        return Fraction(sum(k * e for k, e in self.factors), Q_DEN)

    def reciprocal(self):
        return EtaQuotient([(k, -e) for k, e in self.factors], self.constant.inverse())

    def rescale(self, r):
        """tau -> tau / r."""
        out = []
        for k, e in self.factors:
            if k % r:
                raise ValueError("cannot rescale eta(%d tau) by 1/%d" % (k, r))
            out.append((k // r, e))
        return EtaQuotient(out, self.constant)

    def expand(self, order):
        """Exact series through q^(q_order + order), from direct eta products
        and series inversion."""
        lead = int(self.q_order * Q_DEN)
        cut = lead + int(order * Q_DEN)
        # products of series with nonzero floors lose precision; pad until exact
        pad = sum(2 * k * abs(e) for k, e in self.factors)
        while True:
            out = qseries.TwoVarSeries.one(cut + pad).scale(self.constant)
            for k, e in self.factors:
                base = qseries.eta_series(k, cut + pad + 2 * k * abs(e))
                if e < 0:
                    base = qseries.series_invert(base)
                out = out * base ** abs(e)
            if out.qCutoff >= cut:
                return out.truncate(cut)
            pad += cut - out.qCutoff

    def evaluate(self, tau, method="reduced"):
        return qseries.numeric_eval(self.factors, tau, self.constant, method)

    def to_json(self):
        return {"constant": self.constant.to_json(), "eta": {str(k): e for k, e in self.factors}}


def _mobius(n):
    out, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            out = -out
        p += 1
    return -out if m > 1 else out


def recognize_eta_quotient(series, allowed=None):
    """Write a p-free series C q^h (1 + ...) as C prod_n (1 - q^n)^c_n through
    its cutoff, Moebius-invert c to eta exponents, and check the result.

    Exponents must vanish off `allowed` (the divisors of a level) and the
    q-order h must equal sum k e_k / 24; otherwise RecognitionError.
    Returns an EtaQuotient (constant C) or raises."""
    if not series.is_p_free():
        raise RecognitionError("series depends on p")
    h = series.qFloor
    coeffs = series.q_coefficients()
    if any(v for j, v in enumerate(coeffs) if j % Q_DEN):
        raise RecognitionError("exponents off the integer ladder")
    vals = [coeffs[j] for j in range(0, len(coeffs), Q_DEN)]
    C = vals[0]
    g = [v / C for v in vals]
    M = len(g) - 1
    c = [0] * (M + 1)
    for n in range(1, M + 1):
        a = g[n]
        if a.im != 0 or Fraction(a.re).denominator != 1:
            raise RecognitionError("non-integral product exponent at q^%d" % n)
        cn = -int(a.re)
        c[n] = cn
        if cn:
            # g <- g * (1 - q^n)^(-cn)
            factor = _power_series_binomial(n, -cn, M)
            g = _mul_trunc(g, factor, M)
    e = {}
    for n in range(1, M + 1):
        en = sum(_mobius(n // d) * c[d] for d in range(1, n + 1) if n % d == 0)
        if en:
            e[n] = en
    if allowed is not None and any(k not in allowed for k in e):
        raise RecognitionError("eta exponents outside the allowed levels: %s" % e)
    eq = EtaQuotient(e, C)
    if eq.q_order != Fraction(h, Q_DEN):
        raise RecognitionError("leading order %s does not match eta weight %s"
                               % (Fraction(h, Q_DEN), eq.q_order))
    return eq


def _power_series_binomial(n, e, M):
    """(1 - q^n)^e as a list of integers through q^M."""
    out = [GaussRat(0)] * (M + 1)
    j = 0
    while n * j <= M:
        out[n * j] = GaussRat(_gen_binom(e, j) * (-1) ** j)
        j += 1
    return out


def _gen_binom(e, j):
    out = Fraction(1)
    for t in range(j):
        out = out * (e - t) / (t + 1)
    return out


def _mul_trunc(a, b, M):
    out = [ZERO] * (M + 1)
    for i, x in enumerate(a):
        if not x:
            continue
        for j in range(0, M + 1 - i):
            if b[j]:
                out[i + j] = out[i + j] + x * b[j]
    return out


def _divisors(n):
    return {d for d in range(1, n + 1) if n % d == 0}


# ---------------------------------------------------------------------------
# the F-tilde pair


class Marker:
    """Result for classes where the limit is 0 or infinite."""

    def __init__(self, kind, order):
        self.kind = kind
        self.order = order

    def __repr__(self):
        return "Marker(%s, order %d)" % (self.kind, self.order)


def limit_series(c, side=SIDE_A, order=20):
    """lim_{p->1} psi (side A) or 1/psi (side forall) through q^(lead + order);
    raises DivergesOrVanishes."""
    rel = order * Q_DEN
    f = frameshape.psi(c.su28, rel + Q_DEN)
    if side == SIDE_ALL:
        f = f.inverse()
    lead = qseries._ladder(f.qExp, Q_DEN, "q")
    return qseries.limit_p_to_one(f, lead + rel)


def f_tilde(c, side=SIDE_A, order=20):
    """EtaQuotient for nonconstant classes, or Marker('zero'/'infinity', order)
    for classes whose limit vanishes or diverges.  The expansion runs at
    least through the largest allowed eta level so every factor is seen."""
    allowed = _divisors(2 * c.su28.level())
    try:
        s = limit_series(c, side, max(order, max(allowed)))
    except DivergesOrVanishes as exc:
        o = exc.order if side == SIDE_A else -exc.order
        return Marker("zero" if side == SIDE_A else "infinity", abs(o))
    return recognize_eta_quotient(s, allowed)


def closed_forms():
    """The printed closed forms: {name: (classes, EtaQuotient A, EtaQuotient forall, info)}."""
    out = {}
    for row in _data("closed_forms.json")["rows"]:
        fa = EtaQuotient({int(k): e for k, e in row["A"]["eta"].items()},
                         Fraction(*row["A"]["constant"]))
        ff = EtaQuotient({int(k): e for k, e in row["forall"]["eta"].items()},
                         Fraction(*row["forall"]["constant"]))
        info = {k: row[k] for k in ("rescale", "level", "group", "fricke")}
        out[row["name"]] = (row["classes"], fa, ff, info)
    return out


def closed_form_for(ru):
    for name, (classes, fa, ff, info) in closed_forms().items():
        if ru in classes:
            return name, fa, ff, info
    return None


def nonconstant_classes():
    return [c for c in load_classes() if isinstance(f_tilde(c, SIDE_A, order=2), EtaQuotient)]


def reciprocity_check(c, order=20):
    """The two limits multiply to 1 exactly through q^order (None when the
    class has no nonconstant pair)."""
    try:
        a = limit_series(c, SIDE_A, order)
        b = limit_series(c, SIDE_ALL, order)
    except DivergesOrVanishes:
        return None
    prod = a * b
    return prod.agrees_with(qseries.TwoVarSeries.one(prod.qCutoff))


# ---------------------------------------------------------------------------
# modular checks


def _mat_act(m, tau):
    a, b, c, d = m
    return (a * tau + b) / (c * tau + d)


def _coset_enumeration(N):
    """Coset representatives of Gamma0(N) in SL2(Z), keyed by the bottom row
    (c : d) in P^1(Z/N), and the Schreier generators of Gamma0(N) for the
    generators S, T."""
    def norm_row(c, d):
        # canonical representative of (c : d) under scaling by units mod N
        c, d = c % N, d % N
        return min(((u * c) % N, (u * d) % N) for u in range(1, N + 1) if math.gcd(u, N) == 1)

    def mul(x, y):
        a, b, c, d = x
        e, f, g, h = y
        return (a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def inv(x):
        a, b, c, d = x
        return (d, -b, -c, a)

    S, T = (0, -1, 1, 0), (1, 1, 0, 1)
    start = norm_row(0, 1)
    reps = {start: (1, 0, 0, 1)}
    queue = [start]
    gens, seen = [], set()
    while queue:
        row = queue.pop(0)
        for g in (S, T):
            m = mul(reps[row], g)
            nrow = norm_row(m[2], m[3])
            if nrow not in reps:
                reps[nrow] = m
                queue.append(nrow)
                continue
            h = mul(m, inv(reps[nrow]))
            if h[2] % N:
                raise AssertionError("coset enumeration error")
            key = h if h[0] > 0 or (h[0] == 0 and h[1] > 0) else tuple(-x for x in h)
            if key not in seen and key != (1, 0, 0, 1):
                seen.add(key)
                gens.append(key)
    return reps, gens


def gamma0_generators(N):
    """Generators of Gamma0(N) (up to sign) from coset enumeration on P^1(Z/N)."""
    return _coset_enumeration(N)[1]


def gamma0_index(N):
    return len(_coset_enumeration(N)[0])


def fricke(N):
    """tau -> -1/(N tau), as a function."""
    return lambda tau: -1 / (N * tau)


def genus_zero_check(c, tolerance=DEFAULT_TOLERANCE, points=SAMPLE_POINTS):
    """Numerical check of the modular claims for a nonconstant class.

    After rescaling tau -> tau / r (r the gcd of the eta levels) each function
    f of the pair must satisfy f(gamma tau) = chi(gamma) f(tau) for the
    Gamma0(N) generators with |chi| = 1 constant over the sample points; the
    Fricke involution must carry f_A to a constant multiple of f_forall (the
    constant predicted by the eta transformation law) when the group contains
    it.  Returns a report dict with the maximum deviation and a pass flag."""
    found = closed_form_for(c.ru)
    if found is None:
        return {"class": c.ru, "status": "constant class"}
    name, fa, ff, info = found
    r, N = info["rescale"], info["level"]
    ga, gf = fa.rescale(r), ff.rescale(r)
    report = {"class": c.ru, "rescale": r, "level": N, "group": info["group"],
              "generators": [], "max_deviation": 0.0}
    dev = 0.0
    for m in gamma0_generators(N):
        chis, dgen = [], 0.0
        for f in (ga, gf):
            ratios = [f.evaluate(_mat_act(m, t)) / f.evaluate(t) for t in points]
            chi = ratios[0]
            dgen = max(dgen, max(abs(x - chi) for x in ratios), abs(abs(chi) - 1))
            chis.append(chi)
        dev = max(dev, dgen)
        report["generators"].append({"matrix": list(m), "chi_A": [chis[0].real, chis[0].imag],
                                     "deviation": dgen})
    if info["fricke"]:
        W = fricke(N)
        pred = fricke_constant(ga, N) / gf.constant.to_complex()
        pred_img = EtaQuotient([(N // k, e) for k, e in ga.factors], 1)
        if pred_img.factors != tuple((k, e) for k, e in gf.factors):
            report["fricke_swap"] = False
            dev = float("inf")
        else:
            d = max(abs(ga.evaluate(W(t)) / gf.evaluate(t) - pred) / abs(pred) for t in points)
            report["fricke_swap"] = True
            report["fricke_constant"] = [pred.real, pred.imag]
            dev = max(dev, d)
    else:
        report["fricke_swap"] = None
        # informational: the level-N Atkin-Lehner element for the divisor 2
        report["atkin_lehner_2"] = atkin_lehner_swaps(ga, gf, N, 2, points)
    report["max_deviation"] = dev
    report["passed"] = dev <= tolerance
    return report


def fricke_constant(eq, N):
    """K with eq(-1/(N tau)) = K prod eta((N/k) tau)^e (weight-zero quotients)."""
    if eq.weight != 0:
        raise ValueError("weight must be zero")
    val = eq.constant.to_complex()
    for k, e in eq.factors:
        val *= (N / k) ** (e / 2)
    return val


def atkin_lehner_swaps(fa, ff, N, e, points=SAMPLE_POINTS):
    """Deviation from constancy of fa(W_e tau)/ff(tau) for the Atkin-Lehner
    matrix W_e = [[e x, y], [N z, e w]] of determinant e."""
    f = N // e
    # solve e^2 x w - N y z = e with y = 1, z = 1: e x w - f = 1
    for x in range(1, 10 * N):
        if (1 + f) % (e * x) == 0:
            w = (1 + f) // (e * x)
            break
    m = (e * x, 1, N, e * w)
    ratios = [fa.evaluate(_mat_act(m, t)) / ff.evaluate(t) for t in points]
    return {"matrix": list(m), "deviation": max(abs(x - ratios[0]) for x in ratios) / abs(ratios[0]),
            "constant": [ratios[0].real, ratios[0].imag]}


# ---------------------------------------------------------------------------
# decompositions


def degree_table():
    d = _data("degrees.json")
    return sorted(d["ru"]), sorted(d["cover"])


def printed_identities():
    """[(family, value, {degree: multiplicity})] as printed."""
    return [(r["family"], r["value"], {int(k): m for k, m in r["parts"].items()})
            for r in _data("identities.json")["rows"]]


def check_identity(value, parts, degrees):
    """Exact sum check; every part must be an allowed degree."""
    return all(d in degrees for d in parts) and sum(d * m for d, m in parts.items()) == value


def decompose_coefficient(value, degrees, max_parts=6, limit=50):
    """Multisets of at most max_parts degrees summing to value (bounded
    knapsack, up to `limit` solutions), each as {degree: multiplicity}."""
    degrees = sorted(set(degrees), reverse=True)
    out = []

    def rec(i, remaining, parts, used):
        if len(out) >= limit:
            return
        if remaining == 0:
            out.append(dict(parts))
            return
        if i == len(degrees) or used == max_parts:
            return
        d = degrees[i]
        most = min(remaining // d, max_parts - used)
        for m in range(most, -1, -1):
            if m:
                parts[d] = m
            rec(i + 1, remaining - m * d, parts, used + m)
            parts.pop(d, None)

    rec(0, value, {}, 0)
    return out


# ---------------------------------------------------------------------------
# reports


def class_report(c, order=20, with_modular=True, tolerance=DEFAULT_TOLERANCE):
    tp = frameshape.trace_exterior(c.su28, 1)
    tm = frameshape.trace_exterior(c.su28, -1)
    rep = {"class": c.ru, "lift": c.lift, "minus_lift": c.minus_lift,
           "su28": c.su28.format(), "so56": c.so56.format(),
           "trace_exterior": {"g": tp.to_json(), "-g": tm.to_json()},
           "table_trace": None if c.omitted else {"g": c.trace_plus, "-g": c.trace_minus}}
    fa = f_tilde(c, SIDE_A, order)
    if isinstance(fa, Marker):
        rep["F_A"] = {"kind": fa.kind, "order": fa.order}
        rep["F_forall"] = {"kind": "infinity", "order": fa.order}
        return rep
    ff = f_tilde(c, SIDE_ALL, order)
    rep["F_A"] = fa.to_json()
    rep["F_forall"] = ff.to_json()
    rep["leading_A"] = fa.constant.to_json()
    rep["reciprocity"] = reciprocity_check(c, order)
    found = closed_form_for(c.ru)
    rep["closed_form_match"] = bool(found and found[1] == fa and found[2] == ff)
    if with_modular:
        g = genus_zero_check(c, tolerance)
        rep["genus_zero"] = {k: v for k, v in g.items() if k != "class"}
    return rep


def report(classes=None, order=20, with_modular=True, tolerance=DEFAULT_TOLERANCE):
    cls = load_classes()
    if classes:
        names = set(classes)
        unknown = names - {c.ru for c in cls}
        if unknown:
            raise UnknownClassError(", ".join(sorted(unknown)))
        cls = [c for c in cls if c.ru in names]
    return {"classes": [class_report(c, order, with_modular, tolerance) for c in cls]}


def character_csv(table, charges=None):
    """CSV text of the character: rows by degree, columns by charge."""
    degs = sorted({d for d, _ in table})
    if charges is None:
        charges = sorted({int(c) for _, c in table if c >= 0})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["degree"] + [str(c) for c in charges])
    for d in degs:
        row = [str(d)]
        for c in charges:
            v = table.get((d, Fraction(c)))
            row.append("" if v is None else str(v))
        w.writerow(row)
    return buf.getvalue()
