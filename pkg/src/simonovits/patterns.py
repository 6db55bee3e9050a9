"""Pattern graph invariants and threshold constants.

For a pattern h with at least two edges the 2-density is the maximum of
(e_F - 1)/(v_F - 2) over subgraphs F with at least two edges.  From the
pattern's copy count inside slightly-augmented complete multipartite hosts
we extract an exact rational leading coefficient pi, and from it the
threshold coefficient theta and the probability threshold used throughout.
"""

import itertools
import math
from fractions import Fraction

from .graph import Graph, blowup_plus
from .copies import count_copies, are_isomorphic


def two_density(h):
    """Maximum 2-density and the maximising subgraphs up to isomorphism.

    Returns (Fraction, witnesses, strictly_balanced).  Only induced
    subgraphs can maximise (dropping edges at fixed vertex count lowers the
    ratio), so the scan runs over vertex subsets.  strictly_balanced means
    the maximum is attained only by the whole pattern.
    """
    if h.edge_count() < 2:
        raise ValueError("pattern needs at least two edges")
    best = None
    argmax = []
    for k in range(3, h.n + 1):
        for vs in itertools.combinations(range(h.n), k):
            sub = h.induced(vs)
            e = sub.edge_count()
            if e < 2:
                continue
            d = Fraction(e - 1, k - 2)
            if best is None or d > best:
                best = d
                argmax = [sub]
            elif d == best:
                argmax.append(sub)
    witnesses = []
    for sub in argmax:
        if not any(are_isomorphic(sub, w) for w in witnesses):
            witnesses.append(sub)
    strictly = (len(argmax) == 1 and argmax[0].n == h.n
                and argmax[0].edge_count() == h.edge_count())
    return best, witnesses, strictly


def is_edge_critical(h):
    """True when deleting some edge lowers the chromatic number; also
    returns the list of such edges."""
    chi = h.chromatic_number()
    crit = [(u, v) for (u, v) in h.edges()
            if h.without_edge(u, v).chromatic_number() < chi]
    return bool(crit), crit


def pi_coefficient(h):
    """Exact leading coefficient of the copy count in augmented blowups.

    Counts copies of h in the complete (chi-1)-partite graph with classes of
    size m plus one extra edge, for v_H - 1 values of m; the count is a
    polynomial in m of degree at most v_H - 2 and pi is its top coefficient.
    The interpolation is validated at one further m.
    """
    chi = h.chromatic_number()
    r = chi - 1
    if r < 2:
        raise ValueError("pattern must have chromatic number at least 3")
    v = h.n
    npts = max(v - 1, 3)                    # at least cubic sampling
    ms = list(range(v, v + npts))
    counts = [Fraction(count_copies(h, blowup_plus(r, m))) for m in ms]
    coeffs = _interpolate(ms, counts)
    deg = len(coeffs) - 1
    while deg > 0 and coeffs[deg] == 0:
        deg -= 1
    if deg > v - 2:
        raise AssertionError("copy count grows faster than expected")
    m_check = v + npts
    predicted = sum(c * Fraction(m_check) ** i for i, c in enumerate(coeffs))
    actual = count_copies(h, blowup_plus(r, m_check))
    if predicted != actual:
        raise AssertionError("interpolated polynomial failed validation")
    pi = coeffs[v - 2] if v - 2 < len(coeffs) else Fraction(0)
    if pi <= 0:
        raise AssertionError("leading coefficient must be positive")
    return pi


def _interpolate(xs, ys):
    """Lagrange interpolation; returns polynomial coefficients (Fractions)."""
    n = len(xs)
    coeffs = [Fraction(0)] * n
    for i in range(n):
        # numerator polynomial prod_{j != i} (x - x_j), coefficients low->high
        num = [Fraction(1)]
        denom = Fraction(1)
        for j in range(n):
            if j == i:
                continue
            new = [Fraction(0)] * (len(num) + 1)
            for k, c in enumerate(num):
                new[k + 1] += c
                new[k] -= c * xs[j]
            num = new
            denom *= Fraction(xs[i] - xs[j])
        for k, c in enumerate(num):
            coeffs[k] += c * ys[i] / denom
    return coeffs


def theta_coefficient(h, pi=None, m2=None):
    """Positive solution of (chi-1)^(2-v) * pi * theta^(e-1) = 2 - 1/m2.

    Returns (theta_float, exact_power, exponent_denominator) where
    exact_power is the Fraction theta^(e_H - 1).
    """
    if pi is None:
        pi = pi_coefficient(h)
    if m2 is None:
        m2, _, _ = two_density(h)
    r = h.chromatic_number() - 1
    v, e = h.n, h.edge_count()
    power = (2 - 1 / Fraction(m2)) * Fraction(r) ** (v - 2) / pi
    theta = float(power) ** (1.0 / (e - 1))
    return theta, power, e - 1


def p_threshold(h, n, c_mult=1.0, theta=None):
    """Threshold probability theta * n^(-1/m2) * (log n)^(1/(e-1)), clipped
    to [0, 1].  Logs are natural throughout."""
    if n < 2:
        raise ValueError("need n >= 2")
    if theta is None:
        theta, _, _ = theta_coefficient(h)
    m2, _, _ = two_density(h)
    e = h.edge_count()
    p = c_mult * theta * n ** (-1 / float(m2)) * math.log(n) ** (1.0 / (e - 1))
    return min(1.0, max(0.0, p))


def dense_min_degree_bound(h, n):
    """Minimum-degree guarantee for the dense regime: with chi(h) = r + 1,
    ceil((1 - 3/(4(r-1)(3r-1))) * n) + 1; every graph on n vertices with at
    least this minimum degree has all its largest h-free subgraphs r-partite
    (h edge-critical).  Also returns the degree ratio constant
    (3r-4)/(3r-1) used by the peeling argument."""
    r = h.chromatic_number() - 1
    if r < 2:
        raise ValueError("pattern must have chromatic number at least 3")
    frac = 1 - Fraction(3, 4 * (r - 1) * (3 * r - 1))
    return math.ceil(frac * n) + 1, Fraction(3 * r - 4, 3 * r - 1)


class PatternProfile:
    """All pattern constants in one bundle."""

    def __init__(self, h):
        self.pattern = h
        self.v = h.n
        self.e = h.edge_count()
        self.chi = h.chromatic_number()
        self.r = self.chi - 1
        self.m2, self.m2_witnesses, self.strictly_balanced = two_density(h)
        self.edge_critical, self.critical_edges = is_edge_critical(h)
        self.pi = pi_coefficient(h)
        self.theta, self.theta_power, self.theta_exponent = \
            theta_coefficient(h, pi=self.pi, m2=self.m2)

    def p_threshold(self, n, c_mult=1.0):
        return p_threshold(self.pattern, n, c_mult=c_mult, theta=self.theta)

    def as_dict(self):
        return {
            "vertices": self.v,
            "edges": self.e,
            "chromatic_number": self.chi,
            "two_density": _frac_str(self.m2),
            "strictly_balanced": self.strictly_balanced,
            "edge_critical": self.edge_critical,
            "critical_edges": [list(e) for e in self.critical_edges],
            "pi": _frac_str(self.pi),
            "theta_power": _frac_str(self.theta_power),
            "theta_exponent": self.theta_exponent,
            "theta": self.theta,
        }


def _frac_str(x):
    f = Fraction(x)
    return "%d/%d" % (f.numerator, f.denominator)
