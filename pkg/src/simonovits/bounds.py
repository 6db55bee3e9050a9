"""Numeric evaluators for the explicit probabilistic bounds.

Everything here is a plug-in calculator: lower-tail bounds for Poisson and
hypergraph-matching variables, the parameter table for the switching
argument, subgraph balance margins, and the closing summations.  All bound
evaluators work in log-space and report both the raw log-bound and a
probability clipped to [0, 1].
"""

import itertools
import math
from dataclasses import dataclass, asdict, replace
from fractions import Fraction


@dataclass(frozen=True)
class Constants:
    """Tunable constants bundle.

    The source analysis only fixes a dependency order ("sufficiently
    small"), never numeric values; these toy defaults keep every guard
    satisfiable at desk scale and can be overridden field by field.
    """
    kappa: float = 0.1
    eta: float = 0.05
    beta: float = 0.01
    alpha: float = 0.2
    delta: float = 0.4
    eps: float = 0.1
    C_theta: float = 2.0
    C_hat: float = 1.0
    C_partial: float = 1.0

    def override(self, **kw):
        return replace(self, **kw)

    def as_dict(self):
        return asdict(self)


PAPER_DEFAULTS = Constants()


def _pack(log_bound):
    bound = math.exp(log_bound) if log_bound < 700 else math.inf
    return {"log_bound": log_bound, "bound": bound,
            "prob": min(1.0, bound), "clipped": bound > 1.0}


def poisson_lower_tail(mu, alpha):
    """Upper bound exp(-(1 - a*ln(e/a)) * mu) on Pr(Poisson(mu) <= a*mu)."""
    if mu < 0 or not 0 <= alpha <= 1:
        raise ValueError("need mu >= 0 and 0 <= alpha <= 1")
    ent = alpha * math.log(math.e / alpha) if alpha > 0 else 0.0
    return _pack(-(1 - ent) * mu)


def janson_matching_bound(mu, delta, alpha, eta, p):
    """Upper bound on Pr(nu(family restricted to a p-sample) <= alpha*mu):
    exp(-(1 - a*ln(e/a) - a*p - eta)*mu + (1 + 2*a*p/eta)*delta)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    if mu < 0 or delta < 0 or alpha < 0 or not 0 <= p <= 1:
        raise ValueError("arguments out of range")
    ent = alpha * math.log(math.e / alpha) if alpha > 0 else 0.0
    log_b = -(1 - ent - alpha * p - eta) * mu + (1 + 2 * alpha * p / eta) * delta
    return _pack(log_b)


def janson_corollaries(mu, delta, gamma):
    """The two specialised corollaries.

    bound34 = exp(-(1-gamma)*mu + 2*delta) bounds Pr(nu <= gamma^2 * mu).
    Lambda = min(mu, mu^2/delta) (delta=0 -> mu); bound35 = exp(-Lambda/10)
    bounds Pr(nu <= Lambda/1000).
    """
    if not 0 < gamma <= 0.1:
        raise ValueError("need 0 < gamma <= 1/10")
    if mu < 0 or delta < 0:
        raise ValueError("moments must be nonnegative")
    b34 = _pack(-(1 - gamma) * mu + 2 * delta)
    lam = mu if delta == 0 else min(mu, mu * mu / delta)
    if mu == 0:
        lam = 0.0
    b35 = _pack(-lam / 10)
    return {"bound34": b34, "lam": lam, "bound35": b35}


def upper_tail_rho(alpha, ell):
    """rho = min(alpha, 1) / ((2*ell + 1) * e)."""
    if alpha <= 0 or ell < 1:
        raise ValueError("need alpha > 0 and ell >= 1")
    return min(alpha, 1.0) / ((2 * ell + 1) * math.e)


def upper_tail_bound(alpha, ell, n, p):
    """Companion evaluator exp(-rho * n * p)."""
    return _pack(-upper_tail_rho(alpha, ell) * n * p)


# -- subgraph balance margins --------------------------------------------

def balanced_condition_check(profile, n, p, C):
    """Margins of n^(v-2) p^(e-1) >= C^(e-1) over all nonempty subgraphs.

    The margin depends only on the (vertex count, edge count) pair, so the
    scan collects achievable pairs from vertex subsets.  For a strictly
    balanced pattern also reports, per proper subgraph pair with
    1 < e < e_H, the exponent lambda = (v-2) - (e-1)/m2 by which the margin
    grows (as a power of n, at p proportional to n^(-1/m2)).
    """
    h = profile.pattern
    m2 = profile.m2
    if p < C * n ** (-1 / float(m2)):
        return {"applicable": False,
                "reason": "p below C * n^(-1/m2)"}
    max_e = {}
    for k in range(1, h.n + 1):
        for vs in itertools.combinations(range(h.n), k):
            e = h.induced(vs).edge_count()
            max_e[k] = max(max_e.get(k, 0), e)
    entries = []
    min_lambda = None
    all_hold = True
    for v, emax in sorted(max_e.items()):
        for e in range(2, emax + 1):
            margin = n ** (v - 2) * p ** (e - 1) / C ** (e - 1)
            holds = margin >= 1.0 - 1e-12
            all_hold = all_hold and holds
            lam = Fraction(v - 2) - Fraction(e - 1) / Fraction(m2)
            entry = {"v": v, "e": e, "margin": margin, "holds": holds,
                     "lambda": float(lam)}
            entries.append(entry)
            proper = (v, e) != (h.n, h.edge_count())
            if proper and e > 1 and e < h.edge_count():
                if min_lambda is None or lam < min_lambda:
                    min_lambda = lam
    return {"applicable": True, "entries": entries, "all_hold": all_hold,
            "strictly_balanced": profile.strictly_balanced,
            "min_lambda": float(min_lambda) if min_lambda is not None else None}


# -- parameter table -----------------------------------------------------

def param_table(profile, n, p, eQ, kQ, constants=PAPER_DEFAULTS, p_h=None):
    """Fill the parameter-table row matching the structure class and regime.

    Classes: kQ > 0 means a star-union structure (QH row); otherwise the
    low-degree structure is class 1 when e(Q) < kappa*n*p/log n and class 2
    when e(Q) is at least that (closed on the dense side).  The sparse
    regime applies when p <= C_theta * p_h.
    """
    if n < 3:
        raise ValueError("need n >= 3")
    c = constants
    v, e, r = profile.v, profile.e, profile.r
    if p_h is None:
        p_h = profile.p_threshold(n)
    base = n ** (v - 2) * p ** (e - 1)       # n^(v-2) p^(e-1)
    logn = math.log(n)
    out = {"n": n, "p": p, "eQ": eQ, "kQ": kQ, "p_h": p_h,
           "constants": c.as_dict(), "q": None}
    if kQ > 0:
        regime = "QH"
        d = m = 32 * kQ * n * p
        cap = min(kQ * n ** (v - 1) * p ** e, n * n * p)
        D = 2 * v * cap / m if m > 0 else math.inf
    else:
        sparse = p <= c.C_theta * p_h
        dense_class2 = eQ >= c.kappa * n * p / logn
        if sparse:
            regime = "QL_sparse"
            d = min(math.sqrt(c.eta) * eQ * logn, c.beta * n * n * p)
            m = c.kappa * base * eQ
            D = 4 * e * e / c.kappa
        elif not dense_class2:
            regime = "QL1_dense"
            d = m = 8 * r * eQ
            D = n * n * p / d if d > 0 else math.inf
        else:
            regime = "QL2_dense"
            q = c.C_hat * logn / (c.kappa * base)
            out["q"] = q
            d = min(math.sqrt(c.eta) * eQ * logn, c.beta * n * n * p)
            m = c.kappa * base * q * eQ
            D = c.C_partial / c.kappa
    nu = m + (r * r + 1) * (d + 1)
    out.update({"regime": regime, "d_Q": d, "m_Q": m, "D_Q": D, "nu_Q": nu})
    return out


# -- exact family moment checks ------------------------------------------

def mu_delta_lemma_check(which, h, q, s, n, p, profile=None):
    """Exact first/second moment check for the residual families.

    which="FQL": the unique-completion residual family of the low-degree
    structure q, restricted to the crossing pairs of the partition s; also
    verifies the exact counting lower bound
      |family[ext(S)]| >= (1 - v^2 * maxdeg(Q)/(|S1| - v)) * e(Q) * N(h, K_S+)
    where K_S+ is the complete multipartite graph on s plus one edge inside
    the first part.

    which="high": the anchored residual family of a star-union structure;
    reports exact moments and fitted constants against the asymptotic
    targets (descriptive, not pass/fail).
    """
    from .graph import Graph, ColoredGraph, complete_multipartite, edge_index
    from .copies import residual_family, janson_moments, count_copies
    from .patterns import PatternProfile
    from .graph import bitset_members

    if profile is None:
        profile = PatternProfile(h)
    v_h, e_h = profile.v, profile.e
    qg = q.graph if isinstance(q, ColoredGraph) else q
    report = {"which": which, "n": n, "p": p, "eQ": qg.edge_count()}
    if qg.edge_count() == 0:
        report.update({"applicable": False, "reason": "empty structure",
                       "vacuous_pass": True})
        return report
    variant = "low" if which == "FQL" else "high"
    fam, _ = residual_family(h, q, n, variant)
    ext = set(bitset_members(s.ext_mask()))
    restricted = fam.induce(ext)
    mom_restricted = janson_moments(restricted.family, p, exact=True)
    mom_full = janson_moments(fam.family, p, exact=True)
    mu = mom_restricted["mu"]
    delta = mom_full["delta"]
    report.update({
        "family_size": len(fam), "restricted_size": len(restricted),
        "mu_restricted": float(mu), "delta_full": float(delta),
        "delta_over_mu": float(delta / mu) if mu else None,
    })
    sizes = [len(pp) for pp in s.parts]
    if which == "FQL":
        s1 = sorted(s.parts[0])
        if len(s1) <= v_h:
            report.update({"applicable": False,
                           "reason": "first part not larger than pattern"})
            return report
        # host: complete multipartite on the parts of s plus one edge in S1
        order = [v for pp in s.parts for v in sorted(pp)]
        host = complete_multipartite(sizes)
        # map back: host labels are blocks; count is label independent
        n_splus = count_copies(h, host.with_edge(0, 1))
        max_deg_q = qg.max_degree()
        lower = (1 - Fraction(v_h * v_h * max_deg_q, len(s1) - v_h)) \
            * qg.edge_count() * n_splus
        # count bound uses residuals with their unique completions crossing:
        count = len(restricted)
        report.update({
            "applicable": True,
            "count_restricted": count,
            "count_lower_bound": float(lower),
            "count_bound_holds": count >= lower,
            "mu_target": float((profile.pi) * qg.edge_count()
                               * min(sizes) ** (v_h - 2) * p ** (e_h - 1)),
            "fitted_c_low": float(delta / mu / (n ** (v_h - 2)
                                                * p ** (e_h - 1))) if mu else None,
        })
    else:
        kq = len(q.centres) if isinstance(q, ColoredGraph) else 0
        cap1 = min(kq * n ** (v_h - 1) * p ** e_h, n * n * p)
        mu_f = float(mu)
        report.update({
            "applicable": True,
            "k_Q": kq,
            "mu_target_shape": cap1,
            "fitted_c_high_mu": mu_f / cap1 if cap1 > 0 else None,
            "mu2_over_delta": (mu_f * mu_f / float(delta)) if delta else None,
        })
    return report


# -- closing summations --------------------------------------------------

def sufficiency_sum(n, p, beta, c):
    """The two finite sums from the closing union bound.

    First: sum over 1 <= m <= beta*N*p of exp(m - c*m*log(N*p/m)), with
    N = n*(n-1)/2.  Second: sum over 1 <= k <= n of C(n,k) e^(-n*p*k),
    evaluated through the closed form (1 + e^(-n*p))^n - 1.
    Returns totals and whether each is below 1.
    """
    N = n * (n - 1) // 2
    top = int(beta * N * p)
    terms = []
    for m in range(1, top + 1):
        terms.append(m - c * m * math.log(N * p / m))
    if terms:
        mx = max(terms)
        if mx > 700:
            first = math.inf
        else:
            first = math.fsum(math.exp(t) for t in terms)
    else:
        first = 0.0
    second = math.expm1(n * math.log1p(math.exp(-n * p)))
    return {"first_sum": first, "first_below_1": first < 1.0,
            "second_sum": second, "second_below_1": second < 1.0,
            "terms": top}
