"""Cut families, deficits, rigidity, cores, critical edges, and the
switching algorithm with its trace validator.

All cut-family quantities are computed over the explicit list of balanced
compatible r-part assignments; rigidity depends on the full argmax set, so
enumeration is exact with a hard guard and never sampled.
"""

import itertools
import math
import random

from .graph import Graph, PartTuple, ColoredGraph, edge_index, \
    edge_from_index, bitset_members
from .bounds import PAPER_DEFAULTS

FAMILY_GUARD = 10 ** 8


class GuardExceeded(Exception):
    pass


class CutFamily:
    """All delta-balanced complete r-part assignments of [n] compatible
    with an optional coloured structure (vertices coloured k must land in
    part k-1)."""

    def __init__(self, n, r, delta, q=None, guard=FAMILY_GUARD):
        if r ** n > guard:
            raise GuardExceeded("cut family too large: %d^%d" % (r, n))
        self.n = n
        self.r = r
        self.delta = delta
        self.q = q
        lo = (1 - delta) * n / r
        hi = (1 + delta) * n / r
        forced = {}
        if q is not None:
            colour = q.colour if isinstance(q, ColoredGraph) else None
            if colour:
                for v, c in enumerate(colour):
                    if c >= 1:
                        forced[v] = c - 1
        self.assignments = []
        self.ext_masks = []
        self.int_masks = []
        for assign in itertools.product(range(r), repeat=n):
            if any(assign[v] != k for v, k in forced.items()):
                continue
            sizes = [0] * r
            for a in assign:
                sizes[a] += 1
            if not all(lo <= s <= hi for s in sizes):
                continue
            ext = 0
            intm = 0
            for (u, v) in itertools.combinations(range(n), 2):
                b = 1 << edge_index(n, u, v)
                if assign[u] != assign[v]:
                    ext |= b
                else:
                    intm |= b
            self.assignments.append(assign)
            self.ext_masks.append(ext)
            self.int_masks.append(intm)
        if not self.assignments:
            raise ValueError("empty cut family")

    def __len__(self):
        return len(self.assignments)

    def index_of(self, cut):
        assign = tuple(cut.assignment())
        try:
            return self.assignments.index(assign)
        except ValueError:
            raise ValueError("cut not in family")

    def cut(self, idx):
        return PartTuple.from_assignment(list(self.assignments[idx]), self.r)

    def b_value(self, g_mask):
        return max((g_mask & e).bit_count() for e in self.ext_masks)

    def maxcut_ids(self, g_mask):
        vals = [(g_mask & e).bit_count() for e in self.ext_masks]
        b = max(vals)
        return b, [i for i, v in enumerate(vals) if v == b]


def graph_mask(g):
    return g.edge_mask()


def deficit(cut, g, fam):
    """(best family cut value, deficit of the given cut)."""
    idx = fam.index_of(cut)
    gm = graph_mask(g) if isinstance(g, Graph) else g
    b = fam.b_value(gm)
    mine = (gm & fam.ext_masks[idx]).bit_count()
    return b, b - mine


def _equivalence_classes(fam, maxcut_ids):
    sig = {}
    for v in range(fam.n):
        sig.setdefault(
            tuple(fam.assignments[i][v] for i in maxcut_ids), []).append(v)
    return sorted(sig.values(), key=lambda c: (-len(c), c))


def rigidity_threshold(n, r, alpha, paper_literal=False):
    """Pair-count threshold for rigidity.  The literal asymptotic form
    (1-alpha)n^2/(2r) overshoots at small n; the corrected default counts
    (1-alpha) of the pairs inside r balanced classes."""
    if paper_literal:
        return (1 - alpha) * n * n / (2 * r)
    s = math.ceil(n / r)
    return (1 - alpha) * r * (s * (s - 1) / 2)


def equivalence_and_rigidity(g, fam, alpha, paper_literal=False):
    """Pair agreement across all maximum cuts in the family.

    Returns a dict with the equivalent-pair count, equivalence classes,
    rigidity flag, and (when rigid) the core: the r classes larger than
    (1-4r*alpha)n/r, in canonical unordered form.
    """
    gm = graph_mask(g) if isinstance(g, Graph) else g
    b, ids = fam.maxcut_ids(gm)
    classes = _equivalence_classes(fam, ids)
    pairs = sum(len(c) * (len(c) - 1) // 2 for c in classes)
    thr = rigidity_threshold(fam.n, fam.r, alpha, paper_literal)
    rigid = pairs >= thr
    core = None
    core_error = None
    if rigid:
        size_floor = (1 - 4 * fam.r * alpha) * fam.n / fam.r
        large = [c for c in classes if len(c) > size_floor]
        if len(large) == fam.r:
            core = PartTuple(fam.n, large)
        else:
            core_error = "expected %d large classes, found %d" % (
                fam.r, len(large))
    return {"b": b, "maxcut_ids": ids, "pairs": pairs, "threshold": thr,
            "classes": classes, "rigid": rigid, "core": core,
            "core_error": core_error}


def crit_edges(g, fam, rigidity=None, alpha=None):
    """Edges of g crossing every maximum cut of the family.  When a
    rigidity result with a core is supplied (or alpha given to compute
    one), asserts crit contains the core-crossing edges of g."""
    gm = graph_mask(g) if isinstance(g, Graph) else g
    b, ids = fam.maxcut_ids(gm)
    mask = gm
    for i in ids:
        mask &= fam.ext_masks[i]
    if rigidity is None and alpha is not None:
        rigidity = equivalence_and_rigidity(gm, fam, alpha)
    if rigidity and rigidity.get("core") is not None:
        core_ext = rigidity["core"].ext_mask() & gm
        if core_ext & ~mask:
            raise AssertionError("critical edges miss a core-crossing edge")
    return mask


# -- switching -----------------------------------------------------------

class SwitchTrace:
    """Record of one switching run."""

    __slots__ = ("n", "g0_mask", "steps", "g_masks", "f_masks",
                 "terminal", "params")

    def __init__(self, n, g0_mask, params):
        self.n = n
        self.g0_mask = g0_mask
        self.steps = []
        self.g_masks = [g0_mask]
        self.f_masks = [0]
        self.terminal = None
        self.params = params

    def as_dict(self):
        return {"n": self.n, "g0": _mask_edges(self.n, self.g0_mask),
                "steps": self.steps, "terminal": self.terminal,
                "params": self.params}


def _mask_edges(n, mask):
    return [list(edge_from_index(n, i)) for i in bitset_members(mask)]


def _q_in_core(q, core):
    """Every nonempty colour class of q inside some core class."""
    if core is None:
        return False
    colour = q.colour
    r = core.r()
    for k in range(1, r + 1):
        vk = [v for v, c in enumerate(colour) if c == k]
        if not vk:
            continue
        if not any(set(vk) <= set(part) for part in core.parts):
            return False
    return True


def _switch_branch(fam, q, q_mask, cut_idx, g_mask, f_mask, resid_masks,
                   m, gamma_n2p, alpha, paper_literal=False):
    """Evaluate the branch conditions at one state.  Returns
    (type, sorted choice list of edge indices or None)."""
    union = g_mask | f_mask
    b, ids = fam.maxcut_ids(union)
    crit = union
    for i in ids:
        crit &= fam.ext_masks[i]
    int_mask = fam.int_masks[cut_idx]
    x_union = 0
    inside = g_mask & crit
    for w in resid_masks:
        if w & ~inside:
            continue
        if w & int_mask:
            x_union |= w & int_mask
    if x_union.bit_count() >= m:
        return "a", bitset_members(x_union)
    if (crit & int_mask).bit_count() >= gamma_n2p:
        choice = (g_mask & crit & int_mask) & ~q_mask
        return "b", bitset_members(choice)
    rep = equivalence_and_rigidity(union, fam, alpha, paper_literal)
    if not rep["rigid"]:
        choice = (g_mask & int_mask) & ~(crit | q_mask)
        return "c", bitset_members(choice)
    core = rep["core"]
    if core is not None and _q_in_core(q, core):
        return "e", None
    if core is None:
        return "stuck", None
    # step (d): smallest k whose colour class agrees with some core part in
    # at least one but not all maximum cuts
    n = fam.n
    r = fam.r
    for k in range(1, r + 1):
        vk = [v for v, c in enumerate(q.colour) if c == k]
        if not vk:
            continue
        rep_v = vk[0]
        eligible_parts = []
        for part in core.parts:
            w = sorted(part)[0]
            agree = [fam.assignments[i][rep_v] == fam.assignments[i][w]
                     for i in rep["maxcut_ids"]]
            if any(agree) and not all(agree):
                eligible_parts.append(part)
        if eligible_parts:
            target = set().union(*eligible_parts)
            ext_cut = fam.ext_masks[cut_idx]
            choice = []
            for u in vk:
                for w in target:
                    if u == w:
                        continue
                    bi = edge_index(n, u, w)
                    bbit = 1 << bi
                    if (ext_cut & bbit) and not ((g_mask | f_mask) & bbit):
                        choice.append(bi)
            return "d", sorted(set(choice))
    return "stuck", None


def run_switching(g0, q, cut, fam_resid, fam, m, L, seed=0,
                  constants=PAPER_DEFAULTS, gamma=None, p=None,
                  paper_literal=False):
    """Execute the switching algorithm for L rounds or until it stops.

    q: ColoredGraph structure contained in g0; cut: compatible balanced
    partition; fam_resid: residual family (subsets of non-q pairs of K_n);
    fam: the CutFamily; m: the step-(a) threshold.  Removals and additions
    are drawn uniformly from the sorted choice sets via the seeded stream.
    """
    if isinstance(q, Graph):
        q = ColoredGraph(q, [1 if q.degree(v) else 0 for v in range(q.n)])
    n = g0.n
    if p is None:
        p = g0.edge_count() / (n * (n - 1) / 2)
    r = fam.r
    if gamma is None:
        gamma = constants.alpha / (24 * r)
    gamma_n2p = gamma * n * n * p
    q_mask = q.graph.edge_mask()
    g_mask = g0.edge_mask()
    if q_mask & ~g_mask:
        raise ValueError("structure not contained in the start graph")
    cut_idx = fam.index_of(cut)
    resid_masks = []
    for a in fam_resid.family:
        resid_masks.append(sum(1 << i for i in a))
    rng = random.Random(seed)
    params = {"m": m, "L": L, "gamma": gamma, "seed": seed, "p": p,
              "alpha": constants.alpha}
    trace = SwitchTrace(n, g_mask, params)
    f_mask = 0
    for i in range(L):
        typ, choice = _switch_branch(fam, q, q_mask, cut_idx, g_mask,
                                     f_mask, resid_masks, m, gamma_n2p,
                                     constants.alpha, paper_literal)
        if typ == "e":
            trace.terminal = {"reason": "e", "steps": i}
            break
        if typ == "stuck" or not choice:
            trace.terminal = {"reason": "stuck", "branch": typ, "steps": i}
            break
        pos = rng.randrange(len(choice))
        e_idx = choice[pos]
        if typ == "d":
            f_mask |= 1 << e_idx
        else:
            g_mask &= ~(1 << e_idx)
        trace.steps.append({"i": i, "type": typ, "edge": e_idx,
                            "choice_size": len(choice), "rng_pos": pos})
        trace.g_masks.append(g_mask)
        trace.f_masks.append(f_mask)
    else:
        trace.terminal = {"reason": "L", "steps": L}
    return trace


def validate_trace(trace, q, cut, d, fam, fam_resid, m, gamma=None,
                   constants=PAPER_DEFAULTS, p=None, paper_literal=False):
    """Re-execute the branch logic of a trace and check the legal-sequence
    properties.

    (i) the final graph contains the structure; (ii) i = e(G0) - e(G_i) +
    e(F_i) with G_i, F_i disjoint; (iii) at most d removal steps of types
    a/b, with the deficit strictly decreasing on each and never increasing
    overall; (iv) at most r^2(d+1) addition steps, runs of consecutive
    additions at most r^2, and an addition step never immediately followed
    by type c.  Also confirms each step's type matches the first applicable
    branch and its edge belongs to the recomputed choice set.
    Returns {"ok": bool, "violations": [...]}.
    """
    if isinstance(q, Graph):
        q = ColoredGraph(q, [1 if q.degree(v) else 0 for v in range(q.n)])
    n = trace.n
    r = fam.r
    if p is None:
        p = trace.params.get("p")
    if gamma is None:
        gamma = trace.params.get("gamma", constants.alpha / (24 * r))
    gamma_n2p = gamma * n * n * p
    q_mask = q.graph.edge_mask()
    cut_idx = fam.index_of(cut)
    resid_masks = [sum(1 << i for i in a) for a in fam_resid.family]
    violations = []
    g0 = trace.g0_mask
    e0 = g0.bit_count()
    ab_steps = 0
    d_steps = 0
    d_run = 0
    prev_type = None
    prev_def = None
    for idx, step in enumerate(trace.steps):
        g_mask = trace.g_masks[idx]
        f_mask = trace.f_masks[idx]
        typ, choice = _switch_branch(fam, q, q_mask, cut_idx, g_mask,
                                     f_mask, resid_masks, m, gamma_n2p,
                                     constants.alpha, paper_literal)
        if typ != step["type"]:
            violations.append((idx, "branch mismatch: recomputed %s, "
                               "recorded %s" % (typ, step["type"])))
            break
        if choice is None or step["edge"] not in choice:
            violations.append((idx, "edge not in recomputed choice set"))
            break
        # state transition consistency
        bit = 1 << step["edge"]
        if typ == "d":
            ok = (trace.g_masks[idx + 1] == g_mask
                  and trace.f_masks[idx + 1] == (f_mask | bit))
        else:
            ok = (trace.g_masks[idx + 1] == (g_mask & ~bit)
                  and trace.f_masks[idx + 1] == f_mask)
        if not ok:
            violations.append((idx, "state transition inconsistent"))
            break
        union = trace.g_masks[idx] | trace.f_masks[idx]
        b = fam.b_value(union)
        mine = (union & fam.ext_masks[cut_idx]).bit_count()
        cur_def = b - mine
        if prev_def is not None:
            if cur_def > prev_def:
                violations.append((idx, "deficit increased"))
            if prev_type in ("a", "b") and cur_def >= prev_def:
                violations.append((idx, "deficit did not drop on a/b step"))
        if typ in ("a", "b"):
            ab_steps += 1
        if typ == "d":
            d_steps += 1
            d_run += 1
            if d_run > r * r:
                violations.append((idx, "more than r^2 consecutive "
                                   "addition steps"))
        else:
            if prev_type == "d" and typ == "c":
                violations.append((idx, "addition step followed by type c"))
            d_run = 0
        prev_type = typ
        prev_def = cur_def
    # terminal state checks
    g_t = trace.g_masks[-1]
    f_t = trace.f_masks[-1]
    if q_mask & ~g_t:
        violations.append(("terminal", "structure not contained in G_t"))
    for i in range(len(trace.g_masks)):
        gi, fi = trace.g_masks[i], trace.f_masks[i]
        if gi & fi:
            violations.append((i, "G_i and F_i intersect"))
        if i != e0 - gi.bit_count() + fi.bit_count():
            violations.append((i, "edge-count identity broken"))
    if ab_steps > d:
        violations.append(("total", "more than d steps of types a/b"))
    if d_steps > r * r * (d + 1):
        violations.append(("total", "more than r^2(d+1) addition steps"))
    return {"ok": not violations, "violations": violations,
            "ab_steps": ab_steps, "d_steps": d_steps}
