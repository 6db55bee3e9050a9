"""Pattern copies and edge-set hypergraphs.

A "copy" of a pattern graph h inside a host is a subgraph isomorphic to h,
recorded as its set of edges.  Families of copies (or of their residuals
after removing the edges of a fixed structure Q) are handled as hypergraphs
whose ground elements are edge indices of K_n; abstract hypergraphs over any
integer ground set go through the same helpers.
"""

import itertools
from collections import Counter
from fractions import Fraction

from .graph import Graph, edge_index, bitset_members


# -- embeddings and copies -----------------------------------------------

def _embedding_order(h):
    """Order pattern vertices so each one touches an earlier one if possible."""
    order = []
    placed = set()
    verts = sorted(range(h.n), key=lambda v: -h.degree(v))
    for start in verts:
        if start in placed:
            continue
        order.append(start)
        placed.add(start)
        while True:
            nxt = None
            best = -1
            for v in range(h.n):
                if v in placed:
                    continue
                back = sum(1 for w in h.neighbours(v) if w in placed)
                if back > best and back > 0:
                    nxt, best = v, back
            if nxt is None:
                break
            order.append(nxt)
            placed.add(nxt)
    return order


def embeddings(h, host, fixed=None):
    """All injective maps V(h) -> V(host) sending edges of h to host edges.

    fixed: optional dict {pattern vertex: iterable of allowed host vertices}.
    Yields image tuples indexed by pattern vertex.
    """
    order = _embedding_order(h)
    back = []
    for i, v in enumerate(order):
        back.append([order.index(w) for w in h.neighbours(v) if w in order[:i]])
    full = (1 << host.n) - 1
    image = [0] * h.n
    used = 0

    def allowed(v):
        if fixed and v in fixed:
            m = 0
            for x in fixed[v]:
                m |= 1 << x
            return m
        return full

    def rec(i):
        nonlocal used
        if i == len(order):
            yield tuple(image)
            return
        v = order[i]
        cand = allowed(v) & ~used
        for j in back[i]:
            cand &= host.adj[image[order[j]]]
        while cand:
            b = cand & -cand
            cand ^= b
            x = b.bit_length() - 1
            image[v] = x
            used |= b
            yield from rec(i + 1)
            used ^= b

    yield from rec(0)


def count_embeddings(h, host, fixed=None):
    return sum(1 for _ in embeddings(h, host, fixed))


def automorphism_count(h):
    """Number of edge-preserving bijections of h (no isolated-vertex patterns)."""
    if h.min_degree() == 0 and h.n > 1:
        raise ValueError("pattern has an isolated vertex")
    return count_embeddings(h, h)


def enumerate_copies(h, host):
    """All subgraphs of host isomorphic to h, each as a frozenset of
    (u, v) edge pairs with u < v."""
    seen = set()
    for img in embeddings(h, host):
        es = frozenset(tuple(sorted((img[u], img[v]))) for (u, v) in h.edges())
        seen.add(es)
    return sorted(seen)


def count_copies(h, host):
    aut = automorphism_count(h)
    total = count_embeddings(h, host)
    if total % aut:
        raise AssertionError("embedding count not divisible by |Aut|")
    return total // aut


def are_isomorphic(g1, g2):
    if g1.n != g2.n or g1.edge_count() != g2.edge_count():
        return False
    if sorted(g1.degree(v) for v in range(g1.n)) != \
       sorted(g2.degree(v) for v in range(g2.n)):
        return False
    for img in embeddings(g1, g2):
        ok = True
        for (u, v) in itertools.combinations(range(g1.n), 2):
            if g1.has_edge(u, v) != g2.has_edge(img[u], img[v]):
                ok = False
                break
        if ok:
            return True
    return False


# -- copy hypergraphs ----------------------------------------------------

def copies_as_hypergraph(h, host):
    """Copies of h in host as a family over K_n edge indices."""
    n = host.n
    fam = [frozenset(edge_index(n, u, v) for (u, v) in copy)
           for copy in enumerate_copies(h, host)]
    return CopyHypergraph(n, fam)


class CopyHypergraph:
    """Set family over the edge indices of K_n."""

    __slots__ = ("n", "family")

    def __init__(self, n, family):
        self.n = n
        self.family = sorted(set(frozenset(a) for a in family),
                             key=lambda a: tuple(sorted(a)))

    def __len__(self):
        return len(self.family)

    def edge_sets(self):
        """Each member as a frozenset of (u, v) pairs."""
        from .graph import edge_from_index
        return [frozenset(edge_from_index(self.n, i) for i in a)
                for a in self.family]

    def induce(self, ground):
        return CopyHypergraph(self.n, induce(self.family, ground))

    def induce_graph(self, g):
        mask = g.edge_mask()
        keep = set(bitset_members(mask))
        return self.induce(keep)

    def matching_number(self):
        return matching_number(self.family)


# -- generic set-family operations ---------------------------------------

def induce(family, ground):
    ground = set(ground)
    return [a for a in family if a <= ground]


def link(family, element):
    """Sets A - {element} for members A containing the element, deduped."""
    out = {a - {element} for a in family if element in a}
    out.discard(frozenset())
    return sorted(out, key=lambda a: tuple(sorted(a)))


def boundary(family):
    """All sets obtainable by dropping one element from a member, deduped."""
    out = set()
    for a in family:
        for x in a:
            b = a - {x}
            if b:
                out.add(b)
    return sorted(out, key=lambda a: tuple(sorted(a)))


def matching_number(family, cap_nodes=None):
    """Largest number of pairwise disjoint members (exact branch and bound)."""
    fam = sorted(set(frozenset(a) for a in family), key=len)
    elems = sorted(set().union(*fam)) if fam else []
    pos = {e: i for i, e in enumerate(elems)}
    masks = [sum(1 << pos[e] for e in a) for a in fam]
    best = [0]
    nodes = [0]

    def rec(i, used, size):
        nodes[0] += 1
        if cap_nodes and nodes[0] > cap_nodes:
            raise OverflowError("matching search cap exceeded")
        if size + (len(masks) - i) <= best[0]:
            return
        if i == len(masks):
            best[0] = max(best[0], size)
            return
        if masks[i] & used == 0:
            rec(i + 1, used | masks[i], size + 1)
        rec(i + 1, used, size)

    rec(0, 0, 0)
    return best[0]


# -- residual families ---------------------------------------------------

def critical_edge_and_anchor(h):
    """Canonical critical edge f (removing it lowers the chromatic number)
    and anchor endpoint: the endpoint of smallest degree, ties by label."""
    chi = h.chromatic_number()
    for (u, v) in h.edges():
        if h.without_edge(u, v).chromatic_number() < chi:
            anchor = min((h.degree(u), u), (h.degree(v), v))[1]
            return (u, v), anchor
    raise ValueError("pattern has no critical edge")


def residual_family(h, q, n, variant="low", embed_cap=2_000_000):
    """Residuals A - E(Q) of copies A of h in K_n meeting the structure q.

    variant "all":  copies sharing at least one edge with q.
    variant "low":  copies sharing exactly one edge with q whose vertex set
                    spans exactly one q-edge; each residual has a unique
                    completion back to a copy.
    variant "high": q must be a ColoredGraph with centres; copies place the
                    anchor of a critical edge on a centre v, its neighbours
                    into v's colour classes following a fixed proper
                    colouring, and all other vertices outside the centres.

    Returns (CopyHypergraph of residuals, {residual: [copy edge sets]}).
    """
    from .graph import ColoredGraph
    qg = q.graph if isinstance(q, ColoredGraph) else q
    if qg.n != n:
        raise ValueError("structure has wrong vertex count")
    q_edges = frozenset(tuple(sorted(e)) for e in qg.edges())
    q_idx = frozenset(edge_index(n, u, v) for (u, v) in q_edges)
    host = Graph(n, list(itertools.combinations(range(n), 2)))
    completions = {}

    def record(copy_pairs):
        idx = frozenset(edge_index(n, u, v) for (u, v) in copy_pairs)
        resid = idx - q_idx
        if resid:
            completions.setdefault(resid, []).append(copy_pairs)

    if variant in ("all", "low"):
        for copy in enumerate_copies(h, host):
            shared = copy & q_edges
            if variant == "all":
                if shared:
                    record(copy)
                continue
            if len(shared) != 1:
                continue
            vs = set(itertools.chain.from_iterable(copy))
            spanned = sum(1 for (u, v) in q_edges if u in vs and v in vs)
            if spanned == 1:
                record(copy)
    elif variant == "high":
        if not isinstance(q, ColoredGraph) or not q.centres:
            raise ValueError("variant 'high' needs a ColoredGraph with centres")
        f, anchor = critical_edge_and_anchor(h)
        r = h.chromatic_number() - 1
        hf = h.without_edge(*f)
        phi = hf.proper_colouring(r)
        if phi is None:
            raise AssertionError("critical edge did not lower the colour count")
        # normalise so the anchor gets colour 0 (reported as class 1)
        if phi[anchor] != 0:
            a = phi[anchor]
            phi = [0 if c == a else a if c == 0 else c for c in phi]
        outside = [v for v in range(n) if v not in q.centres]
        count = 0
        star_nbrs = hf.neighbours(anchor)   # critical-edge partner excluded
        for centre in sorted(q.centres):
            fixed = {anchor: [centre]}
            for u in star_nbrs:
                fixed[u] = sorted(q.class_neighbours(centre, phi[u] + 1))
            rest = [v for v in range(h.n)
                    if v != anchor and v not in star_nbrs]
            for v in rest:
                fixed[v] = outside
            for img in embeddings(h, host, fixed):
                count += 1
                if count > embed_cap:
                    raise OverflowError("embedding cap exceeded")
                record(frozenset(tuple(sorted((img[a], img[b])))
                                 for (a, b) in h.edges()))
    else:
        raise ValueError("unknown variant %r" % variant)

    hyper = CopyHypergraph(n, completions.keys())
    return hyper, completions


def janson_moments(family, p, exact=False, profile_limit=200000):
    """First and second Janson moments of a family under p-thinning.

    mu = sum over members of p^|A|.  Delta = sum over unordered pairs of
    distinct intersecting members of p^|A u B|.  Also returns the degree
    profile: for each j, the largest number of members containing a common
    j-subset (skipped past profile_limit subset enumerations).
    """
    fam = sorted(set(frozenset(a) for a in family), key=lambda a: tuple(sorted(a)))
    num = Fraction if exact else float
    pv = num(p)
    mu = sum(pv ** len(a) for a in fam)
    # group members by shared element to find intersecting pairs
    by_elem = {}
    for idx, a in enumerate(fam):
        for x in a:
            by_elem.setdefault(x, []).append(idx)
    pairs = set()
    for idxs in by_elem.values():
        for i, j in itertools.combinations(idxs, 2):
            pairs.add((i, j))
    delta = sum(pv ** len(fam[i] | fam[j]) for (i, j) in pairs)
    profile = {}
    max_size = max((len(a) for a in fam), default=0)
    work = 0
    for j in range(1, max_size + 1):
        cnt = Counter()
        for a in fam:
            work += 1
            for t in itertools.combinations(sorted(a), j):
                cnt[t] += 1
                work += 1
        if work > profile_limit:
            break
        profile[j] = max(cnt.values(), default=0)
    return {"mu": mu, "delta": delta, "degree_profile": profile,
            "size": len(fam)}
