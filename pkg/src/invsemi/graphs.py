"""Graph inverse semigroups over finite directed graphs.

Elements are pairs of finite paths (mu, nu) with a common source vertex,
plus a zero. Paths store their edge ids most-significant-edge-first, so a
path mu = mu_n ... mu_1 has source s(mu_1) and range r(mu_n), concatenation
mu . nu requires s(mu) = r(nu), and the tuple of an extended walk grows at
the front. Every path also records its source (base) and range (head)
vertices, which keeps products of pairs free of graph lookups even when a
leg is an empty path.

The degree of a nonzero pair is the reduced word mu nu^-1 in the free group
on the edge set. Fibers of that grading are spanned by families (a w, b w)
over paths w into the common source of a and b, and an element supported on
one fiber factors through squares along any splitting of its degree word,
which is what semisaturation_factorize performs and verifies.
"""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import AlgebraElement, FreeGroupOps, Grading, convolve
from .core import SemigroupContext
from .errors import (
    CancellationPresent,
    InputError,
    NotPositivePair,
    OracleMismatch,
    UnsupportedCoefficient,
    WitnessFailure,
)
from .scalars import principal_sqrt
from .words import free_reduce, word_inv


@dataclass(frozen=True)
class Path:
    edges: tuple
    base: object   # source vertex
    head: object   # range vertex

    def __len__(self):
        return len(self.edges)

    def __repr__(self):
        return "-".join(str(e) for e in self.edges) if self.edges else f"@{self.base}"


class DirectedGraph:
    """Finite directed graph with labeled edges."""

    def __init__(self, vertices, edges):
        self.vertices = tuple(vertices)
        if len(set(self.vertices)) != len(self.vertices):
            raise InputError("duplicate vertices")
        vset = set(self.vertices)
        self.src = {}
        self.rng = {}
        order = []
        for eid, s, r in edges:
            if eid in self.src:
                raise InputError(f"duplicate edge id {eid!r}")
            if s not in vset or r not in vset:
                raise InputError(f"edge {eid!r} has unknown endpoint")
            self.src[eid] = s
            self.rng[eid] = r
            order.append(eid)
        self.edge_ids = tuple(order)

    def __eq__(self, other):
        return (isinstance(other, DirectedGraph)
                and self.vertices == other.vertices
                and self.src == other.src and self.rng == other.rng)

    def __hash__(self):
        return hash((self.vertices, tuple(sorted(self.src.items(), key=repr)),
                     tuple(sorted(self.rng.items(), key=repr))))

    def empty_path(self, v) -> Path:
        if v not in self.vertices:
            raise InputError(f"unknown vertex {v!r}")
        return Path((), v, v)

    def path(self, edge_seq, base=None) -> Path:
        """Build a path from edge ids, most significant first, validating joints."""
        edges = tuple(edge_seq)
        if not edges:
            if base is None:
                raise InputError("empty path needs a base vertex")
            return self.empty_path(base)
        for e in edges:
            if e not in self.src:
                raise InputError(f"unknown edge {e!r}")
        for i in range(len(edges) - 1):
            if self.src[edges[i]] != self.rng[edges[i + 1]]:
                raise InputError(f"edges {edges[i+1]!r},{edges[i]!r} do not compose")
        return Path(edges, self.src[edges[-1]], self.rng[edges[0]])

    def concat(self, p: Path, q: Path) -> Path:
        """p after q; requires s(p) = r(q)."""
        if p.base != q.head:
            raise InputError("paths do not concatenate")
        if not p.edges:
            return q
        if not q.edges:
            return p
        return Path(p.edges + q.edges, q.base, p.head)


@dataclass(frozen=True)
class PathPair:
    """Nonzero element (mu, nu), both paths sharing a source vertex."""

    mu: Path
    nu: Path

    def __repr__(self):
        return f"({self.mu!r}|{self.nu!r})"


class _ZeroPair:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "0"


ZERO_PAIR = _ZeroPair()


def pair(graph: DirectedGraph, mu: Path, nu: Path) -> PathPair:
    if mu.base != nu.base:
        raise InputError("pair legs must share their source vertex")
    return PathPair(mu, nu)


def multiply_pairs(p, q):
    """Three-case product; ZERO_PAIR absorbs.

    (mu, nu)(alpha, beta) is (mu, beta nu') when nu = alpha nu', is
    (mu alpha', beta) when alpha = nu alpha', and is zero otherwise. An empty
    alpha or nu matches only when the junction vertex agrees.
    """
    if p is ZERO_PAIR or q is ZERO_PAIR:
        return ZERO_PAIR
    nu, alpha, beta = p.nu, q.mu, q.nu
    ne, ae = nu.edges, alpha.edges
    if ne[:len(ae)] == ae and (ae or nu.head == alpha.base):
        rest = ne[len(ae):]
        if not rest:
            return PathPair(p.mu, beta)
        rest_head = alpha.base if ae else nu.head
        new_nu = Path(beta.edges + rest, nu.base,
                      beta.head if beta.edges else rest_head)
        return PathPair(p.mu, new_nu)
    if ae[:len(ne)] == ne and (ne or alpha.head == nu.base):
        rest = ae[len(ne):]
        # rest is nonempty: full overlap was already taken by the first case
        rest_head = nu.base if ne else alpha.head
        mu = p.mu
        new_mu = Path(mu.edges + rest, alpha.base,
                      mu.head if mu.edges else rest_head)
        return PathPair(new_mu, q.nu)
    return ZERO_PAIR


def star_pair(p):
    if p is ZERO_PAIR:
        return ZERO_PAIR
    return PathPair(p.nu, p.mu)


def grading_phi(p):
    """Reduced word mu nu^-1 in the free group on edges; None for zero."""
    if p is ZERO_PAIR:
        return None
    letters = [(e, 1) for e in p.mu.edges]
    letters += [(e, -1) for e in reversed(p.nu.edges)]
    return free_reduce(letters)


class GraphContext(SemigroupContext):
    def __init__(self, graph: DirectedGraph):
        self.graph = graph
        self.zero = ZERO_PAIR

    def __eq__(self, other):
        return isinstance(other, GraphContext) and self.graph == other.graph

    def __hash__(self):
        return hash(("graph", self.graph))

    def product(self, a, b):
        return multiply_pairs(a, b)

    def star(self, a):
        return star_pair(a)


def graph_grading(graph: DirectedGraph) -> Grading:
    return Grading(GraphContext(graph), FreeGroupOps(), grading_phi)


# ---------------------------------------------------------------------------
# truncations
# ---------------------------------------------------------------------------

def paths_up_to(graph: DirectedGraph, L: int):
    """All paths of length <= L in deterministic (length, edges) order."""
    if L < 0:
        raise InputError("length bound must be >= 0")
    level = [graph.empty_path(v) for v in sorted(graph.vertices, key=str)]
    out = list(level)
    for _ in range(L):
        nxt = []
        for p in level:
            for eid in sorted(graph.edge_ids, key=str):
                if graph.src[eid] == p.head:
                    nxt.append(Path((eid,) + p.edges, p.base, graph.rng[eid]))
        out.extend(nxt)
        level = nxt
    return out


def enumerate_pairs(graph: DirectedGraph, L: int, include_zero=False):
    """The truncated semigroup: all pairs with both legs of length <= L."""
    paths = paths_up_to(graph, L)
    out = []
    for mu in paths:
        for nu in paths:
            if mu.base == nu.base:
                out.append(PathPair(mu, nu))
    if include_zero:
        out.append(ZERO_PAIR)
    return out


# ---------------------------------------------------------------------------
# fibers of the free-group grading
# ---------------------------------------------------------------------------

def _split_positive_negative(word):
    """Split a reduced word w = a b^-1 into the edge tuples of a and b."""
    seen_negative = False
    pos, neg = [], []
    for x, s in word:
        if s == 1:
            if seen_negative:
                raise NotPositivePair(
                    "degree word is not of the form (positive)(positive)^-1",
                    witness=word)
            pos.append(x)
        else:
            seen_negative = True
            neg.append(x)
    # positives already read most-significant-first; negatives were traversed
    # least-significant-first, so the b tuple is their reverse
    return tuple(pos), tuple(reversed(neg))


def fiber_word_legs(s_word, t_word):
    """Edge tuples (a, b, mid) for the factorization through s t^-1.

    a b^-1 is the reduced form of s t^-1; mid is the leg the middle terms
    share: the part of a past s when s is shorter, otherwise the letters s
    still owes past a.
    """
    s_word, t_word = tuple(s_word), tuple(t_word)
    if not _word_is_reduced(s_word) or not _word_is_reduced(t_word):
        raise InputError("s and t must be reduced words")
    if s_word and t_word and s_word[-1] == t_word[-1]:
        raise CancellationPresent("s t^-1 cancels at the junction",
                                  witness=s_word[-1])
    a_edges, b_edges = _split_positive_negative(s_word + word_inv(t_word))
    if len(s_word) >= len(a_edges):
        mid_edges = tuple(reversed([x for x, _ in s_word[len(a_edges):]]))
    else:
        mid_edges = a_edges[len(s_word):]
    return a_edges, b_edges, mid_edges


def _try_path(graph, edges):
    try:
        return graph.path(edges)
    except InputError:
        return None


def fiber_support(graph: DirectedGraph, s_word, t_word, L: int):
    """Basis of the fiber over red(s t^-1): the family (a w, b w), |w| <= L.

    Empty when the reduced word is not realized by composable paths from a
    common vertex; NotPositivePair when it is not positives-then-negatives.
    The empty word yields every idempotent (w, w).
    """
    word = free_reduce(tuple(s_word) + word_inv(t_word))
    a_edges, b_edges = _split_positive_negative(word)
    if not a_edges and not b_edges:
        return [PathPair(w, w) for w in paths_up_to(graph, L)]
    a = _try_path(graph, a_edges) if a_edges else None
    b = _try_path(graph, b_edges) if b_edges else None
    if (a_edges and a is None) or (b_edges and b is None):
        return []
    if a is not None and b is not None and a.base != b.base:
        return []
    v = a.base if a is not None else b.base
    if a is None:
        a = graph.empty_path(v)
    if b is None:
        b = graph.empty_path(v)
    out = []
    for w in paths_up_to(graph, L):
        if w.head == v:
            out.append(PathPair(graph.concat(a, w), graph.concat(b, w)))
    return out


def orthogonality_check(graph: DirectedGraph, L: int) -> dict:
    """Exhaustively verify S_{x^-1} . S_y = 0 for distinct edges x, y.

    Scans every pair (w, x w), (y u, u) with leg lengths <= L.
    """
    checked = 0
    violations = []
    ids = sorted(graph.edge_ids, key=str)
    tails = paths_up_to(graph, L - 1) if L >= 1 else []
    for x in ids:
        left = [PathPair(w, Path((x,) + w.edges, w.base, graph.rng[x]))
                for w in tails if w.head == graph.src[x]]
        for y in ids:
            if x == y:
                continue
            right = [PathPair(Path((y,) + u.edges, u.base, graph.rng[y]), u)
                     for u in tails if u.head == graph.src[y]]
            for p in left:
                for q in right:
                    checked += 1
                    r = multiply_pairs(p, q)
                    if r is not ZERO_PAIR:
                        violations.append({"left": repr(p), "right": repr(q),
                                           "product": repr(r)})
    return {"checked": checked, "violations": violations, "ok": not violations}


# ---------------------------------------------------------------------------
# semi-saturation factorization
# ---------------------------------------------------------------------------

def _word_is_reduced(w):
    return free_reduce(w) == tuple(w)


def semisaturation_factorize(f: AlgebraElement, s_word, t_word):
    """Factor f, supported on the fiber of s t^-1, as sum_k f_k g_k.

    Each f_k is supported on the s fiber, each g_k on the t^-1 fiber, the
    factors within one k share the tail length k, and coefficients split by
    principal square roots. The recovery sum_k f_k g_k = f is re-verified:
    exactly when every root stayed in Q(i), at tolerance 1e-12 otherwise.
    Requires reduced s, t whose concatenation s t^-1 does not cancel at the
    junction.
    """
    ctx = f.context
    if not isinstance(ctx, GraphContext):
        raise InputError("factorization needs a graph context element")
    graph = ctx.graph
    s_word, t_word = tuple(s_word), tuple(t_word)
    a_edges, b_edges, mid_edges = fiber_word_legs(s_word, t_word)

    if not f.terms:
        return []

    by_len = {}
    for elem, c in f.terms.items():
        if elem is ZERO_PAIR:
            continue
        mu, nu = elem.mu, elem.nu
        if mu.edges[:len(a_edges)] != a_edges or nu.edges[:len(b_edges)] != b_edges:
            raise UnsupportedCoefficient("support element outside the fiber",
                                         witness=elem)
        w_mu, w_nu = mu.edges[len(a_edges):], nu.edges[len(b_edges):]
        if w_mu != w_nu or mu.base != nu.base:
            raise UnsupportedCoefficient("support element outside the fiber",
                                         witness=elem)
        try:
            w = graph.path(w_mu, base=mu.base)
            aw = graph.concat(graph.path(a_edges, base=w.head), w)
            bw = graph.concat(graph.path(b_edges, base=w.head), w)
            mw = graph.concat(graph.path(mid_edges, base=w.head), w)
        except InputError as exc:
            raise UnsupportedCoefficient(f"support element does not fit the fiber: {exc}",
                                         witness=elem) from None
        if aw != mu or bw != nu:
            raise UnsupportedCoefficient("support element outside the fiber",
                                         witness=elem)
        by_len.setdefault(len(w_mu), []).append((aw, mw, bw, c))

    factors = []
    for k in sorted(by_len):
        left = AlgebraElement(ctx)
        right = AlgebraElement(ctx)
        for aw, mw, bw, c in by_len[k]:
            root = principal_sqrt(c)
            left.terms[PathPair(aw, mw)] = root
            right.terms[PathPair(mw, bw)] = root
        factors.append((left, right))

    total = AlgebraElement(ctx)
    for left, right in factors:
        total = total + convolve(left, right)
    if all(l.is_exact() and r.is_exact() for l, r in factors):
        if total != f:
            raise WitnessFailure("factor product does not recover f",
                                 witness=(total.terms, f.terms))
    elif not total.approx_eq(f, tol=1e-12):
        raise WitnessFailure("factor product strays past 1e-12",
                             witness=(total.terms, f.terms))

    t_inv = word_inv(t_word)
    for left, right in factors:
        for elem in left.terms:
            if grading_phi(elem) != s_word:
                raise OracleMismatch("left factor leaves the s fiber", witness=elem)
        for elem in right.terms:
            if grading_phi(elem) != t_inv:
                raise OracleMismatch("right factor leaves the t^-1 fiber", witness=elem)
    return factors
