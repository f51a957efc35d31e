"""Worked families of inverse semigroups.

Three constructions exercise the graded machinery away from graphs:

* Bruck-Reilly extensions BR(G, theta): triples (m, a, n) over a finite
  group G twisted by an endomorphism theta, graded over Z by m - n.
* A truncated-shift bundle on the integer window [-n, n+1]: the full shift
  a, the idempotent e on [0, n], their product b = a e, and the element
  x = e - a whose restricted expectation is the three-term tridiagonal
  element e - b - b*.
* Toeplitz semigroups of the quasi-lattice (Z^n, N^n): normal forms (s, t)
  of positive cone pairs, graded over Z^n by s - t.

Everything here is exact integer and table arithmetic; numerics enter only
at the representation layer.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .algebra import (
    AlgebraElement,
    Grading,
    IntGroupOps,
    ProductGroupOps,
    TableGroupOps,
    TupleGroupOps,
    epsilon_restrict,
)
from .core import (
    GroupTable,
    IXContext,
    PartialBijection,
    SemigroupContext,
    identity_pb,
)
from .errors import IdentityMismatch, InputError


# ---------------------------------------------------------------------------
# Bruck-Reilly extensions
# ---------------------------------------------------------------------------

class BRContext(SemigroupContext):
    """BR(G, theta): elements (m, a, n) with m, n in N and a in G.

    theta is an endomorphism of G given as an index map. The product raises
    the lower indices to a common level t and twists both group parts:
    (m,a,n)(i,b,j) = (m-n+t, theta^(t-n)(a) theta^(t-i)(b), j-i+t).
    """

    zero = None

    def __init__(self, group: GroupTable, theta):
        self.group = group
        self.theta = tuple(theta)
        if len(self.theta) != group.n or any(not (0 <= v < group.n) for v in self.theta):
            raise InputError("theta must map the group into itself")
        if self.theta[group.identity] != group.identity:
            raise InputError("theta must fix the identity")
        for a in range(group.n):
            for b in range(group.n):
                if self.theta[group.mul(a, b)] != group.mul(self.theta[a], self.theta[b]):
                    raise InputError(f"theta not multiplicative at ({a},{b})")
        self._powers = [tuple(range(group.n)), self.theta]

    def __eq__(self, other):
        return (isinstance(other, BRContext) and self.group.table == other.group.table
                and self.theta == other.theta)

    def __hash__(self):
        return hash((tuple(map(tuple, self.group.table)), self.theta))

    def theta_pow(self, k, a):
        while len(self._powers) <= k:
            prev = self._powers[-1]
            self._powers.append(tuple(self.theta[v] for v in prev))
        return self._powers[k][a]

    def element(self, m, a, n):
        if m < 0 or n < 0 or not (0 <= a < self.group.n):
            raise InputError(f"bad triple ({m},{a},{n})")
        return (m, a, n)

    def product(self, p, q):
        m, a, n = p
        i, b, j = q
        t = max(n, i)
        g = self.group.mul(self.theta_pow(t - n, a), self.theta_pow(t - i, b))
        return (m - n + t, g, j - i + t)

    def star(self, p):
        m, a, n = p
        return (n, self.group.inv(a), m)

    def is_zero(self, x) -> bool:
        return False


def br_phi(p) -> int:
    m, _, n = p
    return m - n


def br_grading(ctx: BRContext) -> Grading:
    return Grading(ctx, IntGroupOps(), br_phi)


def br_window(ctx: BRContext, M: int):
    """All triples with both indices at most M, in deterministic order."""
    return [(m, a, n) for m in range(M + 1) for n in range(M + 1)
            for a in range(ctx.group.n)]


def br_coset_rep(ctx: BRContext, k: int):
    """The canonical degree-k element carrying the group identity."""
    e = ctx.group.identity
    return (k, e, 0) if k >= 0 else (0, e, -k)


def br_refined_grading(ctx: BRContext) -> Grading:
    """Grading into Z x G whose kernel is exactly the idempotents.

    Needs theta to be the identity automorphism; a proper twist folds group
    parts across levels and no such refinement exists.
    """
    if any(ctx.theta[a] != a for a in range(ctx.group.n)):
        raise InputError("refined grading needs the untwisted extension")
    ops = ProductGroupOps(IntGroupOps(), TableGroupOps(ctx.group))
    return Grading(ctx, ops, lambda p: (p[0] - p[2], p[1]))


def _leq(ctx, u, t) -> bool:
    # natural order: u <= t iff u = t (u* u)
    return ctx.product(t, ctx.product(ctx.star(u), u)) == u


def br_omega_coset_check(ctx: BRContext, M: int, degrees=None) -> dict:
    """Windowed check that upward closures of rep-translated kernels are
    exactly the degree fibers.

    The kernel of the Z-grading is enumerated on the doubled window [0, 2M],
    which is wide enough that every fiber element t of the base window sees
    s (s* t) below it. Returns per-degree verdicts.
    """
    if degrees is None:
        degrees = range(-M, M + 1)
    window = br_window(ctx, M)
    kernel_big = [p for p in br_window(ctx, 2 * M) if br_phi(p) == 0]
    per_degree = {}
    for k in degrees:
        s = br_coset_rep(ctx, k)
        translated = {ctx.product(s, h) for h in kernel_big}
        upward = {t for t in window if any(_leq(ctx, u, t) for u in translated)}
        fiber = {t for t in window if br_phi(t) == k}
        per_degree[k] = upward == fiber
    covered = sorted(degrees)
    return {
        "window": M,
        "degrees": covered,
        "failures": [k for k in covered if not per_degree[k]],
        "ok": all(per_degree.values()),
    }


def br_z2_contexts():
    """The two BR extensions of Z/2: untwisted, and collapsed by the trivial
    endomorphism."""
    z2 = GroupTable([[0, 1], [1, 0]], labels=["1", "g"])
    return BRContext(z2, [0, 1]), BRContext(z2, [0, 0])


# ---------------------------------------------------------------------------
# the truncated shift bundle
# ---------------------------------------------------------------------------

@dataclass
class ShiftBundle:
    """Partial shifts on the integer window [-n, n+1].

    a is the full forward shift, e the identity on [0, n], b = a e the
    shifted corner, and x = e - a. The subsemigroup generated by b consists
    of the constant shifts whose domain and range both sit inside [0, n+1],
    except the full identity on [0, n+1] itself, which no nonempty word in
    b and b* reaches. Restricting x x* to that subsemigroup drops the one
    term with negative domain and leaves e - b - b* exactly.
    """

    n: int
    context: IXContext = field(init=False)
    a: PartialBijection = field(init=False)
    e: PartialBijection = field(init=False)
    b: PartialBijection = field(init=False)
    x: AlgebraElement = field(init=False)

    def __post_init__(self):
        if self.n < 1:
            raise InputError("window size must be at least 1")
        n = self.n
        self.context = IXContext(range(-n, n + 2))
        self.a = PartialBijection({k: k + 1 for k in range(-n, n + 1)})
        self.e = identity_pb(range(0, n + 1))
        self.b = self.context.product(self.a, self.e)
        self.x = AlgebraElement(self.context, [(self.e, 1), (self.a, -1)])

    @property
    def action_points(self):
        return list(range(0, self.n + 1))

    def shift_degree(self, pb: PartialBijection) -> int:
        """The constant displacement of a shift; identities have degree 0."""
        if not pb.map:
            raise InputError("the empty map carries no degree")
        degs = {v - k for k, v in pb.map.items()}
        if len(degs) != 1:
            raise InputError(f"not a constant shift: {pb!r}")
        return degs.pop()

    def grading(self) -> Grading:
        return Grading(self.context, IntGroupOps(), self.shift_degree)

    def h_member(self, pb: PartialBijection) -> bool:
        """Membership in the inverse subsemigroup generated by b.

        Nonempty members are the constant shifts by d on a contiguous
        interval [p, q] with [p, q] and [p+d, q+d] inside [0, n+1]; a word
        of positive length always loses one endpoint, which excludes the
        full identity on [0, n+1].
        """
        if not pb.map:
            return True
        keys = sorted(pb.map)
        p, q = keys[0], keys[-1]
        if q - p + 1 != len(keys):
            return False
        degs = {pb.map[k] - k for k in keys}
        if len(degs) != 1:
            return False
        d = degs.pop()
        top = self.n + 1
        if p < max(0, -d) or q > top - max(0, d):
            return False
        return not (d == 0 and p == 0 and q == top)

    def xx_star(self) -> AlgebraElement:
        return self.x * self.x.star()

    def epsilon_xx_star(self) -> AlgebraElement:
        """epsilon(x x*) = e - b - b*, asserted exactly."""
        got = epsilon_restrict(self.xx_star(), self.h_member)
        want = AlgebraElement(self.context, [
            (self.e, 1), (self.b, -1), (self.context.star(self.b), -1)])
        if got != want:
            raise IdentityMismatch("epsilon(x x*) is not e - b - b*",
                                   witness=(got.terms, want.terms))
        return got


def example62(n: int) -> ShiftBundle:
    return ShiftBundle(n)


# ---------------------------------------------------------------------------
# Toeplitz semigroups of (Z^n, N^n)
# ---------------------------------------------------------------------------

def ql_lub(t, u):
    """Componentwise least upper bound in N^n."""
    return tuple(max(x, y) for x, y in zip(t, u))


class TQContext(SemigroupContext):
    """Normal forms (s, t) over the positive cone N^n.

    The product joins at w = lub(t, u) and shifts both sides up:
    (s,t)(u,v) = (s + (w-t), v + (w-u)). There is no zero: every pair of
    cone points has a common upper bound.
    """

    zero = None

    def __init__(self, n: int):
        if n < 1:
            raise InputError("cone rank must be at least 1")
        self.n = n

    def __eq__(self, other):
        return isinstance(other, TQContext) and self.n == other.n

    def __hash__(self):
        return hash(("TQ", self.n))

    def element(self, s, t):
        s, t = tuple(s), tuple(t)
        if len(s) != self.n or len(t) != self.n:
            raise InputError(f"cone points must have {self.n} coordinates")
        if any(x < 0 for x in s + t):
            raise InputError("cone points must be nonnegative")
        return (s, t)

    def identity(self):
        z = (0,) * self.n
        return (z, z)

    def product(self, p, q):
        s, t = p
        u, v = q
        w = ql_lub(t, u)
        return (tuple(a + (c - b) for a, b, c in zip(s, t, w)),
                tuple(a + (c - b) for a, b, c in zip(v, u, w)))

    def star(self, p):
        s, t = p
        return (t, s)

    def is_zero(self, x) -> bool:
        return False


def tq_phi(p):
    s, t = p
    return tuple(a - b for a, b in zip(s, t))


def tq_grading(ctx: TQContext) -> Grading:
    return Grading(ctx, TupleGroupOps(ctx.n), tq_phi)


def tq_generators(ctx: TQContext):
    """The isometric generators beta_i = (e_i, 0) of the n cone directions."""
    zero = (0,) * ctx.n
    out = []
    for i in range(ctx.n):
        e_i = tuple(1 if j == i else 0 for j in range(ctx.n))
        out.append((e_i, zero))
    return out


def tq_window(ctx: TQContext, total: int):
    """All normal forms (s, t) of generator-word length sum(s) + sum(t) at
    most `total`, in deterministic order."""
    def cones(dim, budget):
        if dim == 0:
            return [()]
        return [(head,) + rest for head in range(budget + 1)
                for rest in cones(dim - 1, budget - head)]

    pairs = [(s, t) for s in cones(ctx.n, total)
             for t in cones(ctx.n, total - sum(s))]
    pairs.sort()
    return pairs


def tq_apply(p, point):
    """The pair (s, t) as a partial map on cone points: x -> x - t + s when
    x >= t, undefined otherwise."""
    s, t = p
    if any(x < b for x, b in zip(point, t)):
        return None
    return tuple(x - b + a for x, a, b in zip(point, s, t))


def quasi_lattice_check(n: int, bound: int = 3) -> dict:
    """Exhaustively verify the lub axioms on the box [0, bound]^n."""
    pts = [()]
    for _ in range(n):
        pts = [p + (k,) for p in pts for k in range(bound + 1)]
    geq = lambda x, y: all(a >= b for a, b in zip(x, y))
    pairs_checked = 0
    failures = []
    for t in pts:
        for u in pts:
            pairs_checked += 1
            w = ql_lub(t, u)
            if not (geq(w, t) and geq(w, u)):
                failures.append({"t": t, "u": u, "lub": w, "reason": "not an upper bound"})
                continue
            for c in pts:
                if geq(c, t) and geq(c, u) and not geq(c, w):
                    failures.append({"t": t, "u": u, "lub": w, "witness": c,
                                     "reason": "not least"})
                    break
    return {"n": n, "bound": bound, "pairs_checked": pairs_checked,
            "failures": failures, "ok": not failures}


def _tq_windowed_word_action(ctx, letters, point, N):
    """Apply a generator word right to left, clamping to the box [0, N]^n."""
    gens = tq_generators(ctx)
    cur = point
    for i, sign in reversed(letters):
        g = gens[i] if sign == 1 else ctx.star(gens[i])
        cur = tq_apply(g, cur)
        if cur is None or any(x > N for x in cur):
            return None
    return cur


def tq_oracle_check(n: int, N: int, max_len: int, trials: int = 200,
                    seed: int = 0) -> dict:
    """Compare windowed generator-word actions with the normal-form action.

    On interior points (all coordinates at most N - word length) the box
    never clips an intermediate value from above, so the two must agree
    exactly, including where both are undefined: the cone floor is genuine.
    """
    ctx = TQContext(n)
    gens = tq_generators(ctx)
    rng = random.Random(seed)
    points = [()]
    for _ in range(n):
        points = [p + (k,) for p in points for k in range(N + 1)]
    checked = 0
    skipped = 0
    mismatches = []
    for _ in range(trials):
        L = rng.randint(1, max_len)
        letters = [(rng.randrange(n), rng.choice((1, -1))) for _ in range(L)]
        elem = ctx.identity()
        for i, sign in letters:
            g = gens[i] if sign == 1 else ctx.star(gens[i])
            elem = ctx.product(elem, g)
        interior = [p for p in points if all(x <= N - L for x in p)]
        skipped += len(points) - len(interior)
        for p in interior:
            checked += 1
            via_word = _tq_windowed_word_action(ctx, letters, p, N)
            direct = tq_apply(elem, p)
            if direct is not None and any(x > N for x in direct):
                direct = None
            if via_word != direct:
                mismatches.append({"word": letters, "point": p,
                                   "via_word": via_word, "direct": direct})
    return {"n": n, "N": N, "max_len": max_len, "trials": trials,
            "checked": checked, "skipped": skipped,
            "mismatches": mismatches[:5], "ok": not mismatches}
