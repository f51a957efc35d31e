"""Carriers and structure operations for finite inverse semigroups.

Three kinds of carrier live here:

* PartialBijection and IXContext, the symmetric inverse monoid I(X) over a
  finite carrier set, with products computed on demand;
* FiniteInverseSemigroup, a fully tabulated semigroup (product table, star
  table, optional zero) that every structure operation scans;
* GroupTable, a tabulated finite group used as the target of homomorphisms
  and maximum group images.

All contexts share the small product/star/is_zero protocol that the algebra
layer builds on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import (
    CapExceeded,
    InputError,
    NotUpwardClosed,
    OracleMismatch,
    PartitionFailure,
)


class SemigroupContext:
    """Protocol base: product, star, zero test over hashable elements."""

    zero = None

    def product(self, a, b):
        raise NotImplementedError

    def star(self, a):
        raise NotImplementedError

    def is_zero(self, x) -> bool:
        return self.zero is not None and x == self.zero

    def is_idempotent(self, x) -> bool:
        return self.product(x, x) == x


# ---------------------------------------------------------------------------
# partial bijections
# ---------------------------------------------------------------------------

class PartialBijection:
    """Injective partial map on a finite set of hashable points."""

    __slots__ = ("map", "_key")

    def __init__(self, mapping):
        m = dict(mapping)
        vals = set(m.values())
        if len(vals) != len(m):
            raise InputError(f"not injective: {m!r}")
        object.__setattr__(self, "map", m)
        object.__setattr__(self, "_key", tuple(sorted(m.items())))

    def __setattr__(self, name, value):
        raise AttributeError("PartialBijection is immutable")

    def __eq__(self, other):
        return isinstance(other, PartialBijection) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __len__(self):
        return len(self.map)

    def __repr__(self):
        return f"PartialBijection({dict(self._key)!r})"

    def domain(self):
        return frozenset(self.map)

    def range(self):
        return frozenset(self.map.values())

    def apply(self, x):
        return self.map[x]

    def compose(self, other: "PartialBijection") -> "PartialBijection":
        """self after other: x -> self(other(x)) where both steps are defined."""
        m = {}
        smap = self.map
        for x, y in other.map.items():
            if y in smap:
                m[x] = smap[y]
        return PartialBijection(m)

    def inverse(self) -> "PartialBijection":
        return PartialBijection({v: k for k, v in self.map.items()})

    def is_idempotent(self) -> bool:
        return all(k == v for k, v in self.map.items())


EMPTY_PB = PartialBijection({})


def identity_pb(points) -> PartialBijection:
    return PartialBijection({p: p for p in points})


def pb_label(pb: PartialBijection) -> str:
    if not pb.map:
        return "0"
    if pb.is_idempotent():
        return "id{" + ",".join(str(k) for k, _ in pb._key) + "}"
    return ";".join(f"{k}>{v}" for k, v in pb._key)


class IXContext(SemigroupContext):
    """The symmetric inverse monoid I(X) over a fixed finite carrier."""

    def __init__(self, carrier):
        self.carrier = frozenset(carrier)
        self.zero = EMPTY_PB

    def __eq__(self, other):
        return isinstance(other, IXContext) and self.carrier == other.carrier

    def __hash__(self):
        return hash(("IX", self.carrier))

    def contains(self, pb: PartialBijection) -> bool:
        return pb.domain() <= self.carrier and pb.range() <= self.carrier

    def product(self, a, b):
        return a.compose(b)

    def star(self, a):
        return a.inverse()


# ---------------------------------------------------------------------------
# tabulated semigroups and groups
# ---------------------------------------------------------------------------

class FiniteInverseSemigroup(SemigroupContext):
    """Product table + star table over elements 0..n-1, optional zero index."""

    def __init__(self, table, star_table=None, zero=None, labels=None,
                 witnesses=None, check=True):
        self.table = [list(row) for row in table]
        self.n = len(self.table)
        if star_table is None:
            star_table = self._derive_star()
        self.star_table = list(star_table)
        self.zero_index = zero
        self.zero = zero
        self.labels = list(labels) if labels else [f"s{i}" for i in range(self.n)]
        self.witnesses = witnesses
        if check:
            self.validate()

    def __eq__(self, other):
        return (isinstance(other, FiniteInverseSemigroup)
                and self.table == other.table
                and self.star_table == other.star_table
                and self.zero_index == other.zero_index)

    def __hash__(self):
        return hash((tuple(map(tuple, self.table)), tuple(self.star_table)))

    def elements(self):
        return range(self.n)

    def nonzero_elements(self):
        return [i for i in range(self.n) if i != self.zero_index]

    def product(self, a, b):
        return self.table[a][b]

    def star(self, a):
        return self.star_table[a]

    def is_zero(self, x) -> bool:
        return self.zero_index is not None and x == self.zero_index

    def label_index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown element label: {label!r}") from None

    def _derive_star(self):
        star = []
        for s in range(self.n):
            found = [t for t in range(self.n)
                     if self.table[self.table[s][t]][s] == s
                     and self.table[self.table[t][s]][t] == t]
            if len(found) != 1:
                raise InputError(
                    f"element {s} has {len(found)} generalized inverses, expected 1")
            star.append(found[0])
        return star

    def validate(self):
        n = self.n
        for i, row in enumerate(self.table):
            if len(row) != n or any(not (0 <= v < n) for v in row):
                raise InputError(f"table row {i} malformed")
        if len(self.star_table) != n or any(not (0 <= v < n) for v in self.star_table):
            raise InputError("star table malformed")
        t = self.table
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise InputError(f"not associative at ({a},{b},{c})")
        for s in range(n):
            st = self.star_table[s]
            if t[t[s][st]][s] != s or t[t[st][s]][st] != st:
                raise InputError(f"star table wrong at {s}")
            if self.star_table[st] != s:
                raise InputError(f"star not involutive at {s}")
        idem = [e for e in range(n) if t[e][e] == e]
        for e in idem:
            for f in idem:
                if t[e][f] != t[f][e]:
                    raise InputError(f"idempotents {e},{f} do not commute")
        for s in range(n):
            found = [x for x in range(n)
                     if t[t[s][x]][s] == s and t[t[x][s]][x] == x]
            if len(found) != 1:
                raise InputError(f"inverse of {s} not unique")
        z = self.zero_index
        if z is not None:
            if any(t[z][s] != z or t[s][z] != z for s in range(n)):
                raise InputError("declared zero is not absorbing")
            if self.star_table[z] != z:
                raise InputError("zero not star-fixed")


class GroupTable:
    """Tabulated finite group."""

    def __init__(self, table, labels=None, check=True):
        self.table = [list(row) for row in table]
        self.n = len(self.table)
        self.labels = list(labels) if labels else [f"g{i}" for i in range(self.n)]
        self.identity = self._find_identity()
        self.inverse_table = self._derive_inverses()
        if check:
            self.validate()

    def _find_identity(self):
        for e in range(self.n):
            if all(self.table[e][x] == x and self.table[x][e] == x
                   for x in range(self.n)):
                return e
        raise InputError("no identity element")

    def _derive_inverses(self):
        inv = []
        for x in range(self.n):
            found = [y for y in range(self.n)
                     if self.table[x][y] == self.identity
                     and self.table[y][x] == self.identity]
            if len(found) != 1:
                raise InputError(f"group element {x} lacks a unique inverse")
            inv.append(found[0])
        return inv

    def validate(self):
        n = self.n
        t = self.table
        for a in range(n):
            if sorted(t[a]) != list(range(n)) or sorted(t[x][a] for x in range(n)) != list(range(n)):
                raise InputError(f"row/column {a} not a permutation")
        for a in range(n):
            for b in range(n):
                ab = t[a][b]
                for c in range(n):
                    if t[ab][c] != t[a][t[b][c]]:
                        raise InputError(f"group not associative at ({a},{b},{c})")

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self.inverse_table[a]

    def label_index(self, label):
        try:
            return self.labels.index(label)
        except ValueError:
            raise InputError(f"unknown group label: {label!r}") from None


@dataclass
class Homomorphism:
    """Multiplicative map from a finite inverse semigroup without zero onto a group."""

    source: FiniteInverseSemigroup
    target: GroupTable
    mapping: list

    def __post_init__(self):
        S, G, m = self.source, self.target, self.mapping
        if S.zero_index is not None:
            raise InputError("homomorphism source must not contain a zero")
        if len(m) != S.n or any(not (0 <= v < G.n) for v in m):
            raise InputError("homomorphism mapping malformed")
        for s in range(S.n):
            for t in range(S.n):
                if m[S.product(s, t)] != G.mul(m[s], m[t]):
                    raise InputError(f"not multiplicative at ({s},{t})")

    def __call__(self, s):
        return self.mapping[s]

    def is_onto(self) -> bool:
        return set(self.mapping) == set(range(self.target.n))


# ---------------------------------------------------------------------------
# closures
# ---------------------------------------------------------------------------

def close_generators(gens, carrier=None, cap=20000) -> FiniteInverseSemigroup:
    """Close partial bijections under composition and inversion.

    Seeds the generators and their inverses, then runs a deterministic
    product fixpoint. Returns the tabulated semigroup; the empty map becomes
    the zero when it arises. Raises CapExceeded past `cap` elements.
    """
    gens = list(gens)
    if not gens:
        raise InputError("no generators")
    if carrier is None:
        pts = set()
        for g in gens:
            pts |= g.domain() | g.range()
        carrier = pts
    ctx = IXContext(carrier)
    for g in gens:
        if not ctx.contains(g):
            raise InputError(f"generator leaves the carrier: {g!r}")

    elems = []
    index = {}

    def intern(pb):
        if pb in index:
            return False
        if len(elems) >= cap:
            raise CapExceeded(f"closure exceeded cap {cap}")
        index[pb] = len(elems)
        elems.append(pb)
        return True

    for g in gens:
        intern(g)
    for g in gens:
        intern(g.inverse())
    grew = True
    while grew:
        grew = False
        snapshot = list(elems)
        for a in snapshot:
            for b in snapshot:
                if intern(a.compose(b)):
                    grew = True

    table = [[index[a.compose(b)] for b in elems] for a in elems]
    star = [index[a.inverse()] for a in elems]
    zero = index.get(EMPTY_PB)
    labels = [pb_label(p) for p in elems]
    return FiniteInverseSemigroup(table, star, zero=zero, labels=labels,
                                  witnesses=elems, check=False)


def materialize_context(ctx: SemigroupContext, elements, labels=None,
                        check=True) -> FiniteInverseSemigroup:
    """Tabulate a product-closed finite element list of any context."""
    elems = list(elements)
    index = {e: i for i, e in enumerate(elems)}
    if len(index) != len(elems):
        raise InputError("duplicate elements")
    table = []
    for a in elems:
        row = []
        for b in elems:
            p = ctx.product(a, b)
            if p not in index:
                raise InputError(f"element list not product-closed at {a!r}*{b!r}")
            row.append(index[p])
        table.append(row)
    star = []
    for a in elems:
        s = ctx.star(a)
        if s not in index:
            raise InputError(f"element list not star-closed at {a!r}")
        star.append(index[s])
    zero = None
    if ctx.zero is not None and ctx.zero in index:
        zero = index[ctx.zero]
    return FiniteInverseSemigroup(table, star, zero=zero, labels=labels,
                                  witnesses=elems, check=check)


# ---------------------------------------------------------------------------
# structure operations
# ---------------------------------------------------------------------------

def idempotents(S: FiniteInverseSemigroup):
    """E(S), asserted commutative and product-closed."""
    E = [e for e in S.elements() if S.product(e, e) == e]
    for e in E:
        for f in E:
            ef = S.product(e, f)
            if ef != S.product(f, e):
                raise OracleMismatch("idempotents do not commute", witness=(e, f))
            if S.product(ef, ef) != ef:
                raise OracleMismatch("idempotent product not idempotent", witness=(e, f))
    return E


def natural_leq(s, t, S: FiniteInverseSemigroup) -> bool:
    """s <= t in the natural partial order: s = t (s* s)."""
    return s == S.product(t, S.product(S.star(s), s))


def domain_members(a, S: FiniteInverseSemigroup):
    """D_a = {b != 0 : a*a b = b}, cross-checked against {b : bb* <= a*a}."""
    aa = S.product(S.star(a), a)
    primary = [b for b in S.nonzero_elements() if S.product(aa, b) == b]
    alt = [b for b in S.nonzero_elements()
           if natural_leq(S.product(b, S.star(b)), aa, S)]
    if primary != alt:
        raise OracleMismatch("domain characterizations disagree",
                             witness=(a, set(primary) ^ set(alt)))
    return primary


def max_group_image(S: FiniteInverseSemigroup):
    """Least group congruence quotient: s ~ t iff es = et for some idempotent e.

    Returns (GroupTable, sigma) with sigma the class map. A semigroup with
    zero collapses to the trivial group.
    """
    n = S.n
    E = idempotents(S)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    for s in range(n):
        for t in range(s + 1, n):
            if any(S.product(e, s) == S.product(e, t) for e in E):
                union(s, t)

    roots = sorted({find(x) for x in range(n)})
    cls = {r: i for i, r in enumerate(roots)}
    sigma = [cls[find(x)] for x in range(n)]
    m = len(roots)
    qtable = [[None] * m for _ in range(m)]
    for s in range(n):
        for t in range(n):
            a, b, c = sigma[s], sigma[t], sigma[S.product(s, t)]
            if qtable[a][b] is None:
                qtable[a][b] = c
            elif qtable[a][b] != c:
                raise OracleMismatch("group congruence not well defined",
                                     witness=(s, t))
    G = GroupTable(qtable, labels=[S.labels[r] for r in roots])
    return G, sigma


def is_e_unitary(S: FiniteInverseSemigroup) -> bool:
    """True when the kernel of the maximum group image is exactly E(S)."""
    G, sigma = max_group_image(S)
    kernel = {s for s in S.elements() if sigma[s] == G.identity}
    return kernel == set(idempotents(S))


def kernel_of(phi: Homomorphism) -> frozenset:
    return frozenset(s for s in phi.source.elements()
                     if phi(s) == phi.target.identity)


def upward_closure(H, S: FiniteInverseSemigroup) -> frozenset:
    """{t : te in H for some idempotent e}."""
    E = idempotents(S)
    Hset = frozenset(H)
    return frozenset(t for t in S.elements()
                     if any(S.product(t, e) in Hset for e in E))


def upward_closed(H, S: FiniteInverseSemigroup) -> bool:
    return upward_closure(H, S) == frozenset(H)


def _check_inverse_subsemigroup(H, S: FiniteInverseSemigroup):
    Hset = frozenset(H)
    for h in Hset:
        if S.star(h) not in Hset:
            raise InputError(f"subset not star-closed at {h}")
        for k in Hset:
            if S.product(h, k) not in Hset:
                raise InputError(f"subset not product-closed at ({h},{k})")


def omega_coset(s, H, S: FiniteInverseSemigroup) -> frozenset:
    """up(sH) = {t : te in sH for some idempotent e}.

    H must be an upward closed inverse subsemigroup.
    """
    _check_inverse_subsemigroup(H, S)
    if not upward_closed(H, S):
        raise NotUpwardClosed("subsemigroup is not upward closed",
                              witness=sorted(upward_closure(H, S) - frozenset(H)))
    sH = frozenset(S.product(s, h) for h in H)
    return upward_closure(sH, S)


def omega_coset_diagnostic(H, S: FiniteInverseSemigroup) -> dict:
    """All distinct up(sH) with a partition verdict; never raises on overlap."""
    _check_inverse_subsemigroup(H, S)
    if not upward_closed(H, S):
        raise NotUpwardClosed("subsemigroup is not upward closed",
                              witness=sorted(upward_closure(H, S) - frozenset(H)))
    cosets = []
    for s in S.elements():
        c = omega_coset(s, H, S)
        if c not in cosets:
            cosets.append(c)
    covered = frozenset().union(*cosets) if cosets else frozenset()
    overlap = None
    for i in range(len(cosets)):
        for j in range(i + 1, len(cosets)):
            inter = cosets[i] & cosets[j]
            if inter:
                overlap = (i, j, sorted(inter))
                break
        if overlap:
            break
    return {
        "cosets": [sorted(c) for c in cosets],
        "covers": covered == frozenset(S.elements()),
        "overlap": overlap,
        "is_partition": overlap is None and covered == frozenset(S.elements()),
    }


def omega_coset_partition(phi: Homomorphism):
    """Distinct up(sH) for H = ker(phi); asserted to partition S along fibers."""
    S = phi.source
    H = kernel_of(phi)
    diag = omega_coset_diagnostic(H, S)
    if not diag["is_partition"]:
        raise PartitionFailure("omega-cosets of the kernel do not partition",
                               witness=diag["overlap"])
    cosets = [frozenset(c) for c in diag["cosets"]]
    for c in cosets:
        degrees = {phi(t) for t in c}
        if len(degrees) != 1:
            raise PartitionFailure("coset meets several fibers",
                                   witness=sorted(c))
    return cosets
