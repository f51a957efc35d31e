"""Complex semigroup algebra over a context, with gradings and expectations.

Elements are finitely supported coefficient maps into exact rational-complex
scalars (QQi), with the semigroup zero quotiented away: a coefficient at the
zero element is dropped on construction, so convolution products that hit
zero simply vanish. Float coefficients are allowed and taint an element into
approximate mode; every identity assertion here stays in exact mode.

The restriction expectation keeps the coefficients supported on a chosen
subset H (a set or a membership predicate). For a grading phi the fiber
decomposition, the fiber-square identity for epsilon(f* f), and the two
sum-of-squares witness constructions are implemented and verified by exact
recomputation, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .core import GroupTable, Homomorphism, SemigroupContext
from .errors import (
    ContextMismatch,
    IdentityMismatch,
    InputError,
    NotInCoset,
    WitnessFailure,
)
from .scalars import QQi, as_scalar, is_exact, to_complex
from .words import word_inv, word_mul


class AlgebraElement:
    """Finitely supported scalar map on the nonzero part of a context."""

    __slots__ = ("context", "terms")

    def __init__(self, context: SemigroupContext, terms=None):
        self.context = context
        clean = {}
        if terms:
            for elem, coeff in (terms.items() if isinstance(terms, dict) else terms):
                if context.is_zero(elem):
                    continue
                c = as_scalar(coeff)
                if elem in clean:
                    c = clean[elem] + c
                if c == 0:
                    clean.pop(elem, None)
                else:
                    clean[elem] = c
        self.terms = clean

    @classmethod
    def basis(cls, context, elem, coeff=1):
        return cls(context, [(elem, coeff)])

    def support(self):
        return list(self.terms)

    def coeff(self, elem):
        return self.terms.get(elem, QQi(0))

    def is_exact(self) -> bool:
        return all(is_exact(c) for c in self.terms.values())

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def _require_same(self, other):
        if not isinstance(other, AlgebraElement):
            raise ContextMismatch(f"expected AlgebraElement, got {type(other)}")
        if self.context != other.context:
            raise ContextMismatch("elements live over different contexts")

    def __add__(self, other):
        self._require_same(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s == 0:
                out.pop(e, None)
            else:
                out[e] = s
        res = AlgebraElement(self.context)
        res.terms = out
        return res

    def __neg__(self):
        res = AlgebraElement(self.context)
        res.terms = {e: -c for e, c in self.terms.items()}
        return res

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        c = as_scalar(c)
        res = AlgebraElement(self.context)
        if c == 0:
            return res
        res.terms = {e: v * c for e, v in self.terms.items()}
        return res

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return convolve(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def star(self):
        ctx = self.context
        res = AlgebraElement(ctx)
        out = {}
        for e, c in self.terms.items():
            se = ctx.star(e)
            out[se] = out.get(se, 0) + c.conjugate()
        res.terms = {e: c for e, c in out.items() if c != 0}
        return res

    def __eq__(self, other):
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.context == other.context and self.terms == other.terms

    def __hash__(self):
        raise TypeError("AlgebraElement is unhashable")

    def approx_eq(self, other, tol=1e-12) -> bool:
        self._require_same(other)
        keys = set(self.terms) | set(other.terms)
        for e in keys:
            a = to_complex(self.terms.get(e, 0j) or 0j)
            b = to_complex(other.terms.get(e, 0j) or 0j)
            if abs(a - b) > tol:
                return False
        return True

    def __repr__(self):
        if not self.terms:
            return "AlgebraElement(0)"
        parts = [f"({c})*{e!r}" for e, c in self.terms.items()]
        return "AlgebraElement(" + " + ".join(parts) + ")"


def convolve(f: AlgebraElement, g: AlgebraElement) -> AlgebraElement:
    """(f g)(a) = sum over st = a of f(s) g(t), zero products discarded."""
    f._require_same(g)
    ctx = f.context
    out = {}
    for s, a in f.terms.items():
        for t, b in g.terms.items():
            p = ctx.product(s, t)
            if ctx.is_zero(p):
                continue
            c = out.get(p, 0) + a * b
            if c == 0:
                out.pop(p, None)
            else:
                out[p] = c
    res = AlgebraElement(ctx)
    res.terms = out
    return res


def involution(f: AlgebraElement) -> AlgebraElement:
    return f.star()


def epsilon_restrict(f: AlgebraElement, H) -> AlgebraElement:
    """Keep the coefficients supported on H (a container or a predicate)."""
    member = H if callable(H) else (lambda x, _H=frozenset(H): x in _H)
    res = AlgebraElement(f.context)
    res.terms = {e: c for e, c in f.terms.items() if member(e)}
    return res


# ---------------------------------------------------------------------------
# gradings
# ---------------------------------------------------------------------------

class GroupOps:
    """Protocol: identity, mul, inv over hashable group elements."""

    identity = None

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError


class IntGroupOps(GroupOps):
    identity = 0

    def mul(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def __eq__(self, other):
        return isinstance(other, IntGroupOps)

    def __hash__(self):
        return hash("Z")


class TupleGroupOps(GroupOps):
    """Z^n written additively on int tuples."""

    def __init__(self, n):
        self.n = n
        self.identity = (0,) * n

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def __eq__(self, other):
        return isinstance(other, TupleGroupOps) and self.n == other.n

    def __hash__(self):
        return hash(("Zn", self.n))


class FreeGroupOps(GroupOps):
    identity = ()

    def mul(self, a, b):
        return word_mul(a, b)

    def inv(self, a):
        return word_inv(a)

    def __eq__(self, other):
        return isinstance(other, FreeGroupOps)

    def __hash__(self):
        return hash("F")


class ProductGroupOps(GroupOps):
    """Direct product of two groups, elements written as pairs."""

    def __init__(self, left: GroupOps, right: GroupOps):
        self.left = left
        self.right = right
        self.identity = (left.identity, right.identity)

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def inv(self, a):
        return (self.left.inv(a[0]), self.right.inv(a[1]))

    def __eq__(self, other):
        return (isinstance(other, ProductGroupOps)
                and self.left == other.left and self.right == other.right)

    def __hash__(self):
        return hash(("x", self.left, self.right))


class TableGroupOps(GroupOps):
    def __init__(self, group: GroupTable):
        self.group = group
        self.identity = group.identity

    def mul(self, a, b):
        return self.group.mul(a, b)

    def inv(self, a):
        return self.group.inv(a)

    def __eq__(self, other):
        return isinstance(other, TableGroupOps) and self.group.table == other.group.table

    def __hash__(self):
        return hash(tuple(map(tuple, self.group.table)))


@dataclass
class Grading:
    """Degree map from the nonzero part of a context into a group.

    The map must send nonzero products multiplicatively; the semigroup zero
    plays the adjoined zero of the group and is never graded.
    """

    context: SemigroupContext
    group: GroupOps
    degree: Callable

    def kernel_member(self, x) -> bool:
        return self.degree(x) == self.group.identity

    def kernel_predicate(self):
        return self.kernel_member


def grading_from_homomorphism(phi: Homomorphism) -> Grading:
    return Grading(phi.source, TableGroupOps(phi.target), phi)


def fiber_decompose(f: AlgebraElement, grading: Grading) -> dict:
    """Split f into its graded fibers f_g; the fibers sum back to f."""
    if f.context != grading.context:
        raise ContextMismatch("grading is over a different context")
    out = {}
    for e, c in f.terms.items():
        g = grading.degree(e)
        part = out.setdefault(g, AlgebraElement(f.context))
        part.terms[e] = c
    return out


def epsilon_star_square(f: AlgebraElement, grading: Grading) -> AlgebraElement:
    """Return sum_g f_g* f_g and assert it equals epsilon(f* f) on the kernel."""
    fibers = fiber_decompose(f, grading)
    rhs = AlgebraElement(f.context)
    for part in fibers.values():
        rhs = rhs + convolve(involution(part), part)
    lhs = epsilon_restrict(convolve(involution(f), f), grading.kernel_predicate())
    if lhs != rhs:
        keys = set(lhs.terms) | set(rhs.terms)
        for e in sorted(keys, key=repr):
            if lhs.terms.get(e) != rhs.terms.get(e):
                raise IdentityMismatch(
                    "epsilon(f* f) differs from the fiber-square sum",
                    witness=(e, lhs.terms.get(e), rhs.terms.get(e)))
    return rhs


# ---------------------------------------------------------------------------
# sum-of-squares witnesses
# ---------------------------------------------------------------------------

def _single_fiber(f: AlgebraElement, grading: Grading):
    degs = {grading.degree(e) for e in f.terms}
    if len(degs) > 1:
        raise InputError(f"element is not supported on a single fiber: {degs}")


def sos_witness_idempotent_kernel(f_g: AlgebraElement,
                                  grading: Grading | None = None) -> AlgebraElement:
    """Witness f' = sum alpha_s (s* s) with f'* f' = f_g* f_g, verified exactly.

    Valid when f_g sits in one fiber of a grading whose kernel is exactly the
    nonzero idempotents; a failed identity falsifies that hypothesis and
    raises WitnessFailure.
    """
    if grading is not None:
        _single_fiber(f_g, grading)
    ctx = f_g.context
    witness = AlgebraElement(
        ctx, [(ctx.product(ctx.star(s), s), c) for s, c in f_g.terms.items()])
    lhs = convolve(involution(witness), witness)
    rhs = convolve(involution(f_g), f_g)
    if lhs != rhs:
        raise WitnessFailure("idempotent-kernel witness failed f'* f' = f* f",
                             witness=(f_g.terms, witness.terms))
    return witness


def sos_witness_coset(f_g: AlgebraElement, s_g,
                      grading: Grading | None = None) -> AlgebraElement:
    """Witness f' = sum alpha_s (s_g* s_g) h_s with h_s = s_g* s, verified exactly.

    Each support element must factor through the chosen fiber representative:
    s_g h_s = s is required and NotInCoset(s) raised otherwise.
    """
    if grading is not None:
        _single_fiber(f_g, grading)
    ctx = f_g.context
    root = ctx.product(ctx.star(s_g), s_g)
    pairs = []
    for s, c in f_g.terms.items():
        h_s = ctx.product(ctx.star(s_g), s)
        if ctx.product(s_g, h_s) != s:
            raise NotInCoset("support element does not factor through the representative",
                             witness=s)
        pairs.append((ctx.product(root, h_s), c))
    witness = AlgebraElement(ctx, pairs)
    lhs = convolve(involution(witness), witness)
    rhs = convolve(involution(f_g), f_g)
    if lhs != rhs:
        raise WitnessFailure("coset witness failed f'* f' = f* f",
                             witness=(f_g.terms, witness.terms))
    return witness


# ---------------------------------------------------------------------------
# grading checks over finite element lists
# ---------------------------------------------------------------------------

def _elem_label(ctx, e):
    labels = getattr(ctx, "labels", None)
    if labels is not None and isinstance(e, int):
        return labels[e]
    return str(e)


def check_grading(grading: Grading, elements) -> dict:
    """Verify multiplicativity of the degree map on every nonzero pair.

    Products are evaluated in the ambient context, so pairs whose product
    leaves the listed truncation are still checked exactly; `skipped` stays
    for contexts that cannot evaluate a product (none of the built-in ones).
    Reports whether the kernel meets the listed elements in exactly the
    nonzero idempotents (idempotent-pure).
    """
    ctx = grading.context
    elems = [e for e in elements if not ctx.is_zero(e)]
    violations = []
    checked = 0
    for a in elems:
        for b in elems:
            p = ctx.product(a, b)
            checked += 1
            if ctx.is_zero(p):
                continue
            want = grading.group.mul(grading.degree(a), grading.degree(b))
            if grading.degree(p) != want:
                violations.append({
                    "left": _elem_label(ctx, a),
                    "right": _elem_label(ctx, b),
                    "product_degree": str(grading.degree(p)),
                    "expected_degree": str(want),
                })
    kernel = {e for e in elems if grading.kernel_member(e)}
    idem = {e for e in elems if ctx.product(e, e) == e}
    return {
        "checked": checked,
        "skipped": 0,
        "violations": violations,
        "kernel_size": len(kernel),
        "idempotent_pure": kernel == idem,
        "ok": not violations,
    }


def bundle_fibers(elements, grading: Grading) -> tuple[dict, dict]:
    """Group a truncation by degree and check the graded fiber axioms.

    Star must swap the g and g^-1 fibers, and products from fibers g and h
    must land in the gh fiber or die at zero. Returns (fibers, report).
    """
    ctx = grading.context
    elems = [e for e in elements if not ctx.is_zero(e)]
    fibers = {}
    for e in elems:
        fibers.setdefault(grading.degree(e), []).append(e)
    star_violations = []
    for g, members in fibers.items():
        ginv = grading.group.inv(g)
        starred = {ctx.star(s) for s in members}
        expected = set(fibers.get(ginv, []))
        if starred != expected:
            star_violations.append({
                "fiber": str(g),
                "starred_not_listed": [_elem_label(ctx, s) for s in sorted(starred - expected, key=repr)],
                "missing": [_elem_label(ctx, s) for s in sorted(expected - starred, key=repr)],
            })
    product_violations = []
    checked = 0
    for g, left in fibers.items():
        for h, right in fibers.items():
            gh = grading.group.mul(g, h)
            for s in left:
                for t in right:
                    p = ctx.product(s, t)
                    checked += 1
                    if ctx.is_zero(p):
                        continue
                    if grading.degree(p) != gh:
                        product_violations.append({
                            "left_fiber": str(g),
                            "right_fiber": str(h),
                            "left": _elem_label(ctx, s),
                            "right": _elem_label(ctx, t),
                            "product_degree": str(grading.degree(p)),
                        })
    report = {
        "fiber_sizes": {str(g): len(v) for g, v in sorted(fibers.items(), key=lambda kv: str(kv[0]))},
        "checked": checked,
        "skipped": 0,
        "star_violations": star_violations,
        "product_violations": product_violations,
        "ok": not star_violations and not product_violations,
    }
    return fibers, report
