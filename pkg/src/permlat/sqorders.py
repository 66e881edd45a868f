"""Subquotient orders: partial orders on bottom-relation classes that are
total exactly inside each top-relation class.

Ranks are dense integers per top-class scale, renormalized after every
construction, so comparisons are O(1) and equality of orders is equality of
rank maps. Class representatives are the first member in point order.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import NotConvexError, TopBottomMismatchError, UndefinedRestrictionError
from .spaces import LambdaSpace, validate_space
from .validation import ValidationReport


def class_reps(space: LambdaSpace, level_idx: int) -> list[int]:
    """Map each point index to the index of its class representative at the
    given lattice level (first member in point order)."""
    lat = space.lattice
    reps = list(range(space.n))
    for i in range(space.n):
        for j in range(i):
            if lat.leq_idx(space.dist[i][j], level_idx):
                reps[i] = reps[j]
                break
    return reps


def _dense(scale: list[tuple[str, int]]) -> dict[str, int]:
    out = {}
    for pos, (rep, _) in enumerate(sorted(scale, key=lambda t: t[1])):
        out[rep] = pos
    return out


class SubquotientOrder:
    def __init__(self, space: LambdaSpace, bottom: str, top: str,
                 rank: dict[str, int], _pairs: frozenset | None = None):
        self.space = space
        self.bottom = bottom
        self.top = top
        self.rank = dict(rank)
        self._declared_pairs = _pairs

    # -- construction ---------------------------------------------------

    @classmethod
    def from_ranks(cls, space: LambdaSpace, bottom: str, top: str,
                   rank: dict[str, int]) -> "SubquotientOrder":
        o = cls(space, bottom, top, rank)
        return o.renormalized()

    @classmethod
    def from_pairs(cls, space: LambdaSpace, bottom: str, top: str,
                   pairs) -> "SubquotientOrder":
        """Build from an explicit strict relation on class representatives.

        The relation is kept for validation; ranks are only derivable when it
        is a legal subquotient order, so call validate_sqorder first on
        untrusted input.
        """
        o = cls(space, bottom, top, {}, _pairs=frozenset(pairs))
        if validate_sqorder(o).ok:
            rank = {}
            for scale in o._scales():
                below = {c: sum(1 for d in scale if (d, c) in o._declared_pairs) for c in scale}
                rank.update(_dense([(c, below[c]) for c in scale]))
            o.rank = rank
        return o

    def renormalized(self) -> "SubquotientOrder":
        rank = {}
        for scale in self._scales():
            rank.update(_dense([(c, self.rank[c]) for c in scale]))
        return SubquotientOrder(self.space, self.bottom, self.top, rank)

    # -- structure ------------------------------------------------------

    @cached_property
    def bottom_reps(self) -> list[int]:
        return class_reps(self.space, self.space.lattice.index[self.bottom])

    @cached_property
    def top_reps(self) -> list[int]:
        return class_reps(self.space, self.space.lattice.index[self.top])

    def class_of(self, point: str) -> str:
        i = self.space.pindex[point]
        return self.space.points[self.bottom_reps[i]]

    def _scales(self) -> list[list[str]]:
        """Bottom-class representatives grouped by top class, in point order."""
        groups: dict[int, list[str]] = {}
        seen = set()
        for i in range(self.space.n):
            rep = self.bottom_reps[i]
            if rep in seen:
                continue
            seen.add(rep)
            groups.setdefault(self.top_reps[i], []).append(self.space.points[rep])
        return [groups[k] for k in sorted(groups)]

    def comparable(self, x: str, y: str) -> bool:
        i, j = self.space.pindex[x], self.space.pindex[y]
        lat = self.space.lattice
        d = self.space.dist[i][j]
        return lat.leq_idx(d, lat.index[self.top]) and not lat.leq_idx(d, lat.index[self.bottom])

    def less(self, x: str, y: str) -> bool:
        """Point-level pullback: class(x) strictly below class(y)."""
        if self._declared_pairs is not None and not self.rank:
            return (self.class_of(x), self.class_of(y)) in self._declared_pairs
        return self.comparable(x, y) and self.rank[self.class_of(x)] < self.rank[self.class_of(y)]

    def reverse(self) -> "SubquotientOrder":
        return SubquotientOrder(self.space, self.bottom, self.top,
                                {c: -r for c, r in self.rank.items()}).renormalized()

    def pairs(self) -> frozenset:
        if self._declared_pairs is not None:
            return self._declared_pairs
        out = []
        for scale in self._scales():
            for c1, c2 in itertools.permutations(scale, 2):
                if self.rank[c1] < self.rank[c2]:
                    out.append((c1, c2))
        return frozenset(out)

    def __eq__(self, other):
        return (isinstance(other, SubquotientOrder)
                and self.space == other.space
                and self.bottom == other.bottom and self.top == other.top
                and self.renormalized().rank == other.renormalized().rank)

    def __hash__(self):
        return hash((self.space, self.bottom, self.top,
                     tuple(sorted(self.renormalized().rank.items()))))

    def __repr__(self):
        return f"SubquotientOrder({self.bottom}->{self.top}, rank={self.rank!r})"


def validate_sqorder(o: SubquotientOrder) -> ValidationReport:
    """Both defining invariants: comparability exactly inside a common
    top-class, and strict totality of ranks within each top-class."""
    report = ValidationReport(subject="subquotient-order")
    lat = o.space.lattice
    if o.bottom not in lat.index or o.top not in lat.index:
        report.add("levels", (o.bottom, o.top), "bottom/top must be lattice elements")
        return report
    if not lat.leq(o.bottom, o.top):
        report.add("levels", (o.bottom, o.top), "bottom must lie below top")
        return report
    scales = o._scales()
    all_reps = {c for scale in scales for c in scale}
    scale_of = {c: i for i, scale in enumerate(scales) for c in scale}
    if o._declared_pairs is not None:
        for c1, c2 in o._declared_pairs:
            if c1 not in all_reps or c2 not in all_reps:
                report.add("class-keys", (c1, c2), "pair does not name class representatives")
                continue
            if c1 == c2:
                report.add("irreflexive", (c1,), "class compared with itself")
            elif scale_of[c1] != scale_of[c2]:
                report.add("comparable-iff-same-top", (c1, c2),
                           "comparably ranked classes lie in different top classes")
            elif (c2, c1) in o._declared_pairs:
                report.add("antisymmetric", (c1, c2), "both orientations declared")
        for scale in scales:
            for c1, c2 in itertools.combinations(scale, 2):
                if (c1, c2) not in o._declared_pairs and (c2, c1) not in o._declared_pairs:
                    report.add("total-within-top", (c1, c2),
                               "classes in one top class left incomparable")
            for c1, c2, c3 in itertools.permutations(scale, 3):
                if ((c1, c2) in o._declared_pairs and (c2, c3) in o._declared_pairs
                        and (c1, c3) not in o._declared_pairs):
                    report.add("transitive", (c1, c2, c3), "missing composite comparability")
        return report
    if set(o.rank) != all_reps:
        missing = sorted(all_reps - set(o.rank))
        extra = sorted(set(o.rank) - all_reps)
        report.add("rank-keys", (tuple(missing), tuple(extra)),
                   "rank map must cover exactly the bottom-class representatives")
        return report
    for scale in scales:
        ranks = [o.rank[c] for c in scale]
        if len(set(ranks)) != len(ranks):
            dup = sorted(c for c in scale if ranks.count(o.rank[c]) > 1)
            report.add("strict-total", tuple(dup), "duplicate ranks inside one top class")
    return report


@dataclass
class OrderedLambdaStructure:
    """A space with its subquotient orders; the catalog object."""

    space: LambdaSpace
    orders: tuple[SubquotientOrder, ...]

    def validate(self) -> ValidationReport:
        report = validate_space(self.space)
        report.subject = "ordered-structure"
        for i, o in enumerate(self.orders):
            sub = validate_sqorder(o)
            for v in sub.violations:
                report.add(f"order[{i}].{v.rule}", v.witness, v.message)
            if o.space is not self.space and o.space != self.space:
                report.add(f"order[{i}].space", (), "order bound to a different space")
        return report

    def pair_code(self, i: int, j: int) -> tuple:
        """Atomic facts about an ordered point pair: distance plus one
        relation code per order (0 same class, 1 less, 2 greater, 3 incomparable)."""
        d = self.space.dist[i][j]
        lat = self.space.lattice
        codes = []
        x, y = self.space.points[i], self.space.points[j]
        for o in self.orders:
            if lat.leq_idx(d, lat.index[o.bottom]):
                codes.append(0)
            elif not lat.leq_idx(d, lat.index[o.top]):
                codes.append(3)
            elif o.rank[o.class_of(x)] < o.rank[o.class_of(y)]:
                codes.append(1)
            else:
                codes.append(2)
        return (d, tuple(codes))

    def signature(self) -> tuple[tuple[str, str], ...]:
        return tuple((o.bottom, o.top) for o in self.orders)


# ---------------------------------------------------------------------------
# operations


@dataclass(frozen=True)
class Restriction:
    order: SubquotientOrder
    mode: str  # "top-lowering" (bottom <= g <= top) or "cross" (the F^G case)


def restrict_to(o: SubquotientOrder, g: str) -> Restriction:
    """Restrict comparabilities to pairs inside a common g-class.

    The result runs from bottom^g to g. Both spec cases are this one
    operation; the mode records which was taken. Undefined when g is not
    below the top (there is then no induced total order inside g-classes).
    """
    lat = o.space.lattice
    if g not in lat.index:
        raise UndefinedRestrictionError(f"{g} is not a lattice element")
    if not lat.leq(g, o.top):
        raise UndefinedRestrictionError(
            f"restriction to {g} undefined: {g} does not lie below top {o.top}")
    new_bottom = lat.meet(o.bottom, g)
    mode = "top-lowering" if lat.leq(o.bottom, g) else "cross"
    space = o.space
    new_reps = class_reps(space, lat.index[new_bottom])
    g_reps = class_reps(space, lat.index[g])
    rank: dict[str, int] = {}
    scales: dict[int, list[tuple[str, int]]] = {}
    seen = set()
    for i in range(space.n):
        rep = new_reps[i]
        if rep in seen:
            continue
        seen.add(rep)
        # sort key: rank of the containing original bottom-class
        key = o.rank[space.points[o.bottom_reps[i]]]
        scales.setdefault(g_reps[i], []).append((space.points[rep], key))
    for scale in scales.values():
        rank.update(_dense(scale))
    return Restriction(SubquotientOrder(space, new_bottom, g, rank), mode)


def compose_lex(lo: SubquotientOrder, hi: SubquotientOrder) -> SubquotientOrder:
    """Lexicographic composition: compare by hi between lo.top-classes, by lo
    inside them. The output is always lo.top-convex."""
    if lo.top != hi.bottom:
        raise TopBottomMismatchError(
            f"compose_lex needs lo.top == hi.bottom, got {lo.top} vs {hi.bottom}")
    if lo.space != hi.space:
        raise ValueError("orders must live on one space")
    space = lo.space
    rank: dict[str, int] = {}
    scales: dict[int, list[tuple[str, tuple[int, int]]]] = {}
    seen = set()
    hi_top_reps = class_reps(space, space.lattice.index[hi.top])
    for i in range(space.n):
        rep = lo.bottom_reps[i]
        if rep in seen:
            continue
        seen.add(rep)
        mid_rep = space.points[lo.top_reps[i]]
        key = (hi.rank[mid_rep], lo.rank[space.points[rep]])
        scales.setdefault(hi_top_reps[i], []).append((space.points[rep], key))
    for scale in scales.values():
        ordered = sorted(scale, key=lambda t: t[1])
        for pos, (rep, _) in enumerate(ordered):
            rank[rep] = pos
    return SubquotientOrder(space, lo.bottom, hi.top, rank)


@dataclass(frozen=True)
class ConvexityResult:
    convex: bool
    witness: tuple[str, str, str] | None = None  # interleaving class triple

    def __bool__(self):
        return self.convex


def convexity_check(o: SubquotientOrder, g: str) -> ConvexityResult:
    """Whether every g-class projects to a rank-convex block of bottom-classes.

    The witness is the lexicographically first interleaving triple (by rank
    positions inside the first offending scale).
    """
    lat = o.space.lattice
    if not lat.leq(o.bottom, g):
        raise ValueError(f"convexity needs bottom {o.bottom} below {g}")
    g_reps = class_reps(o.space, lat.index[g])
    g_of = {}
    for i in range(o.space.n):
        g_of[o.space.points[o.bottom_reps[i]]] = g_reps[i]
    for scale in o._scales():
        ordered = sorted(scale, key=lambda c: o.rank[c])
        k = len(ordered)
        for p1 in range(k):
            for p2 in range(p1 + 1, k):
                if g_of[ordered[p2]] == g_of[ordered[p1]]:
                    continue
                for p3 in range(p2 + 1, k):
                    if g_of[ordered[p3]] == g_of[ordered[p1]]:
                        return ConvexityResult(False, (ordered[p1], ordered[p2], ordered[p3]))
    return ConvexityResult(True)


def split_convex_linear(o: SubquotientOrder, e: str) -> tuple[SubquotientOrder, SubquotientOrder]:
    """Split at an e-convex level into (within, between); compose_lex of the
    two parts gives back the original order."""
    lat = o.space.lattice
    if not (lat.leq(o.bottom, e) and lat.leq(e, o.top)):
        raise UndefinedRestrictionError(f"split level {e} not between {o.bottom} and {o.top}")
    conv = convexity_check(o, e)
    if not conv:
        raise NotConvexError(f"order is not {e}-convex", witness=conv.witness)
    within = restrict_to(o, e).order
    space = o.space
    e_reps = class_reps(space, lat.index[e])
    rank: dict[str, int] = {}
    scales: dict[int, list[tuple[str, int]]] = {}
    seen = set()
    for i in range(space.n):
        rep = e_reps[i]
        if rep in seen:
            continue
        seen.add(rep)
        # block position: rank of any member class (convexity makes min valid)
        key = min(o.rank[space.points[o.bottom_reps[j]]]
                  for j in range(space.n) if e_reps[j] == rep)
        scales.setdefault(o.top_reps[i], []).append((space.points[rep], key))
    for scale in scales.values():
        rank.update(_dense(scale))
    between = SubquotientOrder(space, e, o.top, rank)
    return within, between


def generic_filler(space: LambdaSpace, bottom: str, top: str, rng) -> SubquotientOrder:
    """Seeded uniformly-random subquotient order between the two levels."""
    lat = space.lattice
    if not lat.leq(bottom, top):
        raise ValueError(f"{bottom} not below {top}")
    b_reps = class_reps(space, lat.index[bottom])
    t_reps = class_reps(space, lat.index[top])
    groups: dict[int, list[str]] = {}
    seen = set()
    for i in range(space.n):
        rep = b_reps[i]
        if rep in seen:
            continue
        seen.add(rep)
        groups.setdefault(t_reps[i], []).append(space.points[rep])
    rank: dict[str, int] = {}
    for key in sorted(groups):
        scale = groups[key]
        perm = list(range(len(scale)))
        rng.shuffle(perm)
        for c, r in zip(scale, perm):
            rank[c] = r
    return SubquotientOrder.from_ranks(space, bottom, top, rank)
