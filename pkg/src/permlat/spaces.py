"""Finite lattice-valued ultrametric spaces, their equivalence-system
presentation, and amalgamation.

A space over a lattice L assigns every point pair a distance in L; the
triangle inequality uses join instead of addition. The canonical amalgam of
two extensions of a common base completes cross distances with the meet of
all join-paths through the base, which is the pointwise-largest valid
completion. When the lattice bottom is meet-reducible that completion can
force two cross points to distance bottom; the amalgam then identifies them
(recorded in the result), which is exactly what keeps amalgamation working on
every distributive lattice.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import InvalidFactorError, NonDistributiveError
from .lattice import FiniteLattice, is_distributive
from .validation import ValidationReport


class LambdaSpace:
    """Finite point set with a lattice-valued metric, stored as an index matrix."""

    def __init__(self, lattice: FiniteLattice, points: tuple[str, ...], dist: tuple[tuple[int, ...], ...]):
        if len(set(points)) != len(points):
            raise ValueError(f"duplicate point ids: {points}")
        self.lattice = lattice
        self.points = tuple(points)
        self.dist = tuple(tuple(row) for row in dist)
        self.pindex = {p: i for i, p in enumerate(self.points)}
        self.n = len(self.points)

    @classmethod
    def from_distances(cls, lattice: FiniteLattice, points, distances: dict) -> "LambdaSpace":
        """``distances`` maps unordered point pairs to element names."""
        points = tuple(points)
        idx = {p: i for i, p in enumerate(points)}
        n = len(points)
        bot = lattice.bottom_idx
        dist = [[bot] * n for _ in range(n)]
        for (x, y), lam in distances.items():
            i, j = idx[x], idx[y]
            e = lattice.index[lam]
            dist[i][j] = e
            dist[j][i] = e
        return cls(lattice, points, tuple(map(tuple, dist)))

    def d(self, x: str, y: str) -> str:
        return self.lattice.elements[self.dist[self.pindex[x]][self.pindex[y]]]

    def d_idx(self, i: int, j: int) -> int:
        return self.dist[i][j]

    def restrict(self, names) -> "LambdaSpace":
        idxs = [self.pindex[x] for x in names]
        dist = tuple(tuple(self.dist[a][b] for b in idxs) for a in idxs)
        return LambdaSpace(self.lattice, tuple(names), dist)

    def __eq__(self, other):
        return (isinstance(other, LambdaSpace) and self.lattice == other.lattice
                and self.points == other.points and self.dist == other.dist)

    def __hash__(self):
        return hash((self.lattice, self.points, self.dist))

    def __repr__(self):
        return f"LambdaSpace(points={self.points!r})"


def validate_space(s: LambdaSpace) -> ValidationReport:
    """All metric axioms, join-triangle included; violations carry witnesses."""
    report = ValidationReport(subject="space")
    lat = s.lattice
    bot = lat.bottom_idx
    for i in range(s.n):
        if s.dist[i][i] != bot:
            report.add("self-distance", (s.points[i],), "d(x,x) must be the lattice bottom")
    for i, j in itertools.combinations(range(s.n), 2):
        if s.dist[i][j] != s.dist[j][i]:
            report.add("symmetric", (s.points[i], s.points[j]), "asymmetric distance")
        if s.dist[i][j] == bot:
            report.add("indiscernible", (s.points[i], s.points[j]),
                       "distinct points at distance bottom")
    for i, j, k in itertools.permutations(range(s.n), 3):
        if not lat.leq_idx(s.dist[i][k], lat.join_idx(s.dist[i][j], s.dist[j][k])):
            report.add("join-triangle", (s.points[i], s.points[j], s.points[k]),
                       f"d({s.points[i]},{s.points[k]}) > d(.,{s.points[j]}) join d({s.points[j]},.)")
    return report


# ---------------------------------------------------------------------------
# equivalence-system presentation


@dataclass
class EquivalenceSystem:
    """One equivalence relation per lattice element, as partitions of the points."""

    lattice: FiniteLattice
    points: tuple[str, ...]
    classes: dict[str, tuple[tuple[str, ...], ...]]  # element -> sorted partition

    def partition(self, lam: str) -> tuple[tuple[str, ...], ...]:
        return self.classes[lam]

    def related(self, lam: str, x: str, y: str) -> bool:
        return any(x in block and y in block for block in self.classes[lam])

    def validate(self) -> ValidationReport:
        report = ValidationReport(subject="equivalence-system")
        lat = self.lattice
        block_of = {}
        for lam, part in self.classes.items():
            seen = [p for block in part for p in block]
            if sorted(seen) != sorted(self.points):
                report.add("partition", (lam,), "blocks do not partition the points")
            block_of[lam] = {p: bi for bi, block in enumerate(part) for p in block}
        if set(self.classes) != set(lat.elements):
            report.add("coverage", (), "one partition per lattice element required")
            return report
        bot, top = lat.bottom, lat.top
        if any(len(b) != 1 for b in self.classes[bot]):
            report.add("bottom-discrete", (bot,), "partition at bottom must be discrete")
        if len(self.classes[top]) != 1:
            report.add("top-trivial", (top,), "partition at top must be a single class")
        for l1, l2 in itertools.permutations(lat.elements, 2):
            if lat.leq(l1, l2):
                for x, y in itertools.combinations(self.points, 2):
                    if block_of[l1][x] == block_of[l1][y] and block_of[l2][x] != block_of[l2][y]:
                        report.add("monotone", (l1, l2, x, y),
                                   "finer relation not refined by coarser one")
        for l1, l2 in itertools.combinations(lat.elements, 2):
            m = lat.meet(l1, l2)
            for x, y in itertools.combinations(self.points, 2):
                both = block_of[l1][x] == block_of[l1][y] and block_of[l2][x] == block_of[l2][y]
                if both != (block_of[m][x] == block_of[m][y]):
                    report.add("meet-preserving", (l1, l2, x, y),
                               "partition at the meet is not the common refinement")
        return report


def _sorted_partition(blocks: list[list[str]], order: dict[str, int]) -> tuple[tuple[str, ...], ...]:
    norm = [tuple(sorted(b, key=order.__getitem__)) for b in blocks]
    return tuple(sorted(norm, key=lambda b: order[b[0]]))


def equivalences_from_space(s: LambdaSpace) -> EquivalenceSystem:
    """Group x,y at level lam iff d(x,y) <= lam."""
    lat = s.lattice
    order = {p: i for i, p in enumerate(s.points)}
    classes = {}
    for e in range(lat.n):
        blocks: list[list[str]] = []
        assigned = {}
        for i, p in enumerate(s.points):
            target = None
            for j in range(i):
                if lat.leq_idx(s.dist[i][j], e):
                    target = assigned[j]
                    break
            if target is None:
                target = len(blocks)
                blocks.append([])
            assigned[i] = target
            blocks[target].append(p)
        classes[lat.elements[e]] = _sorted_partition(blocks, order)
    return EquivalenceSystem(lat, s.points, classes)


def space_from_equivalences(e: EquivalenceSystem) -> LambdaSpace:
    """d(x,y) = meet of all levels whose relation holds for (x,y)."""
    lat = e.lattice
    block_of = {lam: {p: bi for bi, block in enumerate(part) for p in block}
                for lam, part in e.classes.items()}
    n = len(e.points)
    dist = [[lat.bottom_idx] * n for _ in range(n)]
    for i, j in itertools.combinations(range(n), 2):
        x, y = e.points[i], e.points[j]
        levels = [lat.index[lam] for lam in lat.elements
                  if block_of[lam][x] == block_of[lam][y]]
        d = lat.meet_many_idx(levels)
        dist[i][j] = d
        dist[j][i] = d
    return LambdaSpace(lat, e.points, tuple(map(tuple, dist)))


# ---------------------------------------------------------------------------
# amalgamation


@dataclass
class AmalgamResult:
    space: LambdaSpace
    merged: dict[str, str] = field(default_factory=dict)  # f2 point -> f1 point


def canonical_amalgam(base: LambdaSpace, f1: LambdaSpace, f2: LambdaSpace) -> AmalgamResult:
    """Free amalgam of two extensions of a common base.

    Cross distances are the meet over base points of d(a,c) join d(c,b); over
    an empty base the meet defaults to the lattice top. Every other valid
    completion is pointwise below this one. Cross pairs forced to bottom are
    identified (f2 point folded onto its f1 twin) so the result is always a
    genuine space when the lattice is distributive.
    """
    lat = base.lattice
    if f1.lattice is not lat or f2.lattice is not lat:
        raise ValueError("base and factors must share one lattice")
    dist_check = is_distributive(lat)
    if not dist_check:
        raise NonDistributiveError("amalgamation requires a distributive lattice",
                                   witness=dist_check.witness)
    for name, factor in (("f1", f1), ("f2", f2)):
        rep = validate_space(factor)
        if not rep.ok:
            raise InvalidFactorError(f"factor {name} is not a valid space",
                                     report=rep.as_dict())
        for p in base.points:
            if p not in factor.pindex:
                raise ValueError(f"base point {p} missing from factor {name}")
        for x, y in itertools.combinations(base.points, 2):
            if factor.d(x, y) != base.d(x, y):
                raise ValueError(f"factor {name} does not restrict to the base at ({x}, {y})")
    new1 = [p for p in f1.points if p not in base.pindex]
    new2 = [p for p in f2.points if p not in base.pindex]
    clash = set(new1) & set(new2)
    if clash:
        raise ValueError(f"point-id collision outside the base: {sorted(clash)}")

    def cross(a: str, b: str) -> int:
        terms = [lat.join_idx(f1.dist[f1.pindex[a]][f1.pindex[c]],
                              f2.dist[f2.pindex[c]][f2.pindex[b]])
                 for c in base.points]
        return lat.meet_many_idx(terms)

    merged: dict[str, str] = {}
    cross_d: dict[tuple[str, str], int] = {}
    for b in new2:
        for a in new1:
            m = cross(a, b)
            cross_d[(a, b)] = m
            if m == lat.bottom_idx:
                merged[b] = a

    points = list(f1.points) + [p for p in new2 if p not in merged]
    pidx = {p: i for i, p in enumerate(points)}
    n = len(points)
    dist = [[lat.bottom_idx] * n for _ in range(n)]

    def put(x, y, v):
        dist[pidx[x]][pidx[y]] = v
        dist[pidx[y]][pidx[x]] = v

    for x, y in itertools.combinations(f1.points, 2):
        put(x, y, f1.dist[f1.pindex[x]][f1.pindex[y]])
    kept2 = [p for p in new2 if p not in merged]
    for x, y in itertools.combinations(kept2, 2):
        put(x, y, f2.dist[f2.pindex[x]][f2.pindex[y]])
    for b in kept2:
        for c in base.points:
            put(b, c, f2.dist[f2.pindex[b]][f2.pindex[c]])
        for a in new1:
            put(b, a, cross_d[(a, b)])
    return AmalgamResult(LambdaSpace(lat, tuple(points), tuple(map(tuple, dist))), merged)


# ---------------------------------------------------------------------------
# instance enumeration (shared by the failure probe and the validity sweep)


def _valid_extension_rows(lat: FiniteLattice, base_dist, k: int) -> list[tuple[int, ...]]:
    """All distance rows from one new point to a k-point base that satisfy the
    triangle constraints against the base distances."""
    rows = []
    for row in itertools.product(lat.nonzero_idx(), repeat=k):
        ok = True
        for i in range(k):
            for j in range(i + 1, k):
                dij = base_dist[i][j]
                if not (lat.leq_idx(dij, lat.join_idx(row[i], row[j]))
                        and lat.leq_idx(row[i], lat.join_idx(row[j], dij))
                        and lat.leq_idx(row[j], lat.join_idx(row[i], dij))):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            rows.append(row)
    return rows


def _valid_mutuals(lat: FiniteLattice, base_dist, r1, r2) -> list[int]:
    """Distances between two new points compatible with their base rows."""
    k = len(r1)
    out = []
    for m in lat.nonzero_idx():
        ok = True
        for c in range(k):
            if not (lat.leq_idx(m, lat.join_idx(r1[c], r2[c]))
                    and lat.leq_idx(r1[c], lat.join_idx(m, r2[c]))
                    and lat.leq_idx(r2[c], lat.join_idx(m, r1[c]))):
                ok = False
                break
        if ok:
            out.append(m)
    return out


def _base_spaces(lat: FiniteLattice, max_base: int):
    """Valid base spaces with 0..max_base points, one per isomorphism class.

    The triangle constraints on <= 3 points are symmetric in the pair slots,
    so the multiset of pair distances is a complete isomorphism invariant.
    """
    names = [f"c{i}" for i in range(max_base)]
    yield LambdaSpace(lat, (), ())
    for k in range(1, max_base + 1):
        for combo in itertools.combinations_with_replacement(lat.nonzero_idx(), k * (k - 1) // 2):
            dist = [[lat.bottom_idx] * k for _ in range(k)]
            pos = 0
            for i in range(k):
                for j in range(i + 1, k):
                    dist[i][j] = dist[j][i] = combo[pos]
                    pos += 1
            s = LambdaSpace(lat, tuple(names[:k]), tuple(map(tuple, dist)))
            if validate_space(s).ok:
                yield s


def _factor_extensions(lat: FiniteLattice, base: LambdaSpace, max_new: int, prefix: str):
    """All valid extensions of the base by 1..max_new fresh points."""
    for ext in _raw_extensions(lat, base, max_new):
        yield _materialize(lat, base, ext, prefix)


@dataclass(frozen=True)
class FailingInstance:
    base: LambdaSpace
    f1: LambdaSpace
    f2: LambdaSpace


def _has_pseudo_completion(lat: FiniteLattice, base: LambdaSpace,
                           f1: LambdaSpace, f2: LambdaSpace) -> bool:
    """Whether ANY assignment of cross distances (bottom = identification
    allowed) satisfies every join-triangle on the union."""
    new1 = [p for p in f1.points if p not in base.pindex]
    new2 = [p for p in f2.points if p not in base.pindex]
    pts = list(f1.points) + list(new2)
    idx = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    d = [[None] * n for _ in range(n)]

    def put(x, y, v):
        d[idx[x]][idx[y]] = v
        d[idx[y]][idx[x]] = v

    for p in pts:
        put(p, p, lat.bottom_idx)
    for x, y in itertools.combinations(f1.points, 2):
        put(x, y, f1.dist[f1.pindex[x]][f1.pindex[y]])
    for x, y in itertools.combinations(f2.points, 2):
        put(x, y, f2.dist[f2.pindex[x]][f2.pindex[y]])

    cross_pairs = [(a, b) for a in new1 for b in new2]

    def consistent(i, j) -> bool:
        for k2 in range(n):
            dik, dkj, dij = d[i][k2], d[k2][j], d[i][j]
            if dik is None or dkj is None:
                continue
            if not lat.leq_idx(dij, lat.join_idx(dik, dkj)):
                return False
            if not lat.leq_idx(dik, lat.join_idx(dij, dkj)):
                return False
            if not lat.leq_idx(dkj, lat.join_idx(dij, dik)):
                return False
        return True

    def assign(pos: int) -> bool:
        if pos == len(cross_pairs):
            return True
        a, b = cross_pairs[pos]
        i, j = idx[a], idx[b]
        for v in range(lat.n):
            d[i][j] = d[j][i] = v
            if consistent(i, j) and assign(pos + 1):
                return True
        d[i][j] = d[j][i] = None
        return False

    return assign(0)


def amalgamation_failure_probe(lat: FiniteLattice, max_base: int = 3,
                               max_new: int = 2) -> FailingInstance | None:
    """Search for a base/factor pair with no amalgam at all.

    For a distributive lattice the sweep finds nothing (the canonical
    completion always works, identifying points where forced); for a
    non-distributive lattice some instance in this space resists every
    completion, identification included.
    """
    distributive = bool(is_distributive(lat))
    for base in _base_spaces(lat, max_base):
        exts = list(_factor_extensions(lat, base, max_new, "x"))
        exts2 = list(_factor_extensions(lat, base, max_new, "y"))
        for i1, f1 in enumerate(exts):
            for f2 in exts2[i1:]:
                if distributive:
                    result = canonical_amalgam(base, f1, f2)
                    if validate_space(result.space).ok:
                        continue
                if _has_pseudo_completion(lat, base, f1, f2):
                    continue
                return FailingInstance(base, f1, f2)
    return None


@dataclass
class SweepReport:
    instances: int
    failures: list


def _raw_extensions(lat: FiniteLattice, base: LambdaSpace, max_new: int):
    """Extensions as (rows, mutual) integer tuples, unordered in the new points."""
    rows = _valid_extension_rows(lat, base.dist, base.n)
    for r in rows:
        yield ((r,), None)
    if max_new >= 2:
        for i1, r1 in enumerate(rows):
            for r2 in rows[i1:]:
                for m in _valid_mutuals(lat, base.dist, r1, r2):
                    yield ((r1, r2), m)


def _materialize(lat, base, ext, prefix) -> LambdaSpace:
    rows, mutual = ext
    k = base.n
    pts = base.points + tuple(f"{prefix}{i}" for i in range(len(rows)))
    n = len(pts)
    dist = [[lat.bottom_idx] * n for _ in range(n)]
    for i in range(k):
        for j in range(k):
            dist[i][j] = base.dist[i][j]
    for a, row in enumerate(rows):
        for c in range(k):
            dist[k + a][c] = dist[c][k + a] = row[c]
    if mutual is not None:
        dist[k][k + 1] = dist[k + 1][k] = mutual
    return LambdaSpace(lat, pts, tuple(map(tuple, dist)))


def amalgam_validity_sweep(lat: FiniteLattice, max_base: int = 3, max_new: int = 2,
                           check_maximality: bool = False) -> SweepReport:
    """Exhaustively amalgamate every instance (bases up to isomorphism) and
    validate each output; optionally brute-check that every other completion
    sits below the canonical one.

    The inner loop works on raw integer rows: factor-internal triangles hold
    by the enumeration constraints, so only triangles through a cross pair
    need checking; forced-bottom cross pairs are fine exactly when the two
    rows coincide (the identification case).
    """
    dist_check = is_distributive(lat)
    if not dist_check:
        raise NonDistributiveError("validity sweep expects a distributive lattice",
                                   witness=dist_check.witness)
    report = SweepReport(0, [])
    join = [list(row) for row in lat._join]
    up = lat.poset.up
    bot = lat.bottom_idx
    top = lat.top_idx

    def leq(i, j):
        return up[i] & (1 << j)

    for base in _base_spaces(lat, max_base):
        k = base.n
        bd = base.dist
        exts = list(_raw_extensions(lat, base, max_new))
        for i1 in range(len(exts)):
            rows1, m1 = exts[i1]
            for i2 in range(i1, len(exts)):
                rows2, m2 = exts[i2]
                report.instances += 1
                # cross distances: meet over base of join-paths
                cross = [[0] * len(rows2) for _ in range(len(rows1))]
                for a, ra in enumerate(rows1):
                    for b, rb in enumerate(rows2):
                        m = top
                        for c in range(k):
                            t = join[ra[c]][rb[c]]
                            m = m if leq(m, t) else (t if leq(t, m) else lat.meet_idx(m, t))
                        cross[a][b] = m
                bad = None
                for a, ra in enumerate(rows1):
                    for b, rb in enumerate(rows2):
                        cab = cross[a][b]
                        if cab == bot and ra != rb:
                            bad = ("identification of distinct types", a, b)
                            break
                        # triangles through each base point
                        for c in range(k):
                            if not leq(ra[c], join[cab][rb[c]]) or not leq(rb[c], join[cab][ra[c]]):
                                bad = ("base triangle", a, b, c)
                                break
                        if bad:
                            break
                        # triangles through the sibling new point on either side
                        if len(rows1) == 2:
                            o = 1 - a
                            if not (leq(cab, join[m1][cross[o][b]])
                                    and leq(m1, join[cab][cross[o][b]])
                                    and leq(cross[o][b], join[cab][m1])):
                                bad = ("f1 sibling triangle", a, b)
                                break
                        if len(rows2) == 2:
                            o = 1 - b
                            if not (leq(cab, join[m2][cross[a][o]])
                                    and leq(m2, join[cab][cross[a][o]])
                                    and leq(cross[a][o], join[cab][m2])):
                                bad = ("f2 sibling triangle", a, b)
                                break
                    if bad:
                        break
                if bad is not None:
                    f1 = _materialize(lat, base, exts[i1], "x")
                    f2 = _materialize(lat, base, exts[i2], "y")
                    report.failures.append((base, f1, f2, bad))
                elif check_maximality:
                    f1 = _materialize(lat, base, exts[i1], "x")
                    f2 = _materialize(lat, base, exts[i2], "y")
                    result = canonical_amalgam(base, f1, f2)
                    if not _completions_below(lat, base, f1, f2, result):
                        report.failures.append((base, f1, f2, "non-maximal canonical completion"))
    return report


def _completions_below(lat, base, f1, f2, result: AmalgamResult) -> bool:
    """Every valid completion is pointwise <= the canonical one."""
    new1 = [p for p in f1.points if p not in base.pindex]
    new2 = [p for p in f2.points if p not in base.pindex]
    pairs = [(a, b) for a in new1 for b in new2]

    def canonical_value(a, b):
        if b in result.merged:
            return lat.bottom_idx if result.merged[b] == a else \
                result.space.dist[result.space.pindex[a]][result.space.pindex[result.merged[b]]]
        return result.space.dist[result.space.pindex[a]][result.space.pindex[b]]

    for values in itertools.product(lat.nonzero_idx(), repeat=len(pairs)):
        assigned = dict(zip(pairs, values))
        if not _completion_valid(lat, base, f1, f2, assigned):
            continue
        for pair, v in assigned.items():
            if not lat.leq_idx(v, canonical_value(*pair)):
                return False
    return True


def _completion_valid(lat, base, f1, f2, assigned: dict) -> bool:
    new2 = [p for p in f2.points if p not in base.pindex]
    pts = list(f1.points) + list(new2)
    idx = {p: i for i, p in enumerate(pts)}
    n = len(pts)
    d = [[lat.bottom_idx] * n for _ in range(n)]
    for x, y in itertools.combinations(f1.points, 2):
        d[idx[x]][idx[y]] = d[idx[y]][idx[x]] = f1.dist[f1.pindex[x]][f1.pindex[y]]
    for x, y in itertools.combinations(f2.points, 2):
        d[idx[x]][idx[y]] = d[idx[y]][idx[x]] = f2.dist[f2.pindex[x]][f2.pindex[y]]
    for (a, b), v in assigned.items():
        d[idx[a]][idx[b]] = d[idx[b]][idx[a]] = v
    for i, j, k in itertools.permutations(range(n), 3):
        if not lat.leq_idx(d[i][k], lat.join_idx(d[i][j], d[j][k])):
            return False
    return True


def all_spaces(lat: FiniteLattice, n_points: int):
    """Every valid space on n_points named points (test helper)."""
    names = tuple(f"p{i}" for i in range(n_points))
    pairs = list(itertools.combinations(range(n_points), 2))
    for values in itertools.product(lat.nonzero_idx(), repeat=len(pairs)):
        dist = [[lat.bottom_idx] * n_points for _ in range(n_points)]
        for (i, j), v in zip(pairs, values):
            dist[i][j] = dist[j][i] = v
        s = LambdaSpace(lat, names, tuple(map(tuple, dist)))
        if validate_space(s).ok:
            yield s
