"""Finite posets and lattices: validation, distributivity, meet-irreducibles,
chain covers, dimension bounds, and exhaustive enumeration at desk scale.

Elements are opaque string ids. Order relations are stored as bitmask rows,
meet/join as explicit tables (sizes stay at or below 16, so table lookups are
the cheapest possible representation for the hot loops downstream).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from math import ceil, log2

from .canon import canonical_key
from .errors import NonDistributiveError, NotALatticeError, SizeCapError
from .validation import ValidationReport

MAX_ELEMENTS = 16


class FinitePoset:
    """Immutable finite partial order. ``up[i]`` is the bitmask of j with i <= j."""

    def __init__(self, elements: tuple[str, ...], up: tuple[int, ...]):
        if len(set(elements)) != len(elements):
            raise ValueError(f"duplicate element ids: {elements}")
        self.elements = tuple(elements)
        self.up = tuple(up)
        self.n = len(elements)
        self.index = {e: i for i, e in enumerate(elements)}

    @classmethod
    def from_leq_pairs(cls, elements, pairs) -> "FinitePoset":
        """Build from the full (or cover) relation; reflexive-transitive closure applied."""
        elements = tuple(elements)
        idx = {e: i for i, e in enumerate(elements)}
        n = len(elements)
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            up[idx[a]] |= 1 << idx[b]
        # transitive closure (Warshall on bitmasks)
        for k in range(n):
            bit = 1 << k
            for i in range(n):
                if up[i] & bit:
                    up[i] |= up[k]
        return cls(elements, tuple(up))

    def leq(self, a: str, b: str) -> bool:
        return bool(self.up[self.index[a]] & (1 << self.index[b]))

    def leq_idx(self, i: int, j: int) -> bool:
        return bool(self.up[i] & (1 << j))

    @cached_property
    def down(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for i in range(self.n):
            for j in range(self.n):
                if self.up[j] & (1 << i):
                    masks[i] |= 1 << j
        return tuple(masks)

    @cached_property
    def covers(self) -> tuple[tuple[int, int], ...]:
        """Pairs (i, j) with j covering i."""
        out = []
        for i in range(self.n):
            for j in range(self.n):
                if i == j or not self.leq_idx(i, j):
                    continue
                if any(self.leq_idx(i, k) and self.leq_idx(k, j) for k in range(self.n) if k not in (i, j)):
                    continue
                out.append((i, j))
        return tuple(out)

    def upper_covers_idx(self, i: int) -> list[int]:
        return [j for a, j in self.covers if a == i]

    def validate(self) -> ValidationReport:
        report = ValidationReport(subject="poset")
        for i in range(self.n):
            if not self.up[i] & (1 << i):
                report.add("reflexive", (self.elements[i],), f"{self.elements[i]} not <= itself")
        for i in range(self.n):
            for j in range(self.n):
                if i != j and self.leq_idx(i, j) and self.leq_idx(j, i):
                    report.add("antisymmetric", (self.elements[i], self.elements[j]),
                               "mutual strict order")
        for i in range(self.n):
            for j in range(self.n):
                if not self.leq_idx(i, j):
                    continue
                for k in range(self.n):
                    if self.leq_idx(j, k) and not self.leq_idx(i, k):
                        report.add("transitive", (self.elements[i], self.elements[j], self.elements[k]),
                                   "missing composite relation")
        return report

    def key(self) -> tuple:
        return canonical_key(self.n, lambda i, j: (i == j, self.leq_idx(i, j), self.leq_idx(j, i)))

    def subposet(self, names: list[str]) -> "FinitePoset":
        idxs = [self.index[x] for x in names]
        up = []
        for a in idxs:
            mask = 0
            for pos, b in enumerate(idxs):
                if self.leq_idx(a, b):
                    mask |= 1 << pos
            up.append(mask)
        return FinitePoset(tuple(names), tuple(up))

    def __repr__(self):
        return f"FinitePoset({self.elements!r})"


class FiniteLattice:
    """Meet/join tables over a finite poset; table entries are element indices
    (or None where the bound does not exist, which validation reports)."""

    def __init__(self, poset: FinitePoset, meet_table, join_table, bottom: str, top: str):
        if poset.n > MAX_ELEMENTS:
            raise SizeCapError(f"lattices are capped at {MAX_ELEMENTS} elements, got {poset.n}")
        self.poset = poset
        self.elements = poset.elements
        self.index = poset.index
        self.n = poset.n
        self._meet = meet_table
        self._join = join_table
        self.bottom = bottom
        self.top = top
        self.bottom_idx = poset.index[bottom]
        self.top_idx = poset.index[top]

    @classmethod
    def from_poset(cls, poset: FinitePoset) -> "FiniteLattice":
        """Compute GLB/LUB tables; missing bounds stay None for the validator."""
        n = poset.n
        down = poset.down
        up = poset.up
        principal_down = {down[i]: i for i in range(n)}
        principal_up = {up[i]: i for i in range(n)}
        meet = [[principal_down.get(down[i] & down[j]) for j in range(n)] for i in range(n)]
        join = [[principal_up.get(up[i] & up[j]) for j in range(n)] for i in range(n)]
        bottoms = [i for i in range(n) if down[i] == 1 << i]
        tops = [i for i in range(n) if up[i] == 1 << i]
        all_mask = (1 << n) - 1
        bottom = next((i for i in range(n) if up[i] == all_mask), bottoms[0] if bottoms else 0)
        top = next((i for i in range(n) if down[i] == all_mask), tops[0] if tops else n - 1)
        return cls(poset, tuple(map(tuple, meet)), tuple(map(tuple, join)),
                   poset.elements[bottom], poset.elements[top])

    @classmethod
    def from_cover_relations(cls, elements, covers) -> "FiniteLattice":
        return cls.from_poset(FinitePoset.from_leq_pairs(elements, covers))

    # -- name-level API ------------------------------------------------

    def leq(self, a: str, b: str) -> bool:
        return self.poset.leq(a, b)

    def meet(self, a: str, b: str) -> str:
        m = self._meet[self.index[a]][self.index[b]]
        if m is None:
            raise NotALatticeError(f"no meet for ({a}, {b})")
        return self.elements[m]

    def join(self, a: str, b: str) -> str:
        j = self._join[self.index[a]][self.index[b]]
        if j is None:
            raise NotALatticeError(f"no join for ({a}, {b})")
        return self.elements[j]

    # -- index-level API (hot loops elsewhere) -------------------------

    def leq_idx(self, i: int, j: int) -> bool:
        return self.poset.leq_idx(i, j)

    def meet_idx(self, i: int, j: int) -> int:
        m = self._meet[i][j]
        if m is None:
            raise NotALatticeError(
                f"no meet for ({self.elements[i]}, {self.elements[j]})")
        return m

    def join_idx(self, i: int, j: int) -> int:
        j2 = self._join[i][j]
        if j2 is None:
            raise NotALatticeError(
                f"no join for ({self.elements[i]}, {self.elements[j]})")
        return j2

    def meet_many_idx(self, idxs) -> int:
        out = self.top_idx
        for i in idxs:
            out = self.meet_idx(out, i)
        return out

    def join_many_idx(self, idxs) -> int:
        out = self.bottom_idx
        for i in idxs:
            out = self.join_idx(out, i)
        return out

    def nonzero_idx(self) -> list[int]:
        return [i for i in range(self.n) if i != self.bottom_idx]

    def key(self) -> tuple:
        return self.poset.key()

    def __eq__(self, other):
        return (isinstance(other, FiniteLattice)
                and self.elements == other.elements
                and self.poset.up == other.poset.up)

    def __hash__(self):
        return hash((self.elements, self.poset.up))

    def __repr__(self):
        return f"FiniteLattice({self.elements!r}, bottom={self.bottom!r}, top={self.top!r})"


def lattices_isomorphic(a: FiniteLattice, b: FiniteLattice) -> bool:
    # order isomorphism suffices: meet/join are determined by the order
    return a.n == b.n and a.key() == b.key()


# ---------------------------------------------------------------------------
# validation


def validate_lattice(candidate: FiniteLattice) -> ValidationReport:
    """Confirm the lattice invariants or list each violation with a witness."""
    report = candidate.poset.validate()
    report.subject = "lattice"
    if not report.ok:
        return report
    n = candidate.n
    els = candidate.elements
    poset = candidate.poset
    down = poset.down
    up = poset.up
    all_mask = (1 << n) - 1
    if up[candidate.bottom_idx] != all_mask:
        report.add("bottom", (candidate.bottom,), "declared bottom is not below every element")
    if down[candidate.top_idx] != all_mask:
        report.add("top", (candidate.top,), "declared top is not above every element")
    for i in range(n):
        for j in range(i, n):
            m = candidate._meet[i][j]
            if m is None:
                report.add("meet-total", (els[i], els[j]), "no greatest lower bound")
            elif down[m] != down[i] & down[j]:
                report.add("meet-glb", (els[i], els[j], els[m]),
                           "meet table entry is not the greatest lower bound")
            jn = candidate._join[i][j]
            if jn is None:
                report.add("join-total", (els[i], els[j]), "no least upper bound")
            elif up[jn] != up[i] & up[j]:
                report.add("join-lub", (els[i], els[j], els[jn]),
                           "join table entry is not the least upper bound")
            if m is not None and candidate._meet[j][i] != m:
                report.add("meet-commutative", (els[i], els[j], els[m]), "meet table asymmetric")
            if jn is not None and candidate._join[j][i] != jn:
                report.add("join-commutative", (els[i], els[j], els[jn]), "join table asymmetric")
    if report.ok:
        # laws hold automatically once the tables are exact bounds; spot-check
        # associativity and absorption anyway so a doctored table cannot pass
        for i in range(n):
            if candidate._meet[i][i] != i or candidate._join[i][i] != i:
                report.add("idempotent", (els[i],), "x*x != x")
        for i, j, k in itertools.product(range(n), repeat=3):
            lhs = candidate._meet[candidate._meet[i][j]][k]
            rhs = candidate._meet[i][candidate._meet[j][k]]
            if lhs != rhs:
                report.add("meet-associative", (els[i], els[j], els[k]), "meet not associative")
                break
        for i, j in itertools.product(range(n), repeat=2):
            if candidate._meet[i][candidate._join[i][j]] != i:
                report.add("absorption", (els[i], els[j]), "a meet (a join b) != a")
                break
    return report


# ---------------------------------------------------------------------------
# distributivity


@dataclass(frozen=True)
class DistributivityResult:
    distributive: bool
    witness: tuple[str, ...] | None = None
    kind: str | None = None  # "M3" or "N5"

    def __bool__(self):
        return self.distributive


def _sublattice_shape(lat: FiniteLattice, subset: tuple[int, ...]) -> str | None:
    """Classify a 5-element meet/join-closed subset as M3, N5, or neither."""
    sset = set(subset)
    for a, b in itertools.combinations(subset, 2):
        if lat.meet_idx(a, b) not in sset or lat.join_idx(a, b) not in sset:
            return None
    bot = lat.meet_many_idx(subset)
    top_ = lat.join_many_idx(subset)
    if bot not in sset or top_ not in sset:
        return None
    mids = [x for x in subset if x not in (bot, top_)]
    if len(mids) != 3:
        return None
    comp = [(x, y) for x, y in itertools.combinations(mids, 2)
            if lat.leq_idx(x, y) or lat.leq_idx(y, x)]
    incomp = [(x, y) for x, y in itertools.combinations(mids, 2)
              if not (lat.leq_idx(x, y) or lat.leq_idx(y, x))]
    if len(comp) == 0:
        if all(lat.meet_idx(x, y) == bot and lat.join_idx(x, y) == top_ for x, y in incomp):
            return "M3"
        return None
    if len(comp) == 1:
        if all(lat.meet_idx(x, y) == bot and lat.join_idx(x, y) == top_ for x, y in incomp):
            return "N5"
    return None


def is_distributive(lat: FiniteLattice) -> DistributivityResult:
    """Distributivity via the forbidden-sublattice criterion (M3 / N5).

    Returns the lexicographically first violating 5-tuple in element-id order,
    so failures are reproducible.
    """
    for subset in itertools.combinations(range(lat.n), 5):
        kind = _sublattice_shape(lat, subset)
        if kind is not None:
            return DistributivityResult(False, tuple(lat.elements[i] for i in subset), kind)
    return DistributivityResult(True)


def distributive_law_holds(lat: FiniteLattice) -> bool:
    """Direct a^(b v c) = (a^b) v (a^c) check over all triples (test oracle)."""
    for a, b, c in itertools.product(range(lat.n), repeat=3):
        if lat.meet_idx(a, lat.join_idx(b, c)) != lat.join_idx(lat.meet_idx(a, b), lat.meet_idx(a, c)):
            return False
    return True


# ---------------------------------------------------------------------------
# meet-irreducibles and chain covers


@dataclass(frozen=True)
class MeetIrreducibles:
    elements: tuple[str, ...]
    cover: dict[str, str]  # x -> its unique upper cover x+


def meet_irreducibles(lat: FiniteLattice) -> MeetIrreducibles:
    """Elements (top excluded) with a unique upper cover."""
    els, cover = [], {}
    for i in range(lat.n):
        if i == lat.top_idx:
            continue
        ups = lat.poset.upper_covers_idx(i)
        if len(ups) == 1:
            els.append(lat.elements[i])
            cover[lat.elements[i]] = lat.elements[ups[0]]
    return MeetIrreducibles(tuple(els), cover)


def lambda0_poset(lat: FiniteLattice) -> FinitePoset:
    """Sub-poset of meet-irreducibles with bottom and top removed."""
    mi = meet_irreducibles(lat)
    names = [x for x in mi.elements if x not in (lat.bottom, lat.top)]
    return lat.poset.subposet(names)


@dataclass(frozen=True)
class ChainCover:
    chains: tuple[tuple[str, ...], ...]

    def __len__(self):
        return len(self.chains)


def _max_matching(n: int, adj: list[list[int]]) -> dict[int, int]:
    """Kuhn's augmenting-path matching; returns left->right assignment."""
    match_r: dict[int, int] = {}

    def try_augment(u: int, seen: set[int]) -> bool:
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or try_augment(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    for u in range(n):
        try_augment(u, set())
    return {u: v for v, u in match_r.items()}


def min_chain_cover(p: FinitePoset) -> ChainCover:
    """Minimum chain cover via Dilworth (bipartite matching on the strict order).

    The cover is a partition; its size equals the poset width.
    """
    n = p.n
    adj = [[j for j in range(n) if j != i and p.leq_idx(i, j)] for i in range(n)]
    succ = _max_matching(n, adj)
    has_pred = set(succ.values())
    chains = []
    for start in range(n):
        if start in has_pred:
            continue
        chain = [start]
        while chain[-1] in succ:
            chain.append(succ[chain[-1]])
        chains.append(tuple(p.elements[i] for i in chain))
    chains.sort()
    return ChainCover(tuple(chains))


def max_antichain_size(p: FinitePoset) -> int:
    """Exhaustive width computation (oracle-grade, exponential)."""
    best = 0
    for r in range(p.n, 0, -1):
        if r <= best:
            break
        for sub in itertools.combinations(range(p.n), r):
            if all(not p.leq_idx(a, b) and not p.leq_idx(b, a)
                   for a, b in itertools.combinations(sub, 2)):
                best = max(best, r)
                break
    return best


# ---------------------------------------------------------------------------
# dimension bounds


@dataclass(frozen=True)
class DimensionBounds:
    lower: int
    upper: int
    cover: ChainCover | None
    exhaustive: bool
    notes: tuple[str, ...]


def _chain_cost(length: int) -> int:
    return 1 + ceil(log2(length + 1))


def _all_chains(p: FinitePoset) -> list[tuple[int, tuple[int, ...]]]:
    """All nonempty chains as (bitmask, ascending index tuple)."""
    out = []

    def extend(mask: int, chain: tuple[int, ...], last: int):
        out.append((mask, chain))
        for nxt in range(p.n):
            if not mask & (1 << nxt) and p.leq_idx(last, nxt) and nxt != last:
                extend(mask | (1 << nxt), chain + (nxt,), nxt)

    for start in range(p.n):
        extend(1 << start, (start,), start)
    # distinct chains can repeat via different extension routes only if not
    # built in ascending order; ascending construction makes each unique
    return out


def _best_cover_exhaustive(p: FinitePoset) -> tuple[int, list[tuple[int, ...]]]:
    chains = _all_chains(p)
    full = (1 << p.n) - 1
    dp: dict[int, int] = {0: 0}
    choice: dict[int, tuple[int, tuple[int, ...]]] = {}
    frontier = [0]
    seen = {0}
    while frontier:
        mask = min(frontier, key=lambda m: dp[m])
        frontier.remove(mask)
        if mask == full:
            continue
        low = next(i for i in range(p.n) if not mask & (1 << i))
        for cmask, chain in chains:
            if not cmask & (1 << low):
                continue
            new = mask | cmask
            cost = dp[mask] + _chain_cost(len(chain))
            if new not in dp or cost < dp[new]:
                dp[new] = cost
                choice[new] = (mask, chain)
                if new not in seen:
                    seen.add(new)
                    frontier.append(new)
            elif new not in seen:
                seen.add(new)
                frontier.append(new)
    cover = []
    cur = full
    while cur:
        prev, chain = choice[cur]
        cover.append(chain)
        cur = prev
    return dp[full], cover


def _best_cover_min_cardinality(p: FinitePoset, ell: int) -> tuple[int, list[tuple[int, ...]]]:
    """Cheapest partition into exactly ell chains (flagged non-exhaustive mode)."""
    topo = sorted(range(p.n), key=lambda i: bin(p.down[i]).count("1"))
    best_cost = None
    best_slots = None
    slots: list[list[int]] = [[] for _ in range(ell)]

    def rec(pos: int):
        nonlocal best_cost, best_slots
        if pos == len(topo):
            cost = sum(_chain_cost(len(s)) for s in slots if s)
            if best_cost is None or cost < best_cost:
                best_cost = cost
                best_slots = [list(s) for s in slots]
            return
        e = topo[pos]
        used_empty = False
        for s in slots:
            if not s:
                if used_empty:
                    continue
                used_empty = True
                s.append(e)
                rec(pos + 1)
                s.pop()
            elif all(p.leq_idx(x, e) or p.leq_idx(e, x) for x in s):
                s.append(e)
                rec(pos + 1)
                s.pop()

    rec(0)
    assert best_cost is not None and best_slots is not None
    return best_cost, [tuple(s) for s in best_slots if s]


def dimension_bounds(lat: FiniteLattice) -> DimensionBounds:
    """Lower bound 2*ell and the chain-cover upper bound on the order count
    needed to present the lattice.

    Neither bound is tight in general; the report never claims tightness.
    """
    report = validate_lattice(lat)
    if not report.ok:
        raise NotALatticeError("dimension bounds need a valid lattice", report=report.as_dict())
    dist = is_distributive(lat)
    if not dist:
        raise NonDistributiveError("dimension bounds are defined for distributive lattices only",
                                   witness=dist.witness)
    p0 = lambda0_poset(lat)
    notes: list[str] = []
    if p0.n == 0:
        notes.append("lattice has no internal meet-irreducibles; at least one order "
                     "is still needed to present a structure (bound concerns the lattice only)")
        return DimensionBounds(0, 0, ChainCover(()), True, tuple(notes))
    ell = len(min_chain_cover(p0))
    lower = 2 * ell
    if p0.n <= 12:
        cost, chains = _best_cover_exhaustive(p0)
        exhaustive = True
    else:
        cost, chains = _best_cover_min_cardinality(p0, ell)
        exhaustive = False
        notes.append("cover search restricted to minimum-cardinality covers "
                     f"(|Lambda0| = {p0.n} > 12)")
    cover = ChainCover(tuple(sorted(tuple(p0.elements[i] for i in c) for c in chains)))
    return DimensionBounds(lower, cost, cover, exhaustive, tuple(notes))


# ---------------------------------------------------------------------------
# enumeration


def _natural_posets(max_size: int, prune=None):
    """Naturally-labeled posets (labels form a linear extension) as down-mask
    tuples; each isomorphism class appears at least once. ``prune`` cuts whole
    extension subtrees (sound for predicates monotone under adding elements)."""
    layer: list[tuple[int, ...]] = [()]
    yield ()
    for size in range(1, max_size + 1):
        new_layer = []
        for p in layer:
            k = len(p)
            # down-closed subsets of the current poset
            for sub in range(1 << k):
                ok = True
                for d in range(k):
                    if sub & (1 << d) and p[d] & ~sub:
                        ok = False
                        break
                if ok:
                    ext = p + (sub | (1 << k),)
                    if prune is None or not prune(ext):
                        new_layer.append(ext)
        layer = new_layer
        yield from layer


def _ideal_count_exceeds(down: tuple[int, ...], cap: int) -> bool:
    """True iff the poset has more than ``cap`` order ideals (early abort)."""
    count = 0
    n = len(down)
    for s in range(1 << n):
        if all(not (s & (1 << d)) or not (down[d] & ~s) for d in range(n)):
            count += 1
            if count > cap:
                return True
    return False


def _poset_from_down(down: tuple[int, ...]) -> FinitePoset:
    n = len(down)
    up = [0] * n
    for i in range(n):
        for j in range(n):
            if down[j] & (1 << i):
                up[i] |= 1 << j
    return FinitePoset(tuple(f"x{i}" for i in range(n)), tuple(up))


def _is_meet_semilattice(down: tuple[int, ...]) -> bool:
    principal = set(down)
    n = len(down)
    for i in range(n):
        for j in range(i + 1, n):
            if down[i] & down[j] not in principal:
                return False
    return True


def enumerate_lattices(max_size: int):
    """One representative per isomorphism class of lattices with 2..max_size
    elements, via meet-semilattices of size max_size-1 with a new top adjoined."""
    if max_size > MAX_ELEMENTS:
        raise SizeCapError(f"max_size {max_size} exceeds cap {MAX_ELEMENTS}")
    seen = set()
    for down in _natural_posets(max_size - 1):
        if not down or not _is_meet_semilattice(down):
            continue
        n = len(down)
        full = (1 << (n + 1)) - 1
        lifted = down + (full,)
        lat = FiniteLattice.from_poset(_poset_from_down(lifted))
        k = lat.key()
        if k in seen:
            continue
        seen.add(k)
        yield lat


def enumerate_distributive_lattices(max_size: int):
    """Downset lattices of all posets with < max_size elements (Birkhoff),
    deduplicated by canonical form. Desk scale: max_size <= 8."""
    if max_size > 8:
        raise SizeCapError(f"enumerate_distributive_lattices is capped at 8, got {max_size}")
    seen = set()
    results = []
    for down in _natural_posets(max_size - 1, prune=lambda p: _ideal_count_exceeds(p, max_size)):
        if not down:
            continue
        n = len(down)
        ideals = [s for s in range(1 << n)
                  if all(not (s & (1 << d)) or not (down[d] & ~s) for d in range(n))]
        if len(ideals) > max_size:
            continue
        ideals.sort()
        pos = {s: i for i, s in enumerate(ideals)}
        elements = tuple(f"i{i}" for i in range(len(ideals)))
        up = [0] * len(ideals)
        for a, sa in enumerate(ideals):
            for b, sb in enumerate(ideals):
                if sa & ~sb == 0:
                    up[a] |= 1 << b
        lat = FiniteLattice.from_poset(FinitePoset(elements, tuple(up)))
        k = lat.key()
        if k in seen:
            continue
        seen.add(k)
        results.append((lat.n, k, lat))
    results.sort(key=lambda t: (t[0], t[1]))
    for _, _, lat in results:
        yield lat


# ---------------------------------------------------------------------------
# stock lattices


def chain_lattice(n: int, names: list[str] | None = None) -> FiniteLattice:
    if names is None:
        names = [f"c{i}" for i in range(n)]
    covers = [(names[i], names[i + 1]) for i in range(n - 1)]
    return FiniteLattice.from_cover_relations(names, covers)


def boolean2(names: tuple[str, str, str, str] = ("0", "a", "b", "1")) -> FiniteLattice:
    z, a, b, o = names
    return FiniteLattice.from_cover_relations(names, [(z, a), (z, b), (a, o), (b, o)])


def m3() -> FiniteLattice:
    els = ("0", "p", "q", "r", "1")
    return FiniteLattice.from_cover_relations(
        els, [("0", m) for m in ("p", "q", "r")] + [(m, "1") for m in ("p", "q", "r")])


def n5() -> FiniteLattice:
    els = ("0", "x", "w", "v", "1")
    return FiniteLattice.from_cover_relations(
        els, [("0", "x"), ("x", "w"), ("w", "1"), ("0", "v"), ("v", "1")])


def vertical_sum(lower: FiniteLattice, upper: FiniteLattice) -> FiniteLattice:
    """Stack: every element of ``lower`` below every element of ``upper``."""
    lo = [f"l.{e}" for e in lower.elements]
    hi = [f"u.{e}" for e in upper.elements]
    pairs = []
    for i, a in enumerate(lower.elements):
        for j, b in enumerate(lower.elements):
            if lower.leq(a, b):
                pairs.append((lo[i], lo[j]))
    for i, a in enumerate(upper.elements):
        for j, b in enumerate(upper.elements):
            if upper.leq(a, b):
                pairs.append((hi[i], hi[j]))
    pairs.extend((a, b) for a in lo for b in hi)
    return FiniteLattice.from_poset(FinitePoset.from_leq_pairs(tuple(lo + hi), pairs))


def product_lattice(a: FiniteLattice, b: FiniteLattice) -> FiniteLattice:
    els = tuple(f"{x}*{y}" for x in a.elements for y in b.elements)
    pairs = []
    for x1 in a.elements:
        for y1 in b.elements:
            for x2 in a.elements:
                for y2 in b.elements:
                    if a.leq(x1, x2) and b.leq(y1, y2):
                        pairs.append((f"{x1}*{y1}", f"{x2}*{y2}"))
    return FiniteLattice.from_poset(FinitePoset.from_leq_pairs(els, pairs))


def b2_plus_top() -> FiniteLattice:
    """Boolean-on-2-atoms with one extra point stacked on top."""
    return vertical_sum(boolean2(), chain_lattice(1, ["t"]))


def b2_plus_bottom() -> FiniteLattice:
    return vertical_sum(chain_lattice(1, ["s"]), boolean2())
