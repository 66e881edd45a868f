"""Text file formats and run manifests. All writers emit canonical field
order so identical inputs give byte-identical files."""

from __future__ import annotations

import hashlib
import itertools
import json
from pathlib import Path

from . import __version__
from .errors import FormatError
from .lattice import FiniteLattice
from .permstruct import PermStructure
from .spaces import LambdaSpace
from .sqorders import OrderedLambdaStructure, SubquotientOrder


def _lines(path: str | Path) -> list[tuple[int, str]]:
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise FormatError(f"cannot read {path}: {e}") from e
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line and not line.startswith("#"):
            out.append((lineno, line))
    return out


# ---------------------------------------------------------------------------
# lattice files


def load_lattice(path: str | Path) -> FiniteLattice:
    """Line 1 names the elements; ``cover: x < y`` lines give the covering
    relation. Order closure and meet/join tables are computed on load."""
    elements = None
    covers = []
    for lineno, line in _lines(path):
        if line.startswith("elements:"):
            elements = tuple(line.split(":", 1)[1].split())
        elif line.startswith("cover:"):
            body = line.split(":", 1)[1]
            parts = body.split("<")
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'cover: x < y'")
            covers.append((parts[0].strip(), parts[1].strip()))
        else:
            raise FormatError(f"{path}:{lineno}: unrecognized line {line!r}")
    if elements is None:
        raise FormatError(f"{path}: missing 'elements:' header")
    for a, b in covers:
        if a not in elements or b not in elements:
            raise FormatError(f"{path}: cover names unknown element ({a}, {b})")
    lat = FiniteLattice.from_cover_relations(elements, covers)
    poset_report = lat.poset.validate()
    if not poset_report.ok:
        raise FormatError(f"{path}: cover relation is not a partial order "
                          f"({poset_report.violations[0].message})")
    return lat


def dump_lattice(lat: FiniteLattice) -> str:
    lines = ["elements: " + " ".join(lat.elements)]
    for i, j in lat.poset.covers:
        lines.append(f"cover: {lat.elements[i]} < {lat.elements[j]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# space / structure files


def read_lattice_ref(path: str | Path) -> str | None:
    for _, line in _lines(path):
        if line.startswith("lattice:"):
            return line.split(":", 1)[1].strip()
    return None


def load_space(path: str | Path, lattice: FiniteLattice | None = None) -> LambdaSpace:
    space, orders = load_structure(path, lattice)
    if orders:
        raise FormatError(f"{path}: expected a plain space file, found order blocks")
    return space


def load_structure(path: str | Path,
                   lattice: FiniteLattice | None = None) -> tuple[LambdaSpace, tuple]:
    """Space file with optional subquotient-order blocks. The header
    references the lattice file (relative to this file) unless a lattice is
    supplied by the caller."""
    path = Path(path)
    points = None
    distances = {}
    order_blocks = []
    for lineno, line in _lines(path):
        if line.startswith("lattice:"):
            ref = line.split(":", 1)[1].strip()
            if lattice is None:
                lattice = load_lattice((path.parent / ref))
        elif line.startswith("points:"):
            points = tuple(line.split(":", 1)[1].split())
        elif line.startswith("d:"):
            parts = line.split(":", 1)[1].split()
            if len(parts) != 3:
                raise FormatError(f"{path}:{lineno}: expected 'd: x y lambda'")
            distances[(parts[0], parts[1])] = parts[2]
        elif line.startswith("sq:"):
            parts = line.split(":", 1)[1].split()
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'sq: BOTTOM TOP'")
            order_blocks.append({"bottom": parts[0], "top": parts[1], "rank": {}})
        elif line.startswith("rank:"):
            if not order_blocks:
                raise FormatError(f"{path}:{lineno}: 'rank:' before any 'sq:' block")
            parts = line.split(":", 1)[1].split()
            if len(parts) != 2:
                raise FormatError(f"{path}:{lineno}: expected 'rank: CLASS_REP INT'")
            order_blocks[-1]["rank"][parts[0]] = int(parts[1])
        else:
            raise FormatError(f"{path}:{lineno}: unrecognized line {line!r}")
    if lattice is None:
        raise FormatError(f"{path}: missing 'lattice:' header")
    if points is None:
        raise FormatError(f"{path}: missing 'points:' header")
    for (x, y), lam in distances.items():
        if x not in points or y not in points:
            raise FormatError(f"{path}: distance names unknown point ({x}, {y})")
        if lam not in lattice.index:
            raise FormatError(f"{path}: unknown lattice element {lam!r}")
    missing = [(x, y) for x, y in itertools.combinations(points, 2)
               if (x, y) not in distances and (y, x) not in distances]
    if missing:
        raise FormatError(f"{path}: missing distances for pairs {missing[:5]}")
    space = LambdaSpace.from_distances(lattice, points, distances)
    orders = tuple(
        SubquotientOrder(space, blk["bottom"], blk["top"], blk["rank"])
        for blk in order_blocks)
    return space, orders


def dump_structure(s: OrderedLambdaStructure | LambdaSpace,
                   lattice_ref: str = "lattice.lat") -> str:
    space = s.space if isinstance(s, OrderedLambdaStructure) else s
    orders = s.orders if isinstance(s, OrderedLambdaStructure) else ()
    lines = [f"lattice: {lattice_ref}", "points: " + " ".join(space.points)]
    for i, x in enumerate(space.points):
        for j in range(i + 1, space.n):
            lines.append(f"d: {x} {space.points[j]} "
                         f"{space.lattice.elements[space.dist[i][j]]}")
    for o in orders:
        lines.append(f"sq: {o.bottom} {o.top}")
        for rep in sorted(o.rank, key=space.pindex.__getitem__):
            lines.append(f"rank: {rep} {o.rank[rep]}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# permutation-structure files


def load_perm(path: str | Path) -> PermStructure:
    """Header ``n N``; one line per point with its rank in each order."""
    rows = _lines(path)
    if not rows:
        raise FormatError(f"{path}: empty file")
    header = rows[0][1].split()
    if len(header) != 2:
        raise FormatError(f"{path}: header must be 'n N'")
    n, N = int(header[0]), int(header[1])
    points = []
    ranks = [[] for _ in range(n)]
    for lineno, line in rows[1:]:
        parts = line.split()
        if len(parts) != n + 1:
            raise FormatError(f"{path}:{lineno}: expected point id and {n} ranks")
        points.append(parts[0])
        for t in range(n):
            ranks[t].append(int(parts[t + 1]))
    if len(points) != N:
        raise FormatError(f"{path}: header says {N} points, found {len(points)}")
    return PermStructure(tuple(points), tuple(tuple(r) for r in ranks))


def dump_perm(p: PermStructure) -> str:
    lines = [f"{p.n} {p.N}"]
    for i, pt in enumerate(p.points):
        lines.append(pt + " " + " ".join(str(p.ranks[t][i]) for t in range(p.n)))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# chain cover files


def load_cover(path: str | Path) -> list[list[str]]:
    chains = []
    for lineno, line in _lines(path):
        if not line.startswith("chain:"):
            raise FormatError(f"{path}:{lineno}: expected 'chain: a b c'")
        chains.append(line.split(":", 1)[1].split())
    return chains


# ---------------------------------------------------------------------------
# manifests


def file_digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def write_manifest(out_path: str | Path, command: str, config: dict,
                   input_paths: dict[str, str]) -> Path:
    """Emit ``<out>.manifest`` next to a generated artifact; re-running the
    recorded command line reproduces the artifact byte for byte."""
    manifest = {
        "command": command,
        "config": config,
        "version": __version__,
        "input_digests": {name: file_digest(p) for name, p in input_paths.items()},
    }
    mpath = Path(str(out_path) + ".manifest")
    mpath.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return mpath


def load_manifest(path: str | Path) -> dict:
    return json.loads(Path(path).read_text())
