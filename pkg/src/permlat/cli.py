"""Command-line front door. Exit codes: 0 success/valid, 1 invalid input or
failed check, 2 usage error. ``--json`` switches stdout to a stable
machine-readable report (sorted keys, canonical ordering)."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .errors import PermlatError
from .formats import (dump_perm, dump_structure, load_cover, load_lattice,
                      load_perm, load_structure, read_lattice_ref,
                      write_manifest)
from .generic import (GenerationConfig, extension_property_check, generate_generic,
                      homogeneity_check)
from .lattice import (dimension_bounds, enumerate_distributive_lattices,
                      is_distributive, validate_lattice)
from .permstruct import cameron_enumeration, decode_relations, encode_orders, profile
from .spaces import (amalgamation_failure_probe, canonical_amalgam, validate_space)
from .sqorders import OrderedLambdaStructure, compose_lex, split_convex_linear


def _threads() -> int:
    # sequential implementation; the env var is an upper cap and is recorded
    # in manifests for reproducibility
    try:
        return max(1, int(os.environ.get("PERMLAT_THREADS", "1")))
    except ValueError:
        return 1


def _emit(args, payload: dict, human: list[str]) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True, default=str))
    else:
        for line in human:
            print(line)


def _carry_lattice_ref(infile: str, out: str | None) -> str:
    """Re-point a structure file's lattice reference at the output location."""
    ref = read_lattice_ref(infile)
    if ref is None:
        return "lattice.lat"
    if out is None:
        return ref
    target = (Path(infile).parent / ref).resolve()
    return os.path.relpath(target, Path(out).resolve().parent)


def _parse_orders_spec(spec: str) -> list[tuple[str, str]]:
    out = []
    for item in spec.split(","):
        parts = item.split(":")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise PermlatError(f"bad order signature {item!r}; expected BOTTOM:TOP")
        out.append((parts[0], parts[1]))
    return out


# ---------------------------------------------------------------------------
# lattice commands


def cmd_lattice_check(args) -> int:
    lat = load_lattice(args.file)
    report = validate_lattice(lat)
    dist = is_distributive(lat) if report.ok else None
    payload = {"validation": report.as_dict()}
    human = [f"valid: {report.ok}"]
    for v in report.violations:
        human.append(f"  violation {v.rule}: {v.witness} ({v.message})")
    code = 0 if report.ok else 1
    if dist is not None:
        payload["distributive"] = dist.distributive
        payload["witness"] = list(dist.witness) if dist.witness else None
        human.append(f"distributive: {dist.distributive}")
        if not dist.distributive:
            human.append(f"  not distributive: {dist.kind} sublattice {dist.witness}")
            code = 1
    _emit(args, payload, human)
    return code


def cmd_lattice_bounds(args) -> int:
    lat = load_lattice(args.file)
    b = dimension_bounds(lat)
    payload = {
        "lower": b.lower, "upper": b.upper,
        "cover": [list(c) for c in b.cover.chains] if b.cover else [],
        "exhaustive": b.exhaustive, "notes": list(b.notes),
    }
    human = [f"lower bound: {b.lower}", f"upper bound: {b.upper}",
             f"cover: {[list(c) for c in b.cover.chains]}"]
    human += [f"note: {n}" for n in b.notes]
    _emit(args, payload, human)
    return 0


def cmd_lattice_enum(args) -> int:
    lats = list(enumerate_distributive_lattices(args.max_size))
    payload = {"count": len(lats),
               "lattices": [{"size": l.n, "covers": [
                   [l.elements[i], l.elements[j]] for i, j in l.poset.covers]}
                   for l in lats]}
    human = [f"{len(lats)} distributive lattices with <= {args.max_size} elements"]
    for l in lats:
        human.append(f"  size {l.n}: covers "
                     f"{[(l.elements[i], l.elements[j]) for i, j in l.poset.covers]}")
    _emit(args, payload, human)
    return 0


# ---------------------------------------------------------------------------
# space commands


def cmd_space_check(args) -> int:
    lat = load_lattice(args.lattice) if args.lattice else None
    space, orders = load_structure(args.file, lat)
    report = validate_space(space)
    payload = {"validation": report.as_dict()}
    human = [f"valid: {report.ok}"]
    for v in report.violations:
        human.append(f"  violation {v.rule}: {v.witness} ({v.message})")
    _emit(args, payload, human)
    return 0 if report.ok else 1


def cmd_space_amalgam(args) -> int:
    base, _ = load_structure(args.base)
    f1, _ = load_structure(args.f1, base.lattice)
    f2, _ = load_structure(args.f2, base.lattice)
    result = canonical_amalgam(base, f1, f2)
    text = dump_structure(result.space, lattice_ref=args.lattice_ref or "lattice.lat")
    payload = {"points": list(result.space.points),
               "merged": result.merged,
               "structure": text}
    human = [text.rstrip()]
    if result.merged:
        human.append(f"identified points: {result.merged}")
    if args.out:
        Path(args.out).write_text(text)
    _emit(args, payload, human)
    return 0


def cmd_space_probe(args) -> int:
    lat = load_lattice(args.file)
    found = amalgamation_failure_probe(lat, max_base=args.max_base, max_new=args.max_new)
    if found is None:
        _emit(args, {"failure": None}, ["no amalgamation failure found"])
        return 0
    payload = {"failure": {
        "base": list(found.base.points),
        "f1": dump_structure(found.f1),
        "f2": dump_structure(found.f2),
    }}
    human = ["amalgamation failure instance:",
             dump_structure(found.f1).rstrip(), dump_structure(found.f2).rstrip()]
    _emit(args, payload, human)
    return 1


# ---------------------------------------------------------------------------
# subquotient-order commands


def cmd_sq_check(args) -> int:
    space, orders = load_structure(args.file)
    s = OrderedLambdaStructure(space, orders)
    report = s.validate()
    payload = {"validation": report.as_dict(), "orders": len(orders)}
    human = [f"valid: {report.ok} ({len(orders)} orders)"]
    for v in report.violations:
        human.append(f"  violation {v.rule}: {v.witness} ({v.message})")
    _emit(args, payload, human)
    return 0 if report.ok else 1


def cmd_sq_compose(args) -> int:
    space, orders = load_structure(args.file)
    lo, hi = orders[args.lo], orders[args.hi]
    composed = compose_lex(lo, hi)
    s = OrderedLambdaStructure(space, (composed,))
    text = dump_structure(s, lattice_ref=_carry_lattice_ref(args.file, args.out))
    if args.out:
        Path(args.out).write_text(text)
    _emit(args, {"structure": text}, [text.rstrip()])
    return 0


def cmd_sq_split(args) -> int:
    space, orders = load_structure(args.file)
    within, between = split_convex_linear(orders[args.order], args.at)
    s = OrderedLambdaStructure(space, (within, between))
    text = dump_structure(s, lattice_ref=_carry_lattice_ref(args.file, args.out))
    if args.out:
        Path(args.out).write_text(text)
    _emit(args, {"structure": text}, [text.rstrip()])
    return 0


# ---------------------------------------------------------------------------
# generation and checks


def cmd_gen(args) -> int:
    lat = load_lattice(args.lattice)
    signature = _parse_orders_spec(args.orders)
    cfg = GenerationConfig(seed=args.seed, target_size=args.size,
                           saturation_depth=args.depth)
    result = generate_generic(lat, signature, cfg,
                              with_saturation_report=not args.no_report)
    ref = os.path.relpath(args.lattice, Path(args.out).parent or ".")
    text = dump_structure(result.structure, lattice_ref=ref)
    Path(args.out).write_text(text)
    config = {"lattice": str(args.lattice), "orders": args.orders,
              "size": args.size, "depth": args.depth, "seed": args.seed,
              "threads": _threads()}
    write_manifest(args.out, "gen", config, {"lattice": args.lattice})
    payload = {"out": args.out, "points": result.structure.space.n,
               "steps": result.steps}
    human = [f"wrote {args.out} ({result.structure.space.n} points, "
             f"{result.steps} realization steps)"]
    if result.saturation:
        payload["saturation"] = result.saturation.as_dict()
        human.append(f"saturation ratio: {result.saturation.ratio:.4f} "
                     f"(pair ratio {result.saturation.pair_ratio:.4f})")
    _emit(args, payload, human)
    return 0


def cmd_check(args) -> int:
    space, orders = load_structure(args.infile)
    s = OrderedLambdaStructure(space, orders)
    if args.kind == "ext":
        report = extension_property_check(s, args.k)
        payload = report.as_dict()
        ok = report.ratio == 1.0
        human = [f"extension property ratio: {report.ratio:.4f} "
                 f"({report.pattern_realized}/{report.pattern_total} patterns; "
                 f"pair ratio {report.pair_ratio:.4f})"]
    else:
        report = homogeneity_check(s, args.k)
        payload = report.as_dict()
        ok = report.ok
        human = [f"homogeneity: {'ok' if ok else 'FAILED'} "
                 f"({report.pattern_failures} pattern failures, "
                 f"{report.extension_misses} raw boundary misses over "
                 f"{report.pairs_checked} checks)"]
    _emit(args, payload, human)
    return 0 if ok else 1


# ---------------------------------------------------------------------------
# permutation structures


def cmd_encode(args) -> int:
    space, orders = load_structure(args.infile)
    s = OrderedLambdaStructure(space, orders)
    cover = "auto" if args.cover == "auto" else load_cover(args.cover)
    result = encode_orders(s, cover=cover, seed=args.seed)
    text = dump_perm(result.perm)
    payload = {
        "orders_emitted": result.emitted,
        "bound": result.bound,
        "chains": [{"credited": p.credited, "nodes": p.nodes,
                    "base": p.base_index, "companions": p.companion_indices,
                    "hosted": {f"{lo}->{hi}": i for (lo, hi), i in p.hosted.items()}}
                   for p in result.codebook.chains],
        "codebook_relations": {e: sorted(map(list, vs))
                               for e, vs in result.codebook.relation_vectors.items()},
        "codebook_orders": {str(i): sorted(map(list, vs))
                            for i, vs in result.codebook.order_vectors.items()},
    }
    human = [f"emitted {result.emitted} linear orders (bound {result.bound})"]
    if args.out:
        Path(args.out).write_text(text)
        config = {"in": str(args.infile), "cover": args.cover, "seed": args.seed,
                  "threads": _threads()}
        write_manifest(args.out, "encode", config, {"in": args.infile})
        human.append(f"wrote {args.out}")
        payload["out"] = args.out
    else:
        human.append(text.rstrip())
        payload["perm"] = text
    _emit(args, payload, human)
    return 0


def cmd_decode(args) -> int:
    p = load_perm(args.infile)
    result = decode_relations(p)
    lat = result.lattice
    payload = {
        "sample_size": result.sample_size,
        "relation_count": len(result.relations),
        "distributive": result.distributive,
        "lattice_hasse": [[lat.elements[i], lat.elements[j]] for i, j in lat.poset.covers],
        "relations": [{
            "name": r.name, "blocks": len(r.partition),
            "meet_irreducible": r.meet_irreducible,
            "convex_in_orders": list(r.convex_in_orders),
            "vectors": sorted(map(list, r.vectors)),
        } for r in result.relations],
    }
    human = [f"{len(result.relations)} definable equivalence relations on "
             f"{result.sample_size} points; distributive: {result.distributive}",
             f"hasse edges: {[(lat.elements[i], lat.elements[j]) for i, j in lat.poset.covers]}"]
    for r in result.relations:
        human.append(f"  {r.name}: {len(r.partition)} blocks, "
                     f"convex in orders {list(r.convex_in_orders)}"
                     + (", meet-irreducible" if r.meet_irreducible else ""))
    _emit(args, payload, human)
    return 0


def cmd_profile(args) -> int:
    p = load_perm(args.infile)
    prof = profile(p, args.k)
    payload = {"k": args.k, "distinct_types": len(prof),
               "profile": {str(list(key)): count for key, count in sorted(prof.items())}}
    human = [f"{len(prof)} distinct {args.k}-point types"]
    for key, count in sorted(prof.items()):
        human.append(f"  {key}: {count}")
    _emit(args, payload, human)
    return 0


def cmd_cameron(args) -> int:
    result = cameron_enumeration(args.size, seed=args.seed)
    payload = {
        "distinct_profiles": result.distinct,
        "instances": {f"{lat}/{arr}": len(prof)
                      for (lat, arr), prof in result.profiles.items()},
    }
    human = [f"{result.distinct} distinct profiles over "
             f"{len(result.profiles)} two-order catalog instances"]
    for (lat, arr), prof in result.profiles.items():
        human.append(f"  {lat} {arr}: {len(prof)} 3-point types")
    _emit(args, payload, human)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="permlat")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_json(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    lattice = sub.add_parser("lattice").add_subparsers(dest="sub", required=True)
    p = lattice.add_parser("check")
    p.add_argument("file")
    add_json(p)
    p.set_defaults(func=cmd_lattice_check)
    p = lattice.add_parser("bounds")
    p.add_argument("file")
    add_json(p)
    p.set_defaults(func=cmd_lattice_bounds)
    p = lattice.add_parser("enum")
    p.add_argument("--max-size", type=int, default=6)
    add_json(p)
    p.set_defaults(func=cmd_lattice_enum)

    space = sub.add_parser("space").add_subparsers(dest="sub", required=True)
    p = space.add_parser("check")
    p.add_argument("file")
    p.add_argument("--lattice")
    add_json(p)
    p.set_defaults(func=cmd_space_check)
    p = space.add_parser("amalgam")
    p.add_argument("base")
    p.add_argument("f1")
    p.add_argument("f2")
    p.add_argument("--out")
    p.add_argument("--lattice-ref")
    add_json(p)
    p.set_defaults(func=cmd_space_amalgam)
    p = space.add_parser("probe")
    p.add_argument("file")
    p.add_argument("--max-base", type=int, default=3)
    p.add_argument("--max-new", type=int, default=2)
    add_json(p)
    p.set_defaults(func=cmd_space_probe)

    sq = sub.add_parser("sq").add_subparsers(dest="sub", required=True)
    p = sq.add_parser("check")
    p.add_argument("file")
    add_json(p)
    p.set_defaults(func=cmd_sq_check)
    p = sq.add_parser("compose")
    p.add_argument("file")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--out")
    add_json(p)
    p.set_defaults(func=cmd_sq_compose)
    p = sq.add_parser("split")
    p.add_argument("file")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--at", required=True)
    p.add_argument("--out")
    add_json(p)
    p.set_defaults(func=cmd_sq_split)

    p = sub.add_parser("gen")
    p.add_argument("--lattice", required=True)
    p.add_argument("--orders", required=True,
                   help="signature BOTTOM:TOP[,BOTTOM:TOP...]")
    p.add_argument("--size", type=int, required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--no-report", action="store_true")
    add_json(p)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check")
    p.add_argument("kind", choices=["ext", "hom"])
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, default=3)
    add_json(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("encode")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--cover", default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    add_json(p)
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode")
    p.add_argument("--in", dest="infile", required=True)
    add_json(p)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("profile")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--k", type=int, default=2)
    add_json(p)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("cameron")
    p.add_argument("--size", type=int, default=40)
    p.add_argument("--seed", type=int, default=0)
    add_json(p)
    p.set_defaults(func=cmd_cameron)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PermlatError as e:
        print(f"error [{e.code}]: {e}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
