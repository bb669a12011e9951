"""Command-line interface: ``endotriv <command> [GROUP | --builtin SPEC] -p P ...``.

Every command writes one JSON document (``"schema": "endotriv/1"``) to
standard output.  Exit codes: 0 on success, 2 on validation errors (bad group
file, non-prime p, malformed values), 3 when a size guard trips.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import bisets, borel_smith, burnside, complexes
from .builtin import builtin
from .groups import (BudgetExceeded, GroupError, PermGroup, is_power_of, is_prime, mask_members,
                     read_group_file)
from .superclass import omega_matrix

SCHEMA = "endotriv/1"
EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


class UsageError(ValueError):
    pass


# ------------------------------------------------------------- helpers

def _load_group(path: str | None, spec: str | None) -> tuple[PermGroup, str]:
    if (path is None) == (spec is None):
        raise UsageError("give exactly one of a group file or --builtin")
    if spec is not None:
        return builtin(spec), f"builtin:{spec}"
    try:
        return read_group_file(path), path
    except OSError as exc:
        raise UsageError(f"cannot read group file: {exc}") from exc


def _group_json(g: PermGroup, source: str) -> dict:
    return {"source": source, "order": g.order, "degree": g.degree,
            "generators": [list(s) for s in g.generators]}


def _prime(p: int | None) -> int:
    if p is None:
        raise UsageError("-p is required for this command")
    if not is_prime(p):
        raise UsageError(f"{p} is not prime")
    return p


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(" ", "").split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"expected comma-separated integers, got {text!r}") from exc


def _doc(command: str, g: PermGroup, origin: str, p: int | None, **body) -> dict:
    out = {"schema": SCHEMA, "command": command, "group": _group_json(g, origin)}
    if p is not None:
        out["p"] = p
    out.update(body)
    return out


def _class_legend(g: PermGroup) -> list[dict]:
    lat = g.lattice
    out = []
    for c in range(lat.num_classes):
        r = lat.rep(c)
        cyclic = any(g.element_order(x) == r.order for x in r.members)
        out.append({"index": c, "order": r.order, "class_size": len(lat.classes[c]),
                    "cyclic": cyclic, "generators": [list(g.elements[x]) for x in r.gens]})
    return out


def _lattice_json(lat) -> dict:
    return {"basis": [list(b) for b in lat.basis], "rank": lat.rank, "index": lat.index()}


# ------------------------------------------------------------- commands

def cmd_lattice(args) -> tuple[dict, list[list] | None]:
    g, src = _load_group(args.group, args.builtin)
    p = _prime(args.p)
    poset = g.lattice.p_subposet(p)
    om = omega_matrix(poset)
    doc = _doc("lattice", g, src, p,
               subgroup_classes=_class_legend(g),
               p_subgroup_classes=[dict(e, lattice_class=c)
                                   for e, c in zip(poset.legend(), poset.classes)],
               subconjugacy=om.w, mobius=om.inv, legend=poset.legend())
    rows = [["index", "order", "class_size", "cyclic"]]
    rows += [[e["index"], e["order"], e["class_size"], int(e["cyclic"])] for e in doc["subgroup_classes"]]
    return doc, rows


def cmd_cfb(args):
    g, src = _load_group(args.group, args.builtin)
    p = _prime(args.p)
    poset = g.lattice.p_subposet(p)
    system = borel_smith.borel_smith_system(poset)
    lat = borel_smith.cfb_lattice(poset)
    if args.artin:
        system = system + borel_smith.artin_system(poset)
        lat = borel_smith.cfba_lattice(poset)
    doc = _doc("cfb", g, src, p, artin=bool(args.artin), conditions=system.to_json(),
               lattice=_lattice_json(lat), legend=poset.legend())
    rows = [["kind", "modulus"] + [f"c{i}" for i in range(len(poset))]]
    rows += [[c.kind, c.modulus] + list(c.row) for c in system]
    return doc, rows


def cmd_dade(args):
    g, src = _load_group(args.group, args.builtin)
    p = _prime(args.p)
    poset = g.lattice.p_subposet(p)
    inv = borel_smith.dade_omega_invariants(poset)
    return _doc("dade", g, src, p, dade_omega=inv.to_json(), text=str(inv), legend=poset.legend()), None


def cmd_classify(args):
    g, src = _load_group(args.group, args.builtin)
    p = _prime(args.p)
    poset = g.lattice.p_subposet(p)
    inv = borel_smith.classify_endotrivial_group(poset)
    return _doc("classify", g, src, p, free_rank=inv.free_rank, torsion=list(inv.torsion),
                text=str(inv), legend=poset.legend()), None


def cmd_complex(args):
    g, src = _load_group(args.group, args.builtin)
    p = _prime(args.p)
    poset = g.lattice.p_subposet(p)
    f = _int_list(args.hmarks)
    if len(f) != len(poset):
        raise UsageError(f"--hmarks needs {len(poset)} values, got {len(f)}")
    c = complexes.build_from_hmarks(g, p, f, budget=args.budget, verify=False)
    report = complexes.h_marks(c)
    body = {
        "hmarks": f,
        "coefficients": list(complexes.mobius_inversion(f, poset)),
        "term_dims": {str(i): n for i, n in c.dims.items()},
        "report": report.to_json(),
        "reproduces_hmarks": report.all_concentrated and list(report.marks) == f,
        "endotrivial": complexes.verify_endotrivial(c, report),
        "endosplit_trivial_vfg": complexes.verify_endosplit_trivial_VFG(c, report),
        "borel_smith": bool(borel_smith.check(f, borel_smith.borel_smith_system(poset))),
    }
    if is_power_of(g.order, p):
        lam = complexes.lefschetz(c)
        body["lefschetz"] = lam.to_json()
    if args.emit_complex:
        body["complex"] = complexes.complex_to_json(c, src)
    body["legend"] = poset.legend()
    return _doc("complex", g, src, p, **body), None


def cmd_burnside(args):
    g, src = _load_group(args.group, args.builtin)
    ps = sorted({q for q in range(2, g.order + 1) if g.order % q == 0 and is_prime(q)})
    if len(ps) != 1:
        raise UsageError("burnside needs a nontrivial p-group")
    p = ps[0]
    marks = burnside.table_of_marks(g)
    us = burnside.units(g)
    body = {"table_of_marks": marks, "units": [u.to_json() for u in us]}
    body["tornehave"] = burnside.tornehave_check(g, p).to_json()
    if not args.skip_surjectivity:
        body["lefschetz_surjectivity"] = burnside.lefschetz_surjectivity_check(g, p, args.budget).to_json()
    body["legend"] = _class_legend(g)
    rows = [["K\\H"] + [str(i) for i in range(len(marks))]]
    rows += [[str(k)] + row for k, row in enumerate(marks)]
    return _doc("burnside", g, src, p, **body), rows


def _sub_of(g: PermGroup, path: str | None, spec: str | None, cls: int | None):
    from .groups import find_subgroup
    given = [x is not None for x in (path, spec, cls)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --subgroup, --subgroup-builtin or --subgroup-class")
    if cls is not None:
        if not 0 <= cls < g.lattice.num_classes:
            raise UsageError(f"subgroup class {cls} out of range")
        return g.lattice.rep(cls)
    h, _ = _load_group(path, spec)
    if h.degree != g.degree:
        raise UsageError("subgroup generators must act on the same points as the group")
    return find_subgroup(g, h.generators)


def cmd_biset(args):
    g, src = _load_group(args.group, args.builtin)
    p = _prime(args.p)
    sub = _sub_of(g, args.subgroup, args.subgroup_builtin, args.subgroup_class)
    f = _int_list(args.values)
    op = args.op
    if op in ("res", "ind"):
        emb = bisets.Embedding.of(g, sub)
        source, target = (g, emb.sub) if op == "res" else (emb.sub, g)
        out = bisets.res(emb, f, p) if op == "res" else bisets.ind(emb, f, p)
    else:
        from .groups import is_normal
        if not is_normal(g, sub):
            raise UsageError("inflation and deflation need a normal subgroup")
        proj = bisets.Projection.of(g, sub)
        source, target = (proj.target, g) if op == "inf" else (g, proj.target)
        out = bisets.inf(proj, f, p) if op == "inf" else bisets.deflate(proj, f, p)
    body = {
        "op": op,
        "subgroup": {"order": sub.order, "elements": [list(g.elements[x]) for x in mask_members(sub.mask)]},
        "source": {"order": source.order, "values": f, "legend": source.lattice.p_subposet(p).legend()},
        "target": {"order": target.order, "values": list(out), "legend": out.poset.legend()},
    }
    return _doc("biset", g, src, p, **body), None


COMMANDS = {
    "lattice": cmd_lattice, "cfb": cmd_cfb, "dade": cmd_dade, "classify": cmd_classify,
    "complex": cmd_complex, "burnside": cmd_burnside, "biset": cmd_biset,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="endotriv",
        description="Borel-Smith functions, endotrivial complexes and Burnside units of finite groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp, needs_p=True):
        sp.add_argument("group", nargs="?", help="group file (degree line, one generator per line)")
        sp.add_argument("--builtin", metavar="SPEC",
                        help="cyclic:n | dihedral:2n | quaternion:8 | elemab:p,k | klein | s3 | frobenius:20")
        if needs_p:
            sp.add_argument("-p", type=int, required=True, help="the prime")
        sp.add_argument("--format", choices=("json", "tsv"), default="json")

    common(sub.add_parser("lattice", help="subgroup classes, p-subposet, Möbius matrix"))
    sp = sub.add_parser("cfb", help="Borel-Smith conditions and lattice")
    common(sp)
    sp.add_argument("--artin", action="store_true", help="add the oriented Artin congruences")
    common(sub.add_parser("dade", help="invariant factors of CF / CF_ba+"))
    common(sub.add_parser("classify", help="invariants of the group of endotrivial complexes"))
    sp = sub.add_parser("complex", help="tensor-product complex with prescribed h-marks")
    common(sp)
    sp.add_argument("--hmarks", required=True, metavar="V1,V2,...")
    sp.add_argument("--budget", type=int, default=complexes.DEFAULT_TENSOR_BUDGET)
    sp.add_argument("--emit-complex", action="store_true", help="include the serialized complex")
    sp = sub.add_parser("burnside", help="table of marks, units, Tornehave and Lefschetz checks")
    common(sp, needs_p=False)
    sp.add_argument("--budget", type=int, default=complexes.DEFAULT_TENSOR_BUDGET)
    sp.add_argument("--skip-surjectivity", action="store_true")
    sp = sub.add_parser("biset", help="restriction, inflation, deflation, induction")
    sp.add_argument("op", choices=("res", "inf", "def", "ind"))
    common(sp)
    sp.add_argument("--values", required=True, metavar="V1,V2,...",
                    help="superclass function on the source group")
    sp.add_argument("--subgroup", metavar="FILE", help="subgroup (or normal subgroup) generators")
    sp.add_argument("--subgroup-builtin", metavar="SPEC")
    sp.add_argument("--subgroup-class", type=int, metavar="I", help="subgroup class index")
    return parser


def _emit(doc: dict, rows, fmt: str, out) -> None:
    if fmt == "tsv":
        if rows is None:
            raise UsageError("TSV output is only available for lattice, cfb and burnside")
        for r in rows:
            out.write("\t".join(str(x) for x in r) + "\n")
        return
    out.write(json.dumps(doc, indent=2) + "\n")


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    if getattr(args, "budget", 1) is not None and getattr(args, "budget", 1) <= 0:
        print("error: budget must be positive", file=sys.stderr)
        return EXIT_INVALID
    try:
        doc, rows = COMMANDS[args.command](args)
        _emit(doc, rows, args.format, out)
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, GroupError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
