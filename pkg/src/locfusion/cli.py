"""Batch front-end: build instances from descriptors, run the
verification suites, and emit deterministic JSON reports.

Exit codes: 0 all clauses pass; 1 a clause failed; 2 descriptor or
precondition error; 3 a cap was exceeded or a verdict came back unknown.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import fusion as fu
from . import instances as inst
from . import products as pr
from .fusion import MorphismCapExceeded
from .locality import (LocalityError, _check_delta_closures,
                       validate_locality)
from .partial_subgroups import (verify_restriction_product,
                                verify_theorem_nk_normal,
                                verify_theorem_nk_subnormal)
from .permgroup import GroupError, SizeCapExceeded
from .report import PreconditionError

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


def _common(sub: argparse.ArgumentParser):
    sub.add_argument("descriptor", help="bundled instance name or JSON path")
    sub.add_argument("--out", help="write the JSON report to this path")
    sub.add_argument("--seed", type=int, default=0)
    sub.add_argument("--max-word-len", type=int, default=None)
    sub.add_argument("--group-cap", type=int, default=None)
    sub.add_argument("--morphism-cap", type=int, default=None)
    sub.add_argument("--json", action="store_true",
                     help="echo the report to stdout even when --out is set")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="locfusion",
        description="verification suites for localities and fusion systems")
    top = ap.add_subparsers(dest="command", required=True)

    grp = top.add_parser("group").add_subparsers(dest="sub", required=True)
    _common(grp.add_parser("info"))

    loc = top.add_parser("locality").add_subparsers(dest="sub", required=True)
    _common(loc.add_parser("build"))
    _common(loc.add_parser("validate"))

    for name in ("theorem1", "theorem2", "restriction"):
        _common(top.add_parser(name))

    fus = top.add_parser("fusion").add_subparsers(dest="sub", required=True)
    _common(fus.add_parser("build"))
    _common(fus.add_parser("saturate-check"))

    for name in ("product-ed", "verify-ed"):
        p = top.add_parser(name)
        _common(p)
        p.add_argument("--product", default=None,
                       help="product name from the descriptor (default: all)")

    _common(top.add_parser("suite"))
    return ap


# -- command handlers --------------------------------------------------------

def cmd_group_info(d, args):
    G = inst.group_of(d)
    S = inst.sylow_of(d, G)
    return {"suite": "group_info", "instance": d["name"],
            "degree": G.degree, "order": G.order, "p": d["p"],
            "sylow_order": S.order}, EXIT_OK


def cmd_locality_build(d, args):
    L = inst.build_locality(d)
    return {"suite": "locality_build", "instance": d["name"],
            "carrier_size": L.n, "s_order": len(L.s_ids),
            "delta_size": len(L.delta), "p": L.p}, EXIT_OK


def cmd_locality_validate(d, args):
    G = inst.group_of(d)
    S = inst.sylow_of(d, G)
    delta = inst.delta_of(d, G, S)
    _check_delta_closures(G, S, {P.eset for P in delta})
    mwl = args.max_word_len or d.get("max_word_length", 4)
    L = inst.build_locality(d, max_word_length=mwl)
    rep = validate_locality(L, max_word_length=mwl)
    out = {"suite": "locality_validate", "instance": d["name"],
           **rep.to_json()}
    return out, EXIT_OK if rep.ok else EXIT_FAIL


def _theorem_reports(d, args, which: str):
    cfg = d.get(which)
    if not cfg:
        raise inst.DescriptorError(f"descriptor has no {which!r} section")
    L = inst.build_locality(d)
    N = inst.resolve_ids(L, inst.named_subgroup(d, L.realization, cfg["n"]))
    verify = (verify_theorem_nk_normal if which == "theorem1"
              else verify_theorem_nk_subnormal)
    reports = []
    for kname in cfg["k"]:
        K = inst.k_choice(d, L, kname)
        rep = verify(L, N, K, instance=f"{d['name']}:{kname}")
        reports.append(rep.to_json())
    ok = all(r["ok"] for r in reports)
    return {"suite": which, "instance": d["name"],
            "ok": ok, "reports": reports}, EXIT_OK if ok else EXIT_FAIL


def cmd_theorem1(d, args):
    return _theorem_reports(d, args, "theorem1")


def cmd_theorem2(d, args):
    return _theorem_reports(d, args, "theorem2")


def cmd_restriction(d, args):
    cfg = d.get("restriction")
    if not cfg:
        raise inst.DescriptorError("descriptor has no 'restriction' section")
    L = inst.build_locality(d)
    G = L.realization
    sub_delta = inst.delta_of({**d, "delta": cfg["delta"]}, G,
                              inst.sylow_of(d, G))
    delta_ids = [frozenset(L.id_of[g] for g in P.eset) for P in sub_delta]
    N = inst.resolve_ids(L, inst.named_subgroup(d, G, cfg["n"]))
    K = inst.k_choice(d, L, cfg["k"])
    rep = verify_restriction_product(L, delta_ids, N, K, instance=d["name"])
    return rep.to_json() | {"suite": "restriction"}, \
        EXIT_OK if rep.ok else EXIT_FAIL


def cmd_fusion_build(d, args):
    L = inst.build_locality(d)
    F = fu.fusion_of_locality(L)
    return {"suite": "fusion_build", "instance": d["name"],
            **F.to_json()}, EXIT_OK


def cmd_fusion_saturate(d, args):
    G = inst.group_of(d)
    S = inst.sylow_of(d, G)
    F = fu.fusion_of_group(G, S, p=d["p"])
    sat = fu.is_saturated(F)
    return {"suite": "saturate_check", "instance": d["name"],
            "saturated": sat, "morphisms": len(F.maps)}, \
        EXIT_OK if sat else EXIT_FAIL


def _products_of(d, args):
    names = ([args.product] if getattr(args, "product", None)
             else sorted(d.get("fusion_products", {})))
    if not names:
        raise inst.DescriptorError("descriptor has no fusion products")
    return names


def _compute_ed(st):
    """Both routes where defined: (ED, route, cross_route_agreement)."""
    agreement = None
    try:
        ed = pr.product_ED(st["F"], st["E"], st["D"])
        route = "formula_e"
        try:
            ed_loc = pr.product_ed_via_locality(st["L"], st["N_ids"],
                                                st["K_ids"])
            agreement = ed == ed_loc
        except PreconditionError:
            pass
    except pr.NormalityRequired:
        ed = pr.product_ed_via_locality(st["L"], st["N_ids"], st["K_ids"])
        route = "locality"
    return ed, route, agreement


def cmd_product_ed(d, args):
    out, worst = [], EXIT_OK
    for name in _products_of(d, args):
        st = inst.product_setup(d, name)
        ed, route, agreement = _compute_ed(st)
        matches = ed == st["oracle"]
        out.append({"instance": st["name"], "route": route,
                    "matches_oracle": matches,
                    "cross_route_agreement": agreement,
                    "fusion": ed.to_json()})
        if not (matches and agreement in (True, None)):
            worst = EXIT_FAIL
    return {"suite": "product_ed", "instance": d["name"],
            "products": out}, worst


def cmd_verify_ed(d, args):
    out, worst = [], EXIT_OK
    for name in _products_of(d, args):
        st = inst.product_setup(d, name)
        ed, route, agreement = _compute_ed(st)
        comparisons = (pr.enumerate_subnormal_subsystems(st["F"])
                       if st["enumerate_minimality"] else None)
        rep = pr.verify_ed(st["F"], st["E"], st["D"], ed,
                           instance=st["name"], route=route,
                           comparisons=comparisons)
        rj = pr.ed_report_json(rep)
        rj["cross_route_agreement"] = agreement
        rj["matches_oracle"] = ed == st["oracle"]
        out.append(rj)
        if not (pr.ed_ok(rep) and rj["matches_oracle"]
                and agreement in (True, None)):
            worst = EXIT_FAIL
    return {"suite": "verify_ed", "instance": d["name"],
            "products": out}, worst


def cmd_suite(d, args):
    steps = [("locality_validate", cmd_locality_validate),
             ("saturate_check", cmd_fusion_saturate)]
    if d.get("theorem1"):
        steps.append(("theorem1", cmd_theorem1))
    if d.get("theorem2"):
        steps.append(("theorem2", cmd_theorem2))
    if d.get("restriction"):
        steps.append(("restriction", cmd_restriction))
    if d.get("fusion_products"):
        steps.append(("product_ed", cmd_product_ed))
        steps.append(("verify_ed", cmd_verify_ed))
    reports, worst = [], EXIT_OK
    for _name, fn in steps:
        rep, code = fn(d, args)
        reports.append(rep)
        worst = max(worst, code)
    return {"suite": "suite", "instance": d["name"],
            "ok": worst == EXIT_OK, "reports": reports}, worst


HANDLERS = {
    ("group", "info"): cmd_group_info,
    ("locality", "build"): cmd_locality_build,
    ("locality", "validate"): cmd_locality_validate,
    ("theorem1", None): cmd_theorem1,
    ("theorem2", None): cmd_theorem2,
    ("restriction", None): cmd_restriction,
    ("fusion", "build"): cmd_fusion_build,
    ("fusion", "saturate-check"): cmd_fusion_saturate,
    ("product-ed", None): cmd_product_ed,
    ("verify-ed", None): cmd_verify_ed,
    ("suite", None): cmd_suite,
}


def _emit(report: dict, args) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        if args.json:
            sys.stdout.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.morphism_cap:
        fu.DEFAULT_MORPHISM_CAP = args.morphism_cap
    handler = HANDLERS[(args.command, getattr(args, "sub", None))]
    try:
        d = inst.load_descriptor(args.descriptor)
        report, code = handler(d, args)
    except SizeCapExceeded as e:
        _emit({"error": str(e), "kind": type(e).__name__,
               "seed": args.seed}, args)
        return EXIT_CAP
    except (inst.DescriptorError, LocalityError, PreconditionError,
            GroupError) as e:
        _emit({"error": str(e), "kind": type(e).__name__,
               "seed": args.seed}, args)
        return EXIT_INPUT
    except MorphismCapExceeded as e:
        _emit({"error": str(e), "kind": type(e).__name__,
               "seed": args.seed}, args)
        return EXIT_CAP
    report["seed"] = args.seed
    if report.get("ok") is None and code == EXIT_OK:
        report["ok"] = True
    _emit(report, args)
    if code == EXIT_OK and _has_unknown(report):
        code = EXIT_CAP
    return code


def _has_unknown(obj) -> bool:
    if isinstance(obj, dict):
        return any(_has_unknown(v) for v in obj.values())
    if isinstance(obj, list):
        return any(_has_unknown(v) for v in obj)
    return obj == "unknown"


if __name__ == "__main__":
    sys.exit(main())
