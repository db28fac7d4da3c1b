"""Bundled instance descriptors and their builders.

Descriptors are JSON files shipped with the package.  A descriptor names
a permutation group, a prime, a Sylow subgroup (explicit or discovered),
an object-set rule, and named subgroup data used by the verification
suites: partial normal subgroups N, choices of K, and fusion-product
configurations (E, D, K, oracle).
"""

from __future__ import annotations

import json
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional

from .locality import (Locality, delta_min_order, locality_from_group)
from .permgroup import (FiniteGroup, Subgroup, all_subgroups,
                        generated_subgroup, sylow_subgroup)

BUNDLED = ("instance-a", "instance-b", "product-24", "product-48",
           "group-8", "group-60")


class DescriptorError(ValueError):
    pass


def load_descriptor(name_or_path: str) -> dict:
    """Load a bundled descriptor by name, or any descriptor by path."""
    p = Path(name_or_path)
    if p.suffix == ".json" and p.exists():
        text = p.read_text()
    else:
        stem = name_or_path.removesuffix(".json")
        if stem not in BUNDLED:
            raise DescriptorError(f"unknown descriptor {name_or_path!r}")
        text = (resources.files("locfusion") / "instances"
                / f"{stem}.json").read_text()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as e:
        raise DescriptorError(f"descriptor is not valid JSON: {e}") from e
    for key in ("name", "group", "p"):
        if key not in d:
            raise DescriptorError(f"descriptor missing {key!r}")
    return d


def _perm(images: list[int], degree: int) -> tuple:
    if sorted(images) != list(range(1, degree + 1)):
        raise DescriptorError(f"{images!r} is not a permutation of 1..{degree}")
    return tuple(x - 1 for x in images)


def group_of(d: dict) -> FiniteGroup:
    try:
        return FiniteGroup.from_descriptor(d["group"])
    except Exception as e:
        raise DescriptorError(f"bad group descriptor: {e}") from e


def sylow_of(d: dict, G: FiniteGroup) -> Subgroup:
    spec = d.get("sylow", "auto")
    if spec == "auto":
        return sylow_subgroup(G, d["p"])
    gens = [_perm(x, G.degree) for x in spec]
    S = generated_subgroup(G, gens)
    from .permgroup import _p_part
    if S.order != _p_part(G.order, d["p"]):
        raise DescriptorError("explicit sylow has wrong order")
    return S


def delta_of(d: dict, G: FiniteGroup, S: Subgroup) -> list[Subgroup]:
    spec = d.get("delta", {"min_order": 1})
    if spec.get("all"):
        return all_subgroups(G, within=S)
    if "min_order" in spec:
        return delta_min_order(G, S, spec["min_order"])
    if "explicit" in spec:
        out = []
        for elems in spec["explicit"]:
            out.append(G.subgroup([_perm(x, G.degree) for x in elems]))
        return out
    raise DescriptorError(f"unrecognized delta rule {spec!r}")


def named_subgroup(d: dict, G: FiniteGroup, spec) -> Subgroup:
    """A subgroup from {"generators": [...]} or {"elements": [...]}."""
    if isinstance(spec, str):
        try:
            spec = d["normal_subgroups"][spec]
        except KeyError:
            raise DescriptorError(f"unknown subgroup name {spec!r}") from None
    if "generators" in spec:
        return generated_subgroup(G, [_perm(x, G.degree)
                                      for x in spec["generators"]])
    if "elements" in spec:
        return G.subgroup([_perm(x, G.degree) for x in spec["elements"]])
    raise DescriptorError(f"bad subgroup spec {spec!r}")


def build_locality(d: dict, validate: bool = False,
                   max_word_length: Optional[int] = None) -> Locality:
    G = group_of(d)
    S = sylow_of(d, G)
    delta = delta_of(d, G, S)
    mwl = max_word_length or d.get("max_word_length", 4)
    return locality_from_group(G, S, delta, d["p"], validate=validate,
                               max_word_length=mwl)


def resolve_ids(L: Locality, sub: Subgroup) -> frozenset:
    """Intersect a subgroup of the realizing group with the carrier."""
    return frozenset(L.id_of[g] for g in sub.elements if g in L.id_of)


def k_choice(d: dict, L: Locality, name: str) -> frozenset:
    try:
        spec = d["k_choices"][name]
    except KeyError:
        raise DescriptorError(f"unknown K choice {name!r}") from None
    return resolve_ids(L, named_subgroup(d, L.realization, spec))


def product_setup(d: dict, name: str) -> dict:
    """Assemble everything a product verification needs from a descriptor."""
    from . import fusion as fu
    try:
        spec = d["fusion_products"][name]
    except KeyError:
        raise DescriptorError(f"unknown product {name!r}") from None
    G = group_of(d)
    S = sylow_of(d, G)
    p = d["p"]
    F = fu.fusion_of_group(G, S, p=p)
    E_over = generated_subgroup(G, [_perm(x, G.degree)
                                    for x in spec["E"]["over"]])
    E_act = generated_subgroup(G, [_perm(x, G.degree)
                                   for x in spec["E"]["acting"]])
    E = fu.fusion_of_group(G, E_over, acting=E_act.elements, p=p)
    T = F.subgroup(E_over.eset)

    dd = spec["D"]
    if dd["kind"] == "inner":
        R = generated_subgroup(G, [_perm(x, G.degree) for x in dd["over"]])
        D = fu.inner_fusion(F.subgroup(R.eset), p)
    elif dd["kind"] == "normalizer":
        D = fu.normalizer_system(F, T)
    else:
        raise DescriptorError(f"unknown D kind {dd['kind']!r}")

    L = build_locality(d)
    N_ids = resolve_ids(L, named_subgroup(d, G, spec["N"]))
    if spec["K"] == "all":
        K_ids = frozenset(range(L.n))
    else:
        K_ids = resolve_ids(L, named_subgroup(d, G, spec["K"]))

    osp = spec["oracle"]
    o_over = S if osp["over"] == "sylow" else generated_subgroup(
        G, [_perm(x, G.degree) for x in osp["over"]])
    o_act = G.elements if osp["acting"] == "all" else generated_subgroup(
        G, [_perm(x, G.degree) for x in osp["acting"]]).elements
    oracle = fu.fusion_of_group(G, o_over, acting=o_act, p=p)

    return {"G": G, "S": S, "F": F, "E": E, "T": T, "D": D, "L": L,
            "N_ids": N_ids, "K_ids": K_ids, "oracle": oracle,
            "enumerate_minimality": bool(spec.get("enumerate_minimality")),
            "name": f"{d['name']}:{name}"}


def bundled_groups() -> list[tuple[str, FiniteGroup, int]]:
    """The shipped test groups (orders 8, 24, 48, 60, 120) with their p."""
    out = []
    for name in ("group-8", "instance-a", "product-48", "group-60",
                 "instance-b"):
        d = load_descriptor(name)
        out.append((d["name"], group_of(d), d["p"]))
    return out


def net_triples() -> list[tuple[str, Locality, frozenset, frozenset]]:
    """Bundled (L, H, T) data for the normalizer-of-strongly-closed-T
    fusion identity: H a partial subgroup given by carrier ids, T by
    element labels."""
    out = []
    da = load_descriptor("instance-a")
    La = build_locality(da)
    Ta = named_subgroup(da, La.realization,
                        {"generators": [[2, 1, 4, 3], [3, 4, 1, 2]]})
    out.append(("instance-a:carrier", La, frozenset(range(La.n)),
                frozenset(Ta.eset)))
    db = load_descriptor("instance-b")
    Lb = build_locality(db)
    Tb = named_subgroup(db, Lb.realization,
                        {"generators": [[2, 1, 4, 3, 5], [3, 4, 1, 2, 5]]})
    alt = resolve_ids(Lb, named_subgroup(db, Lb.realization, "alt"))
    out.append(("instance-b:carrier", Lb, frozenset(range(Lb.n)),
                frozenset(Tb.eset)))
    out.append(("instance-b:alt", Lb, alt, frozenset(Tb.eset)))
    return out
