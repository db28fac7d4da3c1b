"""Product subsystems of saturated fusion systems.

Builds the subsystem generated, over TR, by two families of automorphism
groups: for a normal subsystem E over T, the groups A(P) of p'-generated
automorphisms acting trivially modulo P∩T, taken over P ≤ TR with P∩T
centric in E; and the matching family for a second system D over R inside
the normalizer system of T.  The same product is also computed through a
linking locality as the fusion system of a product NK of partial normal
subgroups, and the two routes are cross-checked.
"""

from __future__ import annotations

from typing import Iterable, Optional, Sequence

from .fusion import (FMap, FusionSystem, close, conj_map, fusion_of_locality,
                     fusion_of_partial_subgroup, inner_fusion, is_centric,
                     is_normal_subsystem, is_saturated, is_strongly_closed,
                     is_subnormal_subsystem, is_subsystem, normalizer_system,
                     subcentric_subgroups, subgroup_lattice)
from .permgroup import Subgroup, compose, inverse
from .report import PreconditionError, Report


class NormalityRequired(PreconditionError):
    """The generation formula only covers D normal in the normalizer system."""


def _aut_group_closure(seed: Iterable[FMap], amb: Sequence[FMap]) -> set[FMap]:
    """Subgroup of the automorphism group ``amb`` generated by ``seed``."""
    ident = next(a for a in amb if a.is_identity())
    out = {ident} | set(seed)
    frontier = list(out)
    while frontier:
        a = frontier.pop()
        for b in list(out):
            for c in (a.then(b), b.then(a)):
                if c not in out:
                    out.add(c)
                    frontier.append(c)
    return out


def _map_order(phi: FMap) -> int:
    n = 1
    cur = phi
    while not cur.is_identity():
        cur = cur.then(phi)
        n += 1
    return n


def a_fe(F: FusionSystem, E: FusionSystem, P: Subgroup) -> set[FMap]:
    """Automorphisms of P generated by p'-elements that centralize P
    modulo P∩T and restrict into E on P∩T."""
    T = E.S.eset
    pt = P.eset & T
    auts = F.aut(P)
    good = []
    for phi in auts:
        if _map_order(phi) % F.p == 0:
            continue
        commutators = {compose(inverse(x), phi.d[x]) for x in P.eset}
        if not _generated(commutators, pt) <= pt:
            continue
        if phi.restrict(frozenset(pt)) not in E.maps:
            continue
        good.append(phi)
    return _aut_group_closure(good, auts)


def _generated(xs: Iterable, universe: frozenset) -> frozenset:
    """Closure of xs under composition/inversion; stops growing past the
    universe early, in which case a strict superset is returned."""
    out = set(xs)
    frontier = list(out)
    while frontier:
        if not out <= universe:
            return frozenset(out)
        a = frontier.pop()
        ia = inverse(a)
        if ia not in out:
            out.add(ia)
            frontier.append(ia)
        for b in list(out):
            c = compose(a, b)
            if c not in out:
                out.add(c)
                frontier.append(c)
    return frozenset(out)


def _tr_subgroup(F: FusionSystem, T: frozenset, R: frozenset) -> Subgroup:
    prod = frozenset(compose(t, r) for t in T for r in R)
    if frozenset(compose(r, t) for t in T for r in R) != prod:
        raise PreconditionError("TR is not a subgroup (T not normalized by R)")
    return F.subgroup(prod)


def _er_generators(F: FusionSystem, E: FusionSystem,
                   tr: frozenset) -> set[FMap]:
    T = E.S.eset
    gens: set[FMap] = set()
    for P in subgroup_lattice(F.S):
        if not P.eset <= tr:
            continue
        pt = P.eset & T
        if not is_centric(E, E.subgroup(pt)):
            continue
        gens |= a_fe(F, E, P)
    return gens


def product_ER(F: FusionSystem, E: FusionSystem, R: Subgroup,
               check: bool = True) -> FusionSystem:
    """Subsystem over TR generated by the A(P) families of E inside F."""
    if check and not is_normal_subsystem(F, E):
        raise PreconditionError("E is not normal in F")
    TR = _tr_subgroup(F, E.S.eset, R.eset)
    return close(TR, F.p, _er_generators(F, E, TR.eset))


def d_status(F: FusionSystem, T: Subgroup, D: FusionSystem) -> str:
    """Status of D inside the normalizer system of T: normal, subnormal,
    or fail."""
    NFT = normalizer_system(F, T)
    if not is_subsystem(NFT, D):
        return "fail"
    if is_normal_subsystem(NFT, D):
        return "normal"
    verdict, _ = is_subnormal_subsystem(NFT, D)
    return "subnormal" if verdict is True else "fail"


def product_ED(F: FusionSystem, E: FusionSystem,
               D: FusionSystem) -> FusionSystem:
    """Product subsystem of E (normal in F, over T) and D (normal in the
    normalizer system of T, over R), generated over TR."""
    if not is_normal_subsystem(F, E):
        raise PreconditionError("E is not normal in F")
    T = F.subgroup(E.S.eset)
    NFT = normalizer_system(F, T)
    status = d_status(F, T, D)
    if status == "fail":
        raise PreconditionError("D is not subnormal in the normalizer system")
    if status != "normal":
        raise NormalityRequired(
            "D is subnormal but not normal; use the locality route")
    TR = _tr_subgroup(F, T.eset, D.S.eset)
    gens = _er_generators(F, E, TR.eset)
    gens |= _er_generators(NFT, D, TR.eset)
    return close(TR, F.p, gens)


def product_ed_via_locality(L, N: Iterable[int],
                            K: Iterable[int]) -> FusionSystem:
    """The product through a linking locality: the fusion system of the
    partial subgroup NK over T·(S∩K)."""
    from .locality import is_linking_locality, normalizer_carrier
    from .partial_subgroups import (is_partial_normal, is_partial_subgroup,
                                    is_subnormal, set_product)
    N = frozenset(N)
    K = frozenset(K)
    if not is_partial_normal(L, N):
        raise PreconditionError("N is not partial normal in L")
    T = frozenset(L.s_ids) & N
    nlt = frozenset(normalizer_carrier(L, T))
    if not K <= nlt:
        raise PreconditionError("K does not normalize T")
    sub_ok, _chain = is_subnormal(L, K, ambient=nlt)
    if not sub_ok:
        raise PreconditionError("K is not subnormal in the normalizer of T")
    linking, rep = is_linking_locality(L)
    if not linking:
        raise PreconditionError("locality is not a linking locality")
    F = fusion_of_locality(L)
    for P in subcentric_subgroups(F):
        ids = frozenset(L.id_of[x] for x in P.eset)
        if ids not in L.delta:
            raise PreconditionError(
                "object set does not contain every subcentric subgroup")
    nk = set_product(L, N, K)
    if not is_partial_subgroup(L, nk):
        raise PreconditionError("NK is not a partial subgroup")
    return fusion_of_partial_subgroup(L, nk)


def enumerate_subnormal_subsystems(F: FusionSystem,
                                   cap: int = 2000) -> list[FusionSystem]:
    """All subnormal subsystems of F, by exhausting closed subsystems over
    each subgroup of S and filtering with the chain search."""
    out = []
    for T in subgroup_lattice(F.S):
        inside = [m for m in F.maps if m.src | m.img <= T.eset]
        inner = set(inner_fusion(T, F.p).maps)
        extra = sorted(m for m in inside if m not in inner)
        seen: set[frozenset] = set()
        systems = []
        frontier = [close(T, F.p, [])]
        seen.add(frontier[0].maps)
        systems.append(frontier[0])
        while frontier:
            cur = frontier.pop()
            for m in extra:
                if m in cur.maps:
                    continue
                nxt = close(T, F.p, set(cur.maps) | {m})
                if nxt.maps <= frozenset(inside) and nxt.maps not in seen:
                    seen.add(nxt.maps)
                    systems.append(nxt)
                    frontier.append(nxt)
                    if len(seen) > cap:
                        raise PreconditionError(
                            "subsystem enumeration cap exceeded")
        for cand in systems:
            verdict, _ = is_subnormal_subsystem(F, cand)
            if verdict is True:
                out.append(cand)
    return sorted(out, key=lambda X: (X.S.order, X.S.elements,
                                      len(X.maps), sorted(X.maps)))


def verify_ed(F: FusionSystem, E: FusionSystem, D: FusionSystem,
              ED: FusionSystem, instance: str = "",
              route: str = "formula_e",
              comparisons: Optional[Sequence[FusionSystem]] = None) -> Report:
    """Audit the product subsystem: carrier, normality of E, preserved
    status of D, normality in F, the normalizer identity, and minimality
    against a supplied enumeration of subnormal subsystems."""
    rep = Report(suite="ed", instance=instance)
    rep.extra["route"] = route
    T = F.subgroup(E.S.eset)
    tr = _tr_subgroup(F, T.eset, D.S.eset).eset
    rep.set("over_TR", ED.S.eset == tr)
    rep.set("E_normal_in_ED", is_normal_subsystem(ED, E))

    status = d_status(F, T, D)
    if status == "fail":
        rep.set("D_status", "fail")
    else:
        ted = ED.subgroup(T.eset)
        if status == "normal":
            same = is_normal_subsystem(normalizer_system(ED, ted), D)
        else:
            verdict, _ = is_subnormal_subsystem(normalizer_system(ED, ted), D)
            same = verdict is True
        rep.set("D_status", status if same else "fail")

    rep.set("ED_normal_in_F",
            is_normal_subsystem(F, ED) if status == "normal" else None)

    rep.set("N_ED_T_identity", _normalizer_identity(F, E, D, ED, T))

    if comparisons is None:
        rep.set("minimality", "not_enumerable")
    else:
        ok = True
        for other in comparisons:
            if not (E.S.eset <= other.S.eset and T.eset <= other.S.eset):
                continue
            if is_subnormal_subsystem(other, E)[0] is not True:
                continue
            tout = other.subgroup(T.eset)
            ndt = normalizer_system(other, tout)
            if not is_subsystem(ndt, D):
                continue
            if is_subnormal_subsystem(ndt, D)[0] is not True:
                continue
            if not (ED.S.eset <= other.S.eset and ED.maps <= other.maps):
                ok = False
                break
        rep.set("minimality", ok)
    return rep


def _normalizer_identity(F, E, D, ED, T):
    """N_{ED}(T) against the product of N_E(T) and D inside N_F(T)."""
    lhs = normalizer_system(ED, ED.subgroup(T.eset))
    NFT = normalizer_system(F, T)
    NET = normalizer_system(E, E.subgroup(T.eset))
    try:
        rhs = product_ED(NFT, NET, D)
    except NormalityRequired:
        return None  # formula not applicable for subnormal D
    except PreconditionError:
        return "unknown"
    return lhs == rhs


def ed_ok(rep: Report) -> bool:
    c = rep.clauses
    return (c.get("over_TR") is True
            and c.get("E_normal_in_ED") is True
            and c.get("D_status") in ("normal", "subnormal")
            and c.get("ED_normal_in_F") in (True, None)
            and (c.get("N_ED_T_identity") is True
                 or (c.get("D_status") == "subnormal"
                     and c.get("N_ED_T_identity") is None))
            and c.get("minimality") in (True, "not_enumerable"))


def ed_report_json(rep: Report) -> dict:
    return {"instance": rep.instance,
            "clauses": dict(sorted(rep.clauses.items())),
            "route": rep.extra.get("route", "formula_e")}
