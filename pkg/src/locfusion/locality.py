"""Localities: objective partial groups with a distinguished p-subgroup.

A locality is stored as a finite carrier with integer ids, an involutive
inversion, a binary partial product, a p-subgroup S and an object set
delta of subgroups of S.  A word lies in the domain of the partial
product exactly when the subgroup S_w it carries through S belongs to
delta; the n-ary product is the left fold of the binary one.

The word machinery works with partial injective maps on S: each carrier
element f induces the map s -> s^f wherever the conjugate stays in S,
and S_w is the domain of the composite map along w.  Words with the same
(left-fold value, composite map) pair behave identically under every
check performed here, which is what makes exhaustive validation up to a
word-length bound tractable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .permgroup import (FiniteGroup, Subgroup, cayley_group, conjugate,
                        generated_subgroup, is_p_group, GroupError, _p_part,
                        perm_order)

Word = tuple[int, ...]


class LocalityError(ValueError):
    """Invalid locality construction or precondition."""


class DomainError(LocalityError):
    """A word was multiplied outside the domain of the partial product."""

    def __init__(self, word: Word, s_w: frozenset):
        self.word = word
        self.s_w = s_w
        super().__init__(f"word {word!r} is not in the domain (|S_w|={len(s_w)})")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    witness: Optional[str] = None


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)
    bounded_only: bool = True
    max_word_length: int = 4

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "max_word_length": self.max_word_length,
            "bounded_check_only": self.bounded_only,
            "checks": [{"name": c.name, "passed": c.passed,
                        **({"witness": c.witness} if c.witness else {})}
                       for c in self.checks],
        }


class Locality:
    """(L, delta, S) with partial product given by a binary table.

    ``labels`` are stable hashable names for the carrier elements
    (ambient permutations for group-realized instances); set-valued
    results are exchanged as label sets so that sub-localities remain
    comparable with their parents.
    """

    def __init__(self, labels: Sequence, identity: int, inv: Sequence[int],
                 prod: dict[tuple[int, int], int], s_ids: Iterable[int],
                 p: int, delta: Iterable[frozenset[int]],
                 realization: Optional[FiniteGroup] = None):
        self.labels = tuple(labels)
        self.n = len(self.labels)
        self.identity = identity
        self.inv = tuple(inv)
        self.prod = dict(prod)
        self.s_ids = tuple(sorted(s_ids))
        self.p = p
        self.delta = frozenset(frozenset(P) for P in delta)
        self.realization = realization
        self.id_of = {lab: i for i, lab in enumerate(self.labels)}
        self._s_pos = {s: i for i, s in enumerate(self.s_ids)}
        self._pm = self._build_partial_maps()
        self._fusion = None  # cached F_S(L)

    # -- construction helpers ----------------------------------------------

    def _build_partial_maps(self) -> tuple[tuple[int, ...], ...]:
        """pm[f][i] = position of s_i^f in S, or -1 when undefined.

        s^f is evaluated as the left fold of (f^-1, s, f) through the
        binary table; in a valid locality this agrees with the n-ary
        product on that word.
        """
        maps = []
        for f in range(self.n):
            fi = self.inv[f]
            row = []
            for s in self.s_ids:
                t = self.prod.get((fi, s))
                u = self.prod.get((t, f)) if t is not None else None
                row.append(self._s_pos.get(u, -1) if u is not None else -1)
            maps.append(tuple(row))
        return tuple(maps)

    # -- basic queries -------------------------------------------------------

    @property
    def carrier(self) -> tuple[int, ...]:
        return tuple(range(self.n))

    def label_set(self, ids: Iterable[int]) -> frozenset:
        return frozenset(self.labels[i] for i in ids)

    def ids_of_labels(self, labs: Iterable) -> tuple[int, ...]:
        return tuple(sorted(self.id_of[l] for l in labs))

    def s_label_set(self) -> frozenset:
        return self.label_set(self.s_ids)

    def word_map(self, w: Word) -> tuple[int, ...]:
        m = tuple(range(len(self.s_ids)))
        for f in w:
            pf = self._pm[f]
            m = tuple(pf[v] if v >= 0 else -1 for v in m)
        return m

    def _map_dom(self, m: tuple[int, ...]) -> frozenset[int]:
        return frozenset(self.s_ids[i] for i, v in enumerate(m) if v >= 0)

    def s_of_word(self, w: Word) -> frozenset[int]:
        """S_w as a set of carrier ids; S itself for the empty word."""
        return self._map_dom(self.word_map(w))

    def in_domain(self, w: Word) -> bool:
        return self.s_of_word(w) in self.delta

    def fold(self, w: Word) -> Optional[int]:
        """Left fold of the binary product; None when a step is undefined."""
        x = self.identity
        for f in w:
            x = self.prod.get((x, f))
            if x is None:
                return None
        return x

    def product(self, w: Word) -> int:
        sw = self.s_of_word(w)
        if sw not in self.delta:
            raise DomainError(w, sw)
        x = self.fold(w)
        if x is None:
            raise DomainError(w, sw)
        return x

    def conj(self, x: int, f: int) -> Optional[int]:
        """x^f through the binary table; None when undefined."""
        t = self.prod.get((self.inv[f], x))
        return self.prod.get((t, f)) if t is not None else None

    def conj_in_domain(self, x: int, f: int) -> bool:
        return self.in_domain((self.inv[f], x, f))

    def s_subgroup(self) -> Subgroup:
        G, _ = self.s_as_group()
        return G.full_subgroup()

    # -- S (and local subgroups) as genuine groups ---------------------------

    def group_on(self, ids: Iterable[int]) -> tuple[FiniteGroup, dict]:
        """Realize a product-total subset as a permutation group.

        Uses the ambient realization when present, the regular action
        otherwise.  Returns (group, id -> permutation map).
        """
        ids = sorted(ids)
        if self.realization is not None:
            return (self.realization,
                    {i: self.labels[i] for i in ids})
        elems = list(ids)

        def mul(a, b):
            c = self.prod.get((a, b))
            if c is None:
                raise LocalityError("subset is not product-total")
            return c
        G, to_perm = cayley_group(elems, mul)
        return G, {i: to_perm[i] for i in ids}

    def s_as_group(self) -> tuple[FiniteGroup, dict]:
        if self.realization is not None:
            G = self.realization
            sub = G.subgroup([self.labels[i] for i in self.s_ids], check=False)
            # parent group with S embedded; callers take subgroups of S
            return _subgroup_as_group(sub), {i: self.labels[i] for i in self.s_ids}
        return self.group_on(self.s_ids)


def _subgroup_as_group(H: Subgroup) -> FiniteGroup:
    G = FiniteGroup(H.parent.degree, H.elements, max_size=max(len(H), 1))
    return G


# -- construction of group-realized localities -------------------------------

def delta_min_order(G: FiniteGroup, S: Subgroup, min_order: int) -> list[Subgroup]:
    from .permgroup import all_subgroups
    return [P for P in all_subgroups(G, within=S) if P.order >= min_order]


def locality_from_group(G: FiniteGroup, S: Subgroup, delta: Iterable[Subgroup],
                        p: int, validate: bool = True,
                        max_word_length: int = 4) -> Locality:
    """The standard realization L_delta(G) = {g : S cap S^(g^-1) in delta}.

    delta must be overgroup-closed in S and closed under the conjugation
    maps of G between subgroups of S; the result is validated post hoc
    unless ``validate`` is disabled.
    """
    delta = list(delta)
    dsets = {P.eset for P in delta}
    if S.eset not in dsets:
        raise LocalityError("delta must contain S")
    if not is_p_group(S, p):
        raise LocalityError("S must be a p-group")
    _check_delta_closures(G, S, dsets)

    carrier = []
    for g in G.elements:
        sg = frozenset(s for s in S.elements
                       if conjugate(s, g) in S.eset)
        if sg in dsets:
            carrier.append(g)
    labels = tuple(carrier)
    idx = {g: i for i, g in enumerate(labels)}
    s_ids = tuple(idx[s] for s in S.elements)
    identity = idx[G.identity]
    inv = tuple(idx[G.inv(g)] for g in labels)

    # (f,g) is composable iff the word (f,g) carries a member of delta
    prod: dict[tuple[int, int], int] = {}
    s_list = S.elements
    pmaps = {}
    for g in labels:
        pmaps[g] = {s: conjugate(s, g) for s in s_list
                    if conjugate(s, g) in S.eset}
    for f in labels:
        mf = pmaps[f]
        for g in labels:
            mg = pmaps[g]
            sw = frozenset(s for s, t in mf.items() if t in mg)
            if sw in dsets:
                prod[(idx[f], idx[g])] = idx[G.mul(f, g)]

    delta_ids = [frozenset(idx[s] for s in P.elements) for P in delta]
    L = Locality(labels, identity, inv, prod, s_ids, p, delta_ids,
                 realization=G)
    if validate:
        report = validate_locality(L, max_word_length=max_word_length)
        if not report.ok:
            bad = report.failures()[0]
            raise LocalityError(
                f"constructed object fails the locality axioms: "
                f"{bad.name} ({bad.witness})")
    return L


def _check_delta_closures(G: FiniteGroup, S: Subgroup, dsets: set[frozenset]):
    from .permgroup import all_subgroups
    subs = all_subgroups(G, within=S)
    by_set = {P.eset: P for P in subs}
    for d in dsets:
        if d not in by_set:
            raise LocalityError("delta member is not a subgroup of S")
        for Q in subs:
            if d < Q.eset and Q.eset not in dsets:
                raise LocalityError(
                    f"delta is not overgroup-closed: missing overgroup of order {Q.order}")
        for g in G.elements:
            img = frozenset(conjugate(x, g) for x in d)
            if img <= S.eset and img not in dsets:
                raise LocalityError(
                    "delta is not closed under conjugation maps into S")


# -- the validator -----------------------------------------------------------

def _word_states(L: Locality, max_len: int):
    """All (fold value, composite partial map) states of domain words.

    Returns state -> (minimal length, representative word).  Folding a
    domain word must never hit an undefined binary step; such an event
    is reported by the caller via the returned failure list.
    """
    states = {}
    failures = []
    frontier = {}
    for f in range(L.n):
        st = (f, L._pm[f])
        if st not in states:
            states[st] = (1, (f,))
            frontier[st] = (f,)
    length = 1
    while frontier and length < max_len:
        length += 1
        new = {}
        for (pi, m), word in frontier.items():
            for f in range(L.n):
                pf = L._pm[f]
                m2 = tuple(pf[v] if v >= 0 else -1 for v in m)
                if L._map_dom(m2) not in L.delta:
                    continue
                pi2 = L.prod.get((pi, f))
                if pi2 is None:
                    failures.append(word + (f,))
                    continue
                st = (pi2, m2)
                if st not in states:
                    states[st] = (length, word + (f,))
                    new[st] = word + (f,)
        frontier = new
    return states, failures


def validate_locality(L: Locality, max_word_length: int = 4) -> ValidationReport:
    """Check the locality axioms on all words up to the length bound.

    Words are explored through (product, map) states, which is
    equivalent to exhaustive enumeration: every check applied to a word
    depends only on its state, and every state is visited.
    """
    rep = ValidationReport(max_word_length=max_word_length)
    add = rep.checks.append

    # S is a subgroup of the carrier with a total product
    ok, wit = True, None
    sset = set(L.s_ids)
    if L.identity not in sset:
        ok, wit = False, "identity not in S"
    else:
        for a, b in itertools.product(L.s_ids, repeat=2):
            if L.prod.get((a, b)) not in sset:
                ok, wit = False, f"S not product-closed at ({a},{b})"
                break
    add(CheckResult("s_subgroup", ok, wit))

    # identity and inversion laws
    ok, wit = True, None
    for f in range(L.n):
        if L.inv[L.inv[f]] != f:
            ok, wit = False, f"inversion not involutive at {f}"
            break
        if L.prod.get((L.identity, f)) != f or L.prod.get((f, L.identity)) != f:
            ok, wit = False, f"identity law fails at {f}"
            break
        if L.prod.get((f, L.inv[f])) != L.identity \
                or L.prod.get((L.inv[f], f)) != L.identity:
            ok, wit = False, f"inversion law fails at {f}"
            break
    add(CheckResult("identity_and_inversion", ok, wit))

    # S_f in delta for every f
    bad = next((f for f in range(L.n)
                if L.s_of_word((f,)) not in L.delta), None)
    add(CheckResult("s_f_in_delta", bad is None,
                    None if bad is None else f"element {bad}"))

    # objectivity at length 2: (f,g) defined iff S_(f,g) in delta
    ok, wit = True, None
    for f in range(L.n):
        for g in range(L.n):
            defined = (f, g) in L.prod
            obj = L.s_of_word((f, g)) in L.delta
            if defined != obj:
                ok, wit = False, f"pair ({f},{g}): defined={defined}, S_w in delta={obj}"
                break
        if not ok:
            break
    add(CheckResult("objectivity_len2", ok, wit))

    # delta closure properties
    add(_check_delta_of_locality(L))

    # domain words: folds defined, splitting/associativity, S_w transport
    states, fold_failures = _word_states(L, max_word_length)
    add(CheckResult("fold_defined_on_domain", not fold_failures,
                    f"word {fold_failures[0]!r}" if fold_failures else None))

    ok, wit = True, None
    for (pi, m), (_, word) in states.items():
        pm_pi = L._pm[pi]
        for i, v in enumerate(m):
            if v >= 0 and pm_pi[i] != v:
                ok, wit = False, f"word {word!r}: S_w image differs from S_w^(Pi w)"
                break
        if not ok:
            break
    add(CheckResult("s_w_through_product", ok, wit))

    ok, wit = True, None
    items = list(states.items())
    for (p1, m1), (l1, w1) in items:
        for (p2, m2), (l2, w2) in items:
            if l1 + l2 > max_word_length:
                continue
            m = tuple(m2[v] if v >= 0 else -1 for v in m1)
            if L._map_dom(m) not in L.delta:
                continue
            pi = L.prod.get((p1, p2))
            q = p1
            for f in w2:
                q = L.prod.get((q, f))
                if q is None:
                    break
            if pi is None or q is None or pi != q:
                ok, wit = False, f"split {w1!r}|{w2!r}: fold != Pi(u)Pi(v)"
                break
        if not ok:
            break
    add(CheckResult("associativity_by_splitting", ok, wit))

    # maximality of S among p-subgroups of the carrier
    add(_check_s_maximal(L))

    # realization oracle
    if L.realization is not None:
        G = L.realization
        ok, wit = True, None
        for (i, j), k in L.prod.items():
            if G.mul(L.labels[i], L.labels[j]) != L.labels[k]:
                ok, wit = False, f"pair ({i},{j}) disagrees with the ambient product"
                break
        add(CheckResult("realization_oracle", ok, wit))

    rep.bounded_only = L.realization is None
    return rep


def _check_delta_of_locality(L: Locality) -> CheckResult:
    sset = frozenset(L.s_ids)
    if sset not in L.delta:
        return CheckResult("delta_closure", False, "S not in delta")
    subs = _subgroup_sets_of_s(L)
    for d in L.delta:
        if d not in subs:
            return CheckResult("delta_closure", False,
                               "delta member is not a subgroup of S")
        for q in subs:
            if d < q and q not in L.delta:
                return CheckResult("delta_closure", False,
                                   f"missing overgroup of size {len(q)}")
        for f in range(L.n):
            pf = L._pm[f]
            pos = [L._s_pos[s] for s in d]
            if all(pf[i] >= 0 for i in pos):
                img = frozenset(L.s_ids[pf[i]] for i in pos)
                if img not in L.delta:
                    return CheckResult(
                        "delta_closure", False,
                        f"not closed under conjugation by element {f}")
    return CheckResult("delta_closure", True)


def _subgroup_sets_of_s(L: Locality) -> set[frozenset[int]]:
    G, to_perm = L.s_as_group()
    from .permgroup import all_subgroups
    perm_to_id = {v: k for k, v in to_perm.items()}
    out = set()
    for P in all_subgroups(G):
        out.add(frozenset(perm_to_id[x] for x in P.elements))
    return out


def _check_s_maximal(L: Locality) -> CheckResult:
    sset = set(L.s_ids)
    for f in range(L.n):
        if f in sset:
            continue
        # f can only enlarge S to a p-subgroup from inside N_L(S)
        pf = L._pm[f]
        if any(v < 0 for v in pf):
            continue
        if frozenset(L.s_ids[v] for v in pf) != frozenset(L.s_ids):
            continue
        ext = set(sset)
        frontier = [f]
        is_p = True
        while frontier and is_p:
            x = frontier.pop()
            if x in ext:
                continue
            ext.add(x)
            for y in list(ext):
                for a, b in ((x, y), (y, x)):
                    z = L.prod.get((a, b))
                    if z is None:
                        is_p = False
                        break
                    if z not in ext:
                        frontier.append(z)
                if not is_p:
                    break
        if is_p and _p_part(len(ext), L.p) == len(ext):
            return CheckResult("s_maximal_p_subgroup", False,
                               f"element {f} extends S to a p-subgroup")
    return CheckResult("s_maximal_p_subgroup", True)


# -- restriction and normalizer localities ----------------------------------

def _sub_locality(L: Locality, carrier_ids: list[int],
                  delta: Iterable[frozenset[int]],
                  restrict_prod_to_delta: bool) -> Locality:
    carrier_ids = sorted(carrier_ids)
    old_to_new = {old: new for new, old in enumerate(carrier_ids)}
    labels = [L.labels[i] for i in carrier_ids]
    delta = [frozenset(d) for d in delta]
    dsets = set(delta)
    cset = set(carrier_ids)
    prod = {}
    for (i, j), k in L.prod.items():
        if i in cset and j in cset and k in cset:
            if restrict_prod_to_delta:
                m = L.word_map((i, j))
                if L._map_dom(m) not in dsets:
                    continue
            prod[(old_to_new[i], old_to_new[j])] = old_to_new[k]
    new_delta = [frozenset(old_to_new[x] for x in d) for d in delta]
    return Locality(labels, old_to_new[L.identity],
                    [old_to_new[L.inv[i]] for i in carrier_ids],
                    prod, [old_to_new[s] for s in L.s_ids], L.p, new_delta,
                    realization=L.realization)


def restriction(Lplus: Locality, delta: Iterable[frozenset[int]]) -> Locality:
    """Restriction of L^+ to a smaller object set (carrier ids of L^+)."""
    delta = [frozenset(d) for d in delta]
    dsets = set(delta)
    if not dsets <= Lplus.delta:
        bad = next(d for d in dsets if d not in Lplus.delta)
        raise LocalityError(f"delta member of size {len(bad)} not in the object set")
    # overgroup closure and F_S(L+)-conjugacy closure
    subs = _subgroup_sets_of_s(Lplus)
    for d in dsets:
        for q in subs:
            if d < q and q not in dsets:
                raise LocalityError(
                    f"restriction delta not overgroup-closed (missing size {len(q)})")
        for f in range(Lplus.n):
            pf = Lplus._pm[f]
            pos = [Lplus._s_pos[s] for s in d]
            if all(pf[i] >= 0 for i in pos):
                img = frozenset(Lplus.s_ids[pf[i]] for i in pos)
                if img not in dsets:
                    raise LocalityError(
                        "restriction delta not closed under fusion conjugacy")
    carrier = [f for f in range(Lplus.n)
               if Lplus.s_of_word((f,)) in dsets]
    return _sub_locality(Lplus, carrier, delta, restrict_prod_to_delta=True)


def strongly_closed_in_carrier(L: Locality, t_ids: Iterable[int]) -> bool:
    """T strongly closed in F_S(L): no conjugation map moves T out of T.

    Checking the generating conjugation maps suffices, since composites
    and restrictions of T-preserving maps preserve T.
    """
    tset = set(t_ids)
    if not tset <= set(L.s_ids):
        return False
    for f in range(L.n):
        pf = L._pm[f]
        for t in tset:
            v = pf[L._s_pos[t]]
            if v >= 0 and L.s_ids[v] not in tset:
                return False
    return True


def normalizer_carrier(L: Locality, t_ids: Iterable[int]) -> list[int]:
    """N_L(T) = {f : T <= S_f and T^f = T}."""
    tpos = [L._s_pos[t] for t in sorted(t_ids)]
    timgs = frozenset(L._s_pos[t] for t in t_ids)
    out = []
    for f in range(L.n):
        pf = L._pm[f]
        if all(pf[i] >= 0 for i in tpos) \
                and frozenset(pf[i] for i in tpos) == timgs:
            out.append(f)
    return out


def normalizer_locality(L: Locality, t_ids: Iterable[int]) -> Locality:
    """(N_L(T), delta, S) for T <= S strongly closed in F_S(L)."""
    t_ids = sorted(t_ids)
    if not strongly_closed_in_carrier(L, t_ids):
        raise LocalityError("T is not strongly closed in F_S(L)")
    carrier = normalizer_carrier(L, t_ids)
    return _sub_locality(L, carrier, L.delta, restrict_prod_to_delta=False)


# -- linking localities ------------------------------------------------------

def local_group(L: Locality, P: frozenset[int]) -> Optional[tuple[FiniteGroup, dict]]:
    """N_L(P) as a finite group, or None when its product is not total."""
    ids = normalizer_carrier(L, P)
    idset = set(ids)
    for a in ids:
        for b in ids:
            c = L.prod.get((a, b))
            if c is None or c not in idset:
                return None
    if L.realization is not None:
        H = FiniteGroup(L.realization.degree, [L.labels[i] for i in ids],
                        max_size=max(len(ids), 1))
        return H, {i: L.labels[i] for i in ids}
    elems = sorted(ids)
    return cayley_group(elems, lambda a, b: L.prod[(a, b)])


def is_linking_locality(L: Locality) -> tuple[bool, dict]:
    """Saturated fusion, F^cr inside delta, all N_L(P) of characteristic p."""
    from .fusion import (fusion_of_locality, is_saturated, centric_radicals)
    from .permgroup import is_characteristic_p

    report: dict = {"saturated": None, "centric_radicals_in_delta": None,
                    "local_groups_characteristic_p": None, "witness": None}
    F = fusion_of_locality(L)
    report["saturated"] = is_saturated(F)

    dsets = {frozenset(L.labels[i] for i in d) for d in L.delta}
    ok_cr = True
    for P in centric_radicals(F):
        if P.eset not in dsets:
            ok_cr = False
            report["witness"] = f"centric radical of order {P.order} not in delta"
            break
    report["centric_radicals_in_delta"] = ok_cr

    ok_loc = True
    for d in sorted(L.delta, key=lambda x: (len(x), sorted(x))):
        res = local_group(L, d)
        if res is None:
            ok_loc = False
            report["witness"] = f"N_L(P) not a group for object of order {len(d)}"
            break
        H, _ = res
        if not is_characteristic_p(H, L.p):
            ok_loc = False
            report["witness"] = (f"N_L(P) of order {H.order} is not of "
                                 f"characteristic {L.p}")
            break
    report["local_groups_characteristic_p"] = ok_loc
    verdict = bool(report["saturated"]) and ok_cr and ok_loc
    return verdict, report


# -- abstract descriptor interchange ----------------------------------------

def locality_from_descriptor(d: dict) -> Locality:
    """Abstract carrier descriptor; must pass validate_locality afterwards."""
    n = d["carrier"]
    prod = {(i, j): k for i, j, k in d["products"]}
    L = Locality(labels=tuple(range(n)), identity=d["identity"],
                 inv=tuple(d["inverse"]), prod=prod, s_ids=d["S"],
                 p=d["p"], delta=[frozenset(x) for x in d["delta"]])
    return L


def locality_to_descriptor(L: Locality) -> dict:
    return {"carrier": L.n, "identity": L.identity, "inverse": list(L.inv),
            "products": sorted([i, j, k] for (i, j), k in L.prod.items()),
            "S": list(L.s_ids), "p": L.p,
            "delta": sorted(sorted(x) for x in L.delta)}
