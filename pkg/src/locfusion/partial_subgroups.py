"""Partial subgroups, partial (sub)normality, and the product NK.

All predicates are relative: ``ambient`` is a subset of the carrier
forming a partial subgroup, and conjugation / products are always the
ones of the enclosing locality.  This keeps N_L(T)-relative statements
free of re-indexing.

The harnesses check the two structure theorems about NK (normal and
subnormal K) and the restriction-compatibility lemma on concrete
instances, clause by clause.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

from .locality import (Locality, LocalityError, normalizer_carrier,
                       restriction, strongly_closed_in_carrier)
from .report import PreconditionError, Report

DEFAULT_ENUM_CAP = 400


@dataclass(frozen=True)
class PartialSubgroup:
    locality: Locality
    ids: tuple[int, ...]

    @property
    def eset(self) -> frozenset[int]:
        return frozenset(self.ids)

    def labels(self) -> frozenset:
        return self.locality.label_set(self.ids)

    def __len__(self):
        return len(self.ids)


def partial_subgroup(L: Locality, ids: Iterable[int]) -> PartialSubgroup:
    ids = tuple(sorted(set(ids)))
    if not is_partial_subgroup(L, ids):
        raise LocalityError("element set is not a partial subgroup")
    return PartialSubgroup(L, ids)


def is_partial_subgroup(L: Locality, X: Iterable[int],
                        max_word_length: int = 4) -> bool:
    """Inversion-closed, contains 1, and folds of domain words stay in X.

    Words over X are explored through (product, map) states up to the
    bound, exactly like the locality validator.
    """
    X = frozenset(X)
    if L.identity not in X:
        return False
    if any(L.inv[x] not in X for x in X):
        return False
    letters = sorted(X)
    states = {(f, L._pm[f]) for f in letters}
    frontier = set(states)
    for _ in range(max_word_length - 1):
        new = set()
        for pi, m in frontier:
            for f in letters:
                pf = L._pm[f]
                m2 = tuple(pf[v] if v >= 0 else -1 for v in m)
                if L._map_dom(m2) not in L.delta:
                    continue
                pi2 = L.prod.get((pi, f))
                if pi2 is None or pi2 not in X:
                    return False
                st = (pi2, m2)
                if st not in states:
                    states.add(st)
                    new.add(st)
        frontier = new
    return True


def is_partial_normal(L: Locality, N: Iterable[int],
                      ambient: Optional[Iterable[int]] = None) -> bool:
    """n^f in N for all f in the ambient set with (f^-1, n, f) defined."""
    Nset = frozenset(N)
    amb = range(L.n) if ambient is None else ambient
    for f in amb:
        fi = L.inv[f]
        for n in Nset:
            if L.in_domain((fi, n, f)) and L.fold((fi, n, f)) not in Nset:
                return False
    return True


def partial_normal_closure(L: Locality, seed: Iterable[int],
                           ambient: Iterable[int]) -> frozenset[int]:
    """Smallest subset of ambient containing seed that is closed under
    inversion, defined pairwise products, and defined conjugation by
    ambient elements."""
    amb = sorted(set(ambient))
    X = set(seed)
    X.add(L.identity)
    changed = True
    while changed:
        changed = False
        for x in list(X):
            ix = L.inv[x]
            if ix not in X:
                X.add(ix)
                changed = True
        for x in list(X):
            for y in list(X):
                z = L.prod.get((x, y))
                if z is not None and z not in X:
                    X.add(z)
                    changed = True
        for f in amb:
            fi = L.inv[f]
            for x in list(X):
                if L.in_domain((fi, x, f)):
                    z = L.fold((fi, x, f))
                    if z not in X:
                        X.add(z)
                        changed = True
    return frozenset(X)


def is_subnormal(L: Locality, H: Iterable[int],
                 ambient: Optional[Iterable[int]] = None
                 ) -> tuple[bool, list[tuple[int, ...]]]:
    """Subnormality via descending iterated normal closures.

    The series A_0 = ambient, A_{i+1} = normal closure of H in A_i
    terminates; H is subnormal exactly when it reaches H, and the series
    is then a subnormal chain of minimal-closure type.  Returns the
    chain from H up to the ambient set.
    """
    Hset = frozenset(H)
    amb = frozenset(range(L.n) if ambient is None else ambient)
    if not Hset <= amb:
        raise LocalityError("H must lie inside the ambient set")
    chain = [tuple(sorted(amb))]
    cur = amb
    while True:
        nxt = partial_normal_closure(L, Hset, cur)
        if nxt == cur:
            break
        chain.append(tuple(sorted(nxt)))
        cur = nxt
    if cur == Hset:
        return True, list(reversed(chain))
    return False, list(reversed(chain))


def set_product(L: Locality, X: Iterable[int], Y: Iterable[int]) -> tuple[int, ...]:
    """Pi(X, Y): products of composable pairs only, no closure."""
    out = set()
    for x in X:
        for y in Y:
            z = L.prod.get((x, y))
            if z is not None:
                out.add(z)
    return tuple(sorted(out))


def group_product_in_s(L: Locality, A: Iterable[int], B: Iterable[int]) -> frozenset[int]:
    """Product set of two subsets of S (the product is total on S)."""
    return frozenset(L.prod[(a, b)] for a in A for b in B)


class DecompositionNotFound(LocalityError):
    """No (n, k) pair with g = nk and S_g = S_(n,k); a violation of the product structure."""


def decompose(L: Locality, N: Iterable[int], K: Iterable[int],
              g: int) -> tuple[tuple[int, int], tuple[int, int]]:
    """(n, k) and (k', n') with g = nk = k'n' and S_g = S_(n,k) = S_(k',n').

    Exhaustive search over the pairs in id order; the S_g condition is
    recomputed for the returned pair, never assumed.
    """
    sg = L.s_of_word((g,))
    Ns, Ks = sorted(set(N)), sorted(set(K))

    def search(A, B):
        for a in A:
            for b in B:
                if L.prod.get((a, b)) == g and L.s_of_word((a, b)) == sg:
                    return a, b
        return None
    nk = search(Ns, Ks)
    kn = search(Ks, Ns)
    if nk is None or kn is None:
        raise DecompositionNotFound(
            f"element {g} admits no matched decomposition "
            f"(nk found: {nk is not None}, kn found: {kn is not None})")
    return nk, (kn[0], kn[1])


# -- theorem harnesses -------------------------------------------------------

def _t_of(L: Locality, N: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(N) & set(L.s_ids)))


def _check_nk_preconditions(L: Locality, N: Iterable[int], K: Iterable[int],
                            require_normal_k: bool) -> tuple[tuple[int, ...], list[int]]:
    Nset = frozenset(N)
    Kset = frozenset(K)
    if not is_partial_subgroup(L, Nset):
        raise PreconditionError("N is not a partial subgroup")
    if not is_partial_normal(L, Nset):
        raise PreconditionError("N is not partial normal in L")
    T = _t_of(L, Nset)
    if not strongly_closed_in_carrier(L, T):
        raise PreconditionError("T = S ∩ N is not strongly closed")
    nlt = normalizer_carrier(L, T)
    if not Kset <= set(nlt):
        raise PreconditionError("K does not lie in N_L(T)")
    if not is_partial_subgroup(L, Kset):
        raise PreconditionError("K is not a partial subgroup")
    if require_normal_k and not is_partial_normal(L, Kset, ambient=nlt):
        raise PreconditionError("K is not partial normal in N_L(T)")
    return T, nlt


def verify_theorem_nk_normal(L: Locality, N: Iterable[int], K: Iterable[int],
                             instance: str = "") -> Report:
    """NK is partial normal, NK = KN, NK ∩ S = T(K ∩ S), and every
    element of NK decomposes in both orders with matching S_g."""
    rep = Report(suite="nk_normal", instance=instance)
    Nset, Kset = frozenset(N), frozenset(K)
    T, _ = _check_nk_preconditions(L, Nset, Kset, require_normal_k=True)

    NK = set_product(L, sorted(Nset), sorted(Kset))
    KN = set_product(L, sorted(Kset), sorted(Nset))
    rep.set("nk_equals_kn", set(NK) == set(KN),
            None if set(NK) == set(KN) else sorted(set(NK) ^ set(KN)))
    rep.set("nk_partial_subgroup", is_partial_subgroup(L, NK))
    rep.set("nk_partial_normal", is_partial_normal(L, NK))

    lhs = frozenset(NK) & frozenset(L.s_ids)
    rhs = group_product_in_s(L, T, set(Kset) & set(L.s_ids))
    rep.set("nk_cap_s_equals_t_times_k_cap_s", lhs == rhs,
            None if lhs == rhs else sorted(lhs ^ rhs))

    bad = None
    for g in NK:
        try:
            decompose(L, Nset, Kset, g)
        except DecompositionNotFound as exc:
            bad = f"g={g}: {exc}"
            break
    rep.set("decompose_both_orders", bad is None, bad)
    rep.extra["nk_order"] = len(NK)
    return rep


def verify_theorem_nk_subnormal(L: Locality, N: Iterable[int],
                                K: Iterable[int], instance: str = "") -> Report:
    """NK = KN is partial subnormal with exhibited chain and
    S ∩ NK = T(S ∩ K).  The regularity hypothesis of the subnormal
    statement is not certified at this scale; the report says so."""
    rep = Report(suite="nk_subnormal", instance=instance)
    rep.flags.append("regularity_not_certified")
    Nset, Kset = frozenset(N), frozenset(K)
    T, nlt = _check_nk_preconditions(L, Nset, Kset, require_normal_k=False)
    ok_sub, chain_k = is_subnormal(L, Kset, ambient=nlt)
    if not ok_sub:
        raise PreconditionError("K is not subnormal in N_L(T)")
    rep.extra["k_chain_lengths"] = [len(c) for c in chain_k]

    NK = set_product(L, sorted(Nset), sorted(Kset))
    KN = set_product(L, sorted(Kset), sorted(Nset))
    rep.set("nk_equals_kn", set(NK) == set(KN))
    rep.set("nk_partial_subgroup", is_partial_subgroup(L, NK))
    ok, chain = is_subnormal(L, NK)
    rep.set("nk_subnormal", ok, None if ok else [len(c) for c in chain])
    rep.extra["nk_chain_lengths"] = [len(c) for c in chain]

    lhs = frozenset(NK) & frozenset(L.s_ids)
    rhs = group_product_in_s(L, T, set(Kset) & set(L.s_ids))
    rep.set("nk_cap_s_equals_t_times_k_cap_s", lhs == rhs,
            None if lhs == rhs else sorted(lhs ^ rhs))
    return rep


def verify_restriction_product(Lplus: Locality, delta: Iterable[frozenset[int]],
                               Nplus: Iterable[int], Kplus: Iterable[int],
                               instance: str = "") -> Report:
    """Compatibility of NK with restriction:
    Pi+(N+, K+) ∩ L = Pi(N, K) where L is the restriction, N = N+ ∩ L,
    K = K+ ∩ L; additionally N ⊴ L and K ⊴ N_L(T)."""
    rep = Report(suite="restriction_product", instance=instance)
    Np, Kp = frozenset(Nplus), frozenset(Kplus)
    _check_nk_preconditions(Lplus, Np, Kp, require_normal_k=True)

    L = restriction(Lplus, delta)
    keep = L.ids_of_labels  # map back through labels
    lab = Lplus.label_set
    carrier_labels = L.label_set(range(L.n))
    N = keep(lab(Np) & carrier_labels)
    K = keep(lab(Kp) & carrier_labels)

    rep.set("n_restricted_partial_normal",
            is_partial_subgroup(L, N) and is_partial_normal(L, N))
    T = _t_of(L, N)
    nlt = normalizer_carrier(L, T)
    rep.set("k_restricted_normal_in_nlt",
            set(K) <= set(nlt) and is_partial_subgroup(L, K)
            and is_partial_normal(L, K, ambient=nlt))

    big = Lplus.label_set(set_product(Lplus, sorted(Np), sorted(Kp)))
    small = L.label_set(set_product(L, sorted(N), sorted(K)))
    lhs = big & carrier_labels
    rep.set("product_restricts", lhs == small,
            None if lhs == small else sorted(map(str, lhs ^ small)))
    return rep


def enumerate_partial_normals(L: Locality,
                              cap: int = DEFAULT_ENUM_CAP) -> list[PartialSubgroup]:
    """All partial normal subgroups: join-closure of the normal closures
    of single elements."""
    if L.n > cap:
        raise LocalityError(f"carrier size {L.n} exceeds cap {cap}")
    amb = range(L.n)
    seeds = {partial_normal_closure(L, {f}, amb) for f in amb}
    seeds.add(frozenset({L.identity}))
    normals = set(seeds)
    worklist = list(seeds)
    while worklist:
        a = worklist.pop()
        for b in list(normals):
            if a <= b or b <= a:
                continue
            join = partial_normal_closure(L, a | b, amb)
            if join not in normals:
                normals.add(join)
                worklist.append(join)
    return [PartialSubgroup(L, tuple(sorted(x)))
            for x in sorted(normals, key=lambda s: (len(s), sorted(s)))]
