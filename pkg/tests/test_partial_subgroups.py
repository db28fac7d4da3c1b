"""Partial subgroup predicates and the NK product harnesses."""

import pytest

from locfusion.instances import (build_locality, k_choice, load_descriptor,
                                 named_subgroup, resolve_ids)
from locfusion.locality import delta_min_order, normalizer_carrier
from locfusion.partial_subgroups import (decompose, enumerate_partial_normals,
                                         is_partial_normal,
                                         is_partial_subgroup, is_subnormal,
                                         partial_normal_closure, set_product,
                                         verify_restriction_product,
                                         verify_theorem_nk_normal,
                                         verify_theorem_nk_subnormal)
from locfusion.permgroup import compose, from_cycles
from locfusion.report import PreconditionError


@pytest.fixture(scope="module")
def desc_b():
    return load_descriptor("instance-b")


@pytest.fixture(scope="module")
def lb(desc_b):
    return build_locality(desc_b)


@pytest.fixture(scope="module")
def n_alt(desc_b, lb):
    return resolve_ids(lb, named_subgroup(desc_b, lb.realization, "alt"))


def test_alternating_intersection_is_partial_normal(lb, n_alt):
    assert len(n_alt) == 12
    assert is_partial_normal(lb, n_alt)


def test_partial_subgroup_rejects_missing_inverse(lb):
    f = next(i for i in range(lb.n) if lb.inv[i] != i)
    assert not is_partial_subgroup(lb, {lb.identity, f})


def test_order2_subnormal_via_klein(loc_a):
    u = loc_a.ids_of_labels([tuple(range(4)), from_cycles(4, (1, 2), (3, 4))])
    ok, chain = is_subnormal(loc_a, frozenset(u))
    assert ok
    assert [len(c) for c in chain][:2] == [2, 4]


def test_partial_normal_closure_of_double_transposition(loc_a):
    u = loc_a.id_of[from_cycles(4, (1, 2), (3, 4))]
    cl = partial_normal_closure(loc_a, {u}, range(loc_a.n))
    assert len(cl) == 4  # the full double-transposition subgroup


def test_set_product_matches_group_oracle(loc_a):
    X = frozenset(loc_a.ids_of_labels(
        [tuple(range(4)), from_cycles(4, (1, 2), (3, 4))]))
    Y = frozenset(loc_a.ids_of_labels(
        [tuple(range(4)), from_cycles(4, (1, 3), (2, 4))]))
    got = {loc_a.labels[i] for i in set_product(loc_a, X, Y)}
    oracle = {compose(loc_a.labels[x], loc_a.labels[y]) for x in X for y in Y}
    assert got == oracle


def test_theorem1_all_k_choices(desc_b, lb, n_alt):
    for kname in ("trivial", "t", "order12", "nlt"):
        K = k_choice(desc_b, lb, kname)
        rep = verify_theorem_nk_normal(lb, n_alt, K, instance=kname)
        assert rep.ok, (kname, rep.to_json())


def test_theorem1_nk_cap_s(desc_b, lb, n_alt):
    K = k_choice(desc_b, lb, "nlt")
    rep = verify_theorem_nk_normal(lb, n_alt, K)
    assert rep.clauses["nk_cap_s_equals_t_times_k_cap_s"] is True


def test_theorem1_rejects_non_normal_k(desc_b, lb, n_alt):
    K = k_choice(desc_b, lb, "u2")
    with pytest.raises(PreconditionError):
        verify_theorem_nk_normal(lb, n_alt, K)


def test_theorem2_subnormal_k(desc_b, lb, n_alt):
    K = k_choice(desc_b, lb, "u2")
    rep = verify_theorem_nk_subnormal(lb, n_alt, K, instance="u2")
    assert rep.ok, rep.to_json()
    assert "regularity_not_certified" in rep.flags
    # S cap NK = T here since K <= N
    assert rep.clauses["nk_cap_s_equals_t_times_k_cap_s"] is True


def test_decompose_both_orders(desc_b, lb, n_alt):
    K = k_choice(desc_b, lb, "order12")
    nk = set_product(lb, n_alt, K)
    g = sorted(nk)[len(nk) // 2]
    (n, k), (k2, n2) = decompose(lb, n_alt, K, g)
    assert lb.product((n, k)) == g
    assert lb.product((k2, n2)) == g
    assert lb.s_of_word((g,)) == lb.s_of_word((n, k))


def test_restriction_lemma(desc_b, lb, n_alt):
    G = lb.realization
    from locfusion.instances import delta_of, sylow_of
    S = sylow_of(desc_b, G)
    sub_delta = delta_of({**desc_b, "delta": {"min_order": 8}}, G, S)
    delta_ids = [frozenset(lb.id_of[g] for g in P.eset) for P in sub_delta]
    K = k_choice(desc_b, lb, "order12")
    rep = verify_restriction_product(lb, delta_ids, n_alt, K,
                                     instance="instance-b")
    assert rep.ok, rep.to_json()


def test_enumerate_partial_normals_b(lb):
    got = sorted(len(P) for P in enumerate_partial_normals(lb))
    assert got == [1, 4, 12, 24]


def test_enumerate_partial_normals_matches_group_side(loc_a, s4):
    from locfusion.permgroup import normal_subgroups
    oracle = {frozenset(N.eset) for N in normal_subgroups(s4)}
    got = {loc_a.label_set(P.ids) for P in enumerate_partial_normals(loc_a)}
    assert got == oracle


def test_normalizer_carrier_is_group(lb, n_alt):
    T = frozenset(lb.s_ids) & n_alt
    assert len(T) == 4
    nlt = normalizer_carrier(lb, T)
    assert len(nlt) == 24  # all of the carrier normalizes T here
