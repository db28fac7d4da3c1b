"""Locality construction and axiom checks against group-side oracles."""

import itertools

import pytest

from locfusion.locality import (LocalityError, delta_min_order,
                                is_linking_locality, local_group,
                                locality_from_descriptor, locality_from_group,
                                locality_to_descriptor, normalizer_carrier,
                                normalizer_locality, restriction,
                                validate_locality)
from locfusion.permgroup import (FiniteGroup, all_subgroups, compose,
                                 conjugate, from_cycles, generated_subgroup,
                                 inverse, sylow_subgroup)


def _oracle_s_g(G, S, g):
    """Brute force: elements of S conjugated back into S by g."""
    return frozenset(s for s in S if conjugate(s, g) in S.eset)


def test_carrier_a_is_all_of_g(loc_a):
    assert loc_a.n == 24


def test_carrier_a_brute_force(loc_a, s4, s4_sylow):
    carrier = {g for g in s4 if len(_oracle_s_g(s4, s4_sylow, g)) >= 4}
    assert set(loc_a.labels) == carrier


def test_carrier_b_is_proper(loc_b, s5, s5_sylow):
    assert loc_b.n == 24
    swap45 = from_cycles(5, (4, 5))
    assert swap45 not in loc_b.id_of
    assert len(_oracle_s_g(s5, s5_sylow, swap45)) == 2


def test_s_of_word_oracle(loc_b, s5, s5_sylow):
    t12 = loc_b.id_of[from_cycles(5, (1, 2))]
    sw = loc_b.s_of_word((t12,))
    oracle = _oracle_s_g(s5, s5_sylow, from_cycles(5, (1, 2)))
    assert loc_b.label_set(sw) == oracle
    assert len(sw) == 4


def test_in_domain_examples(loc_b):
    t12 = loc_b.id_of[from_cycles(5, (1, 2))]
    assert loc_b.in_domain((t12, t12))


def test_partial_domain_on_larger_symmetric_group():
    """A locality whose product is genuinely partial: some length-2
    words have S_w below the object threshold."""
    s6 = FiniteGroup(6, [from_cycles(6, (1, 2, 3, 4, 5, 6)),
                         from_cycles(6, (1, 2))])
    s = sylow_subgroup(s6, 2)
    L = locality_from_group(s6, s, delta_min_order(s6, s, 8), 2,
                            validate=False)
    assert L.n == 80
    found = None
    for f, g in itertools.product(range(L.n), repeat=2):
        if len(L.s_of_word((f, g))) < 8:
            found = (f, g)
            break
    assert found is not None
    assert not L.in_domain(found)
    assert validate_locality(L, max_word_length=3).ok


def test_product_matches_group_oracle(loc_a, s4):
    for f, g in itertools.product(range(loc_a.n), repeat=2):
        if loc_a.in_domain((f, g)):
            h = loc_a.product((f, g))
            assert loc_a.labels[h] == compose(loc_a.labels[f], loc_a.labels[g])


def test_inversion_table(loc_a):
    for f in range(loc_a.n):
        assert loc_a.labels[loc_a.inv[f]] == inverse(loc_a.labels[f])


def test_validate_instance_a_word_len_5(loc_a):
    rep = validate_locality(loc_a, max_word_length=5)
    assert rep.ok, rep.to_json()


def test_validate_instance_b_word_len_4(loc_b):
    rep = validate_locality(loc_b, max_word_length=4)
    assert rep.ok, rep.to_json()


def test_delta_requires_s(s4, s4_sylow):
    with pytest.raises(LocalityError):
        locality_from_group(s4, s4_sylow,
                            [P for P in all_subgroups(s4, within=s4_sylow)
                             if P.order == 4], 2)


def test_restriction_to_sylow_only(loc_b, s5, s5_sylow):
    s_ids = frozenset(loc_b.s_ids)
    sub = restriction(loc_b, [s_ids])
    # oracle: carrier of the restriction is N_L(S)
    oracle = {loc_b.labels[f] for f in range(loc_b.n)
              if loc_b.s_of_word((f,)) == s_ids}
    assert set(sub.labels) == oracle
    nls = {g for g in s5
           if g in loc_b.id_of
           and all(conjugate(s, g) in s5_sylow.eset for s in s5_sylow)}
    assert oracle == nls


def test_restriction_requires_subfamily(loc_b):
    small = frozenset(list(loc_b.s_ids)[:2])
    with pytest.raises(LocalityError):
        restriction(loc_b, [small])


def test_normalizer_locality_order24(loc_b):
    t = loc_b.ids_of_labels([from_cycles(5, (1, 2), (3, 4)),
                             from_cycles(5, (1, 3), (2, 4)),
                             from_cycles(5, (1, 4), (2, 3)),
                             tuple(range(5))])
    nl = normalizer_locality(loc_b, t)
    assert nl.n == 24
    # oracle: elements whose conjugation fixes T setwise
    t_labels = loc_b.label_set(t)
    oracle = {g for g in (loc_b.labels[f] for f in range(loc_b.n))
              if {conjugate(x, g) for x in t_labels} == set(t_labels)}
    assert set(nl.labels) == oracle


def test_local_group_of_sylow(loc_a):
    got = local_group(loc_a, frozenset(loc_a.s_ids))
    assert got is not None
    G, _ = got
    assert len(G) == 8


def test_linking_locality_true(loc_a):
    ok, rep = is_linking_locality(loc_a)
    assert ok, rep


def test_linking_locality_false_with_central_3_factor():
    g = FiniteGroup(7, [from_cycles(7, (1, 2, 3, 4)), from_cycles(7, (1, 2)),
                        from_cycles(7, (5, 6, 7))])
    s = sylow_subgroup(g, 2)
    delta = all_subgroups(g, within=s)
    L = locality_from_group(g, s, delta, 2, validate=False)
    ok, _rep = is_linking_locality(L)
    assert not ok


def test_descriptor_roundtrip(loc_a):
    d = locality_to_descriptor(loc_a)
    back = locality_from_descriptor(d)
    assert back.n == loc_a.n
    assert back.prod == {(i, j): k
                         for (i, j), k in loc_a.prod.items()}
    rep = validate_locality(back, max_word_length=3)
    assert rep.ok


def test_delta_min_order_members(s4, s4_sylow):
    delta = delta_min_order(s4, s4_sylow, 4)
    assert sorted(P.order for P in delta) == [4, 4, 4, 8]
