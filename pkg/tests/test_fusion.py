"""Fusion systems checked against conjugation oracles built directly
from the ambient groups."""

import pytest

from locfusion import fusion as fu
from locfusion.fusion import (FMap, FusionError, close, conj_map,
                              fusion_of_group, fusion_of_locality,
                              fusion_of_partial_subgroup, inner_fusion,
                              is_centric, is_centric_radical,
                              is_normal_subsystem, is_saturated,
                              is_strongly_closed, is_subnormal_subsystem,
                              normalizer_system, op_core, strong_closure,
                              subcentric_subgroups, subgroup_lattice)
from locfusion.instances import (bundled_groups, build_locality,
                                 load_descriptor, net_triples, resolve_ids,
                                 named_subgroup)
from locfusion.permgroup import (conjugate, from_cycles, generated_subgroup,
                                 normalizer, sylow_subgroup)


@pytest.fixture(scope="module")
def F(s4, s4_sylow):
    return fusion_of_group(s4, s4_sylow)


@pytest.fixture(scope="module")
def E(s4, klein, a4_elements):
    return fusion_of_group(s4, klein, acting=a4_elements, p=2)


def _oracle_homs(G, S, P):
    """Conjugation graphs out of P landing in S, directly from G."""
    out = set()
    for g in G:
        graph = tuple(sorted((x, conjugate(x, g)) for x in P.eset))
        if all(y in S.eset for _, y in graph):
            out.add(graph)
    return out


def test_fusion_of_group_matches_oracle(s4, s4_sylow, F):
    for P in subgroup_lattice(s4_sylow):
        got = {m.pairs for m in F.by_src.get(P.eset, ())}
        assert got == _oracle_homs(s4.elements, s4_sylow, P)


def test_fmap_rejects_non_homomorphism():
    a = from_cycles(4, (1, 2), (3, 4))
    b = from_cycles(4, (1, 3), (2, 4))
    c = from_cycles(4, (1, 4), (2, 3))
    e = tuple(range(4))
    # moves the identity: cannot be a homomorphism
    bad = FMap([(e, a), (a, e), (b, b), (c, c)])
    from locfusion.fusion import _check_homomorphism
    with pytest.raises(FusionError):
        _check_homomorphism(bad)


def test_closure_of_group_conjugations_equals_group_fusion(s4, s4_sylow, F):
    gens = [conj_map(P.eset, g) for P in subgroup_lattice(s4_sylow)
            for g in s4
            if all(conjugate(x, g) in s4_sylow.eset for x in P.eset)]
    assert close(s4_sylow, 2, gens) == F


def test_fusion_of_locality_equals_group_fusion(loc_a, F):
    assert fusion_of_locality(loc_a) == F


def test_fusion_of_partial_subgroup_alternating(loc_b):
    d = load_descriptor("instance-b")
    N = resolve_ids(loc_b, named_subgroup(d, loc_b.realization, "alt"))
    EN = fusion_of_partial_subgroup(loc_b, N)
    assert EN.S.order == 4
    assert len(EN.aut(EN.S)) == 3  # inner trivial, order-3 adjoined


def test_saturated_on_bundled_groups():
    for name, G, p in bundled_groups():
        S = sylow_subgroup(G, p)
        assert is_saturated(fusion_of_group(G, S, p=p)), name


def test_not_saturated_handmade(s4, klein):
    """Two of the three order-2 subgroups fused with no extension data."""
    subs = sorted((P for P in subgroup_lattice(klein) if P.order == 2),
                  key=lambda P: P.elements)
    u1, u2 = subs[0], subs[1]
    e = tuple(range(4))
    a = next(iter(u1.eset - {e}))
    b = next(iter(u2.eset - {e}))
    phi = FMap([(e, e), (a, b)])
    Fbad = close(klein, 2, [phi])
    assert not is_saturated(Fbad)


def test_inner_fusion_saturated(s4_sylow):
    assert is_saturated(inner_fusion(s4_sylow, 2))


def test_strongly_closed(F, s4, klein):
    assert is_strongly_closed(F, F.subgroup(klein.eset))
    u = generated_subgroup(s4, [from_cycles(4, (1, 2))])
    assert not is_strongly_closed(F, F.subgroup(u.eset))


def test_strong_closure_of_one_involution(F, s4, klein):
    u = generated_subgroup(s4, [from_cycles(4, (1, 2), (3, 4))])
    assert strong_closure(F, F.subgroup(u.eset)).eset == klein.eset


def test_normalizer_system_of_normal_subgroup_is_whole(F, klein):
    assert normalizer_system(F, F.subgroup(klein.eset)) == F


def test_normalizer_system_of_sylow(s4, s4_sylow, F):
    """For T = S the morphisms are those extending to S-normalizing maps;
    the result is the fusion of N_G(S)."""
    NS = normalizer(s4, s4_sylow)
    oracle = fusion_of_group(s4, s4_sylow, acting=NS.elements, p=2)
    assert normalizer_system(F, F.subgroup(s4_sylow.eset)) == oracle


def test_centric_and_radical(F, s4_sylow, klein):
    assert is_centric(F, F.subgroup(klein.eset))
    crs = {P.eset for P in fu.centric_radicals(F)}
    assert crs == {klein.eset, s4_sylow.eset}


def test_subcentric_all_of_lattice(F):
    assert len(subcentric_subgroups(F)) == len(F.subgroups)


def test_op_core(F, klein):
    assert op_core(F).eset == klein.eset


def test_normal_subsystem_true_cases(F, E, klein):
    assert is_normal_subsystem(F, E)
    assert is_normal_subsystem(F, inner_fusion(F.subgroup(klein.eset), 2))


def test_normal_subsystem_false_case(F, s4):
    u = generated_subgroup(s4, [from_cycles(4, (1, 2), (3, 4))])
    assert not is_normal_subsystem(F, inner_fusion(F.subgroup(u.eset), 2))


def test_normal_implies_strongly_closed(F, E):
    assert is_strongly_closed(F, F.subgroup(E.S.eset))


def test_subnormal_chain_depth_two(F, s4):
    u = generated_subgroup(s4, [from_cycles(4, (1, 2), (3, 4))])
    Eu = inner_fusion(F.subgroup(u.eset), 2)
    verdict, chain = is_subnormal_subsystem(F, Eu)
    assert verdict is True
    assert [c.S.order for c in chain] == [2, 4, 8]


def test_subnormal_rejects_non_subsystem(F, s5, s5_sylow):
    other = fusion_of_group(s5, s5_sylow)
    verdict, chain = is_subnormal_subsystem(F, other)
    assert verdict is False


def test_net_identity_on_bundled_triples():
    """N over the strongly closed subgroup inside the fusion system of a
    partial subgroup equals the fusion system of its normalizer."""
    from locfusion.locality import normalizer_carrier
    for name, L, H, T_labels in net_triples():
        EH = fusion_of_partial_subgroup(L, H)
        T = EH.subgroup(frozenset(T_labels))
        assert is_strongly_closed(EH, T), name
        lhs = normalizer_system(EH, T)
        t_ids = frozenset(L.ids_of_labels(T_labels))
        NH = frozenset(normalizer_carrier(L, t_ids)) & H
        rhs = fusion_of_partial_subgroup(L, NH)
        assert lhs == rhs, name


def test_export_deterministic(F):
    import json
    a = json.dumps(F.to_json(), sort_keys=True)
    b = json.dumps(F.to_json(), sort_keys=True)
    assert a == b
