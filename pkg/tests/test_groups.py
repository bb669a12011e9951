import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from endotriv.builtin import builtin, direct_product
from endotriv.groups import (BudgetExceeded, GroupError, PermGroup, QuotientGroup, enumerate_group,
                             find_subgroup, format_group_text, hom_to_units_order, is_normal,
                             iso_type_small, mask_members, parse_group_text, subgroup_lattice)

from conftest import ALL_FIXTURES, group


def test_enumerate_small_groups():
    assert enumerate_group(2, [[1, 0]]).order == 2
    assert enumerate_group(3, [[1, 0, 2], [1, 2, 0]]).order == 6
    assert enumerate_group(4, [[1, 2, 3, 0], [0, 3, 2, 1]]).order == 8


def test_elements_sorted_with_identity_first():
    g = enumerate_group(4, [[1, 2, 3, 0], [0, 3, 2, 1]])
    assert list(g.elements) == sorted(g.elements)
    assert g.elements[0] == (0, 1, 2, 3)
    for s in g.generators:
        assert tuple(s) in g.index


def test_order_cap():
    with pytest.raises(BudgetExceeded):
        enumerate_group(5, [[1, 2, 3, 4, 0], [1, 0, 2, 3, 4]], order_cap=100)


def test_invalid_permutation_rejected():
    with pytest.raises(GroupError):
        PermGroup(3, [[0, 0, 1]])


@pytest.mark.parametrize("spec,n_subs,n_classes", [
    ("cyclic:4", 3, 3), ("klein", 5, 5), ("s3", 6, 4), ("quaternion:8", 6, 6), ("dihedral:8", 10, 8),
])
def test_lattice_counts(spec, n_subs, n_classes):
    lat = group(spec).lattice
    assert len(lat) == n_subs
    assert lat.num_classes == n_classes


def test_klein_from_generators():
    g = PermGroup(4, [[1, 0, 3, 2], [2, 3, 0, 1]])
    lat = subgroup_lattice(g)
    assert (len(lat), lat.num_classes) == (5, 5)


def test_subgroup_cap():
    with pytest.raises(BudgetExceeded):
        subgroup_lattice(group("dihedral:8"), subgroup_cap=4)


@pytest.mark.parametrize("spec,p,orders", [
    ("s3", 3, [1, 3]), ("s3", 2, [1, 2]), ("cyclic:4", 2, [1, 2, 4]),
])
def test_p_subposet(spec, p, orders):
    assert group(spec).lattice.p_subposet(p).orders == orders


@pytest.mark.parametrize("spec,p", ALL_FIXTURES)
def test_lattice_invariants(spec, p):
    g = group(spec)
    lat = g.lattice
    for i, s in enumerate(lat.subgroups):
        assert g.order % s.order == 0
        members = s.members
        for a in members:
            for b in members:
                assert g.mul(a, b) in s
        assert len(lat.classes[lat.class_of[i]]) * lat.normalizer(i).order == g.order
    assert len(lat.classes[0]) == 1 and len(lat.classes[-1]) == 1
    sc = lat.subconjugacy
    n = lat.num_classes
    for a in range(n):
        assert sc[a][a]
        for b in range(n):
            if sc[a][b]:
                assert lat.class_order(b) % lat.class_order(a) == 0
                if sc[b][a]:
                    assert a == b
                for c in range(n):
                    if sc[b][c]:
                        assert sc[a][c]


@pytest.mark.parametrize("spec,p", ALL_FIXTURES)
def test_sylow_class_unique(spec, p):
    poset = group(spec).lattice.p_subposet(p)
    assert len(poset.sylow) == 1
    s = poset.sylow[0]
    maximal = [i for i in range(len(poset))
               if not any(poset.subconj[i][j] for j in range(len(poset)) if j != i)]
    assert maximal == [s]


def test_quotients():
    c4 = group("cyclic:4")
    lat = c4.lattice
    assert QuotientGroup(c4, lat.subgroups[-1], lat.subgroups[1]).order == 2
    s3 = group("s3")
    c3 = s3.lattice.p_subposet(3).rep(1)
    assert QuotientGroup(s3, s3.lattice.subgroups[-1], c3).order == 2
    q8 = group("quaternion:8")
    z = q8.lattice.p_subposet(2).rep(1)
    q = QuotientGroup(q8, q8.lattice.subgroups[-1], z)
    assert q.order == 4
    assert iso_type_small(q) == ("elementary_abelian", 2, 2)


def test_quotient_rejects_non_normal():
    s3 = group("s3")
    c2 = s3.lattice.p_subposet(2).rep(1)
    with pytest.raises(GroupError):
        QuotientGroup(s3, s3.lattice.subgroups[-1], c2)


@pytest.mark.parametrize("spec,n,h,expected", [
    ("dihedral:8", 4, 1, ("elementary_abelian", 2, 2)),
    ("quaternion:8", 8, 1, ("quaternion8",)),
])
def test_quotient_well_defined(spec, n, h, expected):
    g = group(spec)
    lat = g.lattice
    top = lat.subgroups[-1]
    for sub in lat.subgroups:
        if not is_normal(g, sub):
            continue
        q = QuotientGroup(g, top, sub)
        rng = random.Random(sub.mask)
        for _ in range(100):
            a, b = rng.randrange(q.order), rng.randrange(q.order)
            ra, rb = rng.choice(q.cosets[a]), rng.choice(q.cosets[b])
            assert q.product(a, b, ra, rb) == q.product(a, b)
    assert iso_type_small(QuotientGroup(g, top, lat.subgroups[0])) == expected or n != g.order


@pytest.mark.parametrize("spec,expected", [
    ("cyclic:4", ("cyclic", 4)), ("klein", ("elementary_abelian", 2, 2)),
    ("quaternion:8", ("quaternion8",)), ("dihedral:8", ("other",)), ("s3", ("other",)),
])
def test_iso_type_of_whole_group(spec, expected):
    g = group(spec)
    lat = g.lattice
    assert iso_type_small(QuotientGroup(g, lat.subgroups[-1], lat.subgroups[0])) == expected


@pytest.mark.parametrize("spec,p,torsion", [
    ("s3", 3, (2,)), ("cyclic:4", 2, ()), ("s3", 2, ()), ("frobenius:20", 5, (4,)),
    ("cyclic:9", 3, ()), ("cyclic:4", 3, (4,)),
])
def test_hom_to_units(spec, p, torsion):
    assert hom_to_units_order(group(spec), p).torsion == torsion


def test_group_file_round_trip():
    g = group("dihedral:8")
    text = format_group_text(g)
    h = parse_group_text("# dihedral\n" + text)
    assert h.elements == g.elements


@pytest.mark.parametrize("text", ["", "3\n0 1\n", "x\n", "2\n0 0\n", "3\n0 1 5\n"])
def test_bad_group_files(text):
    with pytest.raises(GroupError):
        parse_group_text(text)


def test_find_subgroup():
    g = group("s3")
    h = find_subgroup(g, [[1, 2, 0]])
    assert h.order == 3
    with pytest.raises(GroupError):
        find_subgroup(g, [[0, 1, 2, 3]])


def test_direct_product():
    g = direct_product(builtin("cyclic:3"), builtin("cyclic:3"))
    assert g.order == 9 and g.is_abelian
    assert g.lattice.num_classes == 6


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["dihedral:8", "quaternion:8", "s3", "frobenius:20"]), st.data())
def test_closure_is_subgroup(spec, data):
    g = group(spec)
    gens = data.draw(st.lists(st.integers(0, g.order - 1), max_size=3))
    mask = g.closure(gens)
    members = mask_members(mask)
    assert g.order % len(members) == 0
    assert mask in g.lattice.index_of_mask
    for a in members:
        assert (mask >> g.inverse[a]) & 1
