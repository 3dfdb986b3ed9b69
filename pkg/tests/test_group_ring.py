from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from torsionhelp.group_ring import (
    GroupRingElement,
    NotIdempotent,
    NotNormalized,
    TableMismatch,
    TrivialIdempotent,
    augmentation,
    bicyclic_unit,
    congruent_mod_commutators,
    double_action_character,
    element_order,
    idempotent_identity_coefficient,
    mrsw_check,
    partial_augmentations,
    subgroup_idempotent,
)
from torsionhelp import s3_example as s3


def small_elements(t):
    return st.lists(st.integers(-3, 3), min_size=t.order, max_size=t.order).map(
        lambda cs: GroupRingElement(t, tuple(Fraction(c) for c in cs))
    )


def test_tables_consistent(group_tables, tables):
    for name, gt in group_tables.items():
        t = tables[name]
        assert gt.order == t.group_order
        for c in range(gt.num_classes):
            assert len(gt.class_members(c)) * t.classes[c].centralizer_order == t.group_order
            assert all(gt.element_order[g] == t.classes[c].element_order for g in gt.class_members(c))


def test_a5_labeling_respects_characters(group_tables, tables):
    # the relabeling is chosen so the shipped characters are class functions of the table
    gt, t = group_tables["A5"], tables["A5"]
    g = gt.class_members(t.class_index("5a"))[0]
    g2 = gt.mult[g][g]
    assert gt.class_of[g2] == t.class_index("5b")


def test_ring_axioms(group_tables):
    t = group_tables["S3"]

    @given(small_elements(t), small_elements(t), small_elements(t))
    @settings(max_examples=40)
    def check(a, b, c):
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        assert augmentation(a * b) == augmentation(a) * augmentation(b)
        assert congruent_mod_commutators(a * b, b * a)

    check()


def test_table_mismatch(group_tables):
    with pytest.raises(TableMismatch):
        GroupRingElement.one(group_tables["S3"]) + GroupRingElement.one(group_tables["C6"])


def test_trivial_units(group_tables):
    for t in group_tables.values():
        for g in range(t.order):
            u = GroupRingElement.basis(t, g)
            assert element_order(u) == t.element_order[g]
            res = mrsw_check(u)
            assert res.conjugate and res.targets[1] == t.class_of[g]


def test_non_torsion_detected(group_tables):
    t = group_tables["S3"]
    # 1 + (1 - h) g h_hat is a unit of infinite order when g does not normalize <h>
    _, b = s3.generators(t)
    for g in range(t.order):
        v, vinv = bicyclic_unit(t, g, b)
        assert v * vinv == GroupRingElement.one(t)
        nilpotent_part = v - GroupRingElement.one(t)
        if any(nilpotent_part.coeffs):
            assert element_order(v) is None


def test_mrsw_rejects_unnormalized(group_tables):
    t = group_tables["S3"]
    with pytest.raises(NotNormalized):
        mrsw_check(-GroupRingElement.one(t))


@pytest.mark.parametrize("name", ["S3", "S4"])
def test_conjugated_units_keep_partial_augmentations(group_tables, name):
    # w g w^-1 for bicyclic w is a torsion unit with the partial augmentations of g
    t = group_tables[name]
    gs = range(0, t.order, max(1, t.order // 8))
    for g in gs:
        for h in range(1, t.order, max(1, t.order // 6)):
            w, winv = bicyclic_unit(t, (g + 1) % t.order, h)
            u = w * GroupRingElement.basis(t, g) * winv
            assert u.is_integral()
            assert element_order(u) == t.element_order[g]
            assert partial_augmentations(u) == partial_augmentations(GroupRingElement.basis(t, g))
            if g:
                assert u.identity_coefficient() == 0  # Berman-Higman
            assert mrsw_check(u).conjugate


def test_double_action_character_at_identity(group_tables):
    t = group_tables["S4"]
    g = 5
    u = GroupRingElement.basis(t, g)
    # (u^j, 1) fixes every basis vector exactly when u^j = 1
    assert double_action_character(u, 0, 0) == t.order
    assert double_action_character(u, t.element_order[g], t.class_of[0]) == t.order


def test_idempotents(group_tables):
    t = group_tables["S4"]
    for h in range(1, t.order):
        members = []
        x = 0
        while True:
            members.append(x)
            x = t.mult[x][h]
            if x == 0:
                break
        e = subgroup_idempotent(t, members)
        coeff = idempotent_identity_coefficient(e)
        assert coeff == Fraction(1, len(members))
        assert 0 < coeff < 1
    with pytest.raises(TrivialIdempotent):
        idempotent_identity_coefficient(GroupRingElement.one(t))
    with pytest.raises(NotIdempotent):
        idempotent_identity_coefficient(GroupRingElement.basis(t, 1))


def test_s3_unit():
    t = s3.s3_table()
    u = s3.example_unit(t)
    assert u * u == GroupRingElement.one(t)
    assert u.identity_coefficient() == 0
    assert partial_augmentations(u) == (0, 1, 0)
    res = mrsw_check(u)
    assert res.conjugate and res.order == 2 and res.targets == {1: 1, 2: 0}
    assert s3.phi_vector(t, 0) == (1, 1, 1, 0, 0, 1)


def test_s3_lattice():
    t = s3.s3_table()
    image, described = s3.image_lattice(t), s3.described_lattice()
    assert image.basis == described.basis
    assert image.index() == 18
    for v in s3.phi_images(t):
        for coeffs, m in s3.CONGRUENCES:
            assert sum(a * b for a, b in zip(coeffs, v)) % m == 0


def test_central_torsion_units_are_trivial(group_tables):
    # every element of Z C6 is central; brute force small coefficients
    import itertools

    t = group_tables["C6"]
    found = []
    for cs in itertools.product((-1, 0, 1), repeat=t.order):
        if abs(sum(cs)) != 1:
            continue
        u = GroupRingElement(t, tuple(Fraction(c) for c in cs))
        if element_order(u, cap=2 * t.exponent) is not None:
            found.append(cs)
    assert len(found) == 2 * t.order
    assert all(sum(1 for c in cs if c) == 1 for cs in found)


@pytest.mark.parametrize("name", ["S3", "S4"])
def test_conjugate_subgroup_is_a_basis(group_tables, name):
    from torsionhelp._linalg import rank
    from torsionhelp.lattice import hnf

    t = group_tables[name]
    w, winv = bicyclic_unit(t, 1, 2)
    H = [w * GroupRingElement.basis(t, g) * winv for g in range(t.order)]
    vectors = [[int(c) for c in h.coeffs] for h in H]
    # a finite subgroup of V(ZG) is linearly independent; one of order |G| spans ZG
    assert rank(vectors) == t.order
    assert hnf(vectors).index() == 1
    # and it is closed, with every cyclic subgroup order dividing |G|
    keys = {h.coeffs for h in H}
    for a in H[:4]:
        for b in H[:4]:
            assert (a * b).coeffs in keys
        assert t.order % element_order(a) == 0
