"""Solver tests, checked against independent recomputations.

The oracle recomputes eigenvalue multiplicities by a discrete Fourier
transform over the powers of u, mu_i = 1/n sum_j chi(u^j) zeta^(-ij), with
chi(u^j) = sum_C eps_C(u^j) chi(C) and eps(u^j) obtained from the branch via
power maps. It shares no code with the trace rows used by the solver.
"""

import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from torsionhelp import help_core as hc
from torsionhelp._linalg import rank
from torsionhelp.cyclotomic import Cyclotomic, divisors, root_power
from torsionhelp.group_data import SHIPPED_GROUPS, exponent
from torsionhelp.group_ring import (
    GroupRingElement,
    bicyclic_unit,
    element_order,
    power_partial_augmentations,
)


@pytest.fixture(scope="module")
def solved(tables):
    return {name: hc.solve_all(t) for name, t in tables.items()}


def eps_of_power(table, branch, j):
    n = branch.order
    d = math.gcd(j, n)
    vec = branch.at(d)
    k = (j // d) % (n // d)
    return hc.power_vector(table, vec, k) if n // d > 1 else vec


def dft_multiplicities(table, chi, branch):
    n = branch.order
    values = table.characters[chi].values
    chi_pows = []
    for j in range(n):
        vec = eps_of_power(table, branch, j)
        chi_pows.append(sum((values[c] * e for c, e in vec.entries), Cyclotomic.zero()))
    out = []
    for i in range(n):
        s = sum((chi_pows[j] * root_power(n, -i * j) for j in range(n)), Cyclotomic.zero(n))
        out.append(s.to_rational() / n)
    return out


def solver_multiplicities(table, chi, branch):
    forms = hc.build_multiplicity_forms(table, chi, branch.order, branch)
    return [f.evaluate(branch.top.as_dict()) for f in forms]


# --- oracle agreement ---------------------------------------------------


@pytest.mark.parametrize("name", SHIPPED_GROUPS)
def test_forms_match_dft_oracle_on_all_solutions(tables, solved, name):
    t = tables[name]
    for n, s in solved[name].items():
        for br in s.solutions:
            for chi in range(len(t.characters)):
                assert solver_multiplicities(t, chi, br) == dft_multiplicities(t, chi, br)


@pytest.mark.parametrize("name", SHIPPED_GROUPS)
def test_forms_match_oracle_off_solutions(tables, solved, name):
    # arbitrary (non-solution) top vectors: both computations are affine in eps
    t = tables[name]
    for n, s in solved[name].items():
        adm = hc.admissible_classes(t, n)
        if n == 1 or not s.solutions:
            continue
        base = s.solutions[0]
        for vals in itertools.islice(itertools.product(range(-2, 3), repeat=len(adm)), 40):
            vec = hc.PAVector.from_dict(n, dict(zip(adm, vals)))
            br = hc.PABranch.from_dict(n, {**base.as_dict(), 1: vec})
            for chi in range(len(t.characters)):
                assert solver_multiplicities(t, chi, br) == dft_multiplicities(t, chi, br)


@pytest.mark.parametrize("name", ["S3", "S4"])
def test_conjugated_units_against_oracle(tables, group_tables, name):
    """Concrete units w g w^-1 of ZG: measured eps, true eigenvalue counts, solver forms."""
    t, gt = tables[name], group_tables[name]
    for g in range(1, gt.order, 3):
        w, winv = bicyclic_unit(gt, g, (g * 7 + 1) % gt.order or 1)
        u = w * GroupRingElement.basis(gt, g) * winv
        n = element_order(u)
        assert n == gt.element_order[g]
        pas = power_partial_augmentations(u, n)
        br = hc.branch_from_partial_augmentations(t, n, pas)
        assert hc.check_branch(t, br) == []
        for chi in range(len(t.characters)):
            mu = solver_multiplicities(t, chi, br)
            assert mu == dft_multiplicities(t, chi, br)
            assert all(m.denominator == 1 and m >= 0 for m in mu)
            assert sum(mu) == t.characters[chi].degree


# --- soundness and structure --------------------------------------------


@pytest.mark.parametrize("name", SHIPPED_GROUPS)
def test_trivial_units_never_excluded(tables, solved, name):
    t = tables[name]
    for c in range(len(t.classes)):
        br = hc.trivial_branch(t, c)
        assert hc.check_branch(t, br) == []
        n = br.order
        assert br in solved[name][n].solutions


@pytest.mark.parametrize("name", SHIPPED_GROUPS)
def test_solutions_closed_under_galois(tables, solved, name):
    # u -> u^k (k a unit mod n) permutes the solution set
    t = tables[name]
    for n, s in solved[name].items():
        keys = {b.sort_key() for b in s.solutions}
        for br in s.solutions:
            for k in range(2, n):
                if math.gcd(k, n) != 1:
                    continue
                img = hc.PABranch.from_dict(
                    n, {d: hc.power_vector(t, v, k) if n // d > 1 else v for d, v in br.assignments}
                )
                assert img.sort_key() in keys


@pytest.mark.parametrize("name", SHIPPED_GROUPS)
def test_every_solution_satisfies_constraints(tables, solved, name):
    t = tables[name]
    for s in solved[name].values():
        for br in s.solutions:
            assert hc.check_branch(t, br) == []
            assert sum(br.top.values) == 1


def test_fewer_characters_never_exclude_more(tables):
    t = tables["S4"]
    all_chars = list(range(len(t.characters)))
    full = hc.solve_all(t)
    for drop in all_chars[1:]:
        chars = [c for c in all_chars if c != drop]
        try:
            part = hc.solve_all(t, chars)
        except hc.UnboundedSystem:
            continue
        for n, s in full.items():
            keys = {b.sort_key() for b in part[n].solutions}
            assert {b.sort_key() for b in s.solutions} <= keys


@pytest.mark.parametrize("name", SHIPPED_GROUPS)
def test_rows_have_full_rank(tables, solved, name):
    t = tables[name]
    for n, s in solved[name].items():
        if n == 1 or not s.solutions or s.shortcut:
            continue
        adm, rows = hc._integer_rows(t, n, s.solutions[0].as_dict(), range(len(t.characters)))
        # augmentation row plus the character rows pin down every eps
        assert rank([r[2] for r in rows] + [tuple(1 for _ in adm)]) == len(adm)


@pytest.mark.parametrize("name,box", [("C6", 3), ("S3", 4), ("S4", 3), ("A5", 3)])
def test_search_matches_brute_force(tables, solved, name, box):
    """Every vector in a box that passes check_branch is found by the solver, and vice versa."""
    t = tables[name]
    for n, s in solved[name].items():
        if n == 1:
            continue
        adm = hc.admissible_classes(t, n)
        if not adm or len(adm) > 4:
            continue
        proper = {m: solved[name][m] for m in divisors(n) if m < n}
        found = set()
        for powers in hc._compatible_powers(n, proper):
            for vals in itertools.product(range(-box, box + 1), repeat=len(adm) - 1):
                top = dict(zip(adm, list(vals) + [1 - sum(vals)]))
                br = hc.PABranch.from_dict(n, {**powers, 1: hc.PAVector.from_dict(n, top)})
                if not hc.check_branch(t, br):
                    found.add(br.sort_key())
        assert found == {b.sort_key() for b in s.solutions}


def test_unbounded_with_trivial_character_only(tables):
    t = tables["A5"]
    trivial = {1: hc.solve_order(t, 1, {})}
    with pytest.raises(hc.UnboundedSystem):
        hc.solve_order(t, 5, trivial, [t.character_index("1")])


# --- worked results -----------------------------------------------------


def test_a5_order5_forms(tables):
    t = tables["A5"]
    chi = t.character_index("chi3")
    forms = hc.build_multiplicity_forms(t, chi, 5, {5: hc.PAVector.identity()})
    a, b = t.class_index("5a"), t.class_index("5b")
    assert forms[1].coefficients == {a: Fraction(-3, 5), b: Fraction(2, 5)}
    assert forms[2].coefficients == {a: Fraction(2, 5), b: Fraction(-3, 5)}
    assert forms[1].constant == forms[2].constant == Fraction(3, 5)
    s = hc.solve_order(t, 5, {1: hc.solve_order(t, 1, {})}, [chi])
    assert sorted(b.top.values for b in s.solutions) == [(0, 1), (1, 0)]


@pytest.mark.parametrize(
    "name,statuses",
    [
        ("A5", {2: "AllRationallyTrivial", 3: "AllRationallyTrivial", 5: "AllRationallyTrivial",
                6: "NoUnits", 10: "NoUnits", 15: "NoUnits", 30: "NoUnits"}),
        ("S3", {2: "AllRationallyTrivial", 3: "AllRationallyTrivial", 6: "NoUnits"}),
        ("S4", {2: "AllRationallyTrivial", 3: "AllRationallyTrivial", 4: "AllRationallyTrivial",
                6: "NoUnits", 12: "NoUnits"}),
        ("C6", {2: "AllRationallyTrivial", 3: "AllRationallyTrivial", 6: "AllRationallyTrivial"}),
        ("S5", {4: "Critical", 6: "Critical", 10: "NoUnits", 12: "NoUnits", 15: "NoUnits"}),
    ],
)
def test_statuses(solved, name, statuses):
    got = {n: solved[name][n].status.value for n in statuses}
    assert got == statuses


def test_verdicts(tables, solved):
    for name in ["S3", "S4", "A5", "C6"]:
        v = hc.verdicts(solved[name], tables[name])
        assert (v.zp1, v.spp, v.pgq) == ("Positive",) * 3
    v = hc.verdicts(solved["S5"], tables["S5"])
    assert (v.zp1, v.spp, v.pgq) == ("Inconclusive", "Positive", "Positive")
    assert v.critical_orders == [4, 6]


def test_prime_order_shortcut(tables, solved):
    for name, primes in [("S3", [2, 3]), ("S5", [3, 5]), ("A5", [2, 3])]:
        for p in primes:
            assert len(hc.admissible_classes(tables[name], p)) == 1
            s = solved[name][p]
            assert s.shortcut and s.nodes == 0 and len(s.solutions) == 1


def test_cohn_livingstone(tables):
    a5 = tables["A5"]
    c2, c3 = a5.class_index("2a"), a5.class_index("3a")
    assert hc.cohn_livingstone_filter(a5, 5, {a5.class_index("5a"): 2, a5.class_index("5b"): -1})
    # order 6: eps on 2-elements and on 3-elements must each vanish mod the prime
    assert not hc.cohn_livingstone_filter(a5, 6, {c2: 1, c3: 0})
    assert hc.cohn_livingstone_filter(a5, 6, {c2: 3, c3: -2}) is False
    assert hc.cohn_livingstone_filter(a5, 6, {c2: 4, c3: -3})
    s4 = tables["S4"]
    # order 4: the order-2 classes must sum to 0 mod 2
    assert not hc.cohn_livingstone_filter(s4, 4, {1: 1, 2: 0, 4: 0})


@given(st.sampled_from(SHIPPED_GROUPS), st.data())
@settings(max_examples=25)
def test_power_vector_composes(tables, name, data):
    t = tables[name]
    c = data.draw(st.integers(0, len(t.classes) - 1))
    n = t.classes[c].element_order
    units = [k for k in range(1, n + 1) if math.gcd(k, n) == 1]
    k1, k2 = data.draw(st.sampled_from(units)), data.draw(st.sampled_from(units))
    v = hc.PAVector.from_dict(n, {c: 1})
    assert hc.power_vector(t, hc.power_vector(t, v, k1), k2) == hc.power_vector(t, v, k1 * k2)
