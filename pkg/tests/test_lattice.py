import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from raneykit.lattice import (
    CarrierTooLarge,
    NotALattice,
    NotAPartialOrder,
    NotComplemented,
    Subset,
    chain,
    check_subframe,
    complement,
    distributivity_witness,
    downset_lattice,
    find_isomorphism,
    heyting_implication,
    is_boolean,
    is_distributive,
    is_subframe,
    join_irreducibles,
    join_of,
    meet_of,
    powerset_lattice,
    sublattice,
    validate_lattice,
)


def relation(pairs, n):
    leq = np.eye(n, dtype=bool)
    for a, b in pairs:
        leq[a, b] = True
    return leq


def diamond_m3():
    # 0 < a,b,c < 1 with three incomparable atoms
    pairs = [(0, i) for i in range(1, 5)] + [(i, 4) for i in range(1, 4)]
    return validate_lattice(relation(pairs, 5))


def pentagon_n5():
    # 0 < a < c < 1 and 0 < b < 1, b incomparable to a, c
    pairs = [(0, 1), (0, 2), (0, 3), (0, 4), (1, 3), (1, 4), (3, 4), (2, 4)]
    return validate_lattice(relation(pairs, 5))


SMALL_FAMILY = [
    chain(1), chain(2), chain(3), chain(5),
    powerset_lattice(0), powerset_lattice(1), powerset_lattice(2), powerset_lattice(3),
    diamond_m3(), pentagon_n5(),
]


# -- validate_lattice

def test_one_point_lattice():
    L = validate_lattice([[True]])
    assert L.n == 1 and L.bottom == L.top == 0


def test_three_chain_min_max():
    L = chain(3)
    assert L.bottom == 0 and L.top == 2
    for a in range(3):
        for b in range(3):
            assert L.meet(a, b) == min(a, b)
            assert L.join(a, b) == max(a, b)


def test_missing_join_reported_with_witness():
    # two atoms with two incomparable upper bounds: no least upper bound
    pairs = [(0, 2), (0, 3), (1, 2), (1, 3)]
    leq = relation(pairs, 4)
    # oracle: brute-force search confirms no element is a least upper bound of (0, 1)
    uppers = [x for x in range(4) if leq[0, x] and leq[1, x]]
    assert not any(all(leq[x, y] for y in uppers) for x in uppers)
    with pytest.raises(NotALattice) as exc:
        validate_lattice(leq)
    assert exc.value.witness is not None


def test_cycle_rejected():
    leq = relation([(0, 1), (1, 0)], 2)
    with pytest.raises(NotAPartialOrder):
        validate_lattice(leq)


def test_transitivity_enforced():
    leq = relation([(0, 1), (1, 2)], 3)  # missing (0, 2)
    with pytest.raises(NotAPartialOrder):
        validate_lattice(leq)


def test_carrier_cap(monkeypatch):
    monkeypatch.setenv("RANEYKIT_MAX_ELEMS", "4")
    with pytest.raises(CarrierTooLarge):
        chain(5)


# -- distributivity / boolean

def test_chains_distributive():
    for n in (1, 2, 3, 6):
        assert is_distributive(chain(n))


def test_m3_not_distributive():
    L = diamond_m3()
    # oracle: exhaustive triple check
    found = False
    for a in range(L.n):
        for b in range(L.n):
            for c in range(L.n):
                lhs = L.meet(a, L.join(b, c))
                rhs = L.join(L.meet(a, b), L.meet(a, c))
                if lhs != rhs:
                    found = True
    assert found
    assert not is_distributive(L)
    assert distributivity_witness(L) is not None


def test_n5_not_distributive():
    assert not is_distributive(pentagon_n5())


def test_powerset_boolean():
    assert is_boolean(powerset_lattice(3))
    assert complement(powerset_lattice(2), 0b01) == 0b10


def test_two_element_complement():
    L = chain(2)
    assert is_boolean(L)
    assert complement(L, 0) == 1


def test_three_chain_not_boolean():
    L = chain(3)
    assert not is_boolean(L)
    with pytest.raises(NotComplemented) as exc:
        complement(L, 1)
    assert exc.value.witness == 1


# -- join irreducibles / Birkhoff

def test_irreducibles_three_chain():
    # oracle: direct check of join decompositions
    L = chain(3)
    irr = []
    for j in range(3):
        if j == L.bottom:
            continue
        if not any(L.join(a, b) == j and j not in (a, b) for a in range(3) for b in range(3)):
            irr.append(j)
    assert irr == [1, 2]
    assert join_irreducibles(L).elements == (1, 2)


def test_irreducibles_powerset_are_atoms():
    L = powerset_lattice(2)
    assert join_irreducibles(L).elements == (0b01, 0b10)


def test_irreducibles_trivial():
    assert join_irreducibles(chain(1)).elements == ()


def birkhoff_reconstruct(L):
    """Independent reconstruction: downsets of J(L) ordered by inclusion."""
    J = join_irreducibles(L).elements
    rel = np.zeros((len(J), len(J)), dtype=bool)
    for i, a in enumerate(J):
        for j, b in enumerate(J):
            rel[i, j] = L.le(a, b)
    return downset_lattice(rel)


@pytest.mark.parametrize("L", [x for x in SMALL_FAMILY if is_distributive(x)])
def test_birkhoff_representation(L):
    D = birkhoff_reconstruct(L)
    assert D.n == L.n
    # a |-> { j in J(L) : j <= a } is an order isomorphism onto the downsets
    J = join_irreducibles(L).elements
    emb = {}
    for a in range(L.n):
        emb[a] = frozenset(j for j in J if L.le(j, a))
    assert len(set(emb.values())) == L.n
    for a in range(L.n):
        for b in range(L.n):
            assert L.le(a, b) == (emb[a] <= emb[b])


# -- subframes

def test_bounds_only_subframe():
    for L in SMALL_FAMILY:
        S = Subset.from_indices(L, [L.bottom, L.top])
        assert is_subframe(L, S)


def test_improper_subframe_iff_distributive():
    for L in SMALL_FAMILY:
        assert is_subframe(L, Subset.full(L)) == is_distributive(L)


def test_powerset_chain_subframe():
    L = powerset_lattice(2)
    S = Subset.from_indices(L, [0b00, 0b01, 0b11])
    # oracle: closure check by hand over all pairs
    for x in S:
        for y in S:
            assert L.meet(x, y) in S and L.join(x, y) in S
    assert is_subframe(L, S)


def test_subframe_witness_on_failure():
    L = powerset_lattice(2)
    S = Subset.from_indices(L, [0b00, 0b01, 0b10, 0b11])
    rep = check_subframe(L, Subset.from_indices(L, [0b01, 0b11]))
    assert not rep.ok and rep.reason == "missing bottom"
    rep2 = check_subframe(L, S)
    assert rep2.ok


# -- heyting implication

@pytest.mark.parametrize("L", [x for x in SMALL_FAMILY if is_distributive(x)])
def test_heyting_adjunction_exhaustive(L):
    for a in range(L.n):
        for b in range(L.n):
            imp = heyting_implication(L, a, b)
            for x in range(L.n):
                assert L.le(x, imp) == L.le(L.meet(a, x), b)


def test_heyting_special_cases():
    L = chain(4)
    assert heyting_implication(L, 1, 2) == L.top          # a <= b
    assert heyting_implication(L, 3, 1) == 1              # chain with a > b
    assert heyting_implication(L, L.bottom, 2) == L.top   # a = bottom


# -- meet_of / join_of

def test_meet_join_of_subsets():
    L = chain(3)
    assert meet_of(L, Subset.from_indices(L, [1, 2])) == 1
    B = powerset_lattice(2)
    assert join_of(B, Subset.from_indices(B, [0b01, 0b10])) == B.top
    assert meet_of(L, Subset.from_indices(L, [])) == L.top
    assert join_of(L, Subset.from_indices(L, [])) == L.bottom


# -- lattice operation laws, exhaustive at small size

@pytest.mark.parametrize("L", [x for x in SMALL_FAMILY if x.n <= 8])
def test_lattice_operation_laws(L):
    n = L.n
    for a in range(n):
        assert L.meet(a, a) == a and L.join(a, a) == a
        assert L.le(L.bottom, a) and L.le(a, L.top)
        for b in range(n):
            assert L.meet(a, b) == L.meet(b, a)
            assert L.join(a, b) == L.join(b, a)
            assert L.meet(a, L.join(a, b)) == a  # absorption
            assert L.join(a, L.meet(a, b)) == a
            for c in range(n):
                assert L.meet(L.meet(a, b), c) == L.meet(a, L.meet(b, c))
                assert L.join(L.join(a, b), c) == L.join(a, L.join(b, c))


# -- sublattice and isomorphism search

def test_sublattice_carrier_map():
    L = powerset_lattice(2)
    sub, carrier = sublattice(L, [0b00, 0b01, 0b11])
    assert sub.n == 3 and carrier == (0, 1, 3)
    assert is_distributive(sub)


def test_isomorphism_found_and_refuted():
    assert find_isomorphism(chain(3), chain(3)) is not None
    assert find_isomorphism(chain(4), powerset_lattice(2)) is None
    assert find_isomorphism(diamond_m3(), pentagon_n5()) is None
    img = find_isomorphism(powerset_lattice(2), powerset_lattice(2))
    assert img is not None and img[0] == 0 and img[3] == 3


def test_isomorphism_with_marked_subset():
    B = powerset_lattice(2)
    m1 = Subset.from_indices(B, [0, 1, 3]).mask
    m2 = Subset.from_indices(B, [0, 2, 3]).mask
    img = find_isomorphism(B, B, m1, m2)
    assert img is not None and img[1] == 2
    m3 = Subset.from_indices(B, [0, 3]).mask
    assert find_isomorphism(B, B, m1, m3) is None


# -- randomized structure properties

@st.composite
def random_sublattice_of_powerset(draw):
    k = draw(st.integers(min_value=1, max_value=4))
    full = (1 << k) - 1
    gens = draw(st.sets(st.integers(min_value=0, max_value=full), max_size=4))
    elems = {0, full} | gens
    changed = True
    while changed:
        changed = False
        for x in list(elems):
            for y in list(elems):
                for z in (x & y, x | y):
                    if z not in elems:
                        elems.add(z)
                        changed = True
    carrier = sorted(elems)
    leq = [[(a & b) == a for b in carrier] for a in carrier]
    return validate_lattice(leq)


@given(random_sublattice_of_powerset())
@settings(max_examples=40, deadline=None)
def test_random_distributive_lattices_validate(L):
    assert is_distributive(L)
    J = join_irreducibles(L).elements
    for a in range(L.n):
        assert L.join_all(j for j in J if L.le(j, a)) == a
