import numpy as np
import pytest

from raneykit.completion import funayama_envelope_frame
from raneykit.extension import (
    ExtMorphism,
    NotCoframe,
    NotMeetGenerating,
    NotSubframe,
    boolean_lift,
    boolean_lift_by_closure,
    check_naturality,
    check_rho_naturality,
    check_triangles,
    check_UR_OI_square,
    check_zeta_naturality,
    compose_ext,
    ext_identity,
    ext_universe_epi,
    ext_universe_mono,
    functor_F_mor,
    functor_F_obj,
    functor_I,
    functor_R_mor,
    functor_R_obj,
    functor_U,
    is_ext_iso,
    is_order_iso,
    is_rmt_iso,
    is_universe_epi,
    is_universe_mono,
    phi,
    rho,
    t0_hull,
    validate_extension,
    zeta,
)
from raneykit.lattice import Subset, chain, powerset_lattice, validate_lattice
from raneykit.morphism import (
    MorphismTable,
    check_proximity_morphism,
    check_raney_morphism,
    id_raney,
    star,
)
from raneykit.mtalg import from_subframe, is_T0, validate_interior

B2 = powerset_lattice(1)
B4 = powerset_lattice(2)
B8 = powerset_lattice(3)


def discrete(B):
    return validate_interior(B, list(range(B.n)))


def indiscrete(B):
    box = [B.bottom] * B.n
    box[B.top] = B.top
    return validate_interior(B, box)


DISC2 = discrete(B2)
DISC4 = discrete(B4)
IND4 = indiscrete(B4)
IND8 = indiscrete(B8)
SIER4 = from_subframe(B4, [0b00, 0b01, 0b11])

COLLAPSE = MorphismTable(IND4, DISC2, (0, 0, 0, 1))
EXPAND = MorphismTable(DISC2, IND4, (0, 3))

ALGEBRAS = [DISC2, DISC4, IND4, IND8, SIER4,
            from_subframe(B8, [0b000, 0b001, 0b011, 0b111])]


def diamond_m3():
    leq = np.eye(5, dtype=bool)
    for a, b in [(0, i) for i in range(1, 5)] + [(i, 4) for i in range(1, 4)]:
        leq[a, b] = True
    return validate_lattice(leq)


# -- validation

def test_improper_extension_valid():
    for L in (chain(1), chain(3), powerset_lattice(2)):
        R = validate_extension(L, Subset.full(L))
        assert R.certificate["collapse_C_equals_L"]


def test_missing_atom_not_meet_generating():
    B = powerset_lattice(2)
    with pytest.raises(NotMeetGenerating) as exc:
        validate_extension(B, [0b00, 0b01, 0b11])
    assert exc.value.witness == 0b10  # the other atom


def test_m3_not_coframe():
    L = diamond_m3()
    with pytest.raises(NotCoframe):
        validate_extension(L, Subset.full(L))


def test_non_subframe_rejected():
    B = powerset_lattice(2)
    with pytest.raises(NotSubframe):
        validate_extension(B, [0b01, 0b11])


# -- functor R

def test_R_of_discrete_is_whole_carrier():
    R = functor_R_obj(DISC4)
    assert R.C.n == 4 and len(R.L) == 4


def test_R_of_indiscrete_is_two_chain():
    R = functor_R_obj(IND4)
    assert R.C.n == 2
    assert R.carrier_map == (0, 3)
    assert len(R.L) == 2


def test_R_functor_laws():
    # identities
    for M in (DISC4, IND4, SIER4):
        rid = functor_R_mor(id_raney(M))
        assert rid.map == tuple(range(rid.dom.C.n))
    # composition: restriction of the star composite is plain composition
    gf = star(COLLAPSE, EXPAND)
    assert functor_R_mor(gf).map == compose_ext(
        functor_R_mor(COLLAPSE), functor_R_mor(EXPAND)).map


# -- boolean lift

def test_boolean_lift_identity():
    D = chain(3)
    lift = boolean_lift(D, D, tuple(range(3)))
    assert lift.map == tuple(range(lift.dom_env.n))


def test_boolean_lift_three_chain_collapse():
    # h: 3-chain -> 2-chain sending the middle to the top
    D1, D2 = chain(3), chain(2)
    lift = boolean_lift(D1, D2, (0, 1, 1))
    # spectral computation: the unique irreducible of D2 pulls back to m
    assert lift.map == (0b0, 0b1, 0b0, 0b1)


def test_boolean_lift_matches_closure_oracle():
    cases = [
        (chain(3), chain(2), (0, 1, 1)),
        (chain(3), chain(3), (0, 0, 2)),
        (powerset_lattice(2), chain(2), (0, 1, 1, 1)),
        (chain(2), powerset_lattice(2), (0, 3)),
    ]
    for D1, D2, table in cases:
        lift = boolean_lift(D1, D2, table)
        assert boolean_lift_by_closure(D1, D2, table) == lift.map


# -- functor F

def test_F_of_three_chain_is_funayama_envelope():
    L = chain(3)
    R = validate_extension(L, Subset.full(L))
    M = functor_F_obj(R)
    assert M == funayama_envelope_frame(L)
    assert M.box == (0b00, 0b01, 0b00, 0b11)


def test_F_identity_law():
    for L in (chain(2), chain(3), powerset_lattice(2)):
        R = validate_extension(L, Subset.full(L))
        f = functor_F_mor(ext_identity(R))
        assert f.map == id_raney(functor_F_obj(R)).map


def test_F_composition_law():
    L3, L2 = chain(3), chain(2)
    R3 = validate_extension(L3, Subset.full(L3))
    R2 = validate_extension(L2, Subset.full(L2))
    h = ExtMorphism(R3, R2, (0, 1, 1))
    g = ExtMorphism(R2, R2, (0, 1))
    lhs = functor_F_mor(compose_ext(g, h))
    rhs = star(functor_F_mor(g), functor_F_mor(h))
    assert lhs.map == rhs.map


def test_F_image_is_raney_morphism():
    L3, L2 = chain(3), chain(2)
    R3 = validate_extension(L3, Subset.full(L3))
    R2 = validate_extension(L2, Subset.full(L2))
    h = ExtMorphism(R3, R2, (0, 1, 1))
    assert check_raney_morphism(functor_F_mor(h)).ok


# -- rho, zeta, phi

def test_rho_is_birkhoff_corestriction():
    L = chain(3)
    R = validate_extension(L, Subset.full(L))
    comp = rho(R)
    assert comp.kind == "rho"
    assert is_ext_iso(comp.table)
    # the envelope embeds 0 < m < 1 as 0 < {m} < {m,1}; saturated carrier
    # lists them ascending, so the component is the identity position map
    assert comp.table.map == (0, 1, 2)


def test_rho_iso_for_every_extension():
    for M in ALGEBRAS:
        R = functor_R_obj(M)
        assert is_ext_iso(rho(R).table)


def test_zeta_phi_tables_on_indiscrete_b4():
    z = zeta(IND4).table
    p = phi(IND4).table
    assert z.map == (0, 3)          # two-element hull onto {bottom, top}
    assert p.map == (0, 0, 0, 1)
    assert check_raney_morphism(z).ok
    assert check_raney_morphism(p).ok


def test_zeta_phi_mutual_inverses():
    for M in ALGEBRAS:
        z, p = zeta(M).table, phi(M).table
        assert star(z, p).map == id_raney(M).map
        assert star(p, z).map == id_raney(t0_hull(M)).map


def test_zeta_bijective_iff_t0():
    for M in ALGEBRAS:
        z = zeta(M).table
        bijective = len(set(z.map)) == M.B.n == z.dom.B.n
        assert bijective == is_T0(M)


# -- naturality and triangles

def test_zeta_naturality_on_fixtures():
    for g in (COLLAPSE, EXPAND, id_raney(SIER4), id_raney(IND4)):
        ok, witness = check_zeta_naturality(g)
        assert ok, witness


def test_rho_naturality_on_fixtures():
    L3, L2 = chain(3), chain(2)
    R3 = validate_extension(L3, Subset.full(L3))
    R2 = validate_extension(L2, Subset.full(L2))
    for h in (ext_identity(R3), ExtMorphism(R3, R2, (0, 1, 1))):
        ok, witness = check_rho_naturality(h)
        assert ok, witness


def test_check_naturality_dispatcher():
    assert check_naturality(("zeta", COLLAPSE))
    L3 = chain(3)
    R3 = validate_extension(L3, Subset.full(L3))
    assert check_naturality(("rho", ext_identity(R3)))
    with pytest.raises(ValueError):
        check_naturality(("sigma", COLLAPSE))


def test_perturbed_component_fails_naturality():
    # send the top somewhere wrong: no longer natural
    bad = MorphismTable(IND4, IND4, (0, 0, 0, 0))
    ok, _ = check_zeta_naturality(bad)
    assert not ok


def test_triangles():
    L3 = chain(3)
    R3 = validate_extension(L3, Subset.full(L3))
    for M in ALGEBRAS:
        assert check_triangles(M, R3)
        assert check_triangles(M, functor_R_obj(M))


# -- I, U and the commuting square

def test_functor_U_restriction():
    L3, L2 = chain(3), chain(2)
    R3 = validate_extension(L3, Subset.full(L3))
    R2 = validate_extension(L2, Subset.full(L2))
    h = ExtMorphism(R3, R2, (0, 1, 1))
    assert functor_U(h) == {0: 0, 1: 1, 2: 1}


def test_functor_I_is_proximity_valid():
    for f in (COLLAPSE, EXPAND, id_raney(SIER4)):
        assert check_proximity_morphism(functor_I(f)).ok


def test_UR_OI_square():
    for f in (COLLAPSE, EXPAND, id_raney(SIER4), id_raney(IND4), zeta(IND4).table):
        assert check_UR_OI_square(f)


# -- isomorphism predicates

def test_zeta_on_indiscrete_is_rmt_iso_but_not_order_iso():
    z = zeta(IND4).table
    assert is_rmt_iso(z, validate=True)
    assert not is_order_iso(z)


def test_identity_is_both():
    for M in ALGEBRAS:
        f = MorphismTable(M, M, tuple(range(M.B.n)))
        if is_T0(M):
            assert is_rmt_iso(f) and is_order_iso(f)
        else:
            assert is_order_iso(f)


def test_order_iso_between_t0_algebras_is_rmt_iso():
    # the carrier automorphism swapping the atoms of the discrete algebra
    f = MorphismTable(DISC4, DISC4, (0, 2, 1, 3))
    assert check_raney_morphism(f).ok
    assert is_order_iso(f) and is_rmt_iso(f)


def test_predicates_agree_on_t0_pairs():
    t0_pairs = [
        MorphismTable(DISC4, DISC4, (0, 2, 1, 3)),
        MorphismTable(SIER4, DISC4, (0, 1, 2, 3)),
        id_raney(DISC2),
    ]
    for f in t0_pairs:
        assert is_T0(f.dom) and is_T0(f.cod)
        assert is_rmt_iso(f) == is_order_iso(f)


# -- reflector

def test_hull_is_t0_and_idempotent_up_to_order_iso():
    for M in ALGEBRAS:
        H = t0_hull(M)
        assert is_T0(H)
        if is_T0(M):
            assert is_order_iso(zeta(M).table)
        HH = t0_hull(H)
        assert is_order_iso(zeta(H).table)  # hull of a hull changes nothing
        assert HH.B.n == H.B.n


# -- universe-relative mono/epi

def test_universe_mono_epi_and_transfer():
    probes = [id_raney(M) for M in (DISC2, DISC4, IND4)] + [
        COLLAPSE, EXPAND, zeta(IND4).table, phi(IND4).table]
    ext_probes = [functor_R_mor(f) for f in probes if check_raney_morphism(f).ok]
    for f in (COLLAPSE, EXPAND, id_raney(IND4)):
        mono = is_universe_mono(f, probes)
        epi = is_universe_epi(f, probes)
        rf = functor_R_mor(f)
        assert mono == ext_universe_mono(rf, ext_probes)
        assert epi == ext_universe_epi(rf, ext_probes)
