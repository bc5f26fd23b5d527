"""Morphism validators and compositions for MT-algebras.

Three kinds of maps are checked: MT-morphisms (complete boolean morphisms
compatible with the interior), Raney morphisms (axioms R1-R5 built on the
generated boolean subalgebra), and proximity morphisms (axioms P1-P4 built
on the locally closed elements).  Morphisms are explicit total tables and
every axiom check is an exhaustive loop over the finite carrier.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import ValidationError
from .mtalg import AxiomViolation, MTAlgebra


class DomainMismatch(ValidationError):
    pass


class PreconditionUnmet(ValidationError):
    pass


@dataclass(frozen=True)
class MorphismTable:
    """A total per-element map between two MT-algebra carriers."""

    dom: MTAlgebra
    cod: MTAlgebra
    map: tuple

    def __post_init__(self):
        if len(self.map) != self.dom.B.n:
            raise ValidationError("morphism table must cover the domain carrier")
        for v in self.map:
            if not (0 <= v < self.cod.B.n):
                raise ValidationError(f"image {v} outside codomain carrier", witness=v)

    def __call__(self, a):
        return self.map[a]

    def same_table(self, other):
        return (self.dom is other.dom and self.cod is other.cod
                and self.map == other.map)


@dataclass
class ValidationReport:
    """Per-axiom pass/fail flags; every fail carries a witness tuple."""

    kind: str
    flags: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    def _record(self, axiom, ok, witness):
        self.flags[axiom] = ok
        if not ok:
            self.witnesses[axiom] = witness

    @property
    def ok(self):
        return all(self.flags.values())

    def failed(self):
        return [k for k, v in self.flags.items() if not v]


def _check_hom_on(f, elems, sub_ok=True):
    """Bounds/meet/join preservation of f restricted to a subset closed under
    both operations (so the induced lattice ops agree with the ambient ones)."""
    dom, cod = f.dom.B, f.cod.B
    t = f.map
    if t[dom.bottom] != cod.bottom:
        return False, (dom.bottom, "bottom")
    if t[dom.top] != cod.top:
        return False, (dom.top, "top")
    for x in elems:
        for y in elems:
            if t[dom.meet(x, y)] != cod.meet(t[x], t[y]):
                return False, (x, y, "meet")
            if t[dom.join(x, y)] != cod.join(t[x], t[y]):
                return False, (x, y, "join")
    return True, None


def check_mt_morphism(f):
    """Complete boolean morphism preserving the interior downward:
    f(box a) <= box f(a)."""
    rep = ValidationReport("mt")
    dom, cod = f.dom, f.cod
    t = f.map
    ok, w = _check_hom_on(f, range(dom.B.n))
    rep._record("bounds_meets_joins", ok, w)
    ok, w = True, None
    for a in range(dom.B.n):
        if t[dom.neg[a]] != cod.neg[t[a]]:
            ok, w = False, (a, "complement")
            break
    rep._record("complement", ok, w)
    ok, w = True, None
    for a in range(dom.B.n):
        if not cod.B.le(t[dom.box[a]], cod.box[t[a]]):
            ok, w = False, (a, "box")
            break
    rep._record("box_leq", ok, w)
    return rep


def _restriction_flag(f, elems_dom, elems_cod_mask):
    """Image containment plus bound/meet/join preservation on a closed subset."""
    t = f.map
    for x in elems_dom:
        if not (elems_cod_mask >> t[x] & 1):
            return False, (x, "image outside target class")
    dom, cod = f.dom.B, f.cod.B
    if t[dom.bottom] != cod.bottom:
        return False, (dom.bottom, "bottom")
    if t[dom.top] != cod.top:
        return False, (dom.top, "top")
    for x in elems_dom:
        for y in elems_dom:
            if t[dom.meet(x, y)] != cod.meet(t[x], t[y]):
                return False, (x, y, "meet")
            if t[dom.join(x, y)] != cod.join(t[x], t[y]):
                return False, (x, y, "join")
    return True, None


def check_raney_morphism(f):
    """Axioms R1-R5.

    R1/R2 use the ambient lattice operations: the saturated and open classes
    are certified meet- and join-closed at validation time, so the induced
    coframe/frame operations coincide with them, and finite carriers reduce
    arbitrary meets/joins to the binary ones plus bounds.
    """
    rep = ValidationReport("raney")
    dom, cod = f.dom, f.cod
    t = f.map
    B1, B2 = dom.B, cod.B

    ok, w = _restriction_flag(f, dom.sat_elements, cod.classes.saturated.mask)
    rep._record("R1", ok, w)
    ok, w = _restriction_flag(f, dom.open_elements, cod.opens.mask)
    rep._record("R2", ok, w)

    ok, w = True, None
    for a in range(B1.n):
        for b in range(a, B1.n):
            if t[B1.meet(a, b)] != B2.meet(t[a], t[b]):
                ok, w = False, (a, b)
                break
        if not ok:
            break
    rep._record("R3", ok, w)

    ok, w = True, None
    bs = dom.bs_elements
    for x in bs:
        for y in bs:
            if t[B1.join(x, y)] != B2.join(t[x], t[y]):
                ok, w = False, (x, y)
                break
        if not ok:
            break
    rep._record("R4", ok, w)

    ok, w = True, None
    for a in range(B1.n):
        if B2.join_all(t[x] for x in dom.bs_below[a]) != t[a]:
            ok, w = False, (a,)
            break
    rep._record("R5", ok, w)
    return rep


def check_proximity_morphism(f):
    """Axioms P1-P4, with the locally closed elements in the role R1-R5 give
    to the generated subalgebra."""
    rep = ValidationReport("proximity")
    dom, cod = f.dom, f.cod
    t = f.map
    B1, B2 = dom.B, cod.B

    ok, w = _restriction_flag(f, dom.open_elements, cod.opens.mask)
    rep._record("P1", ok, w)

    ok, w = True, None
    for a in range(B1.n):
        for b in range(a, B1.n):
            if t[B1.meet(a, b)] != B2.meet(t[a], t[b]):
                ok, w = False, (a, b)
                break
        if not ok:
            break
    rep._record("P2", ok, w)

    # P3 quantifies over arbitrary finite subsets of the locally closed
    # elements, which are not join-closed.  For monotone maps the join of a
    # subset equals the join over its maximal antichain on both sides, so the
    # precomputed antichain list is exhaustive; otherwise fall back to all
    # subsets while they are enumerable.
    monotone = True
    for a in range(B1.n):
        for b in range(B1.n):
            if B1.le(a, b) and not B2.le(t[a], t[b]):
                monotone = False
                break
        if not monotone:
            break
    ok, w = True, None
    if monotone or len(dom.lc_elements) > 12:
        families = dom.lc_antichains
    else:
        lc = dom.lc_elements
        families = [tuple(lc[i] for i in range(len(lc)) if pick >> i & 1)
                    for pick in range(1 << len(lc))]
    for fam in families:
        if t[B1.join_all(fam)] != B2.join_all(t[x] for x in fam):
            ok, w = False, fam
            break
    rep._record("P3", ok, w)

    ok, w = True, None
    for a in range(B1.n):
        if B2.join_all(t[x] for x in dom.lc_below[a]) != t[a]:
            ok, w = False, (a,)
            break
    rep._record("P4", ok, w)
    return rep


def check_r4_equivalents(f, report=None):
    """Truth values of (R4), the two-pair proximity condition, and the
    negation-transfer condition; equal whenever R1, R2, R3, R5 hold."""
    rep = report if report is not None else check_raney_morphism(f)
    for ax in ("R1", "R2", "R3", "R5"):
        if not rep.flags[ax]:
            raise PreconditionUnmet(f"check_r4_equivalents needs {ax}", witness=ax)
    dom, cod = f.dom, f.cod
    t = f.map
    B1, B2 = dom.B, cod.B
    c1 = rep.flags["R4"]

    rows1 = dom.prec.rows
    rows2 = cod.prec.rows
    c2 = True
    for a1 in range(B1.n):
        for b1 in range(B1.n):
            if not (rows1[a1] >> b1 & 1):
                continue
            for a2 in range(B1.n):
                for b2 in range(B1.n):
                    if not (rows1[a2] >> b2 & 1):
                        continue
                    lhs = t[B1.join(a1, a2)]
                    rhs = B2.join(t[b1], t[b2])
                    if not (rows2[lhs] >> rhs & 1):
                        c2 = False
                        break
                if not c2:
                    break
            if not c2:
                break
        if not c2:
            break

    c3 = True
    for a in range(B1.n):
        for b in range(B1.n):
            if rows1[a] >> b & 1:
                lhs = cod.neg[t[dom.neg[a]]]
                if not (rows2[lhs] >> t[b] & 1):
                    c3 = False
                    break
        if not c3:
            break

    if not (c1 == c2 == c3):
        raise AxiomViolation("R4-equivalent conditions coincide", (c1, c2, c3))
    return c1, c2, c3


def _validate_raney(f, caller):
    rep = check_raney_morphism(f)
    if not rep.ok:
        raise PreconditionUnmet(f"{caller} needs a Raney morphism; fails {rep.failed()}",
                                witness=rep.failed())


def star(g, f, validate=False):
    """Raney composition: sup of g(f(x)) over generated-subalgebra x below a."""
    if g.dom is not f.cod and g.dom != f.cod:
        raise DomainMismatch("star: cod(f) must equal dom(g)")
    if validate:
        _validate_raney(f, "star")
        _validate_raney(g, "star")
    B3 = g.cod.B
    tf, tg = f.map, g.map
    table = tuple(B3.join_all(tg[tf[x]] for x in f.dom.bs_below[a])
                  for a in range(f.dom.B.n))
    return MorphismTable(f.dom, g.cod, table)


def star_prox(g, f, validate=False):
    """Proximity composition: sup of g(f(x)) over locally closed x below a."""
    if g.dom is not f.cod and g.dom != f.cod:
        raise DomainMismatch("star_prox: cod(f) must equal dom(g)")
    if validate:
        for h in (f, g):
            rep = check_proximity_morphism(h)
            if not rep.ok:
                raise PreconditionUnmet(f"star_prox needs proximity morphisms; fails {rep.failed()}",
                                        witness=rep.failed())
    B3 = g.cod.B
    tf, tg = f.map, g.map
    table = tuple(B3.join_all(tg[tf[x]] for x in f.dom.lc_below[a])
                  for a in range(f.dom.B.n))
    return MorphismTable(f.dom, g.cod, table)


def id_raney(M):
    """Identity of the Raney-morphism category: a |-> sup of generated-subalgebra
    elements below a.  The identity function exactly when M is a T0-algebra."""
    B = M.B
    table = tuple(B.join_all(M.bs_below[a]) for a in range(B.n))
    return MorphismTable(M, M, table)


def id_prox(M):
    """Identity of the proximity-morphism category, over the locally closed class."""
    B = M.B
    table = tuple(B.join_all(M.lc_below[a]) for a in range(B.n))
    return MorphismTable(M, M, table)


def hat(f, validate=False):
    """Collapse a Raney morphism to a proximity morphism by restricting the
    sup formula to locally closed elements."""
    if validate:
        _validate_raney(f, "hat")
    B2 = f.cod.B
    t = f.map
    table = tuple(B2.join_all(t[x] for x in f.dom.lc_below[a])
                  for a in range(f.dom.B.n))
    return MorphismTable(f.dom, f.cod, table)


@dataclass
class DerivedPropertiesReport:
    complement_on_saturated: bool
    boolean_on_generated: bool
    preserves_locally_closed: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def ok(self):
        return (self.complement_on_saturated and self.boolean_on_generated
                and self.preserves_locally_closed)


def derived_properties(f, validate=False):
    """Theorem consequences of R1-R5: complements of saturated elements are
    preserved, the generated subalgebras map homomorphically, and locally
    closed elements land on locally closed elements."""
    if validate:
        _validate_raney(f, "derived_properties")
    dom, cod = f.dom, f.cod
    t = f.map
    witnesses = {}

    comp = True
    for x in dom.sat_elements:
        if t[dom.neg[x]] != cod.neg[t[x]]:
            comp = False
            witnesses["complement_on_saturated"] = (x,)
            break

    boolean = True
    bs2 = cod.classes.gen_boolean.mask
    for x in dom.bs_elements:
        if not (bs2 >> t[x] & 1):
            boolean = False
            witnesses["boolean_on_generated"] = (x, "image")
            break
    if boolean:
        B1, B2 = dom.B, cod.B
        for x in dom.bs_elements:
            if not boolean:
                break
            if t[dom.neg[x]] != cod.neg[t[x]]:
                boolean = False
                witnesses["boolean_on_generated"] = (x, "complement")
                break
            for y in dom.bs_elements:
                if (t[B1.meet(x, y)] != B2.meet(t[x], t[y])
                        or t[B1.join(x, y)] != B2.join(t[x], t[y])):
                    boolean = False
                    witnesses["boolean_on_generated"] = (x, y, "lattice op")
                    break

    lc_mask = cod.classes.locally_closed.mask
    lc_ok = True
    for x in dom.lc_elements:
        if not (lc_mask >> t[x] & 1):
            lc_ok = False
            witnesses["preserves_locally_closed"] = (x,)
            break

    return DerivedPropertiesReport(comp, boolean, lc_ok, witnesses)
