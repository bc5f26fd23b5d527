"""MT-algebras: boolean carriers with a Kuratowski interior operator.

Provides element classification (open / closed / saturated / locally closed),
the boolean subalgebra generated by the saturated elements, the interpolation
proximity it induces, and the T0 / T_D separation checks.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .lattice import (
    FiniteLattice,
    Subset,
    ValidationError,
    check_subframe,
    complement_of,
    is_boolean,
)


class NotBoolean(ValidationError):
    pass


class NotASubframe(ValidationError):
    pass


class KuratowskiViolation(ValidationError):
    def __init__(self, axiom, witness):
        super().__init__(f"interior axiom {axiom} fails at {witness}", witness)
        self.axiom = axiom


class AxiomViolation(ValidationError):
    """A law that is a theorem failed; signals an internal bug."""

    def __init__(self, axiom, witness):
        super().__init__(f"{axiom} fails at {witness}", witness)
        self.axiom = axiom


class MTAlgebra:
    """A finite boolean lattice together with an interior-operator table.

    The opens are the fixpoints of the interior operator and always form a
    subframe of the carrier.  Instances are immutable; construct through
    :func:`validate_interior` or :func:`from_subframe`.
    """

    def __init__(self, B, box, opens):
        self.B = B
        self.box = tuple(box)
        self.opens = opens

    @cached_property
    def neg(self):
        return tuple(complement_of(self.B, x) for x in range(self.B.n))

    @cached_property
    def diamond(self):
        """Closure operator: neg . box . neg."""
        return tuple(self.neg[self.box[self.neg[x]]] for x in range(self.B.n))

    @cached_property
    def classes(self):
        return _classify(self)

    @cached_property
    def bs_elements(self):
        """Ascending element list of the generated boolean subalgebra."""
        return self.classes.gen_boolean.indices()

    @cached_property
    def prec(self):
        return _proximity(self)

    @cached_property
    def open_elements(self):
        return self.opens.indices()

    @cached_property
    def sat_elements(self):
        return self.classes.saturated.indices()

    @cached_property
    def lc_elements(self):
        return self.classes.locally_closed.indices()

    @cached_property
    def bs_below(self):
        """bs_below[a] = generated-subalgebra elements below a (composition hot path)."""
        leq = self.B._leq
        bs = self.bs_elements
        return tuple(tuple(x for x in bs if leq[x][a]) for a in range(self.B.n))

    @cached_property
    def lc_below(self):
        leq = self.B._leq
        lc = self.lc_elements
        return tuple(tuple(x for x in lc if leq[x][a]) for a in range(self.B.n))

    @cached_property
    def lc_antichains(self):
        """All antichains of the locally closed elements (for finite-join checks)."""
        leq = self.B._leq
        chains = [()]
        for e in self.lc_elements:
            chains += [a + (e,) for a in chains
                       if all(not leq[x][e] and not leq[e][x] for x in a)]
        return tuple(chains)

    def __repr__(self):
        return f"MTAlgebra(n={self.B.n}, opens={len(self.opens)})"

    def __eq__(self, other):
        if not isinstance(other, MTAlgebra):
            return NotImplemented
        return self.B == other.B and self.box == other.box

    def __hash__(self):
        return hash((self.B, self.box))


@dataclass(frozen=True)
class ElementClasses:
    opens: Subset
    closeds: Subset
    saturated: Subset
    locally_closed: Subset
    gen_boolean: Subset


@dataclass(frozen=True)
class ProximityRelation:
    """Interpolation relation: a < c iff some generated-subalgebra element sits between."""

    algebra: MTAlgebra
    rows: tuple  # rows[a] = bitmask of { c : a prec c }

    def holds(self, a, c):
        return bool(self.rows[a] >> c & 1)


def validate_interior(B, box):
    """Check the four interior axioms and derive the open elements.

    Raises NotBoolean or KuratowskiViolation with the failing axiom/witness.
    """
    if len(box) != B.n:
        raise ValidationError("interior table must cover the carrier")
    box = tuple(int(x) for x in box)
    if not is_boolean(B):
        raise NotBoolean("carrier is not a boolean lattice")
    if box[B.top] != B.top:
        raise KuratowskiViolation("box(1) = 1", B.top)
    me = B._meet
    for a in range(B.n):
        if not B.le(box[a], a):
            raise KuratowskiViolation("box(a) <= a", a)
        if not B.le(box[a], box[box[a]]):
            raise KuratowskiViolation("box(a) <= box(box(a))", a)
        for b in range(a, B.n):
            if box[me[a][b]] != me[box[a]][box[b]]:
                raise KuratowskiViolation("box(a ^ b) = box(a) ^ box(b)", (a, b))

    opens = Subset.from_indices(B, [a for a in range(B.n) if box[a] == a])
    rep = check_subframe(B, opens)
    if not rep.ok:
        raise AxiomViolation("opens form a subframe", rep.witness)
    # consistency: box must be the right adjoint of the opens inclusion,
    # i.e. box(x) is the largest open below x
    for x in range(B.n):
        r = B.join_all(u for u in opens if B.le(u, x))
        if r != box[x]:
            raise AxiomViolation("box = e . r for the opens inclusion", x)
    return MTAlgebra(B, box, opens)


def from_subframe(B, L):
    """The MT-algebra whose interior sends each element to the largest member
    of the subframe L below it."""
    if not isinstance(L, Subset):
        L = Subset.from_indices(B, L)
    rep = check_subframe(B, L)
    if not rep.ok:
        raise NotASubframe(f"not a subframe: {rep.reason}", rep.witness)
    box = [B.join_all(u for u in L if B.le(u, x)) for x in range(B.n)]
    M = validate_interior(B, box)
    if M.opens.mask != L.mask:
        raise AxiomViolation("opens of derived interior equal the subframe", L.mask)
    return M


def _close_under(B, seed, use_neg, neg):
    elems = set(seed)
    me, jo = B._meet, B._join
    frontier = list(elems)
    while frontier:
        nxt = []
        for x in frontier:
            if use_neg and neg[x] not in elems:
                elems.add(neg[x])
                nxt.append(neg[x])
            for y in list(elems):
                for z in (me[x][y], jo[x][y]):
                    if z not in elems:
                        elems.add(z)
                        nxt.append(z)
        frontier = nxt
    return elems


def _classify(M):
    B = M.B
    neg = M.neg
    opens = M.opens
    closeds = Subset.from_indices(B, [neg[u] for u in opens])
    # saturated elements: close the opens under binary meets (the empty meet,
    # the top, is already open); computed generically even though the result
    # provably equals the opens on a finite carrier
    sat = set(opens)
    me = B._meet
    changed = True
    while changed:
        changed = False
        for x in list(sat):
            for y in list(sat):
                m = me[x][y]
                if m not in sat:
                    sat.add(m)
                    changed = True
    saturated = Subset.from_indices(B, sorted(sat))
    lc = {me[u][c] for u in opens for c in closeds}
    locally_closed = Subset.from_indices(B, sorted(lc))
    gen = _close_under(B, sat, True, neg)
    gen_boolean = Subset.from_indices(B, sorted(gen))
    return ElementClasses(opens, closeds, saturated, locally_closed, gen_boolean)


def classify(M):
    """All five element classes of an MT-algebra."""
    return M.classes


def is_T0(M):
    """Every element is a join of generated-subalgebra elements below it.

    Cross-checked on small carriers against the defining form: joins of
    (saturated ^ closed) elements.
    """
    B = M.B
    bs = M.bs_elements
    verdict = all(B.join_all(x for x in bs if B.le(x, a)) == a for a in range(B.n))
    if B.n <= 16:
        cl = M.classes
        sc = {B.meet(s, c) for s in cl.saturated for c in cl.closeds}
        alt = all(B.join_all(x for x in sc if B.le(x, a)) == a for a in range(B.n))
        if alt != verdict:
            raise AxiomViolation("T0 characterizations agree", None)
    return verdict


def is_TD(M):
    """Every element is a join of locally closed elements below it."""
    B = M.B
    lc = M.classes.locally_closed.indices()
    return all(B.join_all(x for x in lc if B.le(x, a)) == a for a in range(B.n))


def _proximity(M):
    B = M.B
    bs = M.bs_elements
    above = B.above_mask
    rows = []
    for a in range(B.n):
        m = 0
        for b in bs:
            if B.le(a, b):
                m |= above[b]
        rows.append(m)
    prox = ProximityRelation(M, tuple(rows))
    _certify_proximity(prox)
    return prox


def _certify_proximity(prox):
    """(S1)-(S6) are theorems for any boolean subalgebra; failure is a bug."""
    M = prox.algebra
    B = M.B
    rows = prox.rows
    neg = M.neg
    bs = set(M.bs_elements)
    n = B.n
    if not prox.holds(B.top, B.top):
        raise AxiomViolation("S1: 1 prec 1", B.top)
    for a in range(n):
        row = rows[a]
        for c in range(n):
            if not (row >> c & 1):
                continue
            if not B.le(a, c):
                raise AxiomViolation("S2: prec implies leq", (a, c))
            if not (rows[neg[c]] >> neg[a] & 1):
                raise AxiomViolation("S5: prec is self-dual", (a, c))
            if not any(b in bs and (rows[a] >> b & 1) and (rows[b] >> c & 1)
                       for b in range(n) if B.le(a, b) and B.le(b, c)):
                raise AxiomViolation("S6: interpolation through the subalgebra", (a, c))
        # S3: downward in a, upward in c
        for a2 in range(n):
            if B.le(a2, a) and (row & ~rows[a2]) != 0:
                raise AxiomViolation("S3: prec respects leq on both sides", (a2, a))
        for c in range(n):
            if row >> c & 1:
                for c2 in range(n):
                    if B.le(c, c2) and not (row >> c2 & 1):
                        raise AxiomViolation("S3: prec respects leq on both sides", (a, c2))
        # S4: meet closure of the upper row
        ups = [c for c in range(n) if row >> c & 1]
        for c in ups:
            for d in ups:
                if not (row >> B.meet(c, d) & 1):
                    raise AxiomViolation("S4: prec is meet-closed above", (a, c, d))
    return prox


def proximity(M):
    """The interpolation proximity induced by the generated boolean subalgebra."""
    return M.prec


def is_deVries(M):
    """Join-approximation: every a is the join of the elements proximally below it."""
    B = M.B
    rows = M.prec.rows
    for a in range(B.n):
        approx = B.join_all(c for c in range(B.n) if rows[c] >> a & 1)
        if approx != a:
            return False
    return True
