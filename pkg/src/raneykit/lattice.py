"""Finite bounded lattices stored as explicit order matrices with cached op tables.

Elements are dense integer indices 0..n-1.  The order is a boolean n x n
matrix and binary meets/joins are precomputed, so everything downstream
(exhaustive law checking, morphism validation) runs on O(1) table lookups.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

MAX_ELEMS_ENV = "RANEYKIT_MAX_ELEMS"
DEFAULT_MAX_ELEMS = 4096


class ValidationError(Exception):
    """Base class for structure validation failures; carries a witness."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotAPartialOrder(ValidationError):
    pass


class NotALattice(ValidationError):
    pass


class NotDistributive(ValidationError):
    pass


class NotComplemented(ValidationError):
    pass


class CarrierTooLarge(ValidationError):
    pass


def max_elements():
    """Safety cap on carrier size, overridable via RANEYKIT_MAX_ELEMS."""
    raw = os.environ.get(MAX_ELEMS_ENV)
    if raw is None:
        return DEFAULT_MAX_ELEMS
    return int(raw)


class FiniteLattice:
    """A finite bounded lattice: order matrix, meet/join tables, bounds.

    Instances are immutable after construction and safe to share across
    threads.  Do not call the constructor directly unless the tables are
    known correct by construction; use :func:`validate_lattice`.
    """

    def __init__(self, leq, meet_table, join_table, bottom, top, names=None):
        n = leq.shape[0]
        self.n = n
        leq = np.asarray(leq, dtype=bool)
        leq.flags.writeable = False
        self.leq = leq
        meet_table = np.asarray(meet_table, dtype=np.int32)
        meet_table.flags.writeable = False
        join_table = np.asarray(join_table, dtype=np.int32)
        join_table.flags.writeable = False
        self.meet_table = meet_table
        self.join_table = join_table
        self.bottom = int(bottom)
        self.top = int(top)
        if names is None:
            names = tuple(f"e{i}" for i in range(n))
        else:
            names = tuple(names)
            if len(names) != n or len(set(names)) != n:
                raise ValidationError("element names must be unique and cover all elements")
        self.names = names

    # -- cached hot-loop mirrors (plain python containers beat numpy scalar access)

    @cached_property
    def _leq(self):
        return [tuple(bool(v) for v in row) for row in self.leq]

    @cached_property
    def _meet(self):
        return [tuple(int(v) for v in row) for row in self.meet_table]

    @cached_property
    def _join(self):
        return [tuple(int(v) for v in row) for row in self.join_table]

    @cached_property
    def below_mask(self):
        """below_mask[x] = bitmask of { y : y <= x }."""
        out = []
        for x in range(self.n):
            m = 0
            col = self.leq[:, x]
            for y in range(self.n):
                if col[y]:
                    m |= 1 << y
            out.append(m)
        return out

    @cached_property
    def above_mask(self):
        """above_mask[x] = bitmask of { y : x <= y }."""
        out = []
        for x in range(self.n):
            m = 0
            row = self.leq[x]
            for y in range(self.n):
                if row[y]:
                    m |= 1 << y
            out.append(m)
        return out

    # -- basic ops

    def le(self, a, b):
        return self._leq[a][b]

    def meet(self, a, b):
        return self._meet[a][b]

    def join(self, a, b):
        return self._join[a][b]

    def meet_all(self, elems):
        acc = self.top
        t = self._meet
        for x in elems:
            acc = t[acc][x]
        return acc

    def join_all(self, elems):
        acc = self.bottom
        t = self._join
        for x in elems:
            acc = t[acc][x]
        return acc

    def elements(self):
        return range(self.n)

    def atoms(self):
        """Elements covering bottom (minimal nonzero)."""
        bot = self.bottom
        out = []
        for x in range(self.n):
            if x == bot:
                continue
            if all(not self._leq[y][x] or y in (x, bot) for y in range(self.n)):
                out.append(x)
        return out

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def covers(self):
        """Hasse cover matrix: c[i, j] iff j covers i."""
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        return lt & ~(lt @ lt)

    def __repr__(self):
        return f"FiniteLattice(n={self.n})"

    def __eq__(self, other):
        if not isinstance(other, FiniteLattice):
            return NotImplemented
        return self.n == other.n and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash((self.n, self.leq.tobytes()))


@dataclass(frozen=True)
class Subset:
    """A subset of a lattice carrier, stored as an element bitmask."""

    parent: FiniteLattice
    mask: int

    @classmethod
    def from_indices(cls, parent, indices):
        m = 0
        for i in indices:
            if not (0 <= i < parent.n):
                raise ValidationError(f"element index {i} outside carrier", witness=i)
            m |= 1 << i
        return cls(parent, m)

    @classmethod
    def full(cls, parent):
        return cls(parent, (1 << parent.n) - 1)

    def indices(self):
        return tuple(i for i in range(self.parent.n) if self.mask >> i & 1)

    def __contains__(self, i):
        return bool(self.mask >> i & 1)

    def __iter__(self):
        return iter(self.indices())

    def __len__(self):
        return int(self.mask).bit_count()


@dataclass(frozen=True)
class JoinIrreduciblePoset:
    """Join-irreducible elements of a lattice with the inherited order."""

    parent: FiniteLattice
    elements: tuple

    def le(self, a, b):
        return self.parent.le(a, b)

    def __len__(self):
        return len(self.elements)


def validate_lattice(raw_order, names=None):
    """Check a raw n x n relation and build a FiniteLattice from it.

    Raises NotAPartialOrder or NotALattice with a witness pair on failure.
    """
    leq = np.asarray(raw_order, dtype=bool)
    if leq.ndim != 2 or leq.shape[0] != leq.shape[1]:
        raise NotAPartialOrder("order relation must be a square matrix")
    n = leq.shape[0]
    if n < 1:
        raise NotAPartialOrder("carrier must be non-empty")
    if n > max_elements():
        raise CarrierTooLarge(f"carrier size {n} exceeds cap {max_elements()}", witness=n)
    diag = np.diagonal(leq)
    if not diag.all():
        i = int(np.argmin(diag))
        raise NotAPartialOrder(f"missing reflexivity at element {i}", witness=(i, i))
    sym = leq & leq.T & ~np.eye(n, dtype=bool)
    if sym.any():
        i, j = map(int, np.argwhere(sym)[0])
        raise NotAPartialOrder(f"antisymmetry fails (cycle) at ({i}, {j})", witness=(i, j))
    closure = (leq.astype(np.uint8) @ leq.astype(np.uint8)) > 0
    broken = closure & ~leq
    if broken.any():
        i, j = map(int, np.argwhere(broken)[0])
        raise NotAPartialOrder(f"transitivity fails: {i} <= .. <= {j} but not {i} <= {j}",
                               witness=(i, j))

    below = [0] * n
    above = [0] * n
    for x in range(n):
        bm = 0
        am = 0
        for y in range(n):
            if leq[y, x]:
                bm |= 1 << y
            if leq[x, y]:
                am |= 1 << y
        below[x] = bm
        above[x] = am

    def bound_of(common, masks, kind, pair):
        # greatest element of `common` when kind=lower (its masks cover common),
        # least when kind=upper
        best = -1
        for x in range(n):
            if common >> x & 1 and (common & ~masks[x]) == 0:
                best = x
                break
        if best < 0:
            raise NotALattice(f"pair {pair} has no unique {kind} bound", witness=pair)
        return best

    meet_table = np.zeros((n, n), dtype=np.int32)
    join_table = np.zeros((n, n), dtype=np.int32)
    for i in range(n):
        for j in range(i, n):
            lows = below[i] & below[j]
            if lows == 0:
                raise NotALattice(f"pair ({i}, {j}) has no lower bound", witness=(i, j))
            m = bound_of(lows, below, "greatest lower", (i, j))
            ups = above[i] & above[j]
            if ups == 0:
                raise NotALattice(f"pair ({i}, {j}) has no upper bound", witness=(i, j))
            jn = bound_of(ups, above, "least upper", (i, j))
            meet_table[i, j] = meet_table[j, i] = m
            join_table[i, j] = join_table[j, i] = jn

    bottom = next(x for x in range(n) if all(leq[x, y] for y in range(n)))
    top = next(x for x in range(n) if all(leq[y, x] for y in range(n)))
    return FiniteLattice(leq, meet_table, join_table, bottom, top, names)


def chain(n, names=None):
    """The n-element chain 0 < 1 < ... < n-1."""
    leq = np.fromfunction(lambda i, j: i <= j, (n, n))
    return validate_lattice(leq, names)


def powerset_lattice(k, atom_names=None, names=None):
    """The boolean lattice 2^k with element index equal to its subset bitmask.

    Meets/joins are bitwise and/or by construction, so no search is needed.
    """
    n = 1 << k
    if n > max_elements():
        raise CarrierTooLarge(f"carrier size {n} exceeds cap {max_elements()}", witness=n)
    idx = np.arange(n)
    leq = (idx[:, None] & idx[None, :]) == idx[:, None]
    meet_table = idx[:, None] & idx[None, :]
    join_table = idx[:, None] | idx[None, :]
    if names is None:
        if atom_names is not None:
            if len(atom_names) != k:
                raise ValidationError("need one atom name per generator")
            names = []
            for m in range(n):
                parts = [atom_names[i] for i in range(k) if m >> i & 1]
                names.append("+".join(parts) if parts else "o")
            if len(set(names)) != n:
                names = None  # fall back to positional names on collision
        if names is None:
            names = tuple(f"p{m}" for m in range(n))
    return FiniteLattice(leq, meet_table, join_table, 0, n - 1, names)


def downset_lattice(poset_leq, names=None):
    """Lattice of downward-closed subsets of a finite poset, ordered by inclusion.

    This is the Birkhoff dual construction; the result is always distributive.
    """
    rel = np.asarray(poset_leq, dtype=bool)
    k = rel.shape[0]
    downsets = []
    for m in range(1 << k):
        ok = True
        for x in range(k):
            if not (m >> x & 1):
                continue
            for y in range(k):
                if rel[y, x] and not (m >> y & 1):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            downsets.append(m)
    n = len(downsets)
    if n > max_elements():
        raise CarrierTooLarge(f"carrier size {n} exceeds cap {max_elements()}", witness=n)
    leq = np.zeros((n, n), dtype=bool)
    for i, a in enumerate(downsets):
        for j, b in enumerate(downsets):
            leq[i, j] = (a & b) == a
    return validate_lattice(leq, names)


def sublattice(parent, subset):
    """Build the induced lattice on a subset, with its own meet/join tables.

    Returns (lattice, carrier) where carrier[i] is the parent index of the
    i-th element.  Raises NotALattice if some pair lacks bounds inside the
    subset.
    """
    carrier = subset.indices() if isinstance(subset, Subset) else tuple(sorted(subset))
    k = len(carrier)
    leq = np.zeros((k, k), dtype=bool)
    for i, x in enumerate(carrier):
        for j, y in enumerate(carrier):
            leq[i, j] = parent.le(x, y)
    names = tuple(parent.names[x] for x in carrier)
    return validate_lattice(leq, names), carrier


def meet_of(L, subset):
    """Greatest lower bound of a Subset; the empty meet is the top."""
    return L.meet_all(subset)


def join_of(L, subset):
    """Least upper bound of a Subset; the empty join is the bottom."""
    return L.join_all(subset)


def distributivity_witness(L):
    """A triple (a, b, c) violating a ^ (b v c) = (a ^ b) v (a ^ c), or None."""
    me, jo = L._meet, L._join
    n = L.n
    for a in range(n):
        ma = me[a]
        for b in range(n):
            ab = ma[b]
            for c in range(b, n):
                if ma[jo[b][c]] != jo[ab][ma[c]]:
                    return (a, b, c)
    return None


def is_distributive(L):
    """Binary distributivity; on finite carriers this entails both infinite laws."""
    return distributivity_witness(L) is None


def complement_of(L, a):
    """The unique b with a ^ b = 0 and a v b = 1, or None."""
    for b in range(L.n):
        if L.meet(a, b) == L.bottom and L.join(a, b) == L.top:
            return b
    return None


def is_boolean(L):
    if not is_distributive(L):
        return False
    return all(complement_of(L, a) is not None for a in range(L.n))


def complement(L, a):
    """Complement in a boolean lattice; raises NotComplemented with witness."""
    b = complement_of(L, a)
    if b is None or not is_distributive(L):
        raise NotComplemented(f"element {a} has no complement", witness=a)
    return b


def join_irreducibles(L):
    """Elements j != bottom that cannot be written as a join of two others.

    Decided by scanning all join decompositions, not cover counting.
    """
    jo = L._join
    out = []
    for j in range(L.n):
        if j == L.bottom:
            continue
        irreducible = True
        for a in range(L.n):
            if not irreducible:
                break
            for b in range(a, L.n):
                if jo[a][b] == j and a != j and b != j:
                    irreducible = False
                    break
        if irreducible:
            out.append(j)
    return JoinIrreduciblePoset(L, tuple(out))


@dataclass(frozen=True)
class SubframeReport:
    ok: bool
    reason: str = ""
    witness: tuple = None


def check_subframe(C, subset):
    """Check that a subset is a subframe of C: bounds, ^/v closure, distributive.

    A passing subset is a frame in the inherited order and its inclusion
    preserves all joins and finite meets (empty meet/join give the bounds).
    """
    mask = subset.mask if isinstance(subset, Subset) else Subset.from_indices(C, subset).mask
    if not (mask >> C.bottom & 1):
        return SubframeReport(False, "missing bottom", (C.bottom, "bottom"))
    if not (mask >> C.top & 1):
        return SubframeReport(False, "missing top", (C.top, "top"))
    elems = [i for i in range(C.n) if mask >> i & 1]
    me, jo = C._meet, C._join
    for x in elems:
        for y in elems:
            m = me[x][y]
            if not (mask >> m & 1):
                return SubframeReport(False, "not meet-closed", (x, y, "meet"))
            j = jo[x][y]
            if not (mask >> j & 1):
                return SubframeReport(False, "not join-closed", (x, y, "join"))
    sub, carrier = sublattice(C, elems)
    w = distributivity_witness(sub)
    if w is not None:
        return SubframeReport(False, "not distributive",
                              tuple(carrier[i] for i in w) + ("distributivity",))
    return SubframeReport(True)


def is_subframe(C, subset):
    return check_subframe(C, subset).ok


def heyting_implication(L, a, b):
    """Relative pseudocomplement: the largest x with a ^ x <= b.

    Requires L distributive (every finite distributive lattice is Heyting).
    """
    me = L._meet
    bm = L.below_mask[b]
    acc = L.bottom
    jo = L._join
    for x in range(L.n):
        if bm >> me[a][x] & 1:
            acc = jo[acc][x]
    return acc


def find_isomorphism(L1, L2, marked1=None, marked2=None):
    """Search for an order isomorphism L1 -> L2 (optionally matching a marked subset).

    Backtracks over bijections refined by (downset size, upset size,
    irreducibility, marked membership) signatures.  Returns the image table
    or None.
    """
    if L1.n != L2.n:
        return None
    m1 = marked1.mask if isinstance(marked1, Subset) else marked1
    m2 = marked2.mask if isinstance(marked2, Subset) else marked2
    if (m1 is None) != (m2 is None):
        raise ValueError("marked subsets must be given for both lattices or neither")
    if m1 is not None and int(m1).bit_count() != int(m2).bit_count():
        return None
    j1 = set(join_irreducibles(L1).elements)
    j2 = set(join_irreducibles(L2).elements)

    def signature(L, x, marked, irr):
        return (int(L.leq[:, x].sum()), int(L.leq[x, :].sum()),
                x in irr, bool(marked >> x & 1) if marked is not None else False)

    sig1 = [signature(L1, x, m1, j1) for x in range(L1.n)]
    sig2 = [signature(L2, x, m2, j2) for x in range(L2.n)]
    if sorted(sig1) != sorted(sig2):
        return None
    candidates = [[y for y in range(L2.n) if sig2[y] == sig1[x]] for x in range(L1.n)]
    order = sorted(range(L1.n), key=lambda x: len(candidates[x]))
    image = [-1] * L1.n
    used = [False] * L2.n

    def extend(pos):
        if pos == L1.n:
            return True
        x = order[pos]
        for y in candidates[x]:
            if used[y]:
                continue
            ok = True
            for x2 in order[:pos]:
                y2 = image[x2]
                if L1.le(x, x2) != L2.le(y, y2) or L1.le(x2, x) != L2.le(y2, y):
                    ok = False
                    break
            if ok:
                image[x] = y
                used[y] = True
                if extend(pos + 1):
                    return True
                image[x] = -1
                used[y] = False
        return False

    if extend(0):
        return list(image)
    return None
