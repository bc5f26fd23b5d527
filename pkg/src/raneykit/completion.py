"""Boolean envelope, finite MacNeille completion, and the Funayama envelope.

The boolean envelope of a finite distributive lattice is realized concretely
as the powerset of its join-irreducibles; the embedding is the Birkhoff map
a |-> { j : j <= a }.  The Funayama envelope equips that powerset with the
interior operator e . r, where r is the right adjoint of the embedding.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .lattice import (
    FiniteLattice,
    NotDistributive,
    ValidationError,
    is_distributive,
    join_irreducibles,
    powerset_lattice,
)
from .mtalg import MTAlgebra, validate_interior


class AdjointFailure(ValidationError):
    pass


@dataclass(frozen=True)
class Embedding:
    """An injective bounded-lattice map with certified preservation flags."""

    dom: FiniteLattice
    cod: FiniteLattice
    map: tuple
    flags: dict = field(default_factory=dict, compare=False)
    certificate: str = ""

    def __call__(self, a):
        return self.map[a]


def _certify_embedding(dom, cod, table):
    flags = {
        "injective": len(set(table)) == dom.n,
        "bottom": table[dom.bottom] == cod.bottom,
        "top": table[dom.top] == cod.top,
        "order_embedding": all(
            dom.le(a, b) == cod.le(table[a], table[b])
            for a in range(dom.n) for b in range(dom.n)
        ),
        "binary_meets": all(
            table[dom.meet(a, b)] == cod.meet(table[a], table[b])
            for a in range(dom.n) for b in range(dom.n)
        ),
        "binary_joins": all(
            table[dom.join(a, b)] == cod.join(table[a], table[b])
            for a in range(dom.n) for b in range(dom.n)
        ),
    }
    if not all(flags.values()):
        bad = [k for k, v in flags.items() if not v]
        raise ValidationError(f"embedding fails: {bad}", witness=bad)
    return flags


def boolean_envelope(D):
    """Free boolean extension of a finite distributive lattice.

    Returns (B, e) with B the powerset of the join-irreducibles of D and
    e the Birkhoff embedding.  B's element index is its subset bitmask over
    the ascending irreducible list.
    """
    if not is_distributive(D):
        raise NotDistributive("boolean envelope needs a distributive lattice")
    J = join_irreducibles(D).elements
    B = powerset_lattice(len(J), atom_names=[D.names[j] for j in J])
    table = []
    for a in range(D.n):
        m = 0
        for i, j in enumerate(J):
            if D.le(j, a):
                m |= 1 << i
        table.append(m)
    flags = _certify_embedding(D, B, table)
    return B, Embedding(D, B, tuple(table), flags)


def macneille_completion(L):
    """MacNeille completion; the identity on a finite lattice.

    Kept as an explicit pipeline stage so envelope construction reads as
    completion-of-envelope; the certificate records the trivialization.
    """
    table = tuple(range(L.n))
    flags = _certify_embedding(L, L, table)
    iso = Embedding(L, L, table, flags,
                    certificate="finite lattice is already complete; completion is the identity")
    return L, iso


def right_adjoint_of_embedding(e):
    """The map r with e(a) <= x iff a <= r(x); exists since e preserves joins.

    Raises AdjointFailure with a witness pair if the Galois property fails,
    which would mean a non-join-preserving embedding slipped through.
    """
    dom, cod = e.dom, e.cod
    r = []
    for x in range(cod.n):
        r.append(dom.join_all(a for a in range(dom.n) if cod.le(e.map[a], x)))
    for a in range(dom.n):
        for x in range(cod.n):
            if cod.le(e.map[a], x) != dom.le(a, r[x]):
                raise AdjointFailure("Galois property fails", witness=(a, x))
    return tuple(r)


def funayama_envelope_frame(L):
    """The Funayama envelope of a finite frame, as an MT-algebra.

    The carrier is the MacNeille completion of the boolean envelope (trivial
    here) and the interior operator is e . r for the frame embedding e.
    """
    if not is_distributive(L):
        raise NotDistributive("Funayama envelope needs a (finite) frame")
    B0, e0 = boolean_envelope(L)
    B, mac = macneille_completion(B0)
    e = tuple(mac.map[e0.map[a]] for a in range(L.n))
    lifted = Embedding(L, B, e, dict(e0.flags), certificate=mac.certificate)
    r = right_adjoint_of_embedding(lifted)
    box = [e[r[x]] for x in range(B.n)]
    M = validate_interior(B, box)
    if M.opens.mask != sum(1 << v for v in set(e)):
        raise ValidationError("opens of the envelope must be the embedded frame")
    return M


def envelope_embedding(L):
    """Convenience: the Funayama envelope together with the frame embedding."""
    M = funayama_envelope_frame(L)
    _, e = boolean_envelope(L)
    return M, e
