"""Skew braces on explicit tables.

A skew brace here is one element set 0..n-1 carrying two validated group
tables, star and circ, tied together by the left brace law

    a circ (b star c) = (a circ b) star a^-1 star (a circ c)

with a^-1 the star-inverse.  Validation checks the law on all n^3 triples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BraceLawViolation,
    IdentityMismatch,
    NonIntegralQuotient,
    NotAStarSubgroup,
    NotStable,
)
from .groups import (
    DEFAULT_AUT_CAP,
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    SubgroupSet,
    _closure,
    automorphism_group,
    build_from_table,
    enumerate_subgroups,
    is_normal,
)


@dataclass(frozen=True)
class SkewBrace:
    """One element set with a star table and a circ table.

    ``provenance`` records which constructor produced the brace
    (radical, zappa_szep, semidirect, or raw).
    """

    order: int
    star: FiniteGroup
    circ: FiniteGroup
    provenance: str = "raw"


@dataclass(frozen=True)
class GcRatio:
    """Unreduced stable-subgroup count over circ-subgroup count."""

    numerator: int
    denominator: int
    stable: tuple[SubgroupSet, ...]
    provenance: str = "raw"

    @property
    def reduced(self) -> tuple[int, int]:
        g = math.gcd(self.numerator, self.denominator)
        return self.numerator // g, self.denominator // g

    @property
    def value(self) -> float:
        return self.numerator / self.denominator


def _brace_law_witness(star: FiniteGroup, circ: FiniteGroup):
    """First (a,b,c) violating the left brace law, or None."""
    S = star.op_array()
    C = circ.op_array()
    sinv = star.inv
    n = star.order
    for a in range(n):
        ca = C[a]
        lhs = ca[S]  # a circ (b star c)
        w = S[ca, sinv[a]]  # (a circ b) star a^-1
        rhs = S[w[:, None], ca[None, :]]
        if not np.array_equal(lhs, rhs):
            b, c = np.argwhere(lhs != rhs)[0]
            return a, int(b), int(c)
    return None


def _assemble_brace(star: FiniteGroup, circ: FiniteGroup, provenance: str) -> SkewBrace:
    if star.order != circ.order:
        raise ValueError("star and circ tables have different orders")
    if star.identity != circ.identity:
        raise IdentityMismatch(star.identity, circ.identity)
    witness = _brace_law_witness(star, circ)
    if witness is not None:
        raise BraceLawViolation(witness)
    return SkewBrace(star.order, star, circ, provenance)


def validate_skew_brace(star_table, circ_table, provenance: str = "raw") -> SkewBrace:
    """Validate two raw tables as a skew brace.

    Both tables go through full group validation first; then the brace law
    is checked on every triple.
    """
    star = build_from_table(star_table)
    circ = build_from_table(circ_table)
    return _assemble_brace(star, circ, provenance)


def is_bi_skew(b: SkewBrace) -> bool:
    """True iff the mirrored law holds, i.e. the roles of the two tables
    can be swapped and the result is again a skew brace."""
    return _brace_law_witness(b.circ, b.star) is None


def stability_map(b: SkewBrace, g: int) -> tuple[int, ...]:
    """The map x -> (g circ x) star g^-1.

    For a validated brace this is an automorphism of the star group; a
    subgroup is circ-stable exactly when every one of these maps keeps it
    inside itself.
    """
    sop, cop = b.star.op, b.circ.op
    gi = b.star.inv[g]
    crow = cop[g]
    return tuple(sop[crow[x]][gi] for x in range(b.order))


def _subgroup_gens(b: SkewBrace, H: SubgroupSet) -> tuple[int, ...]:
    if H.size == 1:
        return ()
    if H.gens:
        mask, _ = _closure(b.star.op, b.star.identity, H.gens)
        if mask == H.mask:
            return H.gens
    gens: list[int] = []
    mask = 1 << b.star.identity
    for x in H.elements():
        if not mask >> x & 1:
            gens.append(x)
            mask, _ = _closure(b.star.op, b.star.identity, gens)
            if mask == H.mask:
                break
    return tuple(gens)


def _require_star_subgroup(b: SkewBrace, H: SubgroupSet) -> None:
    if H.parent_order != b.order:
        raise NotAStarSubgroup(
            f"subgroup parent order {H.parent_order} does not match brace order {b.order}"
        )
    if not H.contains(b.star.identity):
        raise NotAStarSubgroup("set does not contain the identity")
    op = b.star.op
    elems = H.elements()
    if len(elems) != H.size:
        raise NotAStarSubgroup("recorded size does not match the membership mask")
    for x in elems:
        row = op[x]
        for y in elems:
            if not H.mask >> row[y] & 1:
                raise NotAStarSubgroup(
                    f"set is not closed under star: {x} star {y} escapes"
                )


def _stable(b: SkewBrace, gens, mask: int) -> bool:
    # The brace law makes every stability map a star-automorphism, so the
    # image of a subgroup is the subgroup generated by the generator images.
    sop, cop, sinv = b.star.op, b.circ.op, b.star.inv
    for g in range(b.order):
        gi = sinv[g]
        crow = cop[g]
        for h in gens:
            if not mask >> sop[crow[h]][gi] & 1:
                return False
    return True


def is_circ_stable(b: SkewBrace, H: SubgroupSet) -> bool:
    """True iff every stability map sends H into itself.

    H must be a subgroup of the star group (NotAStarSubgroup otherwise).
    """
    _require_star_subgroup(b, H)
    return _stable(b, _subgroup_gens(b, H), H.mask)


def enumerate_stable_subgroups(
    b: SkewBrace, cap: int = DEFAULT_ORDER_CAP
) -> list[SubgroupSet]:
    """All circ-stable subgroups of the star group, canonical order.

    Each survivor is re-verified to be closed under circ as well; a stable
    subgroup is a subgroup of both structures.
    """
    out = []
    cop = b.circ.op
    for H in enumerate_subgroups(b.star, cap):
        if _stable(b, H.gens, H.mask):
            elems = H.elements()
            for x in elems:
                row = cop[x]
                for y in elems:
                    if not H.mask >> row[y] & 1:
                        raise RuntimeError(
                            "stable subgroup is not circ-closed; tables inconsistent"
                        )
            out.append(H)
    return out


def is_ideal(b: SkewBrace, H: SubgroupSet) -> bool:
    """A circ-stable subgroup is an ideal iff it is normal in the circ group."""
    if not is_circ_stable(b, H):
        raise NotStable("subgroup is not circ-stable")
    return is_normal(b.circ, H)


def gc_ratio(b: SkewBrace, cap: int = DEFAULT_ORDER_CAP) -> GcRatio:
    """Galois correspondence ratio of the brace, reported unreduced.

    Numerator: circ-stable subgroups of the star group.  Denominator:
    subgroups of the circ group.
    """
    stable = enumerate_stable_subgroups(b, cap)
    denominator = len(enumerate_subgroups(b.circ, cap))
    return GcRatio(len(stable), denominator, tuple(stable), b.provenance)


def skew_brace_automorphism_count(b: SkewBrace, cap: int = DEFAULT_AUT_CAP) -> int:
    """Number of bijections that are automorphisms of both tables."""
    cop = b.circ.op
    n = b.order
    count = 0
    for phi in automorphism_group(b.star, cap):
        if all(
            phi[cop[x][y]] == cop[phi[x]][phi[y]] for x in range(n) for y in range(n)
        ):
            count += 1
    return count


def hgs_count(b: SkewBrace, cap: int = DEFAULT_AUT_CAP) -> int:
    """Circ-automorphism count divided by the two-sided automorphism count.

    The quotient is guaranteed integral; a remainder signals a bug.
    """
    total = len(automorphism_group(b.circ, cap))
    both = skew_brace_automorphism_count(b, cap)
    if total % both:
        raise NonIntegralQuotient(total, both)
    return total // both
