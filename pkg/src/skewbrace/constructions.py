"""Braces from exact factorizations and semidirect products.

Also carries the squarefree-family bookkeeping: closed-form subgroup and
stable-subgroup counts for the pq, product and generalized dihedral
families, checked against brute-force enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .braces import (
    SkewBrace,
    _assemble_brace,
    _stable,
    gc_ratio,
    is_circ_stable,
)
from .errors import (
    InvalidAction,
    NotComplementary,
    NotExhaustive,
    OrderCapExceeded,
    WrongParent,
)
from .groups import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    SubgroupSet,
    build_from_table,
    closure_from_permutations,
    cyclic_group,
    direct_product,
    enumerate_subgroups,
    generated_subgroup,
    semidirect_product_cyclic,
)


@dataclass(frozen=True)
class ExactFactorization:
    """G = L * R with trivial intersection; decomp[g] = (l, r) with g = l * r^-1."""

    parent: FiniteGroup
    left: SubgroupSet
    right: SubgroupSet
    decomp: tuple[tuple[int, int], ...]


def exact_factorization(G: FiniteGroup, left_seed, right_seed) -> ExactFactorization:
    """Verify that the generated subgroups factor G exactly.

    The decomposition table is built by enumerating all products l * r^-1;
    complementarity forces that map to be bijective, which is asserted
    anyway.
    """
    left = generated_subgroup(G, left_seed)
    right = generated_subgroup(G, right_seed)
    inter = (left.mask & right.mask).bit_count()
    if left.size * right.size != G.order or inter != 1:
        raise NotComplementary(
            f"|L|={left.size}, |R|={right.size}, |G|={G.order}, |L n R|={inter}"
        )
    op, inv = G.op, G.inv
    decomp: list[tuple[int, int] | None] = [None] * G.order
    for l in left.elements():
        row = op[l]
        for r in right.elements():
            g = row[inv[r]]
            if decomp[g] is not None:
                raise NotExhaustive(f"element {g} decomposes twice")
            decomp[g] = (l, r)
    if any(d is None for d in decomp):
        raise NotExhaustive("product map does not cover the group")
    return ExactFactorization(G, left, right, tuple(decomp))


def zappa_szep_brace(f: ExactFactorization) -> SkewBrace:
    """Brace with star the parent table and circ the factorwise product.

    For g = l * r^-1 the circ operation acts by g circ y = l * y * r^-1.
    """
    G = f.parent
    op, inv = G.op, G.inv
    n = G.order
    rows = []
    for x in range(n):
        l, r = f.decomp[x]
        ri = inv[r]
        lrow = op[l]
        rows.append(tuple(op[lrow[y]][ri] for y in range(n)))
    circ = build_from_table(rows, labels=G.labels)
    return _assemble_brace(G, circ, "zappa_szep")


def stable_iff_normalized_check(
    f: ExactFactorization, H: SubgroupSet, brace: SkewBrace | None = None
) -> tuple[bool, bool]:
    """(circ-stable, normalized by the left factor); the two must agree.

    Exposed as a cross-check: stability of a subgroup of the parent is
    equivalent to being normalized by the left factor.
    """
    b = brace if brace is not None else zappa_szep_brace(f)
    stable = is_circ_stable(b, H)
    G = f.parent
    op, inv = G.op, G.inv
    normalized = True
    for l in f.left.elements():
        li = inv[l]
        row = op[l]
        for h in H.gens or H.elements():
            if not H.mask >> op[row[h]][li] & 1:
                normalized = False
                break
        if not normalized:
            break
    return stable, normalized


def a5_factorization(cap: int = DEFAULT_ORDER_CAP) -> ExactFactorization:
    """Alternating group on 5 points as (5-cycle subgroup) * (point stabilizer)."""
    five_cycle = (1, 2, 3, 4, 0)
    three_cycle = (1, 2, 0, 3, 4)
    double_swap = (1, 0, 3, 2, 4)
    G = closure_from_permutations([five_cycle, three_cycle, double_swap], cap=cap)
    # distinct non-identity generators occupy indices 1, 2, 3 in closure order
    return exact_factorization(G, [1], [2, 3])


def semidirect_biskew(
    m: int, n: int, b: int, cap: int = DEFAULT_ORDER_CAP
) -> tuple[SkewBrace, SkewBrace]:
    """The two braces carried by a cyclic semidirect product.

    First brace: star is the semidirect table, circ is componentwise
    addition on the same pair indexing.  Second brace: roles swapped.
    Both validate, which is exactly the bi-skew property.
    """
    mult = semidirect_product_cyclic(m, n, b)
    if mult.order > cap:
        raise OrderCapExceeded(mult.order, cap)
    addg = direct_product(cyclic_group(m), cyclic_group(n))
    first = _assemble_brace(mult, addg, "semidirect")
    second = _assemble_brace(addg, mult, "semidirect")
    return first, second


def stability_criterion_z9z6(H: SubgroupSet) -> tuple[bool, bool]:
    """Shortcut stability tests for the order-54 worked example (m=9, n=6, b=2).

    Returns (mult_stable, add_stable) where mult_stable requires (r,0) in H
    for every member (r,s), and add_stable requires (2^s - 1, 0) in H.
    Elements are decoded from the pair indexing (r,s) -> 6r + s.
    """
    if H.parent_order != 54:
        raise WrongParent(54, H.parent_order)
    mult_stable = True
    add_stable = True
    for x in H.elements():
        r, s = divmod(x, 6)
        if not H.mask >> (r * 6) & 1:
            mult_stable = False
        if not H.mask >> (((pow(2, s, 9) - 1) % 9) * 6) & 1:
            add_stable = False
    return mult_stable, add_stable


def sigma(m: int) -> int:
    """Sum of the divisors of m."""
    if m < 1:
        raise ValueError("m must be positive")
    return sum(d for d in range(1, m + 1) if m % d == 0)


def divisor_count(m: int) -> int:
    """Number of divisors of m."""
    if m < 1:
        raise ValueError("m must be positive")
    return sum(1 for d in range(1, m + 1) if m % d == 0)


def _prime_factors(m: int) -> tuple[int, ...]:
    out = []
    d = 2
    while d * d <= m:
        while m % d == 0:
            out.append(d)
            m //= d
        d += 1
    if m > 1:
        out.append(m)
    return tuple(out)


def multiplicative_order(b: int, m: int) -> int:
    if m == 1:
        return 1
    if math.gcd(b, m) != 1:
        raise ValueError(f"{b} is not a unit modulo {m}")
    k = 1
    y = b % m
    while y != 1:
        y = y * b % m
        k += 1
    return k


FAMILIES = ("pq", "product_pq", "generalized_dihedral", "custom_semidirect")


@dataclass(frozen=True)
class FamilySpec:
    """Validated parameters (m, n, b) for one of the squarefree families."""

    family: str
    m: int
    n: int
    b: int
    m_primes: tuple[int, ...]
    n_primes: tuple[int, ...]

    @property
    def g(self) -> int:
        return len(self.m_primes)

    @property
    def h(self) -> int:
        return len(self.n_primes)


def family_spec(family: str, m: int, n: int, b: int) -> FamilySpec:
    """Validate and normalize a family spec.

    m and n must be coprime and squarefree; b must act with the
    multiplicative orders each family requires.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; choose one of {FAMILIES}")
    if m < 2 or n < 2:
        raise ValueError("m and n must be at least 2")
    mp = _prime_factors(m)
    np_ = _prime_factors(n)
    if len(set(mp)) != len(mp) or len(set(np_)) != len(np_):
        raise ValueError(f"m={m} and n={n} must be squarefree")
    if math.gcd(m, n) != 1:
        raise ValueError(f"m={m} and n={n} must be coprime")
    b %= m
    if math.gcd(b, m) != 1 or pow(b, n, m) != 1:
        raise InvalidAction(f"b={b} must be a unit modulo {m} with b^{n} = 1 (mod {m})")
    if family == "pq":
        if len(mp) != 1 or len(np_) != 1:
            raise ValueError("pq family needs m and n prime")
        p, q = m, n
        if (p - 1) % q != 0 or multiplicative_order(b, p) != q:
            raise InvalidAction(f"b={b} must have order {q} modulo {p}")
    elif family == "product_pq":
        if len(mp) != len(np_):
            raise ValueError("product family pairs one q with each p")
        orders = sorted(multiplicative_order(b, p) for p in mp)
        if orders != sorted(np_):
            raise InvalidAction(
                f"orders of b modulo the primes of m are {orders}, "
                f"expected the primes of n"
            )
    elif family == "generalized_dihedral":
        for p in mp:
            if multiplicative_order(b, p) != n:
                raise InvalidAction(f"b={b} must have order {n} modulo {p}")
    return FamilySpec(family, m, n, b, mp, np_)


@dataclass(frozen=True)
class FormulaReport:
    """Closed-form predictions next to brute-force enumeration."""

    spec: FamilySpec
    predicted: dict
    enumerated: dict | None
    match: dict | None
    verified: bool
    bound_ok: bool | None

    @property
    def all_match(self) -> bool:
        return bool(self.match) and all(self.match.values())


def _predicted(spec: FamilySpec) -> dict:
    g, h = spec.g, spec.h
    if spec.family == "pq":
        p = spec.m
        return {
            "subgroups_add": 4,
            "subgroups_mult": p + 3,
            "stable_in_add": 4,
            "stable_in_mult": 3,
            "ratio_mult_galois": (4, p + 3),
            "ratio_add_galois": (3, 4),
            "all_add_subgroups_mult_stable": True,
        }
    if spec.family == "product_pq":
        den = math.prod(p + 3 for p in spec.m_primes)
        return {
            "subgroups_add": 4**g,
            "subgroups_mult": den,
            "stable_in_add": 4**g,
            "stable_in_mult": 3**g,
            "ratio_mult_galois": (4**g, den),
            "ratio_add_galois": (3**g, 4**g),
            "all_add_subgroups_mult_stable": True,
        }
    if spec.family == "generalized_dihedral":
        mult_count = 2**g + (2**h - 1) * sigma(spec.m)
        return {
            "subgroups_add": 2 ** (g + h),
            "subgroups_mult": mult_count,
            "stable_in_add": 2 ** (g + h),
            "stable_in_mult": 2**h + 2**g - 1,
            "ratio_mult_galois": (2 ** (g + h), mult_count),
            "ratio_add_galois": (2**h + 2**g - 1, 2 ** (g + h)),
            "all_add_subgroups_mult_stable": True,
        }
    # custom semidirect: no closed forms; the full-stability prediction only
    # applies when b has full order modulo m
    if multiplicative_order(spec.b, spec.m) == spec.n:
        return {"all_add_subgroups_mult_stable": True}
    return {}


def family_formula_report(spec: FamilySpec, cap: int = DEFAULT_ORDER_CAP) -> FormulaReport:
    """Predict the family's counts and verify them by enumeration.

    When the group order exceeds the cap the report carries the predictions
    only and is flagged unverified.
    """
    predicted = _predicted(spec)
    try:
        add_galois, mult_galois = semidirect_biskew(spec.m, spec.n, spec.b, cap)
        r_mult = gc_ratio(mult_galois, cap)
        r_add = gc_ratio(add_galois, cap)
    except OrderCapExceeded:
        return FormulaReport(spec, predicted, None, None, False, None)
    enumerated = {
        "subgroups_add": r_add.denominator,
        "subgroups_mult": r_mult.denominator,
        "stable_in_add": r_mult.numerator,
        "stable_in_mult": r_add.numerator,
        "ratio_mult_galois": (r_mult.numerator, r_mult.denominator),
        "ratio_add_galois": (r_add.numerator, r_add.denominator),
        "all_add_subgroups_mult_stable": r_mult.numerator == r_add.denominator,
    }
    match = {k: predicted[k] == enumerated[k] for k in predicted}
    bound_ok = None
    if spec.family == "generalized_dihedral":
        num, den = enumerated["ratio_mult_galois"]
        bound_ok = num * 3**spec.g <= 2 * 2**spec.g * den
    return FormulaReport(spec, predicted, enumerated, match, True, bound_ok)


def all_additive_subgroups_stable(spec: FamilySpec, cap: int = DEFAULT_ORDER_CAP) -> bool:
    """True iff every subgroup of the additive structure is mult-stable.

    Requires b to have full order n modulo m.
    """
    if multiplicative_order(spec.b, spec.m) != spec.n:
        raise InvalidAction(f"b={spec.b} must have order {spec.n} modulo {spec.m}")
    _, mult_galois = semidirect_biskew(spec.m, spec.n, spec.b, cap)
    subs = enumerate_subgroups(mult_galois.star, cap)
    return all(_stable(mult_galois, H.gens, H.mask) for H in subs)
