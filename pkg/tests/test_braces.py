"""Brace validation, stability, ideals, ratios, automorphism counts."""

from __future__ import annotations

import random

import pytest

import skewbrace as sb
from skewbrace.errors import (
    BraceLawViolation,
    IdentityMismatch,
    NotAStarSubgroup,
    NotStable,
    ValidationFailure,
)

from conftest import brace_law_violations, truncated_poly_algebra


def _self_brace(G: sb.FiniteGroup) -> sb.SkewBrace:
    """Brace whose two operations coincide."""
    return sb.validate_skew_brace(G.op, G.op)


# ---------------------------------------------------------------------------
# validation


def test_trivial_brace_on_abelian_group():
    b = _self_brace(sb.cyclic_group(6))
    assert b.order == 6


def test_self_brace_on_s3(s3):
    b = _self_brace(s3)
    assert b.order == 6


def test_z9z6_pairing_is_valid_and_bi_skew(z9z6_braces):
    add_galois, mult_galois = z9z6_braces
    assert sb.is_bi_skew(add_galois)
    assert sb.is_bi_skew(mult_galois)


def test_identity_mismatch_detected():
    z3 = sb.cyclic_group(3)
    # relabel so the identity sits at index 1
    perm = [1, 0, 2]
    inv = [1, 0, 2]
    moved = [
        [perm[z3.op[inv[i]][inv[j]]] for j in range(3)] for i in range(3)
    ]
    with pytest.raises(IdentityMismatch):
        sb.validate_skew_brace(z3.op, moved)


def test_brace_law_violation_has_witness(s3):
    z6 = sb.cyclic_group(6)
    with pytest.raises(BraceLawViolation) as exc:
        sb.validate_skew_brace(z6.op, s3.op)
    a, b, c = exc.value.witness
    # replay the witness against a plain triple scan
    star, circ = z6, s3
    lhs = circ.op[a][star.op[b][c]]
    rhs = star.op[star.op[circ.op[a][b]][star.inv[a]]][circ.op[a][c]]
    assert lhs != rhs


def test_law_scan_matches_plain_python(s3, z9z6_braces):
    add_galois, _ = z9z6_braces
    assert brace_law_violations(add_galois.star, add_galois.circ) == []
    z6 = sb.cyclic_group(6)
    plain = brace_law_violations(z6, s3)
    assert plain  # the pairing above really does violate the law


def test_mutation_fuzzing_rejects_every_single_entry_change(
    z9z6_braces, a5_brace, degraaf3_braces
):
    rng = random.Random(12345)
    braces_under_test = [z9z6_braces[0], a5_brace, degraaf3_braces[0]]
    for brace in braces_under_test:
        star_table = brace.star.op
        circ_table = [list(row) for row in brace.circ.op]
        n = brace.order
        for _ in range(100):
            r, c = rng.randrange(n), rng.randrange(n)
            new = rng.randrange(n - 1)
            if new >= circ_table[r][c]:
                new += 1
            mutated = [row[:] for row in circ_table]
            mutated[r][c] = new
            with pytest.raises(ValidationFailure):
                sb.validate_skew_brace(star_table, mutated)


# ---------------------------------------------------------------------------
# bi-skew


def test_trivial_brace_is_bi_skew():
    assert sb.is_bi_skew(_self_brace(sb.cyclic_group(4)))


def test_degraaf_brace_is_bi_skew(degraaf3_braces):
    assert sb.is_bi_skew(degraaf3_braces[0])


def test_deep_nilpotent_brace_is_not_bi_skew():
    # x*F3[x]/x^4 has nonzero triple products; the mirrored law fails
    A = truncated_poly_algebra(3, 4)
    assert A.nilpotency_index == 4
    brace = sb.brace_from_radical(A)
    assert not sb.is_bi_skew(brace)


# ---------------------------------------------------------------------------
# stability maps


def test_stability_map_at_identity_is_identity(z9z6_braces):
    b = z9z6_braces[0]
    assert sb.stability_map(b, b.star.identity) == tuple(range(b.order))


def test_stability_maps_trivial_for_abelian_self_brace():
    b = _self_brace(sb.cyclic_group(6))
    for g in range(6):
        assert sb.stability_map(b, g) == tuple(range(6))


def test_stability_map_is_conjugation_for_self_brace(s3):
    b = _self_brace(s3)
    for g in range(6):
        rho = sb.stability_map(b, g)
        for x in range(6):
            assert rho[x] == s3.op[s3.op[g][x]][s3.inv[g]]


def test_stability_maps_are_star_automorphisms(
    z9z6_braces, a5_brace, degraaf3_braces, s3
):
    suite = [
        z9z6_braces[0],
        z9z6_braces[1],
        a5_brace,
        degraaf3_braces[0],
        degraaf3_braces[1],
        _self_brace(sb.cyclic_group(6)),
        _self_brace(s3),
    ]
    for brace in suite:
        sop = brace.star.op
        n = brace.order
        for g in range(n):
            rho = sb.stability_map(brace, g)
            assert sorted(rho) == list(range(n))
            assert all(
                rho[sop[x][y]] == sop[rho[x]][rho[y]]
                for x in range(n)
                for y in range(n)
            )


# ---------------------------------------------------------------------------
# stable subgroups


def test_trivial_and_full_always_stable(z9z6_braces):
    b = z9z6_braces[0]
    subs = sb.enumerate_subgroups(b.star)
    assert sb.is_circ_stable(b, subs[0])
    assert sb.is_circ_stable(b, subs[-1])


def test_self_brace_stability_is_normality(s3):
    b = _self_brace(s3)
    for H in sb.enumerate_subgroups(s3):
        assert sb.is_circ_stable(b, H) == sb.is_normal(s3, H)
    order2 = next(H for H in sb.enumerate_subgroups(s3) if H.size == 2)
    assert not sb.is_circ_stable(b, order2)


def test_mult_stability_of_vertical_subgroup(z9z6_braces):
    _, mult_galois = z9z6_braces
    addg = mult_galois.star
    H = sb.generated_subgroup(addg, [0 * 6 + 1])
    assert sb.is_circ_stable(mult_galois, H)


def test_is_circ_stable_rejects_non_subgroup(z9z6_braces):
    b = z9z6_braces[0]
    bad = sb.SubgroupSet(b.order, 0b110, 2)
    with pytest.raises(NotAStarSubgroup):
        sb.is_circ_stable(b, bad)


def test_stable_subgroup_counts_z9z6(z9z6_braces):
    add_galois, mult_galois = z9z6_braces
    assert len(sb.enumerate_stable_subgroups(mult_galois)) == 12
    assert len(sb.enumerate_stable_subgroups(add_galois)) == 9


def test_stable_subgroups_a5(a5_brace):
    stable = sb.enumerate_stable_subgroups(a5_brace)
    assert sorted(H.size for H in stable) == [1, 5, 10, 60]


def test_stable_subgroups_closed_under_both_operations(z9z6_braces):
    for brace in z9z6_braces:
        for H in sb.enumerate_stable_subgroups(brace):
            elems = H.elements()
            for x in elems:
                for y in elems:
                    assert H.contains(brace.star.op[x][y])
                    assert H.contains(brace.circ.op[x][y])


# ---------------------------------------------------------------------------
# ideals


def test_full_group_is_ideal(z9z6_braces):
    b = z9z6_braces[0]
    full = sb.enumerate_subgroups(b.star)[-1]
    assert sb.is_ideal(b, full)


def test_self_brace_ideals_are_normal_subgroups(s3):
    b = _self_brace(s3)
    order3 = next(H for H in sb.enumerate_subgroups(s3) if H.size == 3)
    assert sb.is_ideal(b, order3)


def test_a5_order10_stable_subgroup_is_not_ideal(a5_brace):
    ten = next(H for H in sb.enumerate_stable_subgroups(a5_brace) if H.size == 10)
    assert not sb.is_ideal(a5_brace, ten)
    # independent check: conjugation inside the circ group escapes
    circ = a5_brace.circ
    escaped = False
    for g in range(circ.order):
        gi = circ.inv[g]
        for h in ten.elements():
            if not ten.contains(circ.op[circ.op[g][h]][gi]):
                escaped = True
                break
        if escaped:
            break
    assert escaped


def test_is_ideal_requires_stability(s3):
    b = _self_brace(s3)
    order2 = next(H for H in sb.enumerate_subgroups(s3) if H.size == 2)
    with pytest.raises(NotStable):
        sb.is_ideal(b, order2)


# ---------------------------------------------------------------------------
# ratios


def test_gc_ratio_values(z9z6_braces, a5_brace):
    add_galois, mult_galois = z9z6_braces
    r = sb.gc_ratio(a5_brace)
    assert (r.numerator, r.denominator) == (4, 20)
    assert r.reduced == (1, 5)
    r = sb.gc_ratio(mult_galois)
    assert (r.numerator, r.denominator) == (12, 36)
    r = sb.gc_ratio(add_galois)
    assert (r.numerator, r.denominator) == (9, 20)
    assert r.value == pytest.approx(0.45)


def test_trivial_abelian_brace_has_ratio_one():
    z12 = sb.cyclic_group(12)
    b = _self_brace(z12)
    r = sb.gc_ratio(b)
    assert r.numerator == r.denominator == len(sb.enumerate_subgroups(z12))


# ---------------------------------------------------------------------------
# automorphism counts


def test_skew_brace_automorphism_counts(s3, z9z6_braces):
    assert sb.skew_brace_automorphism_count(_self_brace(sb.cyclic_group(6))) == 2
    assert sb.skew_brace_automorphism_count(_self_brace(s3)) == 6
    # order-54 bi-skew example, frozen from the exhaustive filter
    assert sb.skew_brace_automorphism_count(z9z6_braces[0]) == 6


def test_aut_count_of_pair_group_by_dumb_enumeration(z9z6_braces):
    addg = z9z6_braces[0].circ
    fast = len(sb.automorphism_group(addg))
    # dumb oracle: choose images of (1,0) and (0,1) with compatible orders
    n1, n2 = 9, 6
    count = 0
    for ga in range(54):
        if (9 * (ga // 6)) % 9 or (9 * (ga % 6)) % 6:
            continue
        for gb in range(54):
            if (6 * (gb // 6)) % 9 or (6 * (gb % 6)) % 6:
                continue
            seen = set()
            for a in range(n1):
                for b in range(n2):
                    r = (a * (ga // 6) + b * (gb // 6)) % 9
                    s = (a * (ga % 6) + b * (gb % 6)) % 6
                    seen.add(r * 6 + s)
            if len(seen) == 54:
                count += 1
    assert fast == count == 108


def test_hgs_counts(s3, z9z6_braces):
    assert sb.hgs_count(_self_brace(sb.cyclic_group(6))) == 1
    assert sb.hgs_count(_self_brace(s3)) == 1
    add_galois, _ = z9z6_braces
    assert sb.hgs_count(add_galois) == 108 // 6 == 18
