"""Shared fixtures and independent oracles used across the suite."""

from __future__ import annotations

import random
from itertools import combinations

import pytest
from hypothesis import settings

import skewbrace as sb

settings.register_profile("suite", derandomize=True, max_examples=60)
settings.load_profile("suite")


# ---------------------------------------------------------------------------
# small independent oracles (deliberately dumb; used to cross-check the fast
# implementations)


def brute_force_subgroups(G: sb.FiniteGroup) -> set[int]:
    """Subgroup masks by scanning every subset containing the identity.

    Only usable for tiny groups; the cost is 2^(n-1) closure checks.
    """
    n = G.order
    others = [x for x in range(n) if x != G.identity]
    found = set()
    for r in range(len(others) + 1):
        for extra in combinations(others, r):
            elems = (G.identity, *extra)
            if len(elems) > 0 and n % len(elems) != 0:
                continue
            inside = set(elems)
            if all(G.op[a][b] in inside for a in elems for b in elems):
                mask = 0
                for x in elems:
                    mask |= 1 << x
                found.add(mask)
    return found


def brute_force_automorphisms(G: sb.FiniteGroup) -> set[tuple[int, ...]]:
    """All automorphisms by scanning every bijection fixing the identity."""
    from itertools import permutations

    n = G.order
    others = [x for x in range(n) if x != G.identity]
    out = set()
    for images in permutations(others):
        phi = [0] * n
        phi[G.identity] = G.identity
        for x, y in zip(others, images):
            phi[x] = y
        if all(
            phi[G.op[a][b]] == G.op[phi[a]][phi[b]] for a in range(n) for b in range(n)
        ):
            out.add(tuple(phi))
    return out


def brace_law_violations(star: sb.FiniteGroup, circ: sb.FiniteGroup) -> list[tuple]:
    """Plain-python triple scan of the left brace law."""
    n = star.order
    out = []
    for a in range(n):
        for b in range(n):
            for c in range(n):
                lhs = circ.op[a][star.op[b][c]]
                rhs = star.op[star.op[circ.op[a][b]][star.inv[a]]][circ.op[a][c]]
                if lhs != rhs:
                    out.append((a, b, c))
    return out


# ---------------------------------------------------------------------------
# randomized nilpotent algebras: transport known ones through a random basis
# change (preserves associativity and nilpotency, scrambles the constants)


def _mat_inv_mod(M, p):
    d = len(M)
    aug = [list(row) + [1 if i == j else 0 for j in range(d)] for i, row in enumerate(M)]
    r = 0
    for c in range(d):
        piv = next((k for k in range(r, d) if aug[k][c] % p), None)
        if piv is None:
            return None
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], -1, p)
        aug[r] = [v * inv % p for v in aug[r]]
        for k in range(d):
            if k != r and aug[k][c] % p:
                f = aug[k][c]
                aug[k] = [(v - f * w) % p for v, w in zip(aug[k], aug[r])]
        r += 1
    return [row[d:] for row in aug]


def transported_algebra(A: sb.FpAlgebra, seed: int) -> sb.FpAlgebra:
    """The same algebra written in a random new basis."""
    rng = random.Random(seed)
    p, d = A.p, A.dim
    while True:
        M = [[rng.randrange(p) for _ in range(d)] for _ in range(d)]
        Minv = _mat_inv_mod(M, p)
        if Minv is not None:
            break
    sc = []
    for i in range(d):
        row = []
        for j in range(d):
            fi = tuple(M[i])
            fj = tuple(M[j])
            prod_e = sb.multiply(A, fi, fj)
            # rewrite the product in the new basis: coords_f = coords_e @ M^-1
            coords = tuple(
                sum(prod_e[k] * Minv[k][l] for k in range(d)) % p for l in range(d)
            )
            row.append(coords)
        sc.append(tuple(row))
    return sb.make_algebra(p, d, tuple(sc))


def heisenberg_algebra(p: int) -> sb.FpAlgebra:
    """Strictly upper-triangular 3x3 matrices: e0*e1 = e2, all else zero."""
    zero = (0, 0, 0)
    sc = [[zero] * 3 for _ in range(3)]
    sc[0][1] = (0, 0, 1)
    return sb.make_algebra(p, 3, sc)


def truncated_poly_algebra(p: int, k: int) -> sb.FpAlgebra:
    """Span of x, x^2, ..., x^(k-1) with x^k = 0."""
    d = k - 1
    sc = []
    for i in range(d):
        row = []
        for j in range(d):
            deg = i + j + 2
            row.append(tuple(1 if l + 1 == deg else 0 for l in range(d)))
        sc.append(tuple(row))
    return sb.make_algebra(p, d, tuple(sc))


# ---------------------------------------------------------------------------
# fixtures


@pytest.fixture(scope="session")
def s3():
    return sb.closure_from_permutations([(1, 2, 0), (1, 0, 2)])


@pytest.fixture(scope="session")
def z9z6_braces():
    """(add_galois, mult_galois) braces of the order-54 worked example."""
    return sb.semidirect_biskew(9, 6, 2)


@pytest.fixture(scope="session")
def a5_brace():
    return sb.zappa_szep_brace(sb.a5_factorization())


@pytest.fixture(scope="session")
def degraaf3():
    return sb.degraaf_algebra(3)


@pytest.fixture(scope="session")
def degraaf3_braces(degraaf3):
    return sb.brace_from_radical(degraaf3), sb.brace_from_radical_flipped(degraaf3)


@pytest.fixture(scope="session")
def heavy_cache():
    """Mutable store so expensive structures are computed once per session."""
    return {}
