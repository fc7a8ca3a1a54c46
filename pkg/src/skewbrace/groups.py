"""Finite groups as dense operation tables.

Groups live on element indices 0..n-1.  Constructors validate the axioms
exhaustively (associativity with a vectorized scan), and the rest of the
module works directly on the tables: subgroup-lattice enumeration,
normality, element orders, automorphism search and isomorphism testing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ClosureCapExceeded,
    InvalidAction,
    NoIdentity,
    NoInverse,
    NotAssociative,
    NotClosed,
    OrderCapExceeded,
)

DEFAULT_ORDER_CAP = 2000
DEFAULT_AUT_CAP = 200

# Above this order, constructors whose tables are associative by construction
# (products, closures) skip the exhaustive recheck and record that fact.
ASSOC_SKIP_ORDER = 1024


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group given by its full n-by-n operation table.

    ``assoc_checked`` is False only for tables from trusted constructors
    above the associativity-scan threshold.
    """

    order: int
    op: tuple[tuple[int, ...], ...]
    identity: int
    inv: tuple[int, ...]
    labels: tuple[str, ...] | None = None
    assoc_checked: bool = True

    def mul(self, a: int, b: int) -> int:
        return self.op[a][b]

    def inverse(self, a: int) -> int:
        return self.inv[a]

    def label(self, a: int) -> str:
        return self.labels[a] if self.labels is not None else str(a)

    def op_array(self) -> np.ndarray:
        return np.asarray(self.op, dtype=np.int64)


@dataclass(frozen=True)
class SubgroupSet:
    """A subgroup stored as a membership bitmask over the parent's elements.

    ``gens`` is a known generating set when the subgroup came out of an
    enumeration or closure; the empty tuple is only meaningful for the
    trivial subgroup.
    """

    parent_order: int
    mask: int
    size: int
    gens: tuple[int, ...] = field(default=(), compare=False, repr=False)

    def contains(self, x: int) -> bool:
        return bool(self.mask >> x & 1)

    def elements(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.parent_order) if self.mask >> i & 1)

    @property
    def members(self) -> tuple[bool, ...]:
        return tuple(bool(self.mask >> i & 1) for i in range(self.parent_order))


def _normalize_table(op_table) -> tuple[tuple[tuple[int, ...], ...], int]:
    rows = [tuple(int(v) for v in row) for row in op_table]
    n = len(rows)
    if n == 0:
        raise ValueError("operation table is empty")
    for i, row in enumerate(rows):
        if len(row) != n:
            raise ValueError(f"table is not square: row {i} has length {len(row)}")
        for j, v in enumerate(row):
            if not 0 <= v < n:
                raise NotClosed(i, j, v)
    return tuple(rows), n


def _assoc_witness(arr: np.ndarray) -> tuple[int, int, int] | None:
    """First (a,b,c) violating associativity, scanning one row at a time."""
    n = arr.shape[0]
    for a in range(n):
        row = arr[a]
        lhs = arr[row]  # lhs[b, c] = op[op[a][b]][c]
        rhs = row[arr]  # rhs[b, c] = op[a][op[b][c]]
        if not np.array_equal(lhs, rhs):
            b, c = np.argwhere(lhs != rhs)[0]
            return a, int(b), int(c)
    return None


def build_from_table(op_table, labels=None, *, trusted: bool = False) -> FiniteGroup:
    """Validate an operation table and return the group it defines.

    Raises NotClosed, NoIdentity, NoInverse or NotAssociative with a
    witness.  ``trusted`` marks tables that are associative by construction;
    those skip the O(n^3) scan above ASSOC_SKIP_ORDER.
    """
    rows, n = _normalize_table(op_table)
    full = tuple(range(n))
    identity = None
    for e in range(n):
        if rows[e] == full and all(rows[x][e] == x for x in range(n)):
            identity = e
            break
    if identity is None:
        raise NoIdentity()
    inv = []
    for x in range(n):
        y = next(
            (y for y in range(n) if rows[x][y] == identity and rows[y][x] == identity),
            None,
        )
        if y is None:
            raise NoInverse(x)
        inv.append(y)
    assoc_checked = True
    if trusted and n > ASSOC_SKIP_ORDER:
        assoc_checked = False
    else:
        witness = _assoc_witness(np.asarray(rows, dtype=np.int64))
        if witness is not None:
            raise NotAssociative(witness)
    if labels is not None:
        labels = tuple(str(s) for s in labels)
        if len(labels) != n:
            raise ValueError(f"got {len(labels)} labels for {n} elements")
    return FiniteGroup(n, rows, identity, tuple(inv), labels, assoc_checked)


def cyclic_group(k: int) -> FiniteGroup:
    """Additive group of integers modulo k."""
    if k < 1:
        raise ValueError("cyclic group order must be at least 1")
    rows = tuple(tuple((i + j) % k for j in range(k)) for i in range(k))
    return build_from_table(rows, labels=[str(i) for i in range(k)], trusted=True)


def direct_product(G: FiniteGroup, H: FiniteGroup) -> FiniteGroup:
    """Componentwise product on pairs, indexed row-major: (g,h) -> g*|H| + h."""
    n2 = H.order
    rows = []
    for g in range(G.order):
        grow = G.op[g]
        for h in range(H.order):
            hrow = H.op[h]
            rows.append(
                tuple(
                    grow[j // n2] * n2 + hrow[j % n2] for j in range(G.order * n2)
                )
            )
    labels = tuple(
        f"({G.label(g)},{H.label(h)})" for g in range(G.order) for h in range(H.order)
    )
    return build_from_table(rows, labels=labels, trusted=True)


def semidirect_product_cyclic(m: int, n: int, b: int) -> FiniteGroup:
    """Group on pairs (r,s) with (r,s)(r',s') = (r + b^s r' mod m, s+s' mod n)."""
    if m < 1 or n < 1:
        raise ValueError("factors must have positive order")
    b %= m
    if math.gcd(b, m) != 1 or pow(b, n, m) != 1:
        raise InvalidAction(f"b={b} must be a unit modulo {m} with b^{n} = 1 (mod {m})")
    powers = [pow(b, s, m) for s in range(n)]
    rows = []
    for r in range(m):
        for s in range(n):
            bs = powers[s]
            rows.append(
                tuple(
                    ((r + bs * (j // n)) % m) * n + (s + j % n) % n
                    for j in range(m * n)
                )
            )
    labels = tuple(f"({r},{s})" for r in range(m) for s in range(n))
    return build_from_table(rows, labels=labels, trusted=True)


def _cycle_label(perm: tuple[int, ...]) -> str:
    """One-line cycle notation, points printed 1-indexed."""
    seen: set[int] = set()
    parts = []
    for i in range(len(perm)):
        if i in seen or perm[i] == i:
            continue
        cyc = [i]
        seen.add(i)
        j = perm[i]
        while j != i:
            cyc.append(j)
            seen.add(j)
            j = perm[j]
        parts.append("(" + " ".join(str(k + 1) for k in cyc) + ")")
    return "".join(parts) or "()"


def closure_from_permutations(gens, cap: int = DEFAULT_ORDER_CAP) -> FiniteGroup:
    """Group generated by permutations of {0..d-1}, as a table.

    Element 0 is the identity; the generators themselves come first in the
    breadth-first discovery order (distinct non-identity generators get
    indices 1, 2, ...).  Composition is (p*q)(i) = p[q[i]].
    """
    gens = [tuple(int(v) for v in g) for g in gens]
    if not gens:
        raise ValueError("at least one generator is required")
    d = len(gens[0])
    for i, g in enumerate(gens):
        if len(g) != d or sorted(g) != list(range(d)):
            raise ValueError(f"generator {i} is not a bijection on 0..{d - 1}")
    identity = tuple(range(d))
    index = {identity: 0}
    elems = [identity]
    qi = 0
    while qi < len(elems):
        p = elems[qi]
        qi += 1
        for g in gens:
            q = tuple(p[g[i]] for i in range(d))
            if q not in index:
                if len(elems) >= cap:
                    raise ClosureCapExceeded(cap)
                index[q] = len(elems)
                elems.append(q)
    rows = tuple(
        tuple(index[tuple(x[y[k]] for k in range(d))] for y in elems) for x in elems
    )
    labels = tuple(_cycle_label(p) for p in elems)
    return build_from_table(rows, labels=labels, trusted=True)


def _closure(op, identity: int, seed) -> tuple[int, list[int]]:
    """Mask and element list of the subgroup generated by ``seed``."""
    elems = [identity]
    mask = 1 << identity
    for s in seed:
        if not mask >> s & 1:
            mask |= 1 << s
            elems.append(s)
    i = 0
    while i < len(elems):
        a = elems[i]
        row = op[a]
        j = 0
        while j < len(elems):
            b = elems[j]
            t = row[b]
            if not mask >> t & 1:
                mask |= 1 << t
                elems.append(t)
            t = op[b][a]
            if not mask >> t & 1:
                mask |= 1 << t
                elems.append(t)
            j += 1
        i += 1
    return mask, elems


def generated_subgroup(G: FiniteGroup, seed) -> SubgroupSet:
    """Smallest subgroup of G containing the seed elements."""
    seed = [int(s) for s in seed]
    for s in seed:
        if not 0 <= s < G.order:
            raise ValueError(f"seed element {s} out of range")
    mask, elems = _closure(G.op, G.identity, seed)
    gens = tuple(dict.fromkeys(s for s in seed if s != G.identity))
    return SubgroupSet(G.order, mask, len(elems), gens=gens)


def _dimino_join(op, s_elems, s_mask: int, gens, identity: int):
    """Member mask and elements of <S union gens>, S a subgroup given by
    ``s_elems``/``s_mask``.

    Grows the result coset by coset: cosets of S partition the join, so
    every write of op[s][t] over a fresh representative t is a new element.
    """
    elems = list(s_elems)
    mask = s_mask
    reps = [identity]
    ri = 0
    while ri < len(reps):
        r = reps[ri]
        ri += 1
        row = op[r]
        for d in gens:
            t = row[d]
            if not mask >> t & 1:
                for s in s_elems:
                    u = op[s][t]
                    mask |= 1 << u
                    elems.append(u)
                reps.append(t)
    return mask, elems


def enumerate_subgroups(G: FiniteGroup, cap: int = DEFAULT_ORDER_CAP) -> list[SubgroupSet]:
    """Every subgroup exactly once, ordered by size then sorted element tuple.

    Seeds with all cyclic subgroups and joins members of the growing lattice
    with those cyclic seeds until nothing new appears.  Any subgroup is a
    join of cyclic subgroups, so the fixpoint is complete.  A join whose
    order bound forces the whole group is skipped once the whole group is
    known.
    """
    if G.order > cap:
        raise OrderCapExceeded(G.order, cap)
    n, op, e = G.order, G.op, G.identity

    atoms: dict[int, tuple[list[int], int]] = {}
    for x in range(n):
        y = x
        mask = 1 << e
        elems = [e]
        while not mask >> y & 1:
            mask |= 1 << y
            elems.append(y)
            y = op[y][x]
        atoms.setdefault(mask, (elems, x))

    trivial = 1 << e
    known: dict[int, tuple[list[int], tuple[int, ...]]] = {trivial: ([e], ())}
    queue: list[int] = []
    for mask in sorted(atoms):
        elems, gen = atoms[mask]
        if mask not in known:
            known[mask] = (elems, (gen,))
            queue.append(mask)

    full = (1 << n) - 1
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    atom_list = [(m, atoms[m][0], atoms[m][1]) for m in sorted(atoms) if m != trivial]

    qi = 0
    while qi < len(queue):
        smask = queue[qi]
        qi += 1
        selems, sgens = known[smask]
        ssize = len(selems)
        for cmask, celems, cgen in atom_list:
            if cmask & ~smask == 0 or smask & ~cmask == 0:
                continue  # one side contains the other; join already known
            lower = ssize * len(celems) // (smask & cmask).bit_count()
            sizes = [
                d
                for d in divisors
                if d >= lower and d % ssize == 0 and d % len(celems) == 0
            ]
            if sizes == [n] and full in known:
                continue
            jmask, jelems = _dimino_join(op, selems, smask, sgens + (cgen,), e)
            if jmask not in known:
                known[jmask] = (jelems, sgens + (cgen,))
                queue.append(jmask)

    subs = [
        SubgroupSet(n, m, len(elems), gens=gens) for m, (elems, gens) in known.items()
    ]
    subs.sort(key=lambda H: (H.size, H.elements()))
    return subs


def is_normal(G: FiniteGroup, H: SubgroupSet) -> bool:
    """True iff gHg^-1 = H for every g (conjugation checked on generators)."""
    gens = H.gens or H.elements()
    op, inv = G.op, G.inv
    for g in range(G.order):
        gi = inv[g]
        row = op[g]
        for h in gens:
            if not H.mask >> op[row[h]][gi] & 1:
                return False
    return True


def element_order(G: FiniteGroup, x: int) -> int:
    """Least k >= 1 with x^k equal to the identity."""
    if not 0 <= x < G.order:
        raise ValueError(f"element {x} out of range")
    k = 1
    y = x
    while y != G.identity:
        y = G.op[y][x]
        k += 1
    return k


def _element_orders(G: FiniteGroup) -> list[int]:
    return [element_order(G, x) for x in range(G.order)]


def small_generating_set(G: FiniteGroup, orders=None) -> tuple[int, ...]:
    """Short generating sequence, greedily picking highest-order elements."""
    if G.order == 1:
        return ()
    orders = orders if orders is not None else _element_orders(G)
    gens: list[int] = []
    mask = 1 << G.identity
    while mask.bit_count() < G.order:
        cand = max(
            (x for x in range(G.order) if not mask >> x & 1),
            key=lambda x: (orders[x], -x),
        )
        gens.append(cand)
        mask, _ = _closure(G.op, G.identity, gens)
    return tuple(gens)


def _extend_hom(G: FiniteGroup, H: FiniteGroup, gens, imgs):
    """Extend generator images to a homomorphism on <gens>, or None.

    Walks the Cayley graph of <gens>; an edge conflict kills the candidate,
    and so does any collision of images (an automorphism search never wants
    a map that is non-injective on a subgroup).
    """
    img = [-1] * G.order
    img[G.identity] = H.identity
    used = 1 << H.identity
    lst = [G.identity]
    qi = 0
    Gop, Hop = G.op, H.op
    while qi < len(lst):
        x = lst[qi]
        qi += 1
        ix = img[x]
        for g, h in zip(gens, imgs):
            y = Gop[x][g]
            iy = Hop[ix][h]
            if img[y] >= 0:
                if img[y] != iy:
                    return None
            else:
                if used >> iy & 1:
                    return None
                img[y] = iy
                used |= 1 << iy
                lst.append(y)
    return img


def automorphism_group(G: FiniteGroup, cap: int = DEFAULT_AUT_CAP) -> list[tuple[int, ...]]:
    """All automorphisms as element permutations, sorted lexicographically.

    Backtracks over images of a small generating sequence; a generator may
    only map to an element of equal order, and partial assignments are
    pruned through _extend_hom.
    """
    if G.order > cap:
        raise OrderCapExceeded(G.order, cap)
    if G.order == 1:
        return [(0,)]
    orders = _element_orders(G)
    gens = small_generating_set(G, orders)
    candidates = [
        [x for x in range(G.order) if orders[x] == orders[g]] for g in gens
    ]
    out: list[tuple[int, ...]] = []

    def extend(k: int, chosen: list[int]) -> None:
        img = _extend_hom(G, G, gens[:k], chosen)
        if img is None:
            return
        if k == len(gens):
            out.append(tuple(img))
            return
        for c in candidates[k]:
            chosen.append(c)
            extend(k + 1, chosen)
            chosen.pop()

    extend(0, [])
    return sorted(out)


def is_isomorphic(G: FiniteGroup, H: FiniteGroup, cap: int = DEFAULT_AUT_CAP) -> bool:
    """Generator-image backtracking search for an isomorphism.

    Order histograms act as a fast negative filter before any search.
    """
    if max(G.order, H.order) > cap:
        raise OrderCapExceeded(max(G.order, H.order), cap)
    if G.order != H.order:
        return False
    if G.order == 1:
        return True
    orders_g = _element_orders(G)
    orders_h = _element_orders(H)
    if sorted(orders_g) != sorted(orders_h):
        return False
    gens = small_generating_set(G, orders_g)
    candidates = [
        [x for x in range(H.order) if orders_h[x] == orders_g[g]] for g in gens
    ]

    def extend(k: int, chosen: list[int]) -> bool:
        img = _extend_hom(G, H, gens[:k], chosen)
        if img is None:
            return False
        if k == len(gens):
            return True
        for c in candidates[k]:
            chosen.append(c)
            if extend(k + 1, chosen):
                return True
            chosen.pop()
        return False

    return extend(0, [])


def subgroup_as_group(G: FiniteGroup, H: SubgroupSet) -> FiniteGroup:
    """The subgroup H as a standalone group, elements reindexed ascending."""
    elems = H.elements()
    pos = {x: i for i, x in enumerate(elems)}
    rows = tuple(tuple(pos[G.op[a][b]] for b in elems) for a in elems)
    labels = tuple(G.label(x) for x in elems) if G.labels is not None else None
    return build_from_table(rows, labels=labels, trusted=True)
