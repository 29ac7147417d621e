"""Stabilizer of the degenerate alternating pairing over F_2 and its
subgroup census.

The glued surface's polarization pairing reduces mod 2 to a nonzero
alternating form with a 2-dimensional radical.  This module filters
GL4(F_2) for the elements preserving that form, verifies the stabilizer's
structure (a solvable group of order 576, an extension of S_3 x S_3 by an
elementary-abelian kernel of order 16, split), enumerates its 128 subgroup
conjugacy classes by cyclic extension, and classifies every class against
its contragredient h -> (h^-1)^T.  Over F_2 the similitude scaling and the
character twist are both trivial, so "up to scaling" means plain
preservation and the twisted contragredient is the inverse-transpose.

Group elements are packed 16-bit integers throughout (bit 4i+j holds entry
(i, j)), matching the GL4(F_2) machinery in groupengine.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, replace
from typing import Optional

from galdual.exactmat import ModMatrix
from galdual.groupengine import (
    _f2_closure,
    _f2_small_generating_set,
    _nullspace_mod,
    _rank_mod,
    ClosureCapError,
    f2_inv,
    f2_mul,
    f2_pack,
    f2_transpose,
    f2_unpack,
    gl4_elements,
    matrix_subgroups_conjugate,
    representations_equivalent,
)
from galdual.paramgroups import glued_polarization, product_principal_polarization

_IDENT = 0x8421  # packed identity: bits 0, 5, 10, 15


@dataclass(frozen=True)
class AlternatingForm:
    """An alternating bilinear form on F_2^4.

    Over F_2 alternating means zero diagonal and symmetric.  ``rank`` is
    stored explicitly and revalidated against the matrix.
    """

    matrix: ModMatrix
    rank: int

    def __post_init__(self):
        m = self.matrix
        if m.modulus != 2 or m.n != 4:
            raise ValueError("form must be a 4x4 matrix over F_2")
        e = m.entries
        if any(e[i][i] for i in range(4)):
            raise ValueError("alternating form needs a zero diagonal")
        if m != m.transpose():
            raise ValueError("alternating form over F_2 must be symmetric")
        actual = _rank_mod([list(r) for r in e], 4, 2)
        if actual != self.rank:
            raise ValueError(f"rank mismatch: stated {self.rank}, actual {actual}")
        if self.rank % 2:
            raise ValueError("alternating forms have even rank")

    @staticmethod
    def from_matrix(m: ModMatrix) -> "AlternatingForm":
        return AlternatingForm(m, _rank_mod([list(r) for r in m.entries], 4, 2))

    def packed(self) -> int:
        return f2_pack(self.matrix)

    def radical_basis(self) -> tuple:
        """Echelonized basis of {v : J(v, .) = 0}."""
        return tuple(_nullspace_mod([list(r) for r in self.matrix.entries], 4, 2))


@functools.cache
def glued_pairing_mod2() -> AlternatingForm:
    """The polarization pairing of the glued surface, reduced mod 2."""
    n_pol, _ = glued_polarization(2)
    return AlternatingForm.from_matrix(n_pol.reduce_mod(1))


@functools.cache
def principal_pairing_mod2() -> AlternatingForm:
    """The nondegenerate product pairing mod 2 (symplectic cross-check)."""
    return AlternatingForm.from_matrix(product_principal_polarization(2).reduce_mod(1))


def zero_form() -> AlternatingForm:
    return AlternatingForm.from_matrix(
        ModMatrix.from_rows([[0] * 4 for _ in range(4)], 2)
    )


def alternating_forms() -> tuple:
    """All 64 alternating forms on F_2^4 (six free entries above the diagonal)."""
    out = []
    positions = [(i, j) for i in range(4) for j in range(i + 1, 4)]
    for bits in itertools.product((0, 1), repeat=6):
        rows = [[0] * 4 for _ in range(4)]
        for (i, j), b in zip(positions, bits):
            rows[i][j] = rows[j][i] = b
        out.append(AlternatingForm.from_matrix(ModMatrix.from_rows(rows, 2)))
    return tuple(out)


def form_orbit(j: AlternatingForm) -> frozenset:
    """Packed congruence orbit {g^T J g : g in GL4(F_2)}."""
    jp = j.packed()
    return frozenset(
        f2_mul(f2_mul(f2_transpose(g), jp), g) for g in gl4_elements()
    )


def similitude_stabilizer(j: AlternatingForm) -> frozenset:
    """All of GL4(F_2) preserving the form up to scaling, as packed ints.

    The only scalar over F_2 is 1, so the condition is g^T J g = J,
    checked exhaustively over the 20160 invertible matrices.
    """
    jp = j.packed()
    return frozenset(
        g
        for g in gl4_elements()
        if f2_mul(f2_mul(f2_transpose(g), jp), g) == jp
    )


@functools.cache
def glued_form_stabilizer() -> frozenset:
    return similitude_stabilizer(glued_pairing_mod2())


# -- structure of the stabilizer ------------------------------------------------


def _element_order(x: int) -> int:
    n, y = 1, x
    while y != _IDENT:
        y = f2_mul(y, x)
        n += 1
    return n


def _lcm(a: int, b: int) -> int:
    from math import gcd

    return a * b // gcd(a, b)


def _derived_subgroup(elements: frozenset) -> frozenset:
    """Commutator subgroup: normal closure of generator-pair commutators."""
    gens = _f2_small_generating_set(elements)
    if not gens:
        return frozenset({_IDENT})
    inv = {g: f2_inv(g) for g in gens}
    seed = {
        f2_mul(f2_mul(inv[g], inv[h]), f2_mul(g, h))
        for g in gens
        for h in gens
    }
    # close the seed under conjugation by the generators: the subgroup it
    # then generates is invariant under all of G, hence the normal closure
    conj = set(seed)
    frontier = list(seed)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = f2_mul(f2_mul(g, x), inv[g])
                if y not in conj:
                    conj.add(y)
                    nxt.append(y)
        frontier = nxt
    return _f2_closure(conj, cap=len(elements))


@dataclass(frozen=True)
class SplitExtension:
    """Witness that G is kernel x| complement over the form's radical action.

    ``kernel`` is the normal elementary-abelian subgroup acting trivially on
    both the radical and the quotient space; ``complement`` meets it only in
    the identity and maps isomorphically onto the image in
    GL(radical) x GL(quotient); ``projection_orders`` are the sizes of the
    image's two projections.
    """

    kernel: frozenset
    complement: frozenset
    projection_orders: tuple


@dataclass(frozen=True)
class StructureInvariants:
    order: int
    exponent: int
    solvable: bool
    derived_series: tuple
    split_extension: Optional[SplitExtension] = None


def _pack2(rows) -> int:
    return rows[0][0] | rows[0][1] << 1 | rows[1][0] << 2 | rows[1][1] << 3


def _perm3_of_2x2(m4: int) -> tuple:
    """Action of a packed 2x2 matrix on the three nonzero vectors of F_2^2."""
    out = []
    for v in (1, 2, 3):
        v0, v1 = v & 1, v >> 1
        w0 = ((m4 & 1) & v0) ^ (((m4 >> 1) & 1) & v1)
        w1 = (((m4 >> 2) & 1) & v0) ^ (((m4 >> 3) & 1) & v1)
        out.append(w0 | w1 << 1)
    return tuple(out)


def _mul_pairs(p, q):
    return (_mul2(p[0], q[0]), _mul2(p[1], q[1]))


def _mul2(a: int, b: int) -> int:
    out = 0
    for i in (0, 2):
        ra = (a >> i) & 3
        acc = 0
        if ra & 1:
            acc = b & 3
        if ra & 2:
            acc ^= (b >> 2) & 3
        out |= acc << i
    return out


def radical_split_extension(elements: frozenset, form: AlternatingForm) -> SplitExtension:
    """Verify the kernel/quotient structure of a form stabilizer.

    Every element preserves the form's radical R, so it acts on R and on
    V/R; the kernel of the combined action is checked to be elementary
    abelian of order 16, the image to be the full S_3 x S_3 (each factor
    acting as the symmetric group on the three nonzero vectors of its
    plane), and a complement is found by lifting a generating pair of the
    image.  Raises ValueError when any structural claim fails.
    """
    radical = form.radical_basis()
    if len(radical) != 2:
        raise ValueError("form radical is not 2-dimensional")
    basis = [list(v) for v in radical]
    for cand in ((1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)):
        if len(basis) == 4:
            break
        if _rank_mod(basis + [list(cand)], 4, 2) > len(basis):
            basis.append(list(cand))
    p = ModMatrix.from_rows(
        [[basis[j][i] for j in range(4)] for i in range(4)], 2
    )
    p_inv = p.inv()

    action = {}
    for g in elements:
        gp = p_inv.mul(f2_unpack(g)).mul(p).entries
        if any(gp[i][j] for i in (2, 3) for j in (0, 1)):
            raise ValueError("an element does not preserve the form radical")
        a = _pack2([[gp[0][0], gp[0][1]], [gp[1][0], gp[1][1]]])
        d = _pack2([[gp[2][2], gp[2][3]], [gp[3][2], gp[3][3]]])
        action[g] = (a, d)

    ident2 = _pack2([[1, 0], [0, 1]])
    kernel = frozenset(g for g, ad in action.items() if ad == (ident2, ident2))
    if len(kernel) != 16:
        raise ValueError(f"action kernel has order {len(kernel)}, not 16")
    for x in kernel:
        if f2_mul(x, x) != _IDENT:
            raise ValueError("action kernel is not of exponent 2")
        for y in kernel:
            if f2_mul(x, y) not in kernel:
                raise ValueError("action kernel is not closed under products")
    gens = _f2_small_generating_set(elements)
    for g in gens:
        gi = f2_inv(g)
        for x in kernel:
            if f2_mul(f2_mul(g, x), gi) not in kernel:
                raise ValueError("action kernel is not normal")

    image = {}
    for g, ad in action.items():
        image.setdefault(ad, []).append(g)
    if len(image) != 36:
        raise ValueError(f"action image has order {len(image)}, not 36")
    for pick in (0, 1):
        proj = {ad[pick] for ad in image}
        perms = {_perm3_of_2x2(m) for m in proj}
        if len(proj) != 6 or len(perms) != 6:
            raise ValueError("a projection is not the full symmetric group S_3")

    pair = _generating_pair(set(image))
    if pair is None:
        raise ValueError("action image is not 2-generated")
    s, t = pair
    for x, y in itertools.product(sorted(image[s]), sorted(image[t])):
        try:
            h = _f2_closure([x, y], cap=36)
        except ClosureCapError:
            continue
        if len(h) == 36 and len(h & kernel) == 1:
            return SplitExtension(kernel, h, (6, 6))
    raise ValueError("no complement to the action kernel was found")


def _generating_pair(image: set):
    ident = (_pack2([[1, 0], [0, 1]]),) * 2
    ordered = sorted(image)
    for s, t in itertools.combinations(ordered, 2):
        elems = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                for g in (s, t):
                    c = _mul_pairs(m, g)
                    if c not in elems:
                        elems.add(c)
                        nxt.append(c)
            frontier = nxt
        if len(elems) == len(image):
            return (s, t)
    return None


def structure_invariants(
    elements: frozenset, form: Optional[AlternatingForm] = None
) -> StructureInvariants:
    """Order, exponent, solvability, derived series; optionally the
    kernel/complement decomposition with respect to a form's radical."""
    elements = frozenset(
        x if isinstance(x, int) else f2_pack(x) for x in elements
    )
    if len(elements) > 10_000:
        raise ValueError("group order over budget for structure invariants")
    exponent = 1
    for x in elements:
        exponent = _lcm(exponent, _element_order(x))
    series = [len(elements)]
    cur = elements
    while True:
        nxt = _derived_subgroup(cur)
        if len(nxt) == len(cur):
            break
        series.append(len(nxt))
        cur = nxt
        if len(cur) == 1:
            break
    split = radical_split_extension(elements, form) if form is not None else None
    return StructureInvariants(
        order=len(elements),
        exponent=exponent,
        solvable=len(cur) == 1,
        derived_series=tuple(series),
        split_extension=split,
    )


# -- subgroup conjugacy classes -----------------------------------------------


@dataclass(frozen=True)
class SubgroupClassRecord:
    """One conjugacy class of subgroups, with its census verdicts.

    ``representative`` is a frozenset of packed elements; ``class_size`` is
    the number of distinct conjugates (the normalizer's index).  The two
    booleans stay None until contragredient_census fills them.
    """

    representative: frozenset
    order: int
    class_size: int
    self_dual_as_rep: Optional[bool] = None
    image_conjugate_to_dual: Optional[bool] = None


def _is_prime(m: int) -> bool:
    return m > 1 and all(m % d for d in range(2, int(m**0.5) + 1))


def subgroup_conjugacy_classes(elements: frozenset) -> list:
    """One representative per conjugacy class of subgroups, by cyclic extension.

    Every subgroup of a solvable group tops a chain with prime cyclic
    quotients, so repeatedly extending each known class representative H by
    coset generators x of prime order in N(H)/H reaches every class.  New
    subgroups are deduplicated by registering their whole conjugation orbit.
    """
    elems = sorted(
        x if isinstance(x, int) else f2_pack(x) for x in elements
    )
    n = len(elems)
    if n > 1200:
        raise ValueError("group order over budget for subgroup enumeration")
    index = {g: i for i, g in enumerate(elems)}
    if _IDENT not in index:
        raise ValueError("element set does not contain the identity")
    mul = [
        [index[f2_mul(gi, gj)] for gj in elems]
        for gi in elems
    ]
    inv = [index[f2_inv(g)] for g in elems]
    e0 = index[_IDENT]

    registry: dict = {}
    classes: list = []  # (representative frozenset, class_size, normalizer list)

    def register(h: frozenset):
        orbit = set()
        normalizer = []
        for g in range(n):
            gi = inv[g]
            hg = frozenset(mul[mul[g][x]][gi] for x in h)
            orbit.add(hg)
            if hg == h:
                normalizer.append(g)
        for hg in orbit:
            registry[hg] = len(classes)
        if n % len(orbit):
            raise AssertionError("orbit size does not divide the group order")
        classes.append((h, len(orbit), normalizer))

    register(frozenset({e0}))
    queue = [0]
    while queue:
        h, _, normalizer = classes[queue.pop()]
        seen = set(h)
        for x in normalizer:
            if x in seen:
                continue
            # order of the coset xH in N(H)/H
            m, y = 1, x
            while y not in h:
                y = mul[y][x]
                m += 1
            coset = frozenset(mul[e][x] for e in h)
            seen |= coset
            if not _is_prime(m):
                continue
            ext = set(h)
            y = x
            for _ in range(m - 1):
                ext.update(mul[e][y] for e in h)
                y = mul[y][x]
            ext = frozenset(ext)
            if ext not in registry:
                queue.append(len(classes))
                register(ext)

    records = [
        SubgroupClassRecord(
            representative=frozenset(elems[i] for i in h),
            order=len(h),
            class_size=size,
        )
        for h, size, _ in classes
    ]
    records.sort(key=lambda r: (r.order, tuple(sorted(r.representative))))
    return records


# -- the contragredient census --------------------------------------------------


def contragredient_subgroup(h: frozenset) -> frozenset:
    """Image of a packed subgroup under h -> (h^-1)^T."""
    return frozenset(f2_transpose(f2_inv(x)) for x in h)


@dataclass(frozen=True)
class CensusResult:
    records: tuple
    not_rep_equivalent: int
    not_subgroup_conjugate: int


def contragredient_census(classes, j: AlternatingForm) -> CensusResult:
    """Classify every subgroup class against its contragredient.

    For each class H: (i) is the inclusion representation H -> GL4(F_2)
    equivalent to h -> (h^-1)^T?  Decided by an exhaustive walk of the
    intertwiner span (always complete over F_2).  (ii) Is the image of the
    contragredient at least a conjugate subgroup inside GL4(F_2)?  The form
    fixes the twist character, which is trivial over F_2.
    """
    filled = []
    not_equiv = 0
    not_conj = 0
    for rec in classes:
        h = rec.representative
        dual = contragredient_subgroup(h)
        gens = _f2_small_generating_set(h) or [_IDENT]
        pairs = [
            (f2_unpack(g), f2_unpack(f2_transpose(f2_inv(g)))) for g in gens
        ]
        equivalent, witness = representations_equivalent(pairs)
        conjugate = matrix_subgroups_conjugate(h, dual)
        if equivalent and not conjugate:
            raise AssertionError(
                "a representation-equivalent class failed subgroup conjugacy"
            )
        if equivalent:
            x = f2_pack(witness)
            xi = f2_inv(x)
            if any(f2_mul(f2_mul(x, g), xi) not in dual for g in h):
                raise AssertionError("equivalence witness does not conjugate the subgroup")
        not_equiv += not equivalent
        not_conj += not conjugate
        filled.append(
            replace(
                rec,
                self_dual_as_rep=equivalent,
                image_conjugate_to_dual=conjugate,
            )
        )
    return CensusResult(tuple(filled), not_equiv, not_conj)


@functools.cache
def stabilizer_class_list() -> tuple:
    return tuple(subgroup_conjugacy_classes(glued_form_stabilizer()))


@functools.cache
def stabilizer_census() -> CensusResult:
    return contragredient_census(stabilizer_class_list(), glued_pairing_mod2())


# -- report format ---------------------------------------------------------------


def _dump_packed(g: int) -> str:
    from galdual.exactmat import format_matrix

    return format_matrix(f2_unpack(g))


def format_census(result: CensusResult) -> str:
    """One line per class plus its generators, stably ordered."""
    blocks = []
    for rec in result.records:
        gens = sorted(
            _dump_packed(g)
            for g in (_f2_small_generating_set(rec.representative) or [_IDENT])
        )
        head = (
            f"order={rec.order}"
            f" rep_equiv={str(rec.self_dual_as_rep).lower()}"
            f" subgrp_conj={str(rec.image_conjugate_to_dual).lower()}"
        )
        blocks.append(((rec.order, tuple(gens)), head, gens))
    blocks.sort(key=lambda b: b[0])
    lines = []
    for _, head, gens in blocks:
        lines.append(head)
        lines.extend(f"  gen {g}" for g in gens)
    return "\n".join(lines) + "\n"
