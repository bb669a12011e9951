"""Finite permutation groups, their subgroup lattices and small quotients.

Elements of a :class:`PermGroup` are permutations of ``{0..degree-1}`` in
one-line image notation, stored in lexicographic order so the identity is
always element ``0``.  Products compose right to left:
``(g * h)(i) = g[h[i]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

DEFAULT_ORDER_CAP = 4000
DEFAULT_SUBGROUP_CAP = 10000


class GroupError(ValueError):
    """Invalid group input (bad permutation, non-normal subgroup, ...)."""


class BudgetExceeded(RuntimeError):
    """A desk-scale guard (order cap, subgroup cap, tensor budget) tripped."""


Perm = tuple[int, ...]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def p_part(n: int, p: int) -> int:
    q = 1
    while n % p == 0:
        n //= p
        q *= p
    return q


def _check_perm(perm: Sequence[int], degree: int) -> Perm:
    perm = tuple(int(x) for x in perm)
    if len(perm) != degree or sorted(perm) != list(range(degree)):
        raise GroupError(f"not a permutation of 0..{degree - 1}: {perm}")
    return perm


class PermGroup:
    """A finite group given by permutation generators, fully enumerated."""

    def __init__(self, degree: int, generators: Iterable[Sequence[int]],
                 order_cap: int = DEFAULT_ORDER_CAP):
        if degree < 1:
            raise GroupError("degree must be positive")
        self.degree = degree
        self.generators: tuple[Perm, ...] = tuple(_check_perm(g, degree) for g in generators)
        ident = tuple(range(degree))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for x in frontier:
                for s in self.generators:
                    y = tuple(s[i] for i in x)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
                        if len(seen) > order_cap:
                            raise BudgetExceeded(f"group order exceeds cap {order_cap}")
            frontier = nxt
        self.elements: tuple[Perm, ...] = tuple(sorted(seen))
        self.index: dict[Perm, int] = {g: i for i, g in enumerate(self.elements)}
        self.order = len(self.elements)
        self.generator_indices = tuple(self.index[g] for g in self.generators)

    def __repr__(self) -> str:
        return f"PermGroup(degree={self.degree}, order={self.order})"

    @cached_property
    def array(self) -> np.ndarray:
        return np.array(self.elements, dtype=np.int64).reshape(self.order, self.degree)

    @cached_property
    def table(self) -> list[list[int]]:
        """Cayley table: ``table[i][j]`` is the index of ``g_i * g_j``."""
        arr = self.array
        idx = self.index
        out = []
        for i in range(self.order):
            comp = arr[i][arr]
            out.append([idx[tuple(r)] for r in comp.tolist()])
        return out

    @cached_property
    def inverse(self) -> list[int]:
        t = self.table
        return [row.index(0) for row in t]

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def conj(self, g: int, h: int) -> int:
        """Index of ``g h g^-1``."""
        t = self.table
        return t[t[g][h]][self.inverse[g]]

    def element_order(self, i: int) -> int:
        t = self.table
        k, x = 1, i
        while x != 0:
            x = t[x][i]
            k += 1
        return k

    def closure(self, gens: Iterable[int]) -> int:
        """Bitmask of the subgroup generated by element indices ``gens``."""
        gens = [g for g in gens if g != 0]
        t = self.table
        seen = 1
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                row = t[x]
                for s in gens:
                    y = row[s]
                    if not (seen >> y) & 1:
                        seen |= 1 << y
                        nxt.append(y)
            frontier = nxt
        return seen

    @cached_property
    def lattice(self) -> "SubgroupLattice":
        return subgroup_lattice(self)

    @property
    def is_abelian(self) -> bool:
        t = self.table
        return all(t[a][b] == t[b][a] for a in self.generator_indices for b in self.generator_indices)


def enumerate_group(degree: int, generators: Iterable[Sequence[int]],
                    order_cap: int = DEFAULT_ORDER_CAP) -> PermGroup:
    return PermGroup(degree, generators, order_cap=order_cap)


def mask_members(mask: int) -> tuple[int, ...]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a parent :class:`PermGroup`, held as a bitmask of element indices."""

    mask: int
    gens: tuple[int, ...] = field(default=(), compare=False)

    @cached_property
    def members(self) -> tuple[int, ...]:
        return mask_members(self.mask)

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    def __contains__(self, i: int) -> bool:
        return bool((self.mask >> i) & 1)

    def issubset(self, other: "Subgroup") -> bool:
        return self.mask & ~other.mask == 0


def conjugate_mask(g: PermGroup, x: int, mask: int) -> int:
    """Mask of ``x H x^-1`` for ``H`` given by ``mask``."""
    out = 0
    for h in mask_members(mask):
        out |= 1 << g.conj(x, h)
    return out


def normalizer_mask(g: PermGroup, mask: int) -> int:
    out = 0
    for x in range(g.order):
        if conjugate_mask(g, x, mask) == mask:
            out |= 1 << x
    return out


def is_normal(g: PermGroup, n: Subgroup, h: Subgroup | None = None) -> bool:
    """Whether ``n`` is normalized by every element of ``h`` (default: all of ``g``)."""
    xs = h.members if h is not None else range(g.order)
    if h is not None and not n.issubset(h):
        return False
    return all(conjugate_mask(g, x, n.mask) == n.mask for x in xs)


class SubgroupLattice:
    """All subgroups of a group with conjugacy classes and subconjugacy.

    Subgroups and classes are sorted by ascending order, ties broken by
    discovery index; every class is represented by its first member.
    """

    def __init__(self, group: PermGroup, subgroups: list[Subgroup]):
        self.group = group
        self.subgroups = subgroups
        self.index_of_mask = {s.mask: i for i, s in enumerate(subgroups)}
        n = len(subgroups)
        class_of = [-1] * n
        classes: list[list[int]] = []
        conj_masks: list[set[int]] = []
        for i, s in enumerate(subgroups):
            if class_of[i] >= 0:
                continue
            conjs = {conjugate_mask(group, x, s.mask) for x in range(group.order)}
            members = sorted(self.index_of_mask[m] for m in conjs)
            for j in members:
                class_of[j] = len(classes)
            classes.append(members)
            conj_masks.append(conjs)
        self.classes = classes
        self.class_of = class_of
        self._conj_masks = conj_masks
        self.reps = [c[0] for c in classes]

    def __len__(self) -> int:
        return len(self.subgroups)

    @property
    def num_classes(self) -> int:
        return len(self.classes)

    def rep(self, c: int) -> Subgroup:
        return self.subgroups[self.reps[c]]

    def class_order(self, c: int) -> int:
        return self.rep(c).order

    def class_of_mask(self, mask: int) -> int:
        return self.class_of[self.index_of_mask[mask]]

    def subgroup_of_mask(self, mask: int) -> Subgroup:
        return self.subgroups[self.index_of_mask[mask]]

    def includes(self, i: int, j: int) -> bool:
        """Inclusion relation on subgroup indices: ``subgroups[i] <= subgroups[j]``."""
        return self.subgroups[i].issubset(self.subgroups[j])

    @cached_property
    def normalizers(self) -> list[Subgroup]:
        out = []
        for s in self.subgroups:
            m = normalizer_mask(self.group, s.mask)
            out.append(Subgroup(m, gens=_small_generating_set(self.group, m)))
        return out

    def normalizer(self, i: int) -> Subgroup:
        return self.normalizers[i]

    @cached_property
    def subconjugacy(self) -> list[list[bool]]:
        """``subconjugacy[a][b]`` iff class ``a`` is subconjugate to class ``b``."""
        c = self.num_classes
        out = [[False] * c for _ in range(c)]
        for b in range(c):
            qmask = self.rep(b).mask
            for a in range(c):
                if self.class_order(b) % self.class_order(a):
                    continue
                out[a][b] = any(m & ~qmask == 0 for m in self._conj_masks[a])
        return out

    def conjugates(self, c: int) -> set[int]:
        """Masks of all subgroups in class ``c``."""
        return self._conj_masks[c]

    def p_subposet(self, p: int) -> "PSubposet":
        return p_subposet(self, p)

    def subgroups_between(self, lo: Subgroup, hi: Subgroup) -> list[int]:
        """Indices of subgroups ``Y`` with ``lo < Y < hi`` (strict)."""
        return [i for i, s in enumerate(self.subgroups)
                if s.mask != lo.mask and s.mask != hi.mask
                and lo.issubset(s) and s.issubset(hi)]


def _small_generating_set(g: PermGroup, mask: int) -> tuple[int, ...]:
    gens: list[int] = []
    cur = 1
    for x in mask_members(mask):
        if not (cur >> x) & 1:
            gens.append(x)
            cur = g.closure(gens)
            if cur == mask:
                break
    return tuple(gens)


def subgroup_lattice(g: PermGroup, subgroup_cap: int = DEFAULT_SUBGROUP_CAP) -> SubgroupLattice:
    """Enumerate every subgroup of ``g`` by join closure over cyclic subgroups."""
    found: dict[int, int] = {}
    subs: list[Subgroup] = []

    def add(mask: int, gens: tuple[int, ...]) -> None:
        if mask not in found:
            found[mask] = len(subs)
            subs.append(Subgroup(mask, gens))
            if len(subs) > subgroup_cap:
                raise BudgetExceeded(f"subgroup count exceeds cap {subgroup_cap}")

    add(1, ())
    cyclic: list[tuple[int, int]] = []
    for x in range(1, g.order):
        m = g.closure([x])
        if m not in found:
            cyclic.append((m, x))
        add(m, (x,))
    i = 0
    while i < len(subs):
        h = subs[i]
        for cmask, x in cyclic:
            if cmask & ~h.mask:
                gens = h.gens + (x,)
                add(g.closure(gens), gens)
        i += 1
    order = sorted(range(len(subs)), key=lambda k: (subs[k].order, k))
    return SubgroupLattice(g, [subs[k] for k in order])


@dataclass
class PSubposet:
    """Conjugacy classes of p-subgroups in canonical order, with subconjugacy."""

    lattice: SubgroupLattice
    p: int
    classes: list[int]

    def __len__(self) -> int:
        return len(self.classes)

    @property
    def group(self) -> PermGroup:
        return self.lattice.group

    @cached_property
    def position(self) -> dict[int, int]:
        return {c: i for i, c in enumerate(self.classes)}

    def rep(self, i: int) -> Subgroup:
        return self.lattice.rep(self.classes[i])

    @property
    def orders(self) -> list[int]:
        return [self.rep(i).order for i in range(len(self))]

    @cached_property
    def subconj(self) -> list[list[bool]]:
        sc = self.lattice.subconjugacy
        return [[sc[a][b] for b in self.classes] for a in self.classes]

    @cached_property
    def sylow(self) -> list[int]:
        top = p_part(self.group.order, self.p)
        return [i for i, o in enumerate(self.orders) if o == top]

    def index_of_mask(self, mask: int) -> int:
        """Position of the class of the p-subgroup ``mask``."""
        return self.position[self.lattice.class_of_mask(mask)]

    def legend(self) -> list[dict]:
        g = self.group
        out = []
        for i in range(len(self)):
            r = self.rep(i)
            cls = self.lattice.classes[self.classes[i]]
            out.append({
                "index": i,
                "order": r.order,
                "class_size": len(cls),
                "generators": [list(g.elements[x]) for x in r.gens],
            })
        return out


def p_subposet(lat: SubgroupLattice, p: int) -> PSubposet:
    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    cache = lat.__dict__.setdefault("_p_subposets", {})
    if p not in cache:
        cls = [c for c in range(lat.num_classes) if is_power_of(lat.class_order(c), p)]
        cache[p] = PSubposet(lat, p, cls)
    return cache[p]


class QuotientGroup:
    """The section ``h / n`` for ``n`` normal in ``h``, both subgroups of ``parent``."""

    def __init__(self, parent: PermGroup, h: Subgroup, n: Subgroup):
        if not n.issubset(h):
            raise GroupError("n is not contained in h")
        if not is_normal(parent, n, h):
            raise GroupError("n is not normal in h")
        self.parent = parent
        self.h = h
        self.n = n
        t = parent.table
        coset_of: dict[int, int] = {}
        cosets: list[tuple[int, ...]] = []
        for x in h.members:
            if x in coset_of:
                continue
            c = tuple(sorted(t[x][m] for m in n.members))
            for y in c:
                coset_of[y] = len(cosets)
            cosets.append(c)
        self.cosets = cosets
        self.coset_of = coset_of
        self.reps = [c[0] for c in cosets]
        self.order = len(cosets)
        self.table = [[coset_of[t[a][b]] for b in self.reps] for a in self.reps]

    def product(self, a: int, b: int, ra: int | None = None, rb: int | None = None) -> int:
        """Coset product computed from chosen representatives (default: canonical)."""
        ra = self.reps[a] if ra is None else ra
        rb = self.reps[b] if rb is None else rb
        return self.coset_of[self.parent.table[ra][rb]]

    def coset_mask(self, parent_mask: int) -> int:
        """Image of a subgroup of ``h`` as a mask of coset indices."""
        out = 0
        for x in mask_members(parent_mask):
            out |= 1 << self.coset_of[x]
        return out

    def preimage_mask(self, coset_mask: int) -> int:
        out = 0
        for c in mask_members(coset_mask):
            for x in self.cosets[c]:
                out |= 1 << x
        return out

    @cached_property
    def perm_group(self) -> PermGroup:
        """The quotient as a permutation group via left multiplication on cosets."""
        perms = [tuple(row) for row in self.table]
        gens = [perms[self.coset_of[s]] for s in _small_generating_set(self.parent, self.h.mask)]
        return PermGroup(self.order, gens, order_cap=max(self.order, 1))

    @cached_property
    def to_perm_index(self) -> list[int]:
        """Coset index -> element index in :attr:`perm_group`."""
        pg = self.perm_group
        return [pg.index[tuple(row)] for row in self.table]

    @cached_property
    def from_perm_index(self) -> list[int]:
        out = [0] * self.order
        for c, e in enumerate(self.to_perm_index):
            out[e] = c
        return out


def quotient(parent: PermGroup, h: Subgroup, n: Subgroup) -> QuotientGroup:
    return QuotientGroup(parent, h, n)


def _table_element_orders(table: list[list[int]]) -> list[int]:
    out = []
    for i in range(len(table)):
        k, x = 1, i
        while x != 0:
            x = table[x][i]
            k += 1
        out.append(k)
    return out


def iso_type_small(q) -> tuple:
    """Recognize cyclic, rank-2 elementary abelian and quaternion-8 groups.

    ``q`` is anything carrying a Cayley ``table`` with identity at index 0.
    Returns ``("cyclic", n)``, ``("elementary_abelian", p, 2)``,
    ``("quaternion8",)`` or ``("other",)``.
    """
    table = q.table
    n = len(table)
    orders = _table_element_orders(table)
    if max(orders) == n:
        return ("cyclic", n)
    abelian = all(table[a][b] == table[b][a] for a in range(n) for b in range(a))
    ps = prime_factors(n)
    if abelian and len(ps) == 1 and n == ps[0] ** 2 and all(o in (1, ps[0]) for o in orders):
        return ("elementary_abelian", ps[0], 2)
    if n == 8 and not abelian and orders.count(2) == 1:
        return ("quaternion8",)
    return ("other",)


def derived_subgroup(g: PermGroup) -> Subgroup:
    t, inv = g.table, g.inverse
    comms = {t[t[a][b]][t[inv[a]][inv[b]]] for a in range(g.order) for b in range(g.order)}
    return Subgroup(g.closure(comms))


def _abelian_primary_exponents(table: list[list[int]]) -> dict[int, list[int]]:
    """Exponents of the cyclic primary factors of an abelian group, per prime."""
    n = len(table)
    orders = _table_element_orders(table)
    out: dict[int, list[int]] = {}
    for ell in prime_factors(n):
        counts = [1]
        k = 1
        while counts[-1] < p_part(n, ell):
            counts.append(sum(1 for o in orders if (ell ** k) % o == 0))
            k += 1
        # number of cyclic factors of exponent >= k is log_ell(c_k / c_{k-1})
        at_least = [round(math.log(counts[k] // counts[k - 1], ell)) for k in range(1, len(counts))]
        exps = []
        for k, cnt in enumerate(at_least, start=1):
            nxt = at_least[k] if k < len(at_least) else 0
            exps += [k] * (cnt - nxt)
        out[ell] = sorted(exps, reverse=True)
    return out


def hom_to_units_order(g: PermGroup, p: int):
    """Invariant factors of the p'-part of the abelianization of ``g``.

    With k large enough of characteristic p this is ``Hom(G, k^x)``.
    """
    from .linalg import AbelianInvariants

    if not is_prime(p):
        raise GroupError(f"{p} is not prime")
    d = derived_subgroup(g)
    full = Subgroup((1 << g.order) - 1)
    ab = QuotientGroup(g, full, d)
    primary = _abelian_primary_exponents(ab.table)
    factors: list[int] = []
    width = max((len(v) for ell, v in primary.items() if ell != p), default=0)
    for j in range(width):
        d_j = 1
        for ell, exps in primary.items():
            if ell != p and j < len(exps):
                d_j *= ell ** exps[j]
        factors.append(d_j)
    return AbelianInvariants(tuple(sorted(factors)), 0)


def subgroup_as_group(g: PermGroup, h: Subgroup) -> tuple[PermGroup, list[int]]:
    """``h`` as a standalone group, plus its element index -> parent index map."""
    gens = h.gens or _small_generating_set(g, h.mask)
    sub = PermGroup(g.degree, [g.elements[x] for x in gens], order_cap=max(h.order, 1))
    embed = [g.index[e] for e in sub.elements]
    return sub, embed


def find_subgroup(g: PermGroup, perms: Iterable[Sequence[int]]) -> Subgroup:
    """Subgroup of ``g`` generated by the given permutations (which must lie in ``g``)."""
    idx = []
    for pm in perms:
        pm = tuple(pm)
        if pm not in g.index:
            raise GroupError(f"{pm} is not an element of the group")
        idx.append(g.index[pm])
    mask = g.closure(idx)
    return g.lattice.subgroup_of_mask(mask)


def parse_group_text(text: str) -> PermGroup:
    """Parse the text group format: degree line, then one generator per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise GroupError("empty group file")
    try:
        degree = int(lines[0])
        gens = [[int(x) for x in ln.split()] for ln in lines[1:]]
    except ValueError as exc:
        raise GroupError(f"malformed group file: {exc}") from None
    return PermGroup(degree, gens)


def read_group_file(path) -> PermGroup:
    with open(path) as fh:
        return parse_group_text(fh.read())


def format_group_text(g: PermGroup) -> str:
    lines = [str(g.degree)] + [" ".join(map(str, s)) for s in g.generators]
    return "\n".join(lines) + "\n"
