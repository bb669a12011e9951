"""Restriction, inflation, deflation and induction of superclass functions.

Functions live on p-subgroup classes (see :class:`~endotriv.groups.PSubposet`).
Subgroups and quotients are passed as standalone permutation groups together
with an explicit embedding or projection, so that class lookups on both sides
use the canonical orderings of their own lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .groups import (GroupError, PermGroup, QuotientGroup, Subgroup, is_power_of, mask_members,
                     subgroup_as_group)
from .superclass import SuperclassFn


@dataclass
class Embedding:
    """``H <= G`` with ``H`` realised as its own group; ``embed[i]`` is the G-index of H-element ``i``."""

    sub: PermGroup
    group: PermGroup
    embed: list[int]

    @classmethod
    def of(cls, group: PermGroup, h: Subgroup) -> "Embedding":
        sub, embed = subgroup_as_group(group, h)
        return cls(sub, group, list(embed))

    def image_mask(self, sub_mask: int) -> int:
        out = 0
        for x in mask_members(sub_mask):
            out |= 1 << self.embed[x]
        return out

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for i, x in enumerate(self.embed):
            if (mask >> x) & 1:
                out |= 1 << i
        return out


@dataclass
class Projection:
    """``G -> G/N`` with the quotient realised as a permutation group."""

    group: PermGroup
    normal: Subgroup
    quotient: QuotientGroup

    @classmethod
    def of(cls, group: PermGroup, n: Subgroup) -> "Projection":
        top = group.lattice.subgroups[-1]
        return cls(group, n, QuotientGroup(group, top, n))

    @property
    def target(self) -> PermGroup:
        return self.quotient.perm_group

    def image_mask(self, mask: int) -> int:
        """Mask (in the quotient group's element indexing) of ``LN/N``."""
        q = self.quotient
        out = 0
        for x in mask_members(mask):
            out |= 1 << q.to_perm_index[q.coset_of[x]]
        return out

    def preimage_mask(self, target_mask: int) -> int:
        q = self.quotient
        out = 0
        for e in mask_members(target_mask):
            for x in q.cosets[q.from_perm_index[e]]:
                out |= 1 << x
        return out


def _poset(g: PermGroup, p: int):
    return g.lattice.p_subposet(p)


def _values(f, n: int) -> list[int]:
    vals = list(f)
    if len(vals) != n:
        raise ValueError(f"expected {n} values, got {len(vals)}")
    return vals


def res(emb: Embedding, f: SuperclassFn | Sequence[int], p: int | None = None) -> SuperclassFn:
    """``(res f)(L) = f(L)`` with ``L`` viewed in ``G``."""
    p = p if p is not None else f.p
    src, dst = _poset(emb.group, p), _poset(emb.sub, p)
    vals = _values(f, len(src))
    out = [vals[src.index_of_mask(emb.image_mask(dst.rep(i).mask))] for i in range(len(dst))]
    return SuperclassFn(dst, tuple(out))


def inf(proj: Projection, f: SuperclassFn | Sequence[int], p: int | None = None) -> SuperclassFn:
    """``(inf f)(L) = f(LN/N)``."""
    p = p if p is not None else f.p
    src, dst = _poset(proj.target, p), _poset(proj.group, p)
    vals = _values(f, len(src))
    out = [vals[src.index_of_mask(proj.image_mask(dst.rep(i).mask))] for i in range(len(dst))]
    return SuperclassFn(dst, tuple(out))


def deflate(proj: Projection, f: SuperclassFn | Sequence[int], p: int | None = None) -> SuperclassFn:
    """``(def f)(L/N) = f(L)``; ``N`` must be a p-group."""
    p = p if p is not None else f.p
    if not is_power_of(proj.normal.order, p):
        raise GroupError("deflation is only defined here along a normal p-subgroup")
    src, dst = _poset(proj.group, p), _poset(proj.target, p)
    vals = _values(f, len(src))
    out = [vals[src.index_of_mask(proj.preimage_mask(dst.rep(i).mask))] for i in range(len(dst))]
    return SuperclassFn(dst, tuple(out))


def ind(emb: Embedding, f: SuperclassFn | Sequence[int], p: int | None = None) -> SuperclassFn:
    """``(ind f)(L) = sum over x in [L\\G/H] of f(H cap x^-1 L x)``."""
    p = p if p is not None else f.p
    group = emb.group
    src, dst = _poset(emb.sub, p), _poset(group, p)
    vals = _values(f, len(src))
    t, inv = group.table, group.inverse
    hmask = emb.image_mask((1 << emb.sub.order) - 1)
    hmembers = mask_members(hmask)
    out = []
    for i in range(len(dst)):
        lmembers = dst.rep(i).members
        seen = 0
        total = 0
        for x in range(group.order):
            if (seen >> x) & 1:
                continue
            for l in lmembers:
                lx = t[l][x]
                for h in hmembers:
                    seen |= 1 << t[lx][h]
            xi = inv[x]
            conj = 0
            for l in lmembers:
                conj |= 1 << t[t[xi][l]][x]
            inter = emb.preimage_mask(conj & hmask)
            total += vals[src.index_of_mask(inter)]
        out.append(total)
    return SuperclassFn(dst, tuple(out))
