"""Borel-Smith and oriented Artin conditions, their lattices and quotients.

A superclass function ``f`` on the p-subgroup classes is Borel-Smith when,
for every section ``T/S`` of p-subgroups,

* ``T/S ~ (Z/p)^2``:  ``f(S) - sum_{S<Y<T} f(Y) + p f(T) = 0``;
* ``T/S`` cyclic of order ``p`` (p odd) or of order 4:
  ``f(S) = f(S^) mod 2``;
* ``T/S ~ Q8``:  ``f(S) = f(S^) mod 4``,

where ``S^/S`` is the unique subgroup of prime order of ``T/S``.  The oriented
Artin condition adds ``f(L) = f(K) mod 2 q^(r-l)`` for chains
``L < K < H <= N_G(L)`` with ``K`` a cyclic p-group, ``K/L ~ Z/p`` and
``H/K ~ Z/q^r`` (``q != p``, ``r >= 1``) acting on ``K/L`` with kernel of
order ``q^l``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .groups import (GroupError, PermGroup, PSubposet, QuotientGroup, Subgroup, is_power_of,
                     iso_type_small, prime_factors)
from .linalg import AbelianInvariants, IntegerLattice, lattice_quotient, solve_congruence_lattice
from .superclass import SuperclassFn


@dataclass(frozen=True)
class Condition:
    """One linear condition ``row . f = 0`` (``modulus == 0``) or ``= 0 mod modulus``."""

    row: tuple[int, ...]
    modulus: int
    kind: str
    provenance: dict = field(compare=False, hash=False)

    @property
    def is_equality(self) -> bool:
        return self.modulus == 0

    def holds(self, f: Sequence[int]) -> bool:
        v = sum(a * b for a, b in zip(self.row, f))
        return v == 0 if self.modulus == 0 else v % self.modulus == 0

    def to_json(self) -> dict:
        return {"row": list(self.row), "modulus": self.modulus, "kind": self.kind,
                "provenance": self.provenance}


@dataclass
class ConditionSystem:
    poset: PSubposet
    conditions: list[Condition] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.conditions)

    def __iter__(self):
        return iter(self.conditions)

    @property
    def equalities(self) -> list[Condition]:
        return [c for c in self.conditions if c.is_equality]

    @property
    def congruences(self) -> list[Condition]:
        return [c for c in self.conditions if not c.is_equality]

    def add(self, cond: Condition) -> None:
        if any(c.row == cond.row and c.modulus == cond.modulus for c in self.conditions):
            return
        self.conditions.append(cond)

    def __add__(self, other: "ConditionSystem") -> "ConditionSystem":
        out = ConditionSystem(self.poset, list(self.conditions))
        for c in other:
            out.add(c)
        return out

    def lattice(self) -> IntegerLattice:
        n = len(self.poset)
        return solve_congruence_lattice(
            n,
            [c.row for c in self.equalities],
            [(c.row, c.modulus) for c in self.congruences],
        )

    def to_json(self) -> list[dict]:
        return [c.to_json() for c in self.conditions]


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    violations: tuple[int, ...]

    def __bool__(self) -> bool:
        return self.passed


def check(f: SuperclassFn | Sequence[int], system: ConditionSystem) -> CheckResult:
    values = list(f)
    if len(values) != len(system.poset):
        raise ValueError("function length does not match the p-subgroup classes")
    bad = tuple(i for i, c in enumerate(system.conditions) if not c.holds(values))
    return CheckResult(not bad, bad)


def _poset(g: PermGroup | PSubposet, p: int | None) -> PSubposet:
    if isinstance(g, PSubposet):
        return g
    if p is None:
        raise ValueError("prime p required")
    return g.lattice.p_subposet(p)


def _unit(n: int, i: int, c: int = 1) -> list[int]:
    v = [0] * n
    v[i] += c
    return v


def borel_smith_system(g: PermGroup | PSubposet, p: int | None = None) -> ConditionSystem:
    """All Borel-Smith conditions, one row per distinct condition."""
    poset = _poset(g, p)
    cache = poset.__dict__.setdefault("_systems", {})
    if "bs" in cache:
        return cache["bs"]
    p = poset.p
    lat = poset.lattice
    group = lat.group
    n = len(poset)
    psubs = [i for i, s in enumerate(lat.subgroups) if is_power_of(s.order, p)]
    system = ConditionSystem(poset)
    for ti in psubs:
        t = lat.subgroups[ti]
        for si in psubs:
            s = lat.subgroups[si]
            if s.mask == t.mask or not s.issubset(t):
                continue
            ratio = t.order // s.order
            if ratio not in (p, p * p, 4, 8):
                continue
            if not _normal_in(group, s, t):
                continue
            kind = iso_type_small(QuotientGroup(group, t, s))
            prov = {"T": poset.index_of_mask(t.mask), "S": poset.index_of_mask(s.mask),
                    "T_subgroup": ti, "S_subgroup": si}
            cs = poset.index_of_mask(s.mask)
            if kind == ("elementary_abelian", p, 2):
                row = _unit(n, cs)
                for yi in lat.subgroups_between(s, t):
                    row[poset.index_of_mask(lat.subgroups[yi].mask)] -= 1
                row[poset.index_of_mask(t.mask)] += p
                system.add(Condition(tuple(row), 0, "rank2", prov))
            elif kind[0] == "cyclic" and ((p % 2 and ratio == p) or ratio == 4):
                shat = _prime_order_over(lat, s, t, p)
                row = _unit(n, cs)
                row[poset.index_of_mask(shat.mask)] -= 1
                system.add(Condition(tuple(row), 2, "cyclic", prov))
            elif kind == ("quaternion8",):
                shat = _prime_order_over(lat, s, t, 2)
                row = _unit(n, cs)
                row[poset.index_of_mask(shat.mask)] -= 1
                system.add(Condition(tuple(row), 4, "quaternion", prov))
    cache["bs"] = system
    return system


def _normal_in(group: PermGroup, s: Subgroup, t: Subgroup) -> bool:
    return all(_conj_mask(group, x, s.mask) == s.mask for x in t.gens or t.members)


def _conj_mask(group: PermGroup, x: int, mask: int) -> int:
    from .groups import conjugate_mask
    return conjugate_mask(group, x, mask)


def _prime_order_over(lat, s: Subgroup, t: Subgroup, prime: int) -> Subgroup:
    """The unique ``Y`` with ``S < Y <= T`` and ``|Y/S| = prime``."""
    cands = [lat.subgroups[i] for i in lat.subgroups_between(s, t)] + [t]
    cands = [y for y in cands if y.order == s.order * prime]
    if len(cands) != 1:
        raise ArithmeticError("section has no unique subgroup of prime order")
    return cands[0]


def _is_cyclic(group: PermGroup, sub: Subgroup) -> int | None:
    """A generator of ``sub`` if it is cyclic, else ``None``."""
    for x in sub.members:
        if group.element_order(x) == sub.order:
            return x
    return None


def artin_system(g: PermGroup | PSubposet, p: int | None = None) -> ConditionSystem:
    """Oriented Artin congruences (the Borel-Smith rows are not included)."""
    poset = _poset(g, p)
    cache = poset.__dict__.setdefault("_systems", {})
    if "artin" in cache:
        return cache["artin"]
    p = poset.p
    lat = poset.lattice
    group = lat.group
    t = group.table
    inv = group.inverse
    system = ConditionSystem(poset)
    n = len(poset)
    for ki, k in enumerate(lat.subgroups):
        if k.order == 1 or not is_power_of(k.order, p):
            continue
        kgen = _is_cyclic(group, k)
        if kgen is None:
            continue
        lmask = next(s.mask for s in lat.subgroups if s.order * p == k.order and s.issubset(k))
        li = lat.index_of_mask[lmask]
        norm_l = lat.normalizer(li)
        for hi, h in enumerate(lat.subgroups):
            if not k.issubset(h) or not h.issubset(norm_l) or h.mask == k.mask:
                continue
            ratio = h.order // k.order
            qs = prime_factors(ratio)
            if len(qs) != 1 or qs[0] == p:
                continue
            q = qs[0]
            if not _normal_in(group, k, h):
                continue
            if iso_type_small(QuotientGroup(group, h, k))[0] != "cyclic":
                continue
            r = _log(ratio, q)
            # elements of H acting trivially on K/L: h kgen h^-1 in kgen L
            fix = 0
            for x in h.members:
                c = group.conj(x, kgen)
                if (lmask >> t[inv[kgen]][c]) & 1:
                    fix += 1
            l_exp = _log(fix // k.order, q)
            modulus = 2 * q ** (r - l_exp)
            row = _unit(n, poset.index_of_mask(lmask))
            row[poset.index_of_mask(k.mask)] -= 1
            prov = {"L": poset.index_of_mask(lmask), "K": poset.index_of_mask(k.mask),
                    "H_order": h.order, "H_subgroup": hi, "K_subgroup": ki, "L_subgroup": li,
                    "q": q, "r": r, "l": l_exp}
            system.add(Condition(tuple(row), modulus, "artin", prov))
    cache["artin"] = system
    return system


def _log(n: int, q: int) -> int:
    e = 0
    while n > 1:
        if n % q:
            raise ArithmeticError(f"{n} is not a power of {q}")
        n //= q
        e += 1
    return e


def cfb_lattice(g: PermGroup | PSubposet, p: int | None = None) -> IntegerLattice:
    """Borel-Smith functions as a sublattice of ``Z^{classes}``."""
    poset = _poset(g, p)
    cache = poset.__dict__.setdefault("_systems", {})
    if "cfb" not in cache:
        cache["cfb"] = borel_smith_system(poset).lattice()
    return cache["cfb"]


def cfba_lattice(g: PermGroup | PSubposet, p: int | None = None) -> IntegerLattice:
    """Oriented Artin-Borel-Smith functions as a sublattice of ``Z^{classes}``."""
    poset = _poset(g, p)
    cache = poset.__dict__.setdefault("_systems", {})
    if "cfba" not in cache:
        cache["cfba"] = (borel_smith_system(poset) + artin_system(poset)).lattice()
    return cache["cfba"]


def dade_omega_invariants(g: PermGroup | PSubposet, p: int | None = None) -> AbelianInvariants:
    """``CF(G,p) / CF_ba+(G,p)``, the relative-syzygy part of the Dade group."""
    poset = _poset(g, p)
    return lattice_quotient(len(poset), cfba_lattice(poset))


def classify_endotrivial_group(g: PermGroup | PSubposet, p: int | None = None) -> AbelianInvariants:
    """Invariants of the group of endotrivial complexes: ``Hom(G,k^x) + CF_b(G,p)``."""
    from .groups import hom_to_units_order

    poset = _poset(g, p)
    tors = hom_to_units_order(poset.group, poset.p)
    return AbelianInvariants(tors.torsion, cfb_lattice(poset).rank)


def real_dim_function_cyclic(g: PermGroup | PSubposet, rep, p: int | None = None) -> SuperclassFn:
    """Fixed-point dimensions of a real representation of a cyclic p-group.

    ``rep`` is ``"trivial"``, ``"sign"`` (p = 2 only) or an integer ``j`` for
    the rotation ``V_j`` where a generator turns the plane by ``2 pi j / n``.
    """
    poset = _poset(g, p)
    group = poset.group
    n = group.order
    if not is_power_of(n, poset.p) or not any(group.element_order(x) == n for x in range(n)):
        raise GroupError("real_dim_function_cyclic needs a cyclic p-group")
    orders = poset.orders
    if rep == "trivial":
        vals = [1] * len(orders)
    elif rep == "sign":
        if n % 2:
            raise GroupError("the sign representation needs even order")
        vals = [int((n // d) % 2 == 0) for d in orders]
    else:
        j = int(rep)
        if j % n == 0:
            raise GroupError("V_j needs j not divisible by the group order")
        vals = [2 * int(j % d == 0) for d in orders]
    return SuperclassFn(poset, tuple(vals))
