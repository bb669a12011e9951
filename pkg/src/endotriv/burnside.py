"""Burnside ring of a finite group via its table of marks.

Elements are integer vectors over the subgroup classes (same ordering as
:class:`~endotriv.groups.SubgroupLattice`); the coefficient at class ``H`` is
the multiplicity of ``[G/H]``.  For a p-group the subgroup classes and the
p-subgroup classes coincide, which is what the exponential map relies on.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .groups import GroupError, PermGroup, SubgroupLattice, is_power_of

UNIT_CLASS_CAP = 20


def _lattice(g: PermGroup | SubgroupLattice) -> SubgroupLattice:
    return g if isinstance(g, SubgroupLattice) else g.lattice


def table_of_marks(g: PermGroup | SubgroupLattice) -> list[list[int]]:
    """``M[K][H] = |(G/H)^K|``, counted directly on the coset spaces.

    Rows and columns follow the class order, so ``M`` is upper triangular.
    """
    lat = _lattice(g)
    cached = lat.__dict__.get("_table_of_marks")
    if cached is not None:
        return cached
    group = lat.group
    t = group.table
    n = lat.num_classes
    m = [[0] * n for _ in range(n)]
    for hc in range(n):
        h = lat.rep(hc)
        reps = []
        seen = 0
        for x in range(group.order):
            if (seen >> x) & 1:
                continue
            reps.append(x)
            for y in h.members:
                seen |= 1 << t[x][y]
        hmask = h.mask
        inv = group.inverse
        for kc in range(n):
            k = lat.rep(kc)
            kgens = k.gens or k.members
            count = 0
            for x in reps:
                # K fixes xH iff x^-1 K x <= H
                xi = inv[x]
                if all((hmask >> t[t[xi][s]][x]) & 1 for s in kgens):
                    count += 1
            m[kc][hc] = count
    lat.__dict__["_table_of_marks"] = m
    return m


def _solve_upper(m: list[list[int]], rhs: Sequence[int]) -> list[Fraction]:
    n = len(m)
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(rhs[i]) - sum(m[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / m[i][i]
    return x


@dataclass(frozen=True)
class BurnsideElement:
    lattice: SubgroupLattice
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))
        if len(self.coeffs) != self.lattice.num_classes:
            raise ValueError("one coefficient per subgroup class required")

    @classmethod
    def transitive(cls, lat: SubgroupLattice, c: int) -> "BurnsideElement":
        """``[G/H]`` for ``H`` in class ``c``."""
        return cls(lat, tuple(int(i == c) for i in range(lat.num_classes)))

    @classmethod
    def one(cls, lat: SubgroupLattice) -> "BurnsideElement":
        return cls.transitive(lat, lat.num_classes - 1)

    @classmethod
    def from_marks(cls, lat: SubgroupLattice, marks: Sequence[int]) -> "BurnsideElement":
        x = _solve_upper(table_of_marks(lat), marks)
        if any(v.denominator != 1 for v in x):
            raise ArithmeticError(f"mark vector {tuple(marks)} is not in the Burnside ring")
        return cls(lat, tuple(int(v) for v in x))

    @property
    def marks(self) -> tuple[int, ...]:
        m = table_of_marks(self.lattice)
        n = len(self.coeffs)
        return tuple(sum(m[k][h] * self.coeffs[h] for h in range(n)) for k in range(n))

    def __add__(self, other: "BurnsideElement") -> "BurnsideElement":
        return BurnsideElement(self.lattice, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "BurnsideElement":
        return BurnsideElement(self.lattice, tuple(-a for a in self.coeffs))

    def __sub__(self, other: "BurnsideElement") -> "BurnsideElement":
        return self + (-other)

    def __mul__(self, other: "BurnsideElement") -> "BurnsideElement":
        return multiply(self, other)

    def to_json(self) -> dict:
        return {"coefficients": list(self.coeffs), "marks": list(self.marks)}


def multiply(a: BurnsideElement, b: BurnsideElement) -> BurnsideElement:
    """Product through pointwise multiplication of marks; integrality is asserted."""
    if a.lattice is not b.lattice:
        raise ValueError("elements of different Burnside rings")
    return BurnsideElement.from_marks(a.lattice, [x * y for x, y in zip(a.marks, b.marks)])


def units(g: PermGroup | SubgroupLattice) -> list[BurnsideElement]:
    """All units: sign vectors of marks whose pullback is integral."""
    lat = _lattice(g)
    c = lat.num_classes
    if c > UNIT_CLASS_CAP:
        raise GroupError(f"{c} subgroup classes exceed the unit search cap {UNIT_CLASS_CAP}")
    out = []
    for signs in itertools.product((1, -1), repeat=c):
        try:
            out.append(BurnsideElement.from_marks(lat, signs))
        except ArithmeticError:
            continue
    return out


def _require_p_group(lat: SubgroupLattice, p: int) -> None:
    if not is_power_of(lat.group.order, p):
        raise GroupError("this operation needs a p-group")


def exponential(f) -> tuple[int, ...]:
    """``K -> (-1)^f(K)`` as a mark vector over all subgroup classes of a p-group."""
    poset = f.poset
    lat = poset.lattice
    _require_p_group(lat, poset.p)
    out = [0] * lat.num_classes
    for i, c in enumerate(poset.classes):
        out[c] = -1 if f[i] % 2 else 1
    return tuple(out)


def _p_of(group: PermGroup, p: int | None) -> int:
    if p is not None:
        return p
    from .groups import prime_factors
    ps = prime_factors(group.order)
    if len(ps) != 1:
        raise GroupError("this operation needs a nontrivial p-group")
    return ps[0]


def _cfb_basis(group: PermGroup, p: int):
    from .borel_smith import cfb_lattice
    poset = group.lattice.p_subposet(p)
    return poset, [list(r) for r in cfb_lattice(poset).basis]


def exponential_image(group: PermGroup, p: int | None = None) -> set[tuple[int, ...]]:
    """``{exponential(f) : f in CF_b}``, enumerated through the basis reduced mod 2."""
    from .superclass import SuperclassFn
    p = _p_of(group, p)
    poset, basis = _cfb_basis(group, p)
    out = set()
    for xs in itertools.product((0, 1), repeat=len(basis)):
        f = [sum(x * row[j] for x, row in zip(xs, basis)) for j in range(len(poset))]
        out.add(exponential(SuperclassFn(poset, tuple(f))))
    return out


@dataclass
class TornehaveResult:
    passed: bool
    exponential_image: list[tuple[int, ...]]
    unit_marks: list[tuple[int, ...]]

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"passed": self.passed, "exponential_image": [list(v) for v in self.exponential_image],
                "unit_marks": [list(v) for v in self.unit_marks]}


def tornehave_check(group: PermGroup, p: int | None = None) -> TornehaveResult:
    p = _p_of(group, p)
    _require_p_group(group.lattice, p)
    img = sorted(exponential_image(group, p))
    um = sorted(u.marks for u in units(group))
    return TornehaveResult(img == um, img, um)


def _solve_f2(basis: list[list[int]], target: Sequence[int]) -> list[int] | None:
    """``x`` in ``{0,1}^k`` with ``sum x_i basis_i = target (mod 2)``, or ``None``."""
    import numpy as np

    from .linalg import fp_rref
    k = len(basis)
    if k == 0:
        return [] if not any(v % 2 for v in target) else None
    a = np.array(basis, dtype=np.int64).T % 2
    aug = np.concatenate([a, np.array(target, dtype=np.int64).reshape(-1, 1) % 2], axis=1)
    r, piv = fp_rref(aug, 2)
    if k in piv:
        return None
    x = [0] * k
    for i, c in enumerate(piv):
        x[c] = int(r[i, k])
    return x


@dataclass
class UnitWitness:
    unit: BurnsideElement
    hmarks: tuple[int, ...]
    constructive: str  # "confirmed", "mismatch" or "skipped"
    complex_dims: dict | None = None
    note: str = ""

    def to_json(self) -> dict:
        return {"unit_marks": list(self.unit.marks), "h_marks": list(self.hmarks),
                "constructive": self.constructive,
                "complex_dims": {str(k): v for k, v in (self.complex_dims or {}).items()},
                "note": self.note}


@dataclass
class SurjectivityResult:
    passed: bool
    witnesses: list[UnitWitness]
    missing: list[tuple[int, ...]]

    def __bool__(self) -> bool:
        return self.passed

    @property
    def confirmed(self) -> int:
        return sum(w.constructive == "confirmed" for w in self.witnesses)

    @property
    def skipped(self) -> int:
        return sum(w.constructive == "skipped" for w in self.witnesses)

    def to_json(self) -> dict:
        return {"passed": self.passed, "confirmed": self.confirmed, "skipped": self.skipped,
                "missing": [list(m) for m in self.missing],
                "witnesses": [w.to_json() for w in self.witnesses]}


def lefschetz_surjectivity_check(group: PermGroup, p: int | None = None, budget: int | None = None,
                                 max_attempts: int = 8) -> SurjectivityResult:
    """Every unit is the exponential of a Borel-Smith function.

    For each unit the Borel-Smith preimage is found by a mod-2 solve on the
    lattice basis.  The constructive confirmation then looks for a function
    in the same class mod 2 whose tensor-product complex is endotrivial and
    fits the budget, and compares its Lefschetz invariant with the unit.
    """
    from .complexes import (DEFAULT_TENSOR_BUDGET, build_from_coeffs, h_marks, lefschetz,
                            predicted_dim, verify_endotrivial)
    from .superclass import mobius_inversion

    p = _p_of(group, p)
    _require_p_group(group.lattice, p)
    budget = DEFAULT_TENSOR_BUDGET if budget is None else budget
    poset, basis = _cfb_basis(group, p)
    n = len(poset)
    witnesses: list[UnitWitness] = []
    missing = []
    ok = True
    for u in units(group):
        target = [0] * n
        for i, c in enumerate(poset.classes):
            target[i] = 0 if u.marks[c] == 1 else 1
        x = _solve_f2(basis, target)
        if x is None:
            missing.append(u.marks)
            ok = False
            continue
        f = tuple(sum(xi * row[j] for xi, row in zip(x, basis)) for j in range(n))
        # candidates with the same parity pattern, smallest predicted complex first
        cands = []
        for ys in itertools.product((-1, 0, 1), repeat=len(basis)):
            if any((y - xi) % 2 for y, xi in zip(ys, x)):
                continue
            g = tuple(sum(y * row[j] for y, row in zip(ys, basis)) for j in range(n))
            b = list(mobius_inversion(g, poset))
            size = predicted_dim(group, p, b)
            if size <= budget:
                cands.append((size, g != f, g, b))
        # smallest complex first; among equal sizes the mod-2 solution itself wins
        cands.sort()
        w = UnitWitness(u, f, "skipped", note="no endotrivial product within budget")
        for size, _, g, b in cands[:max_attempts]:
            c = build_from_coeffs(group, p, b, budget=budget)
            rep = h_marks(c)
            if not verify_endotrivial(c, rep):
                continue
            lam = lefschetz(c).marks
            good = lam == u.marks and rep.marks == g
            w = UnitWitness(u, g, "confirmed" if good else "mismatch", c.dims)
            w.note = "" if good else f"lefschetz marks {lam}"
            ok = ok and good
            break
        witnesses.append(w)
    return SurjectivityResult(ok, witnesses, missing)
