"""Bounded chain complexes of permutation modules over F_p.

Every term is the permutation module on a finite G-set; differentials are
arbitrary G-equivariant F_p matrices.  ``d[i]`` maps the term in degree ``i``
to the term in degree ``i - 1``.

Sign conventions (fixed so serialized complexes are stable):

* tensor: ``d(x (x) y) = dx (x) y + (-1)^|x| x (x) dy``, basis of a block
  ordered left factor major, blocks ordered by the left degree;
* dual: the term in degree ``-i`` has the basis of term ``i`` and the
  differential into degree ``-i`` is ``(-1)^i`` times the transpose of ``d[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .burnside import BurnsideElement
from .groups import (BudgetExceeded, GroupError, PermGroup, PSubposet, QuotientGroup, Subgroup,
                     is_power_of, p_part, subgroup_as_group)
from .linalg import FpMatrix, fp_nullspace, fp_rank, fp_rref, fp_solve
from .superclass import SuperclassFn, mobius_inversion

DEFAULT_TENSOR_BUDGET = 20000


class BasedGSet:
    """A finite G-set with points ``0..size-1``; ``action[g, x]`` is ``g . x``."""

    __slots__ = ("group", "action")

    def __init__(self, group: PermGroup, action: np.ndarray, check: bool = True):
        self.group = group
        self.action = np.asarray(action, dtype=np.int64).reshape(group.order, -1)
        if check:
            self.check()

    @property
    def size(self) -> int:
        return self.action.shape[1]

    def __len__(self) -> int:
        return self.size

    def check(self) -> None:
        n = self.size
        if not np.array_equal(self.action[0], np.arange(n)):
            raise GroupError("identity does not act trivially")
        t = self.group.table
        for s in self.group.generator_indices:
            composed = self.action[s][self.action]
            target = self.action[[t[s][g] for g in range(self.group.order)]]
            if not np.array_equal(composed, target):
                raise GroupError("action is not compatible with the group law")

    @classmethod
    def point(cls, group: PermGroup) -> "BasedGSet":
        return cls(group, np.zeros((group.order, 1), dtype=np.int64), check=False)

    @classmethod
    def cosets(cls, group: PermGroup, q: Subgroup) -> "BasedGSet":
        """Left cosets ``gQ`` ordered by their smallest element index."""
        t = group.table
        coset_of: dict[int, int] = {}
        reps: list[int] = []
        for x in range(group.order):
            if x in coset_of:
                continue
            for m in q.members:
                coset_of[t[x][m]] = len(reps)
            reps.append(x)
        action = np.array([[coset_of[t[g][r]] for r in reps] for g in range(group.order)],
                          dtype=np.int64)
        return cls(group, action, check=False)

    @classmethod
    def from_generator_images(cls, group: PermGroup, images: Sequence[Sequence[int]]) -> "BasedGSet":
        """Rebuild the full action from the images of the group generators."""
        if len(images) != len(group.generators):
            raise GroupError("one image list per generator required")
        n = len(images[0]) if images else 0
        gens = [np.asarray(im, dtype=np.int64) for im in images]
        action = np.full((group.order, n), -1, dtype=np.int64)
        action[0] = np.arange(n)
        reached = np.zeros(group.order, dtype=bool)
        reached[0] = True
        t = group.table
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s, img in zip(group.generator_indices, gens):
                    y = t[s][x]
                    if not reached[y]:
                        reached[y] = True
                        action[y] = img[action[x]]
                        nxt.append(y)
            frontier = nxt
        out = cls(group, action, check=False)
        out.check()
        return out

    def product(self, other: "BasedGSet") -> "BasedGSet":
        """Cartesian product with the diagonal action, point ``(x, y)`` at ``x * |other| + y``."""
        a, b = self.action, other.action
        act = (a[:, :, None] * other.size + b[:, None, :]).reshape(self.group.order, -1)
        return BasedGSet(self.group, act, check=False)

    def fixed_points(self, gens: Sequence[int]) -> np.ndarray:
        if not gens:
            return np.arange(self.size)
        ok = np.all(self.action[list(gens)] == np.arange(self.size), axis=0)
        return np.nonzero(ok)[0]

    def permutation_matrix(self, g: int) -> np.ndarray:
        n = self.size
        m = np.zeros((n, n), dtype=np.int64)
        m[self.action[g], np.arange(n)] = 1
        return m

    def orbits(self) -> list[np.ndarray]:
        n = self.size
        seen = np.zeros(n, dtype=bool)
        gens = [self.action[s] for s in self.group.generator_indices]
        out = []
        for x in range(n):
            if seen[x]:
                continue
            orb = [x]
            seen[x] = True
            k = 0
            while k < len(orb):
                y = orb[k]
                for g in gens:
                    z = int(g[y])
                    if not seen[z]:
                        seen[z] = True
                        orb.append(z)
                k += 1
            out.append(np.array(orb))
        return out


class PermComplex:
    """Bounded complex of permutation modules over F_p for ``group``."""

    def __init__(self, group: PermGroup, p: int, terms: dict[int, BasedGSet],
                 diffs: dict[int, FpMatrix] | None = None, check: bool = True):
        self.group = group
        self.p = p
        self.terms = {i: t for i, t in sorted(terms.items()) if t.size}
        self.diffs: dict[int, FpMatrix] = {}
        for i, d in (diffs or {}).items():
            if i in self.terms and i - 1 in self.terms:
                if d.shape != (self.dim(i - 1), self.dim(i)):
                    raise ValueError(f"differential {i} has shape {d.shape}")
                self.diffs[i] = d
        if check:
            self.check()

    @property
    def degrees(self) -> list[int]:
        return list(self.terms)

    def dim(self, i: int) -> int:
        t = self.terms.get(i)
        return t.size if t is not None else 0

    @property
    def dims(self) -> dict[int, int]:
        return {i: t.size for i, t in self.terms.items()}

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def d(self, i: int) -> FpMatrix:
        m = self.diffs.get(i)
        if m is None:
            return FpMatrix.zero(self.p, self.dim(i - 1), self.dim(i))
        return m

    def euler_characteristic(self) -> int:
        return sum((-1) ** i * n for i, n in self.dims.items())

    def check(self) -> None:
        """Verify ``d d = 0`` and equivariance under every group generator."""
        for i in self.diffs:
            if i - 1 in self.diffs and not (self.diffs[i - 1] @ self.diffs[i]).is_zero():
                raise ArithmeticError(f"d[{i - 1}] d[{i}] != 0")
        for i, d in self.diffs.items():
            src, dst = self.terms[i].action, self.terms[i - 1].action
            for s in self.group.generator_indices:
                a_src, a_dst = src[s], dst[s]
                for x, col in enumerate(d.cols):
                    moved = {int(a_dst[r]): v for r, v in col.items()}
                    if d.cols[a_src[x]] != moved:
                        raise ArithmeticError(f"d[{i}] is not equivariant")

    def __repr__(self) -> str:
        return f"PermComplex(p={self.p}, dims={self.dims})"


def unit_complex(group: PermGroup, p: int) -> PermComplex:
    """``k`` in degree 0."""
    return PermComplex(group, p, {0: BasedGSet.point(group)}, check=False)


def shift_complex(group: PermGroup, p: int, n: int) -> PermComplex:
    """``k[n]``: the trivial module in degree ``n``."""
    return PermComplex(group, p, {n: BasedGSet.point(group)}, check=False)


def _is_sylow(group: PermGroup, p: int, q: Subgroup) -> bool:
    return q.order == p_part(group.order, p)


def build_CQ(group: PermGroup, p: int, q: Subgroup) -> PermComplex:
    """``k[G/Q] -> k`` (augmentation, ``k`` in degree 0), or ``k[1]`` for a Sylow ``Q``."""
    if not is_power_of(q.order, p):
        raise GroupError("Q must be a p-subgroup")
    if _is_sylow(group, p, q):
        return shift_complex(group, p, 1)
    top = BasedGSet.cosets(group, q)
    aug = FpMatrix(p, 1, top.size, [{0: 1} for _ in range(top.size)])
    return PermComplex(group, p, {1: top, 0: BasedGSet.point(group)}, {1: aug})


def tensor(a: PermComplex, b: PermComplex, check: bool = True) -> PermComplex:
    if a.group is not b.group or a.p != b.p:
        raise ValueError("tensor factors must share group and prime")
    p = a.p
    lo = min(a.degrees) + min(b.degrees) if a.terms and b.terms else 0
    hi = max(a.degrees) + max(b.degrees) if a.terms and b.terms else -1
    blocks: dict[int, list[tuple[int, int]]] = {}
    offsets: dict[tuple[int, int], int] = {}
    terms: dict[int, BasedGSet] = {}
    for n in range(lo, hi + 1):
        pairs = [(i, n - i) for i in a.degrees if n - i in b.terms]
        if not pairs:
            continue
        blocks[n] = pairs
        acts, off = [], 0
        for i, j in pairs:
            offsets[(i, j)] = off
            prod = a.terms[i].product(b.terms[j])
            acts.append(prod.action + off)
            off += prod.size
        terms[n] = BasedGSet(a.group, np.concatenate(acts, axis=1), check=False)
    diffs: dict[int, FpMatrix] = {}
    for n, pairs in blocks.items():
        if n - 1 not in terms:
            continue
        cols: list[dict[int, int]] = []
        for i, j in pairs:
            da, db = a.diffs.get(i), b.diffs.get(j)
            nb = b.dim(j)
            sign = -1 if i % 2 else 1
            off_a = offsets.get((i - 1, j))
            off_b = offsets.get((i, j - 1))
            nb_low = b.dim(j - 1)
            for x in range(a.dim(i)):
                acol = da.cols[x] if da is not None else {}
                for y in range(nb):
                    col: dict[int, int] = {}
                    for xr, v in acol.items():
                        col[off_a + xr * nb + y] = v
                    if db is not None:
                        base = off_b + x * nb_low
                        for yr, w in db.cols[y].items():
                            col[base + yr] = (sign * w) % p
                    cols.append(col)
        diffs[n] = FpMatrix(p, terms[n - 1].size, terms[n].size, cols)
    return PermComplex(a.group, p, terms, diffs, check=check)


def dual(c: PermComplex, check: bool = True) -> PermComplex:
    terms = {-i: t for i, t in c.terms.items()}
    diffs = {}
    for i, d in c.diffs.items():
        # d[i]: C_i -> C_{i-1} dualizes to a map from degree 1-i into degree -i
        sign = -1 if i % 2 else 1
        diffs[1 - i] = d.transpose().scaled(sign)
    return PermComplex(c.group, c.p, terms, diffs, check=check)


def _fixed_subcomplex(c: PermComplex, gens: Sequence[int]) -> tuple[dict[int, np.ndarray], dict[int, FpMatrix]]:
    fixed = {i: t.fixed_points(gens) for i, t in c.terms.items()}
    fixed = {i: f for i, f in fixed.items() if f.size}
    diffs = {}
    for i, d in c.diffs.items():
        if i in fixed and i - 1 in fixed:
            diffs[i] = d.submatrix(fixed[i - 1].tolist(), fixed[i].tolist())
    return fixed, diffs


def _gens_of(group: PermGroup, q: Subgroup) -> tuple[int, ...]:
    if q.gens or q.order == 1:
        return q.gens
    return group.lattice.subgroup_of_mask(q.mask).gens


def brauer_quotient(group: PermGroup, P: Subgroup) -> QuotientGroup:
    """``N_G(P)/P``, cached per subgroup so Brauer constructions of different
    complexes at the same ``P`` live over the same group object."""
    lat = group.lattice
    cache = lat.__dict__.setdefault("_brauer_quotients", {})
    q = cache.get(P.mask)
    if q is None:
        norm = lat.normalizer(lat.index_of_mask[P.mask])
        q = cache[P.mask] = QuotientGroup(group, norm, P)
    return q


def brauer(c: PermComplex, P: Subgroup, check: bool = True) -> PermComplex:
    """Brauer construction at ``P``: P-fixed basis points, as a complex over ``N_G(P)/P``."""
    group = c.group
    if not is_power_of(P.order, c.p):
        raise GroupError("the Brauer construction needs a p-subgroup")
    fixed, diffs = _fixed_subcomplex(c, _gens_of(group, P))
    q = brauer_quotient(group, P)
    qg = q.perm_group
    terms = {}
    for i, pts in fixed.items():
        pos = np.full(c.dim(i), -1, dtype=np.int64)
        pos[pts] = np.arange(pts.size)
        reps = [q.reps[q.from_perm_index[e]] for e in range(qg.order)]
        action = pos[c.terms[i].action[reps][:, pts]]
        terms[i] = BasedGSet(qg, action, check=check)
    out = PermComplex(qg, c.p, terms, diffs, check=check)
    out.quotient = q  # type: ignore[attr-defined]
    return out


def restrict(c: PermComplex, h: Subgroup) -> PermComplex:
    """Restriction to the subgroup ``h`` (as a standalone group)."""
    sub, embed = subgroup_as_group(c.group, h)
    terms = {i: BasedGSet(sub, t.action[embed], check=False) for i, t in c.terms.items()}
    return PermComplex(sub, c.p, terms, dict(c.diffs), check=False)


def homology_dims(c: PermComplex, gens: Sequence[int] = ()) -> dict[int, int]:
    """Nonzero homology dimensions of the P-fixed subcomplex (``gens`` generate P)."""
    fixed, diffs = _fixed_subcomplex(c, gens)
    ranks = {i: fp_rank(d) for i, d in diffs.items()}
    out = {}
    for i, pts in fixed.items():
        h = pts.size - ranks.get(i, 0) - ranks.get(i + 1, 0)
        if h:
            out[i] = h
    return out


@dataclass(frozen=True)
class HMarkReport:
    """Brauer-quotient homology of a complex at every p-subgroup class."""

    poset: PSubposet
    homology: tuple[dict, ...]

    @property
    def concentrated(self) -> tuple[bool, ...]:
        return tuple(len(h) == 1 for h in self.homology)

    @property
    def all_concentrated(self) -> bool:
        return all(self.concentrated)

    @property
    def marks(self) -> tuple[int | None, ...]:
        return tuple(next(iter(h)) if len(h) == 1 else None for h in self.homology)

    @property
    def dims(self) -> tuple[int | None, ...]:
        return tuple(next(iter(h.values())) if len(h) == 1 else None for h in self.homology)

    def h_marks(self) -> SuperclassFn:
        if not self.all_concentrated:
            raise ArithmeticError("homology is not concentrated at every p-subgroup")
        return SuperclassFn(self.poset, self.marks)

    def to_json(self) -> dict:
        return {
            "classes": [
                {"class": i, "homology": {str(k): v for k, v in sorted(h.items())},
                 "concentrated": len(h) == 1, "h_mark": self.marks[i]}
                for i, h in enumerate(self.homology)
            ],
            "legend": self.poset.legend(),
        }


def h_marks(c: PermComplex) -> HMarkReport:
    poset = c.group.lattice.p_subposet(c.p)
    hom = tuple(homology_dims(c, _gens_of(c.group, poset.rep(i))) for i in range(len(poset)))
    return HMarkReport(poset, hom)


def verify_endotrivial(c: PermComplex, report: HMarkReport | None = None) -> bool:
    """Homology concentrated in one degree with dimension one at every p-subgroup."""
    r = report or h_marks(c)
    return r.all_concentrated and all(d == 1 for d in r.dims)


def verify_endosplit_trivial_VFG(c: PermComplex, report: HMarkReport | None = None) -> bool:
    """Concentrated homology everywhere, of dimension one at the Sylow classes."""
    r = report or h_marks(c)
    return r.all_concentrated and all(r.dims[i] == 1 for i in r.poset.sylow)


def _cq_total_dim(group: PermGroup, p: int, q: Subgroup) -> int:
    return 1 if _is_sylow(group, p, q) else group.order // q.order + 1


def predicted_dim(group: PermGroup, p: int, coeffs: Sequence[int]) -> int:
    """Total dimension of ``(x)_Q C_Q^{b_Q}``."""
    poset = group.lattice.p_subposet(p)
    out = 1
    for i, b in enumerate(coeffs):
        out *= _cq_total_dim(group, p, poset.rep(i)) ** abs(b)
    return out


def build_from_coeffs(group: PermGroup, p: int, coeffs: Sequence[int],
                      order: Sequence[int] | None = None,
                      budget: int = DEFAULT_TENSOR_BUDGET) -> PermComplex:
    """``(x)_Q C_Q^{(x) b_Q}``, with ``C_Q^*`` for negative exponents.

    ``order`` permutes the classes to change the order of the tensor factors.
    """
    poset = group.lattice.p_subposet(p)
    if len(coeffs) != len(poset):
        raise ValueError("one coefficient per p-subgroup class required")
    need = predicted_dim(group, p, coeffs)
    if need > budget:
        raise BudgetExceeded(f"predicted total dimension {need} exceeds budget {budget}")
    out = unit_complex(group, p)
    for i in (order if order is not None else range(len(poset))):
        b = coeffs[i]
        if not b:
            continue
        base = build_CQ(group, p, poset.rep(i))
        if b < 0:
            base = dual(base)
        for _ in range(abs(b)):
            out = tensor(out, base, check=False)
    out.check()
    return out


def build_from_hmarks(group: PermGroup, p: int, f: SuperclassFn | Sequence[int],
                      budget: int = DEFAULT_TENSOR_BUDGET, verify: bool = True) -> PermComplex:
    """A complex whose h-marks are ``f``, from the Möbius coefficients of ``f``."""
    poset = group.lattice.p_subposet(p)
    b = mobius_inversion(list(f), poset)
    c = build_from_coeffs(group, p, list(b), budget=budget)
    if verify:
        r = h_marks(c)
        if not r.all_concentrated or tuple(r.marks) != tuple(f):
            raise ArithmeticError(f"h-marks {r.marks} do not reproduce {tuple(f)}")
    return c


# ------------------------------------------------------------- modules

@dataclass
class Module:
    """An F_p representation given by the matrices of the group generators."""

    group: PermGroup
    p: int
    gens: list[np.ndarray]

    @property
    def dim(self) -> int:
        return self.gens[0].shape[0] if self.gens else 0

    @cached_property
    def all_matrices(self) -> list[np.ndarray]:
        """Matrices of every group element; raises if the generators do not define a module."""
        g, p = self.group, self.p
        n = self.dim
        mats: list[np.ndarray | None] = [None] * g.order
        mats[0] = np.eye(n, dtype=np.int64)
        t = g.table
        frontier = [0]
        while frontier:
            nxt = []
            for x in frontier:
                for s, ms in zip(g.generator_indices, self.gens):
                    y = t[s][x]
                    m = (ms @ mats[x]) % p
                    if mats[y] is None:
                        mats[y] = m
                        nxt.append(y)
                    elif not np.array_equal(mats[y], m):
                        raise ArithmeticError("generator matrices violate the group relations")
            frontier = nxt
        return mats  # type: ignore[return-value]


def free_summand_count(module: Module) -> tuple[int, int]:
    """Rank ``a`` of the norm element and ``dim - a |G|``, for a p-group ``G``.

    Over a p-group the image of the norm map has dimension equal to the
    number of free summands.
    """
    g, p = module.group, module.p
    if not is_power_of(g.order, p):
        raise GroupError("free_summand_count needs a p-group")
    if module.dim == 0:
        return 0, 0
    norm = sum(module.all_matrices) % p
    a = len(fp_rref(norm, p)[1])
    return a, module.dim - a * g.order


def regular_module(group: PermGroup, p: int) -> Module:
    # left multiplication: action[g, x] = g * x
    reg = BasedGSet(group, np.array(group.table, dtype=np.int64), check=False)
    return Module(group, p, [reg.permutation_matrix(s) for s in group.generator_indices])


def trivial_module(group: PermGroup, p: int, dim: int = 1) -> Module:
    return Module(group, p, [np.eye(dim, dtype=np.int64) for _ in group.generator_indices])


def homology_module(c: PermComplex, degree: int) -> Module:
    """``H_degree(c)`` with the induced action of the generators of ``c.group``."""
    p = c.p
    n = c.dim(degree)
    if n == 0:
        return Module(c.group, p, [np.zeros((0, 0), dtype=np.int64) for _ in c.group.generator_indices])
    d_out = c.d(degree).to_dense()
    d_in = c.d(degree + 1).to_dense()
    z = fp_nullspace(d_out, p, n) if d_out.shape[0] else np.eye(n, dtype=np.int64)
    if d_in.shape[1]:
        r, _ = fp_rref(d_in.T, p)
        b = r.T
    else:
        b = np.zeros((n, 0), dtype=np.int64)
    stacked = np.concatenate([b, z], axis=1)
    _, piv = fp_rref(stacked, p)
    comp = [j - b.shape[1] for j in piv if j >= b.shape[1]]
    hc = z[:, comp]
    basis = np.concatenate([b, hc], axis=1)
    gens = []
    for s in c.group.generator_indices:
        moved = c.terms[degree].permutation_matrix(s) @ hc % p
        coords = fp_solve(basis, moved, p)
        gens.append(coords[b.shape[1]:, :] % p)
    return Module(c.group, p, gens)


# ------------------------------------------------------------- Lefschetz

def lefschetz(c: PermComplex) -> BurnsideElement:
    """``sum_i (-1)^i [C_i]`` in the Burnside ring of a p-group."""
    g = c.group
    if not is_power_of(g.order, c.p):
        raise GroupError("the Lefschetz invariant is only identified with B(G) for p-groups")
    lat = g.lattice
    coeffs = [0] * lat.num_classes
    for i, term in c.terms.items():
        sign = -1 if i % 2 else 1
        for orb in term.orbits():
            x = int(orb[0])
            stab = np.nonzero(term.action[:, x] == x)[0]
            mask = 0
            for e in stab.tolist():
                mask |= 1 << e
            coeffs[lat.class_of_mask(mask)] += sign
    return BurnsideElement(lat, tuple(coeffs))


# ------------------------------------------------------------- JSON

def complex_to_json(c: PermComplex, group_ref: str | None = None) -> dict:
    g = c.group
    return {
        "schema": "endotriv/1",
        "kind": "complex",
        "p": c.p,
        "group": {"ref": group_ref, "degree": g.degree, "generators": [list(s) for s in g.generators]},
        "degrees": c.degrees,
        "terms": {
            str(i): {"points": t.size,
                     "generator_images": [t.action[s].tolist() for s in g.generator_indices]}
            for i, t in c.terms.items()
        },
        "differentials": {str(i): d.tolist() for i, d in c.diffs.items()},
    }


def complex_from_json(doc: dict, group: PermGroup | None = None) -> PermComplex:
    if doc.get("schema") != "endotriv/1":
        raise ValueError("unsupported schema")
    if group is None:
        group = PermGroup(doc["group"]["degree"], doc["group"]["generators"])
    p = int(doc["p"])
    terms = {int(i): BasedGSet.from_generator_images(group, t["generator_images"])
             for i, t in doc["terms"].items()}
    diffs = {int(i): FpMatrix.from_dense(p, np.array(m, dtype=np.int64).reshape(
        terms[int(i) - 1].size, terms[int(i)].size)) for i, m in doc["differentials"].items()}
    return PermComplex(group, p, terms, diffs)
