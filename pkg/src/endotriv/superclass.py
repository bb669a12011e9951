"""Superclass functions on p-subgroups and Möbius inversion on the class poset."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .groups import PSubposet


@dataclass(frozen=True)
class SuperclassFn:
    """Integer values on the p-subgroup classes of ``poset``, in its canonical order."""

    poset: PSubposet
    values: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(int(v) for v in self.values))
        if len(self.values) != len(self.poset):
            raise ValueError(f"expected {len(self.poset)} values, got {len(self.values)}")

    @property
    def p(self) -> int:
        return self.poset.p

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, i: int) -> int:
        return self.values[i]

    def __iter__(self):
        return iter(self.values)

    def __add__(self, other: "SuperclassFn") -> "SuperclassFn":
        return SuperclassFn(self.poset, tuple(a + b for a, b in zip(self.values, other.values)))

    def __neg__(self) -> "SuperclassFn":
        return SuperclassFn(self.poset, tuple(-a for a in self.values))

    def __sub__(self, other: "SuperclassFn") -> "SuperclassFn":
        return self + (-other)

    def __eq__(self, other) -> bool:
        if isinstance(other, SuperclassFn):
            return self.poset is other.poset and self.values == other.values
        if isinstance(other, (tuple, list)):
            return self.values == tuple(other)
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.values)

    def __repr__(self) -> str:
        return f"SuperclassFn({list(self.values)})"

    def to_json(self) -> dict:
        return {"values": list(self.values), "legend": self.poset.legend()}


class OmegaMatrix:
    """Subconjugacy indicator ``W[R][Q] = [R <=_G Q]`` and its exact inverse.

    Entry ``(P, Q)`` of the inverse is the Möbius function ``mu(P, Q)`` of the
    class poset.
    """

    def __init__(self, poset: PSubposet):
        self.poset = poset
        n = len(poset)
        w = [[int(poset.subconj[r][q]) for q in range(n)] for r in range(n)]
        for r in range(n):
            if w[r][r] != 1 or any(w[r][q] for q in range(r)):
                raise ArithmeticError("subconjugacy matrix is not upper unitriangular")
        self.w = w
        # back substitution: W is upper unitriangular, so W^-1 is integral
        inv = [[0] * n for _ in range(n)]
        for q in range(n):
            inv[q][q] = 1
            for r in range(q - 1, -1, -1):
                inv[r][q] = -sum(w[r][k] * inv[k][q] for k in range(r + 1, q + 1))
        self.inv = inv

    def __len__(self) -> int:
        return len(self.w)

    def mu(self, p_idx: int, q_idx: int) -> int:
        return self.inv[p_idx][q_idx]

    def apply(self, b: Sequence[int]) -> list[int]:
        return [sum(row[k] * b[k] for k in range(len(b))) for row in self.w]

    def apply_inverse(self, f: Sequence[int]) -> list[int]:
        return [sum(row[k] * f[k] for k in range(len(f))) for row in self.inv]


def omega_matrix(poset: PSubposet) -> OmegaMatrix:
    """The (cached) :class:`OmegaMatrix` of ``poset``."""
    om = poset.__dict__.get("_omega_matrix")
    if om is None:
        om = poset.__dict__["_omega_matrix"] = OmegaMatrix(poset)
    return om


def omega(poset: PSubposet, q: int) -> SuperclassFn:
    """``omega_Q``: 1 on classes subconjugate to ``Q``, 0 elsewhere."""
    return SuperclassFn(poset, tuple(int(poset.subconj[r][q]) for r in range(len(poset))))


def idempotent(poset: PSubposet, q: int) -> SuperclassFn:
    """Indicator function ``e_Q`` of the class ``Q``."""
    return SuperclassFn(poset, tuple(int(r == q) for r in range(len(poset))))


def idempotent_basis_coeffs(poset: PSubposet, q: int) -> SuperclassFn:
    """Coefficients ``b`` with ``e_Q = sum_P b_P omega_P`` (column ``Q`` of ``W^-1``)."""
    om = omega_matrix(poset)
    return SuperclassFn(poset, tuple(om.inv[r][q] for r in range(len(poset))))


def mobius_inversion(f: SuperclassFn | Sequence[int], poset: PSubposet | None = None) -> SuperclassFn:
    """Coefficients ``b`` with ``f = sum_P b_P omega_P``."""
    if poset is None:
        poset = f.poset
    om = omega_matrix(poset)
    return SuperclassFn(poset, tuple(om.apply_inverse(list(f))))


def from_omega_coeffs(poset: PSubposet, b: Sequence[int]) -> SuperclassFn:
    """``sum_P b_P omega_P``."""
    return SuperclassFn(poset, tuple(omega_matrix(poset).apply(list(b))))
