"""Exact linear algebra over the integers and over F_p.

Integer matrices are plain lists of rows holding Python ints, so nothing
overflows.  Lattices are column spans kept in a canonical Hermite form.
Matrices over F_p (:class:`FpMatrix`) are stored column-sparse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

IntMatrix = list[list[int]]


def _as_rows(m) -> IntMatrix:
    return [[int(x) for x in row] for row in m]


def transpose(m: Sequence[Sequence[int]], nrows: int | None = None) -> IntMatrix:
    if not m:
        return [[] for _ in range(nrows or 0)]
    return [list(col) for col in zip(*m)]


def row_hnf(rows: Sequence[Sequence[int]], ncols: int | None = None) -> IntMatrix:
    """Row Hermite normal form, zero rows dropped.

    Pivot columns strictly increase, pivots are positive and entries above
    each pivot lie in ``[0, pivot)``.
    """
    a = _as_rows(rows)
    if ncols is None:
        ncols = len(a[0]) if a else 0
    m = len(a)
    pr = 0
    for c in range(ncols):
        if pr == m:
            break
        while True:
            nz = [i for i in range(pr, m) if a[i][c]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][c]))
            a[pr], a[piv] = a[piv], a[pr]
            prow = a[pr]
            clean = True
            for i in range(pr + 1, m):
                if a[i][c]:
                    q = a[i][c] // prow[c]
                    if q:
                        a[i] = [x - q * y for x, y in zip(a[i], prow)]
                    if a[i][c]:
                        clean = False
            if clean:
                break
        if pr >= m or a[pr][c] == 0:
            continue
        if a[pr][c] < 0:
            a[pr] = [-x for x in a[pr]]
        prow = a[pr]
        for i in range(pr):
            q = a[i][c] // prow[c]
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], prow)]
        pr += 1
    return [r for r in a[:pr] if any(r)]


def hnf(m: Sequence[Sequence[int]], pad: bool = False) -> IntMatrix:
    """Column Hermite normal form of ``m``: same column span, canonical basis.

    Zero columns are dropped unless ``pad`` is set, in which case the result
    keeps the original column count.
    """
    m = _as_rows(m)
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    basis = row_hnf(transpose(m), nrows)
    if pad:
        basis = basis + [[0] * nrows for _ in range(ncols - len(basis))]
    if not basis:
        return [[] for _ in range(nrows)]
    return transpose(basis)


def smith_diagonal(m: Sequence[Sequence[int]]) -> list[int]:
    """Nonzero Smith invariants ``d_1 | d_2 | ...`` of ``m``."""
    a = _as_rows(m)
    rows = len(a)
    cols = len(a[0]) if a else 0
    diag: list[int] = []
    t = 0
    while t < min(rows, cols):
        nz = [(abs(a[i][j]), i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j]]
        if not nz:
            break
        _, pi, pj = min(nz)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            done = True
            piv = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    q = a[i][t] // piv
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    q = a[t][j] // piv
                    for row in a:
                        row[j] -= q * row[t]
                    if a[t][j]:
                        done = False
            if done:
                # divisibility: fold any entry not divisible by the pivot into row t
                bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                            if a[i][j] % piv), None)
                if bad is None:
                    break
                a[t] = [x + y for x, y in zip(a[t], a[bad[0]])]
                continue
            nz = [(abs(a[i][t]), i, t) for i in range(t, rows) if a[i][t]]
            nz += [(abs(a[t][j]), t, j) for j in range(t, cols) if a[t][j]]
            _, pi, pj = min(nz)
            a[t], a[pi] = a[pi], a[t]
            for row in a:
                row[t], row[pj] = row[pj], row[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


@dataclass(frozen=True)
class AbelianInvariants:
    """A finitely generated abelian group ``Z^free_rank + Z/d_1 + ... + Z/d_k``."""

    torsion: tuple[int, ...]
    free_rank: int

    def __post_init__(self):
        object.__setattr__(self, "torsion", tuple(int(d) for d in self.torsion))
        for a, b in zip(self.torsion, self.torsion[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {self.torsion}")
        if any(d <= 1 for d in self.torsion):
            raise ValueError("invariant factors must exceed 1")

    @property
    def is_trivial(self) -> bool:
        return not self.torsion and self.free_rank == 0

    @property
    def order(self) -> int | None:
        if self.free_rank:
            return None
        return math.prod(self.torsion)

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{d}" for d in self.torsion]
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> dict:
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}


def snf_invariants(m: Sequence[Sequence[int]], nrows: int | None = None) -> AbelianInvariants:
    """Invariant factors of ``Z^rows / (column span of m)``."""
    m = _as_rows(m)
    rows = len(m) if nrows is None else nrows
    diag = smith_diagonal(m) if m and m[0] else []
    return AbelianInvariants(tuple(d for d in diag if d > 1), rows - len(diag))


def integer_kernel(m: Sequence[Sequence[int]], ncols: int) -> IntMatrix:
    """Basis (as rows) of ``{x in Z^ncols : m x = 0}``."""
    m = _as_rows(m)
    r = len(m)
    aug = []
    for j in range(ncols):
        aug.append([m[i][j] for i in range(r)] + [int(j == k) for k in range(ncols)])
    h = row_hnf(aug, r + ncols)
    return [row[r:] for row in h if not any(row[:r])]


class IntegerLattice:
    """Sublattice of ``Z^n`` held by its canonical (Hermite) basis.

    ``basis`` lists the basis vectors; ``matrix`` gives them as columns.
    """

    __slots__ = ("ambient_rank", "basis")

    def __init__(self, ambient_rank: int, generators: Iterable[Sequence[int]] = ()):
        self.ambient_rank = ambient_rank
        gens = [list(map(int, v)) for v in generators]
        for v in gens:
            if len(v) != ambient_rank:
                raise ValueError("generator length does not match ambient rank")
        self.basis: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in row_hnf(gens, ambient_rank))

    @classmethod
    def full(cls, n: int) -> "IntegerLattice":
        return cls(n, [[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> IntMatrix:
        if not self.basis:
            return [[] for _ in range(self.ambient_rank)]
        return transpose(self.basis)

    def __contains__(self, v: Sequence[int]) -> bool:
        v = [int(x) for x in v]
        for row in self.basis:
            c = next(i for i, x in enumerate(row) if x)
            if v[c] % row[c]:
                return False
            q = v[c] // row[c]
            if q:
                v = [x - q * y for x, y in zip(v, row)]
        return not any(v)

    def issubset(self, other: "IntegerLattice") -> bool:
        return all(v in other for v in self.basis)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntegerLattice):
            return NotImplemented
        return self.ambient_rank == other.ambient_rank and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.ambient_rank, self.basis))

    def __repr__(self) -> str:
        return f"IntegerLattice({self.ambient_rank}, {[list(b) for b in self.basis]})"

    def index(self) -> int | None:
        """Index in ``Z^n``, or ``None`` when the lattice is not of full rank."""
        if self.rank < self.ambient_rank:
            return None
        return math.prod(row[next(i for i, x in enumerate(row) if x)] for row in self.basis)


def solve_congruence_lattice(n: int,
                             equalities: Sequence[Sequence[int]] = (),
                             congruences: Sequence[tuple[Sequence[int], int]] = ()) -> IntegerLattice:
    """The lattice ``{f in Z^n : A f = 0, c_i . f = 0 mod m_i}``.

    Each congruence gets an auxiliary unknown ``t_i`` with ``c_i . f - m_i t_i = 0``;
    the integer kernel of the stacked system is projected to the first ``n``
    coordinates.
    """
    k = len(congruences)
    rows = []
    for a in equalities:
        if len(a) != n:
            raise ValueError("equality row has wrong length")
        rows.append([int(x) for x in a] + [0] * k)
    for i, (c, mod) in enumerate(congruences):
        if len(c) != n:
            raise ValueError("congruence row has wrong length")
        if mod < 1:
            raise ValueError("moduli must be positive")
        aux = [0] * k
        aux[i] = -int(mod)
        rows.append([int(x) for x in c] + aux)
    if not rows:
        return IntegerLattice.full(n)
    ker = integer_kernel(rows, n + k)
    return IntegerLattice(n, [v[:n] for v in ker])


def lattice_quotient(n: int, sub: IntegerLattice) -> AbelianInvariants:
    """Invariant factors of ``Z^n / sub``."""
    if sub.ambient_rank != n:
        raise ValueError("ambient rank mismatch")
    if sub.rank == 0:
        return AbelianInvariants((), n)
    return snf_invariants(sub.matrix, n)


# ---------------------------------------------------------------- F_p

class FpMatrix:
    """Matrix over F_p stored by columns as ``{row: value}`` dicts.

    Dense storage was the first choice; tensor powers at desk scale reach
    terms of several thousand points with a handful of nonzeros per column,
    which made dense elimination the bottleneck, hence columns-as-dicts.
    """

    __slots__ = ("p", "nrows", "ncols", "cols")

    def __init__(self, p: int, nrows: int, ncols: int, cols: Sequence[dict[int, int]] | None = None):
        self.p = p
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        else:
            cols = [{r: v % p for r, v in c.items() if v % p} for c in cols]
            if len(cols) != ncols:
                raise ValueError("column count mismatch")
        self.cols = cols

    @classmethod
    def zero(cls, p: int, nrows: int, ncols: int) -> "FpMatrix":
        return cls(p, nrows, ncols)

    @classmethod
    def identity(cls, p: int, n: int) -> "FpMatrix":
        return cls(p, n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, p: int, a) -> "FpMatrix":
        a = np.asarray(a, dtype=np.int64) % p
        nrows, ncols = a.shape
        cols = []
        for j in range(ncols):
            nz = np.nonzero(a[:, j])[0]
            cols.append({int(i): int(a[i, j]) for i in nz})
        return cls(p, nrows, ncols, cols)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                out[i, j] = v
        return out

    def tolist(self) -> list[list[int]]:
        return self.to_dense().tolist()

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, FpMatrix):
            return NotImplemented
        return (self.p, self.shape) == (other.p, other.shape) and self.cols == other.cols

    def __repr__(self) -> str:
        return f"FpMatrix(p={self.p}, shape={self.shape})"

    def scaled(self, c: int) -> "FpMatrix":
        return FpMatrix(self.p, self.nrows, self.ncols, [{r: c * v for r, v in col.items()} for col in self.cols])

    def transpose(self) -> "FpMatrix":
        cols: list[dict[int, int]] = [{} for _ in range(self.nrows)]
        for j, c in enumerate(self.cols):
            for i, v in c.items():
                cols[i][j] = v
        return FpMatrix(self.p, self.ncols, self.nrows, cols)

    def __matmul__(self, other: "FpMatrix") -> "FpMatrix":
        if self.ncols != other.nrows or self.p != other.p:
            raise ValueError("shape mismatch")
        p = self.p
        out = []
        for c in other.cols:
            acc: dict[int, int] = {}
            for k, v in c.items():
                for i, w in self.cols[k].items():
                    acc[i] = (acc.get(i, 0) + v * w) % p
            out.append({i: v for i, v in acc.items() if v})
        return FpMatrix(p, self.nrows, other.ncols, out)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "FpMatrix":
        pos = {r: i for i, r in enumerate(rows)}
        out = []
        for j in cols:
            out.append({pos[r]: v for r, v in self.cols[j].items() if r in pos})
        return FpMatrix(self.p, len(rows), len(cols), out)


def fp_rank(m: FpMatrix) -> int:
    """Rank over F_p by incremental echelon insertion of the columns."""
    p = m.p
    if p == 2:
        piv: dict[int, int] = {}
        rank = 0
        for c in m.cols:
            v = 0
            for r in c:
                v |= 1 << r
            while v:
                lead = v.bit_length() - 1
                w = piv.get(lead)
                if w is None:
                    piv[lead] = v
                    rank += 1
                    break
                v ^= w
        return rank
    pivd: dict[int, dict[int, int]] = {}
    rank = 0
    for c in m.cols:
        v = dict(c)
        while v:
            lead = max(v)
            w = pivd.get(lead)
            if w is None:
                inv = pow(v[lead], -1, p)
                pivd[lead] = {k: (x * inv) % p for k, x in v.items()}
                rank += 1
                break
            a = v[lead]
            for k, x in w.items():
                y = (v.get(k, 0) - a * x) % p
                if y:
                    v[k] = y
                else:
                    v.pop(k, None)
    return rank


def fp_kernel_dim(m: FpMatrix) -> int:
    return m.ncols - fp_rank(m)


class ChainConditionError(ValueError):
    """Composite of consecutive differentials is nonzero."""


def fp_homology_dim(d_in: FpMatrix, d_out: FpMatrix, check: bool = True) -> int:
    """``dim ker(d_out) - rank(d_in)`` for ``d_in: A -> M``, ``d_out: M -> B``."""
    if d_in.nrows != d_out.ncols:
        raise ValueError("middle dimensions disagree")
    if check and not (d_out @ d_in).is_zero():
        raise ChainConditionError("d_out . d_in != 0")
    return fp_kernel_dim(d_out) - fp_rank(d_in)


# dense helpers, used where explicit bases are needed (homology modules)

def fp_rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    a = np.array(a, dtype=np.int64) % p
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * pow(int(a[r, c]), -1, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        nzr = np.nonzero(col)[0]
        if nzr.size:
            a[nzr] = (a[nzr] - np.outer(col[nzr], a[r])) % p
        pivots.append(c)
        r += 1
    return a[:r], pivots


def fp_nullspace(a: np.ndarray, p: int, ncols: int | None = None) -> np.ndarray:
    """Basis of the right null space of ``a``, as columns of the returned array."""
    a = np.asarray(a, dtype=np.int64)
    n = a.shape[1] if a.size or ncols is None else ncols
    if a.shape[0] == 0:
        return np.eye(n, dtype=np.int64)
    r, piv = fp_rref(a, p)
    free = [j for j in range(n) if j not in set(piv)]
    basis = np.zeros((n, len(free)), dtype=np.int64)
    for k, f in enumerate(free):
        basis[f, k] = 1
        for i, pc in enumerate(piv):
            basis[pc, k] = (-r[i, f]) % p
    return basis


def fp_solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Solve ``a x = b`` (columns of ``b``) for a full-column-rank ``a``."""
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    aug = np.concatenate([a, b], axis=1)
    r, piv = fp_rref(aug, p)
    n = a.shape[1]
    if piv[:n] != list(range(n)) or any(c >= n for c in piv):
        raise ValueError("system is inconsistent or underdetermined")
    return r[:n, n:] % p
