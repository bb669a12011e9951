import math
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from endotriv.linalg import (AbelianInvariants, ChainConditionError, FpMatrix, IntegerLattice,
                             fp_homology_dim, fp_nullspace, fp_rank, fp_rref, hnf, integer_kernel,
                             lattice_quotient, snf_invariants, solve_congruence_lattice, transpose)

small_ints = st.integers(-6, 6)


def int_matrices(max_rows=5, max_cols=5):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(small_ints, min_size=c, max_size=c), min_size=r, max_size=r)))


def columns(m):
    return transpose(m) if m and m[0] else []


def test_hnf_examples():
    assert hnf([[2, 0], [0, 2]]) == [[2, 0], [0, 2]]
    assert hnf([[1, 1], [1, 1]]) == [[1], [1]]
    assert hnf([[1, 1], [1, 1]], pad=True) == [[1, 0], [1, 0]]
    eye = [[int(i == j) for j in range(3)] for i in range(3)]
    assert hnf(eye) == eye


@settings(max_examples=50, deadline=None)
@given(int_matrices())
def test_hnf_idempotent_and_span_preserving(m):
    h = hnf(m)
    assert hnf(h) == h
    n = len(m)
    original = IntegerLattice(n, columns(m))
    reduced = IntegerLattice(n, columns(h))
    assert all(c in reduced for c in columns(m))
    assert all(c in original for c in columns(h))


def test_snf_examples():
    assert snf_invariants([[1, 0], [0, 2]]) == AbelianInvariants((2,), 0)
    assert snf_invariants([[2]]) == AbelianInvariants((2,), 0)
    assert snf_invariants([[1, 1], [1, -1]]) == AbelianInvariants((2,), 0)


def _sympy_invariants(m):
    factors = [abs(int(x)) for x in invariant_factors(Matrix(m), domain=ZZ) if x != 0]
    return tuple(d for d in factors if d > 1), len(m) - len(factors)


@settings(max_examples=60, deadline=None)
@given(int_matrices())
def test_snf_matches_sympy(m):
    inv = snf_invariants(m)
    assert (inv.torsion, inv.free_rank) == _sympy_invariants(m)


def _random_unimodular(n, rng):
    u = np.eye(n, dtype=object)
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i != j:
            u[i] = u[i] + rng.randint(-2, 2) * u[j]
    return u


@settings(max_examples=40, deadline=None)
@given(int_matrices(4, 4), st.integers(0, 10 ** 6))
def test_snf_unimodular_invariance(m, seed):
    rng = random.Random(seed)
    a = np.array(m, dtype=object)
    left = _random_unimodular(a.shape[0], rng)
    right = _random_unimodular(a.shape[1], rng)
    b = (left.dot(a)).dot(right)
    assert snf_invariants(b.tolist()) == snf_invariants(m)


def test_abelian_invariants_validation():
    with pytest.raises(ValueError):
        AbelianInvariants((2, 3), 0)
    assert str(AbelianInvariants((2,), 2)) == "Z^2 + Z/2"
    assert str(AbelianInvariants((), 0)) == "0"


def test_integer_kernel():
    ker = integer_kernel([[1, -1, 0]], 3)
    lat = IntegerLattice(3, ker)
    assert lat == IntegerLattice(3, [[1, 1, 0], [0, 0, 1]])


def test_congruence_examples():
    lat = solve_congruence_lattice(2, congruences=[((1, -1), 2)])
    assert lat == IntegerLattice(2, [[1, 1], [2, 0]])
    assert lat.basis == ((1, 1), (0, 2))
    assert solve_congruence_lattice(2, equalities=[(1, -1)]).basis == ((1, 1),)
    assert solve_congruence_lattice(1, congruences=[((1,), 4)]).basis == ((4,),)


def test_congruence_rejects_bad_input():
    with pytest.raises(ValueError):
        solve_congruence_lattice(2, congruences=[((1, 1), 0)])
    with pytest.raises(ValueError):
        solve_congruence_lattice(2, equalities=[(1, 1, 1)])


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.tuples(
    st.just(n),
    st.lists(st.tuples(st.lists(small_ints, min_size=n, max_size=n), st.integers(1, 8)), max_size=3))))
def test_congruence_lattice_properties(data):
    n, congs = data
    lat = solve_congruence_lattice(n, congruences=congs)
    for v in lat.basis:
        for row, mod in congs:
            assert sum(a * b for a, b in zip(row, v)) % mod == 0
    m = math.lcm(*[mod for _, mod in congs]) if congs else 1
    for i in range(n):
        assert [m * int(i == j) for j in range(n)] in lat
    assert lat.rank == n


def test_lattice_quotient_examples():
    assert lattice_quotient(2, IntegerLattice(2, [[1, 1], [0, 4]])) == AbelianInvariants((4,), 0)
    assert lattice_quotient(2, IntegerLattice(2, [[1, 1]])) == AbelianInvariants((), 1)
    assert lattice_quotient(3, IntegerLattice.full(3)).is_trivial


def test_lattice_index_and_subset():
    a = IntegerLattice(2, [[1, 1], [0, 4]])
    b = IntegerLattice(2, [[1, 1], [0, 2]])
    assert a.index() == 4 and b.index() == 2
    assert a.issubset(b) and not b.issubset(a)
    assert IntegerLattice(2, [[1, 1]]).index() is None


def test_fp_homology_examples():
    z11 = FpMatrix.zero(2, 1, 0)
    z01 = FpMatrix.zero(2, 0, 1)
    assert fp_homology_dim(z11, z01) == 1
    aug = FpMatrix.from_dense(2, [[1, 1]])
    assert fp_homology_dim(FpMatrix.zero(2, 2, 0), aug) == 1
    assert fp_homology_dim(FpMatrix.identity(3, 2), FpMatrix.zero(3, 0, 2)) == 0


def test_fp_homology_rejects_non_complex():
    with pytest.raises(ChainConditionError):
        fp_homology_dim(FpMatrix.identity(2, 1), FpMatrix.identity(2, 1))


def _dense_rank(a, p):
    return len(fp_rref(a, p)[1]) if a.size else 0


fp_cases = st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 7), st.integers(1, 7), st.integers(0, 10 ** 6))


@settings(max_examples=80, deadline=None)
@given(fp_cases)
def test_sparse_rank_matches_dense(case):
    p, r, c, seed = case
    rng = np.random.default_rng(seed)
    a = rng.integers(0, p, size=(r, c)) * (rng.random((r, c)) < 0.5)
    assert fp_rank(FpMatrix.from_dense(p, a)) == _dense_rank(a, p)
    assert fp_rank(FpMatrix.from_dense(p, a).transpose()) == _dense_rank(a, p)


@settings(max_examples=60, deadline=None)
@given(fp_cases)
def test_rank_nullity_bookkeeping(case):
    p, r, c, seed = case
    rng = np.random.default_rng(seed)
    d_out = rng.integers(0, p, size=(r, c))
    ker = fp_nullspace(d_out, p, c)
    # d_in: a map onto part of the kernel, so that d_out d_in = 0
    k = ker.shape[1]
    d_in = (ker @ rng.integers(0, p, size=(k, 3))) % p if k else np.zeros((c, 3), dtype=np.int64)
    A, B = FpMatrix.from_dense(p, d_in), FpMatrix.from_dense(p, d_out)
    assert fp_homology_dim(A, B) + fp_rank(A) + fp_rank(B) == c


def test_fp_matrix_product_and_submatrix():
    a = FpMatrix.from_dense(3, [[1, 2], [0, 1]])
    b = FpMatrix.from_dense(3, [[2, 0], [1, 1]])
    assert (a @ b).tolist() == [[1, 2], [1, 1]]
    assert a.submatrix([0], [1]).tolist() == [[2]]
    assert a.transpose().tolist() == [[1, 0], [2, 1]]
