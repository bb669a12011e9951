import random

import pytest

from endotriv.superclass import (SuperclassFn, from_omega_coeffs, idempotent, idempotent_basis_coeffs,
                                 mobius_inversion, omega, omega_matrix)

from conftest import ALL_FIXTURES, poset


def test_omega_examples():
    c4 = poset("cyclic:4", 2)
    assert omega(c4, 1) == (1, 1, 0)
    s3 = poset("s3", 2)
    assert omega(s3, 0) == (1, 0)


@pytest.mark.parametrize("spec,p", ALL_FIXTURES)
def test_omega_of_sylow_is_all_ones(spec, p):
    ps = poset(spec, p)
    assert omega(ps, ps.sylow[0]) == (1,) * len(ps)


def test_idempotent_coefficients():
    c4 = poset("cyclic:4", 2)
    assert idempotent_basis_coeffs(c4, 1) == (-1, 1, 0)
    v4 = poset("klein", 2)
    assert idempotent_basis_coeffs(v4, 4) == (2, -1, -1, -1, 1)
    for spec, p in ALL_FIXTURES:
        ps = poset(spec, p)
        assert idempotent_basis_coeffs(ps, 0) == idempotent(ps, 0)


@pytest.mark.parametrize("spec,p", ALL_FIXTURES)
def test_idempotent_reconstruction(spec, p):
    ps = poset(spec, p)
    total = [0] * len(ps)
    for q in range(len(ps)):
        e = from_omega_coeffs(ps, idempotent_basis_coeffs(ps, q))
        assert e == idempotent(ps, q)
        total = [a + b for a, b in zip(total, e)]
        for q2 in range(len(ps)):
            if q2 != q:
                assert not any(x * y for x, y in zip(e, idempotent(ps, q2)))
    assert total == [1] * len(ps)


def test_mobius_examples():
    assert mobius_inversion(SuperclassFn(poset("cyclic:2", 2), (2, 0))) == (2, 0)
    assert mobius_inversion(SuperclassFn(poset("cyclic:4", 2), (1, 1, 0))) == (0, 1, 0)
    d8 = poset("dihedral:8", 2)
    b = mobius_inversion((1,) * len(d8), d8)
    assert b == idempotent(d8, d8.sylow[0])


@pytest.mark.parametrize("spec,p", ALL_FIXTURES)
def test_w_unitriangular_and_inverse(spec, p):
    om = omega_matrix(poset(spec, p))
    n = len(om)
    for i in range(n):
        assert om.w[i][i] == 1
        for j in range(i):
            assert om.w[i][j] == 0
        for j in range(n):
            assert sum(om.w[i][k] * om.inv[k][j] for k in range(n)) == int(i == j)


@pytest.mark.parametrize("spec,p", ALL_FIXTURES)
def test_mobius_round_trip(spec, p):
    ps = poset(spec, p)
    rng = random.Random(7)
    for _ in range(100):
        f = SuperclassFn(ps, tuple(rng.randint(-50, 50) for _ in range(len(ps))))
        assert from_omega_coeffs(ps, mobius_inversion(f)) == f


def test_superclass_arithmetic_and_length_check():
    ps = poset("cyclic:4", 2)
    f = SuperclassFn(ps, (1, 2, 3))
    g = SuperclassFn(ps, (1, 1, 1))
    assert f - g == (0, 1, 2)
    assert -f == (-1, -2, -3)
    with pytest.raises(ValueError):
        SuperclassFn(ps, (1, 2))
    assert f.to_json()["values"] == [1, 2, 3]
