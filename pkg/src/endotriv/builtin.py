"""Fixed permutation generators for the standard small groups.

``--builtin`` names accepted by the CLI:

    cyclic:n       n-cycle on n points
    dihedral:2n    symmetries of the n-gon (order 2n) on n points
    quaternion:8   Q8 in its regular representation on 8 points
    elemab:p,k     (Z/p)^k as k disjoint p-cycles on p*k points
    klein          V4 = <(0 1)(2 3), (0 2)(1 3)>
    s3             S3 on 3 points
    frobenius:20   x -> 2x, x -> x+1 on Z/5
"""

from __future__ import annotations

from .groups import GroupError, PermGroup


def cyclic(n: int) -> PermGroup:
    if n == 1:
        return PermGroup(1, [])
    return PermGroup(n, [[(i + 1) % n for i in range(n)]])


def dihedral(order: int) -> PermGroup:
    if order % 2 or order < 4:
        raise GroupError("dihedral order must be even and >= 4")
    n = order // 2
    if n == 2:
        return klein()
    rot = [(i + 1) % n for i in range(n)]
    ref = [(-i) % n for i in range(n)]
    return PermGroup(n, [rot, ref])


def quaternion8() -> PermGroup:
    # elements 0..7 = 1, i, j, k, -1, -i, -j, -k; left multiplication by i and j
    names = ["1", "i", "j", "k"]
    mult = {
        ("1", x): (1, x) for x in names
    }
    mult.update({
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
    })

    def index(sign: int, name: str) -> int:
        return names.index(name) + (0 if sign == 1 else 4)

    gens = []
    for a in ("i", "j"):
        perm = []
        for e in range(8):
            sign = 1 if e < 4 else -1
            s, name = mult[(a, names[e % 4])]
            perm.append(index(sign * s, name))
        gens.append(perm)
    return PermGroup(8, gens)


def elementary_abelian(p: int, k: int) -> PermGroup:
    gens = []
    for b in range(k):
        perm = list(range(p * k))
        for i in range(p):
            perm[b * p + i] = b * p + (i + 1) % p
        gens.append(perm)
    return PermGroup(p * k, gens)


def klein() -> PermGroup:
    return PermGroup(4, [[1, 0, 3, 2], [2, 3, 0, 1]])


def symmetric3() -> PermGroup:
    return PermGroup(3, [[1, 0, 2], [1, 2, 0]])


def frobenius20() -> PermGroup:
    return PermGroup(5, [[(2 * x) % 5 for x in range(5)], [(x + 1) % 5 for x in range(5)]])


def direct_product(a: PermGroup, b: PermGroup) -> PermGroup:
    gens = [list(s) + [a.degree + x for x in range(b.degree)] for s in a.generators]
    gens += [list(range(a.degree)) + [a.degree + x for x in s] for s in b.generators]
    return PermGroup(a.degree + b.degree, gens)


def builtin(spec: str) -> PermGroup:
    name, _, arg = spec.partition(":")
    name = name.strip().lower()
    try:
        if name == "cyclic":
            return cyclic(int(arg))
        if name == "dihedral":
            return dihedral(int(arg))
        if name == "quaternion":
            if arg not in ("", "8"):
                raise GroupError("only quaternion:8 is built in")
            return quaternion8()
        if name == "elemab":
            p, k = (int(x) for x in arg.split(","))
            return elementary_abelian(p, k)
        if name == "klein":
            return klein()
        if name == "s3":
            return symmetric3()
        if name == "frobenius":
            if arg not in ("", "20"):
                raise GroupError("only frobenius:20 is built in")
            return frobenius20()
    except ValueError:
        raise GroupError(f"bad builtin argument: {spec!r}") from None
    raise GroupError(f"unknown builtin group: {spec!r}")
