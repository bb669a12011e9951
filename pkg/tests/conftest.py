import pytest

from endotriv.builtin import builtin

# (builtin spec, prime) pairs used across the suite
P_GROUPS = [
    ("cyclic:2", 2), ("cyclic:3", 3), ("cyclic:4", 2), ("cyclic:8", 2), ("cyclic:9", 3),
    ("klein", 2), ("elemab:3,2", 3), ("dihedral:8", 2), ("quaternion:8", 2),
]
MIXED = [("s3", 3), ("s3", 2), ("frobenius:20", 5)]
ALL_FIXTURES = P_GROUPS + MIXED

_cache = {}


def group(spec):
    """Builtin groups are cached so lattices and posets are shared between tests."""
    if spec not in _cache:
        _cache[spec] = builtin(spec)
    return _cache[spec]


def poset(spec, p):
    return group(spec).lattice.p_subposet(p)


@pytest.fixture
def C2():
    return group("cyclic:2")


@pytest.fixture
def C3():
    return group("cyclic:3")


@pytest.fixture
def C4():
    return group("cyclic:4")


@pytest.fixture
def V4():
    return group("klein")


@pytest.fixture
def S3():
    return group("s3")


def transport_brauer_marks(b, proj, marks):
    """Re-index h-marks of a Brauer construction at a normal subgroup ``N`` onto ``proj.target``.

    The Brauer construction lives over ``N_G(N)/N = G/N`` realised by its own
    permutation group; ``proj`` realises the same quotient independently.
    """
    qb = b.quotient
    src = b.group.lattice.p_subposet(b.p)
    tgt = proj.target.lattice.p_subposet(b.p)
    out = [None] * len(tgt)
    for i in range(len(src)):
        parent_mask = 0
        for e in src.rep(i).members:
            for x in qb.cosets[qb.from_perm_index[e]]:
                parent_mask |= 1 << x
        out[tgt.index_of_mask(proj.image_mask(parent_mask))] = marks[i]
    return tuple(out)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
