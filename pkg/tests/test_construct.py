import itertools

import numpy as np
import pytest

from etfforge.construct import (
    BibdParams,
    DracknParams,
    GqParams,
    affine_polyphase,
    brouwer_geometry,
    brouwer_polyphase,
    drackn_from_polyphase,
    example_9_3_3,
    gq_from_polyphase,
    phased_to_polyphase,
    polyphase_from_gq,
    simplex_phased,
)
from etfforge.gf import field_create, prime_power_split
from etfforge.groupring import AbelianGroup, characters_of
from etfforge.polymat import GroupRingMatrix, PolyphaseMatrix


def _bibd_shape(m):
    x = m.modulus_squared()
    return m.cols, int(x.sum(axis=1)[0]), int(x.sum(axis=0)[0])


def test_bibd_params():
    p = BibdParams.from_vk(9, 3)
    assert (p.r, p.b, p.u) == (4, 12, 1)
    assert p.etf_dimension == 6
    p = BibdParams.from_vk(28, 4)
    assert (p.r, p.b, p.u) == (9, 63, 2)
    assert p.etf_dimension == 21
    assert BibdParams.from_vk(7, 3).u is None  # 12/10 is not an integer
    with pytest.raises(ValueError):
        BibdParams.from_vk(4, 1)
    with pytest.raises(ValueError):
        BibdParams.from_vk(3, 3)
    with pytest.raises(ValueError):
        BibdParams.from_vk(8, 3)


def test_gq_drackn_params():
    g = GqParams(2, 4)
    assert (g.n_vertices, g.n_blocks) == (27, 45)
    d = DracknParams(28, 4, 8)
    assert d.delta == -6


def test_simplex_shape_and_entries():
    m = simplex_phased(4)
    assert (m.rows, m.cols) == (6, 4)
    assert m.entry(0, 0) == (0,)
    assert m.entry(0, 1) == (1,)
    assert m.entry(5, 2) == (0,)
    assert m.entry(5, 3) == (1,)
    assert m.entry(0, 2) is None
    with pytest.raises(ValueError):
        simplex_phased(2)


@pytest.mark.parametrize("v", [3, 4, 5, 8])
def test_simplex_gram_at_sign_character(v):
    m = simplex_phased(v)
    gamma = characters_of(m.group)[1]
    phi = m.evaluate(gamma)
    gram = phi.conj().T @ phi
    expected = v * np.eye(v) - np.ones((v, v))
    assert np.max(np.abs(gram - expected)) < 1e-9
    assert np.linalg.matrix_rank(phi) == v - 1


# Gram of the 12x9 example, entered from its printed form: diagonal 4,
# off-diagonal one power of z each (0 means z^0 = 1).
_EXAMPLE_GRAM_EXPONENTS = [
    [None, 0, 0, 0, 1, 2, 0, 2, 1],
    [0, None, 0, 1, 2, 0, 2, 1, 0],
    [0, 0, None, 2, 0, 1, 1, 0, 2],
    [0, 2, 1, None, 0, 0, 0, 1, 2],
    [2, 1, 0, 0, None, 0, 1, 2, 0],
    [1, 0, 2, 0, 0, None, 2, 0, 1],
    [0, 1, 2, 0, 2, 1, None, 0, 0],
    [1, 2, 0, 2, 1, 0, 0, None, 0],
    [2, 0, 1, 1, 0, 2, 0, 0, None],
]


def test_example_9_3_3_matches_printed_gram():
    m = example_9_3_3()
    assert (m.rows, m.cols) == (12, 9)
    gram = m.adjoint() @ m
    expected = np.zeros((9, 9, 3), dtype=np.int64)
    for i in range(9):
        expected[i, i, 0] = 4
        for j in range(9):
            if i != j:
                expected[i, j, _EXAMPLE_GRAM_EXPONENTS[i][j]] = 1
    assert gram == GroupRingMatrix(m.group, expected)


def test_example_9_3_3_is_affine_plane():
    x = example_9_3_3().modulus_squared()
    assert np.array_equal(x.T @ x, 3 * np.eye(9, dtype=np.int64) + np.ones((9, 9), dtype=np.int64))
    assert set(x.sum(axis=1)) == {3}
    assert set(x.sum(axis=0)) == {4}


# hand-derived: over GF(2) the finite-slope fibers are x - y = ij with
# phase j(x+y), and the infinity fiber marks x = j
_AFFINE_2_ROWS = [
    "0 . 0 .",
    ". 0 . 0",
    "0 . . 1",
    ". 0 1 .",
    "0 0 . .",
    ". . 0 0",
]


def test_affine_q2_frozen():
    m = affine_polyphase(2)
    assert m.group == AbelianGroup([2])
    got = []
    for i in range(m.rows):
        cells = []
        for j in range(m.cols):
            e = m.entry(i, j)
            cells.append("." if e is None else str(e[0]))
        got.append(" ".join(cells))
    assert got == _AFFINE_2_ROWS


@pytest.mark.parametrize("q", [2, 3, 4, 5])
def test_affine_is_bibd(q):
    m = affine_polyphase(q)
    assert (m.rows, m.cols) == ((q + 1) * q, q * q)
    v, k, r = _bibd_shape(m)
    assert (v, k, r) == (q * q, q, q + 1)
    x = m.modulus_squared()
    assert np.array_equal(
        x.T @ x, q * np.eye(v, dtype=np.int64) + np.ones((v, v), dtype=np.int64)
    )
    p, _ = prime_power_split(q)
    assert m.group.factors == tuple([p] * m.group.factors.__len__())


@pytest.mark.parametrize("q", [2, 3, 4])
def test_affine_gram_closed_form(q):
    """Gram = q I + the rank-one-phase matrix z^(-(j - j')(y + y'))."""
    m = affine_polyphase(q)
    p, mm = prime_power_split(q)
    fld = field_create(p, mm)
    els = fld.power_ordered_elements()
    group = m.group
    gram = m.adjoint() @ m
    expected = np.zeros((q * q, q * q, group.order), dtype=np.int64)
    for (j1, y1), (j2, y2) in itertools.product(itertools.product(range(q), range(q)), repeat=2):
        c1, c2 = j1 * q + y1, j2 * q + y2
        phase = -((els[j1] - els[j2]) * (els[y1] + els[y2]))
        expected[c1, c2, group.index(phase.coeffs)] += 1
        if c1 == c2:
            expected[c1, c2, 0] += q
    assert gram == GroupRingMatrix(group, expected)


def test_affine_rejects_non_prime_power():
    with pytest.raises(ValueError):
        affine_polyphase(6)


@pytest.mark.parametrize("q", [2, 3])
def test_brouwer_geometry_counts(q):
    geom = brouwer_geometry(q)
    q2, q3 = q * q, q**3
    assert len(geom.vertices) == (q2 + 1) * (q3 + 1)
    assert len(set(geom.vertices)) == len(geom.vertices)
    assert len(geom.ovoid) == q3 + 1
    assert all(v[0] == 0 for v in geom.ovoid)
    assert len(geom.orbit_reps) == q2 * (q2 - q + 1)
    assert len(geom.blocks) == (q + 1) * (q3 + 1)
    assert len({b.members for b in geom.blocks}) == len(geom.blocks)
    for b in geom.blocks:
        assert len(b.members) == q2 + 1
        assert sum(1 for m in b.members if m[0] == 0) == 1  # ovoid is an ovoid
        assert b.ovoid_vertex in b.members
    preferred = [
        r for r in geom.orbit_reps if r[1] == 0 or (r[2] == 0 and r[3] == 0)
    ]
    assert len(preferred) == q2 - q + 1


@pytest.mark.parametrize("q", [2, 3])
def test_brouwer_geometry_is_partial_linear(q):
    geom = brouwer_geometry(q)
    # every vertex on exactly q+1 blocks, every pair on at most one
    counts = {v: 0 for v in geom.vertices}
    for b in geom.blocks:
        for m in b.members:
            counts[m] += 1
    assert set(counts.values()) == {q + 1}
    pair_seen = set()
    for b in geom.blocks:
        for x, y in itertools.combinations(b.members, 2):
            assert (x, y) not in pair_seen
            pair_seen.add((x, y))


def test_brouwer_geometry_guard():
    with pytest.raises(ValueError):
        brouwer_geometry(8)
    with pytest.raises(ValueError):
        brouwer_polyphase(9)


@pytest.mark.parametrize("q", [2, 3, 4])
def test_brouwer_polyphase_is_bibd(q):
    m = brouwer_polyphase(q)
    v_expect = q**3 + 1
    assert (m.rows, m.cols) == (q * q * (q * q - q + 1), v_expect)
    assert m.group == AbelianGroup([q + 1])
    v, k, r = _bibd_shape(m)
    assert (v, k, r) == (v_expect, q + 1, q * q)
    x = m.modulus_squared()
    assert np.array_equal(
        x.T @ x,
        (r - 1) * np.eye(v, dtype=np.int64) + np.ones((v, v), dtype=np.int64),
    )


def test_drackn_from_polyphase_params():
    _, d = drackn_from_polyphase(example_9_3_3())
    assert (d.n, d.f, d.c, d.delta) == (9, 3, 3, -2)
    _, d = drackn_from_polyphase(brouwer_polyphase(3))
    assert (d.n, d.f, d.c, d.delta) == (28, 4, 8, -6)


@pytest.mark.parametrize(
    "make,st",
    [
        (example_9_3_3, (2, 4)),
        (lambda: affine_polyphase(3), (2, 4)),
        (lambda: brouwer_polyphase(2), (2, 4)),
        (lambda: simplex_phased(4), (1, 3)),
    ],
)
def test_gq_lift_shape(make, st):
    m = make()
    z = gq_from_polyphase(m)
    s, t = st
    assert z.shape == ((t + 1) * (s * t + 1), (s + 1) * (s * t + 1))
    assert set(z.sum(axis=1)) == {s + 1}
    assert set(z.sum(axis=0)) == {t + 1}
    # spread: first v rows partition the vertex fibers
    v = m.cols
    assert np.array_equal(
        z[:v], np.kron(np.eye(v, dtype=np.int64), np.ones((1, m.group.order), dtype=np.int64))
    )


def test_gq_roundtrip():
    for make in (example_9_3_3, lambda: affine_polyphase(4), lambda: brouwer_polyphase(2), lambda: simplex_phased(5)):
        m = make()
        assert polyphase_from_gq(gq_from_polyphase(m), m.group) == m


def test_gq_requires_group_order_k():
    m = example_9_3_3()
    bad = PolyphaseMatrix(AbelianGroup([4]), m.support, m.exponents)
    with pytest.raises(ValueError):
        gq_from_polyphase(bad)


def test_polyphase_from_gq_errors():
    m = example_9_3_3()
    z = gq_from_polyphase(m)
    corrupt = z.copy()
    corrupt[9 + 2, 5] ^= 1  # poke inside the first lifted block row
    with pytest.raises(ValueError, match="neither zero nor a translation permutation"):
        polyphase_from_gq(corrupt, m.group)
    nospread = z.copy()
    nospread[0, 0] = 0
    with pytest.raises(ValueError, match="spread"):
        polyphase_from_gq(nospread, m.group)
    with pytest.raises(ValueError, match="divisible"):
        polyphase_from_gq(z[:, :26], m.group)


def test_phased_to_polyphase_roundtrips():
    m = simplex_phased(5)
    gamma = characters_of(m.group)[1]
    assert phased_to_polyphase(m.evaluate(gamma), 2) == m
    m = example_9_3_3()
    gamma = characters_of(m.group)[1]  # z -> exp(2 pi i / 3)
    assert phased_to_polyphase(m.evaluate(gamma), 3) == m


def test_phased_to_polyphase_rejects_foreign_phase():
    phi = np.array([[1.0, np.exp(1j * np.pi / 4)]])
    with pytest.raises(ValueError, match="root of unity"):
        phased_to_polyphase(phi, 3)
    with pytest.raises(ValueError):
        phased_to_polyphase(phi, 1)


def test_phased_to_polyphase_mercedes_benz():
    phi = np.array([[1, -1, 0], [1, 0, -1], [0, 1, -1]], dtype=float)
    m = phased_to_polyphase(phi, 2)
    assert m.entry(0, 0) == (0,)
    assert m.entry(0, 1) == (1,)
    assert m.entry(0, 2) is None
    gram = phi.T @ phi
    assert np.array_equal(gram, 3 * np.eye(3) - np.ones((3, 3)))
