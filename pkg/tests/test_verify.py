import math

import numpy as np
import pytest

from etfforge import verify
from etfforge.construct import (
    affine_polyphase,
    brouwer_geometry,
    brouwer_polyphase,
    drackn_from_polyphase,
    example_9_3_3,
    gq_from_polyphase,
    simplex_phased,
)
from etfforge.groupring import characters_of, real_character
from etfforge.verify import (
    ScreenRow,
    count_blocks_through_vertex,
    screen_parameters,
    verify_bibd,
    verify_drackn,
    verify_etf_numeric,
    verify_gq_axioms,
    verify_polyphase_algebraic,
    verify_polyphase_combinatorial,
    verify_srg_collinearity,
)

FANO = np.array(
    [
        [1, 1, 0, 1, 0, 0, 0],
        [0, 1, 1, 0, 1, 0, 0],
        [0, 0, 1, 1, 0, 1, 0],
        [0, 0, 0, 1, 1, 0, 1],
        [1, 0, 0, 0, 1, 1, 0],
        [0, 1, 0, 0, 0, 1, 1],
        [1, 0, 1, 0, 0, 0, 1],
    ],
    dtype=np.int64,
)


@pytest.fixture(scope="module")
def families():
    return {
        "example933": example_9_3_3(),
        "affine2": affine_polyphase(2),
        "affine3": affine_polyphase(3),
        "affine4": affine_polyphase(4),
        "brouwer2": brouwer_polyphase(2),
        "brouwer3": brouwer_polyphase(3),
        "simplex5": simplex_phased(5),
    }


def _design_order(m):
    x = m.modulus_squared()
    k = int(x.sum(axis=1)[0])
    return k - 1, (m.cols - 1) // (k - 1)


def test_bibd_passes_on_fano():
    rep = verify_bibd(FANO, 7, 3)
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert "pair-balance" in names and "fisher" in names


def test_bibd_rejects_bad_k():
    with pytest.raises(ValueError):
        verify_bibd(np.eye(4, dtype=np.int64), 4, 1)
    with pytest.raises(ValueError):
        verify_bibd(FANO, 3, 3)


def test_bibd_replication_must_be_integral():
    rep = verify_bibd(np.ones((8, 8), dtype=np.int64), 8, 3)
    assert not rep.passed
    assert any(c.name == "replication-integral" and not c.passed for c in rep.checks)


def test_bibd_flags_corruption_with_witness():
    x = FANO.copy()
    x[2, 0] = 1
    rep = verify_bibd(x, 7, 3)
    assert not rep.passed
    bad = {c.name: c for c in rep.checks if not c.passed}
    assert "row-sums" in bad and bad["row-sums"].witness == (2,)
    assert "col-sums" in bad and bad["col-sums"].witness == (0,)


def test_bibd_fisher_violation():
    # four rows of the Fano plane: pair balance breaks and so does b >= v
    rep = verify_bibd(FANO[:4], 7, 3)
    assert not rep.passed
    fisher = next(c for c in rep.checks if c.name == "fisher")
    assert not fisher.passed and fisher.witness == (4, 7)


def test_bibd_rejects_non_binary_entries():
    x = FANO.copy()
    x[0, 0] = 2
    rep = verify_bibd(x, 7, 3)
    assert any(c.name == "zero-one" and not c.passed for c in rep.checks)


def test_polyphase_verifiers_pass_on_all_families(families):
    for name, m in families.items():
        assert verify_polyphase_combinatorial(m).passed, name
        assert verify_polyphase_algebraic(m).passed, name


def test_polyphase_verifiers_catch_exponent_mutation(families):
    m = families["example933"].replaced(3, 0, (1,))
    comb = verify_polyphase_combinatorial(m)
    alg = verify_polyphase_algebraic(m)
    assert not comb.passed and not alg.passed
    comb_bad = next(c for c in comb.checks if not c.passed)
    alg_bad = next(c for c in alg.checks if not c.passed)
    assert comb_bad.witness is not None
    assert alg_bad.witness is not None


def test_polyphase_verifiers_catch_support_mutation(families):
    # moving support breaks the underlying design before any phases matter
    m = families["example933"]
    moved = m.replaced(3, 0, None).replaced(3, 1, (0,))
    for rep in (verify_polyphase_combinatorial(moved), verify_polyphase_algebraic(moved)):
        assert not rep.passed
        assert any(c.name.startswith("bibd:") and not c.passed for c in rep.checks)


def test_exact_and_numeric_routes_agree(families):
    rng = np.random.default_rng(7)
    for name, m in families.items():
        exact = verify_polyphase_combinatorial(m).passed
        gammas = [g for g in characters_of(m.group) if not g.is_trivial]
        numeric = all(verify_etf_numeric(m.evaluate(g)).passed for g in gammas)
        assert exact and numeric, name
        i = int(rng.integers(m.rows))
        js = np.nonzero(m.support[i])[0]
        j = int(js[rng.integers(len(js))])
        old = m.entry(i, j)
        shift = tuple((old[l] + 1) % q for l, q in enumerate(m.group.factors))
        bad = m.replaced(i, j, shift)
        exact = verify_polyphase_combinatorial(bad).passed
        numeric = all(verify_etf_numeric(bad.evaluate(g)).passed for g in gammas)
        assert not exact and not numeric, name


def test_etf_numeric_on_every_nontrivial_character(families):
    m = families["example933"]
    for gamma in characters_of(m.group):
        if gamma.is_trivial:
            continue
        rep = verify_etf_numeric(m.evaluate(gamma))
        assert rep.passed
        n = rep.numerics
        assert (n.n, n.d) == (9, 6)
        assert n.coherence == pytest.approx(0.25, abs=1e-12)
        assert n.welch == pytest.approx(math.sqrt(3 / 48), abs=1e-12)


def test_etf_numeric_real_characters(families):
    ndims = {"brouwer3": (21, 28), "affine4": (10, 16)}
    for name, want in ndims.items():
        m = families[name]
        phi = m.evaluate(real_character(m.group))
        assert np.max(np.abs(phi.imag)) < 1e-12
        rep = verify_etf_numeric(phi)
        assert rep.passed
        assert (rep.numerics.d, rep.numerics.n) == want


def test_etf_numeric_orthonormal_is_vacuous():
    rep = verify_etf_numeric(np.eye(4))
    assert rep.passed
    assert rep.numerics.welch == 0.0 and rep.numerics.delta is None
    sig = next(c for c in rep.checks if c.name == "signature-quadratic")
    assert "vacuous" in sig.info


def test_etf_numeric_rejects_zero_column():
    phi = np.eye(3, dtype=np.complex128)
    phi[:, 1] = 0
    with pytest.raises(ValueError):
        verify_etf_numeric(phi)


def test_etf_numeric_fails_on_generic_frame():
    rng = np.random.default_rng(3)
    phi = rng.normal(size=(6, 9)) + 1j * rng.normal(size=(6, 9))
    phi /= np.linalg.norm(phi, axis=0)
    rep = verify_etf_numeric(phi)
    assert not rep.passed
    gram = phi.conj().T @ phi
    off = np.abs(gram[~np.eye(9, dtype=bool)])
    # Welch lower-bounds worst-case coherence, with equality only for ETFs
    assert off.max() > math.sqrt((9 - 6) / (6 * 8)) + 1e-6


def test_welch_failure_reported_when_angles_wrong(families):
    m = families["example933"]
    gamma = [g for g in characters_of(m.group) if not g.is_trivial][0]
    phi = m.evaluate(gamma)
    phi[:, 0] *= math.sqrt(2)
    rep = verify_etf_numeric(phi)
    bad = {c.name for c in rep.checks if not c.passed}
    assert "equal-norms" in bad


def test_naimark_complement_dimension(families):
    m = families["example933"]
    gamma = [g for g in characters_of(m.group) if not g.is_trivial][0]
    rep = verify_etf_numeric(m.evaluate(gamma))
    n, d, delta = rep.numerics.n, rep.numerics.d, rep.numerics.delta
    # negating the signature swaps delta for -delta and d for n - d
    d_flip = n / 2 * (1 + delta / math.sqrt(delta * delta + 4 * (n - 1)))
    assert d_flip == pytest.approx(n - d, abs=1e-9)
    gram = m.evaluate(gamma).conj().T @ m.evaluate(gamma)
    s = (gram - rep.numerics.norm * np.eye(n)) / rep.numerics.gram_modulus
    lhs = (-s) @ (-s)
    rhs = -delta * (-s) + (n - 1) * np.eye(n)
    assert np.max(np.abs(lhs - rhs)) < 1e-9


def test_gq_axioms_and_duality(families):
    for name in ("example933", "brouwer2", "brouwer3"):
        m = families[name]
        s, t = _design_order(m)
        z = gq_from_polyphase(m)
        rep = verify_gq_axioms(z, s, t, check_spread=True)
        assert rep.passed, rep.as_text()
        dual = verify_gq_axioms(z.T, t, s)
        assert dual.passed, name


def test_gq_axioms_dimension_mismatch(families):
    z = gq_from_polyphase(families["example933"])
    rep = verify_gq_axioms(z, 4, 2)
    assert not rep.passed
    assert rep.checks[0].name == "dimensions" and not rep.checks[0].passed


def test_gq_axioms_flags_flipped_cell(families):
    z = gq_from_polyphase(families["example933"]).copy()
    z[20, 5] ^= 1
    rep = verify_gq_axioms(z, 2, 4)
    bad = {c.name for c in rep.checks if not c.passed}
    assert {"row-sums", "col-sums"} & bad


def test_gq_spread_check(families):
    z = gq_from_polyphase(families["example933"])
    shuffled = np.vstack([z[9:], z[:9]])
    rep = verify_gq_axioms(shuffled, 2, 4, check_spread=True)
    assert any(c.name == "spread" and not c.passed for c in rep.checks)
    assert verify_gq_axioms(shuffled, 2, 4).passed  # still a GQ without the spread


def test_gq_sparse_path_matches_dense(families, monkeypatch):
    z = gq_from_polyphase(families["example933"])
    dense = verify_gq_axioms(z, 2, 4, check_spread=True)
    monkeypatch.setattr(verify, "SPARSE_CELL_CUTOFF", 10)
    sparse = verify_gq_axioms(z, 2, 4, check_spread=True)
    assert dense.passed and sparse.passed
    assert [c.name for c in dense.checks] == [c.name for c in sparse.checks]
    zbad = z.copy()
    zbad[11, 4] ^= 1
    zbad[11, 7] ^= 1  # keep row sum, break pair intersections
    rep = verify_gq_axioms(zbad, 2, 4)
    assert not rep.passed


def test_srg_parameters(families):
    z = gq_from_polyphase(families["example933"])
    rep = verify_srg_collinearity(z, 2, 4)
    assert rep.passed and rep.subject == "SRG(27,10,1,5)"
    z = gq_from_polyphase(families["brouwer3"])
    rep = verify_srg_collinearity(z, 3, 9)
    assert rep.passed and rep.subject == "SRG(112,30,2,10)"


def test_srg_propagates_gq_failure(families):
    z = gq_from_polyphase(families["example933"]).copy()
    z[0, 0] ^= 1
    rep = verify_srg_collinearity(z, 2, 4)
    assert not rep.passed
    assert "GQ axioms failed" in rep.subject


def test_drackn_families(families):
    for name, want in [("example933", (9, 3, 3, -2)), ("brouwer3", (28, 4, 8, -6))]:
        a, params = drackn_from_polyphase(families[name])
        assert (params.n, params.f, params.c, params.delta) == want
        rep = verify_drackn(a, params.n, params.f, params.c)
        assert rep.passed, rep.as_text()
        sigs = [c for c in rep.checks if c.name.startswith("signature@")]
        assert len(sigs) == params.f - 1


def test_drackn_shape_guards(families):
    a, params = drackn_from_polyphase(families["example933"])
    with pytest.raises(ValueError):
        verify_drackn(a, params.n + 1, params.f, params.c)
    with pytest.raises(ValueError):
        verify_drackn(a, params.n, params.f + 1, params.c)


def test_drackn_catches_tampering(families):
    a, params = drackn_from_polyphase(families["example933"])
    a.coeffs[0, 1, :] = 0
    a.coeffs[0, 1, 0] = 2
    rep = verify_drackn(a, params.n, params.f, params.c)
    bad = {c.name for c in rep.checks if not c.passed}
    assert "monomial-off-diagonal" in bad and "self-adjoint" in bad


def test_screen_rows_for_smallest_block_sizes():
    rows = screen_parameters(3, 4)
    assert rows == [
        ScreenRow(v=9, k=3, r=4, b=12, u=1, real_feasible=False),
        ScreenRow(v=16, k=4, r=5, b=20, u=3, real_feasible=True),
        ScreenRow(v=28, k=4, r=9, b=63, u=2, real_feasible=True),
        ScreenRow(v=64, k=4, r=21, b=336, u=1, real_feasible=True),
    ]


def test_screen_row_counts_by_block_size():
    rows = screen_parameters(3, 9)
    by_k = {}
    for row in rows:
        by_k[row.k] = by_k.get(row.k, 0) + 1
    assert by_k == {3: 1, 4: 3, 5: 5, 6: 7, 7: 7, 8: 7, 9: 7}
    assert len(rows) == 37


def test_screen_rows_satisfy_dimension_identity():
    for row in screen_parameters(3, 9):
        # d = vr/(r+k-1) must be integral with v - d = (k-1)^2 - u
        assert (row.v * row.r) % (row.r + row.k - 1) == 0
        d = row.v * row.r // (row.r + row.k - 1)
        assert row.v - d == (row.k - 1) ** 2 - row.u
        assert row.b * row.k == row.v * row.r
        assert row.v - 1 == row.r * (row.k - 1)


def test_screen_range_guards():
    assert screen_parameters(2, 2) == []
    with pytest.raises(ValueError):
        screen_parameters(1, 5)
    with pytest.raises(ValueError):
        screen_parameters(3, 21)
    with pytest.raises(ValueError):
        screen_parameters(5, 3)


def test_count_blocks_through_vertex():
    geom = brouwer_geometry(2)
    counts = {count_blocks_through_vertex(geom, v) for v in geom.vertices}
    assert counts == {3}
    with pytest.raises(ValueError):
        count_blocks_through_vertex(geom, (9, 9, 9, 9))


def test_report_rendering(families):
    rep = verify_polyphase_combinatorial(families["example933"])
    text = rep.as_text()
    assert text.startswith("PASS polyphase combinatorial")
    assert "triple-products" in text
    d = rep.as_dict()
    assert d["passed"] is True
    assert all(set(c) == {"name", "passed", "witness", "residual", "info"} for c in d["checks"])


def test_failing_checks_carry_witness_or_residual(families):
    m = families["example933"].replaced(0, 0, (2,))
    reports = [
        verify_polyphase_combinatorial(m),
        verify_polyphase_algebraic(m),
        verify_etf_numeric(m.evaluate([g for g in characters_of(m.group) if not g.is_trivial][0])),
    ]
    for rep in reports:
        assert not rep.passed
        for c in rep.checks:
            if not c.passed:
                assert c.witness is not None or c.residual is not None
