"""Checkers for every identity the constructions promise.

Each verifier returns a VerificationReport: a list of named checks,
each pass/fail with a witness (index of the first offence) or a
residual (largest deviation).  Integer checks are authoritative and
exact; numeric checks use absolute tolerance 1e-9 on max entry
deviation and a relative singular value cutoff of 1e-8 for rank.

The exact and numeric routes are deliberately independent: the
combinatorial verifier counts triple products entry by entry, the
algebraic verifier multiplies matrices out over the group ring, and
the numeric verifier only ever sees evaluated complex matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .groupring import AbelianGroup, characters_of
from .polymat import GroupRingMatrix, PolyphaseMatrix

NUMERIC_TOL = 1e-9
RANK_REL_TOL = 1e-8
SPARSE_CELL_CUTOFF = 10**6


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: tuple | None = None
    residual: float | None = None
    info: str = ""

    def line(self) -> str:
        bits = [("PASS" if self.passed else "FAIL"), self.name]
        if self.residual is not None:
            bits.append(f"residual={self.residual:.3g}")
        if self.witness is not None:
            bits.append(f"witness={self.witness}")
        if self.info:
            bits.append(f"[{self.info}]")
        return " ".join(bits)


@dataclass
class VerificationReport:
    subject: str
    checks: list[CheckResult] = dc_field(default_factory=list)
    numerics: "EtfNumerics | None" = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, name, passed, witness=None, residual=None, info=""):
        if not passed and witness is None and residual is None:
            witness = ()
        self.checks.append(CheckResult(name, bool(passed), witness, residual, info))

    def extend(self, other: "VerificationReport", prefix: str = ""):
        for c in other.checks:
            self.checks.append(
                CheckResult(prefix + c.name, c.passed, c.witness, c.residual, c.info)
            )

    def as_text(self) -> str:
        head = f"{'PASS' if self.passed else 'FAIL'} {self.subject}"
        return "\n".join([head] + ["  " + c.line() for c in self.checks])

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "passed": self.passed,
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "witness": list(c.witness) if c.witness is not None else None,
                    "residual": c.residual,
                    "info": c.info,
                }
                for c in self.checks
            ],
        }


@dataclass
class EtfNumerics:
    n: int
    d: int
    norm: float
    gram_modulus: float
    frame_constant: float
    welch: float
    coherence: float
    delta: float | None


def _first_bad(mask) -> tuple | None:
    idx = np.nonzero(mask)
    if len(idx[0]) == 0:
        return None
    return tuple(int(a[0]) for a in idx)


def verify_bibd(x: np.ndarray, v: int, k: int) -> VerificationReport:
    """Row sums k, column sums r = (v-1)/(k-1), every pair of columns
    meeting exactly once, and Fisher's bound."""
    if k < 2:
        raise ValueError(f"block size k = {k} must be >= 2")
    if v <= k:
        raise ValueError(f"need v > k, got v = {v}, k = {k}")
    x = np.asarray(x)
    rep = VerificationReport(subject=f"BIBD(v={v}, k={k}, lambda=1)")
    if x.ndim != 2 or x.shape[1] != v:
        rep.add("dimensions", False, witness=tuple(x.shape))
        return rep
    rep.add("dimensions", True)
    if (v - 1) % (k - 1):
        rep.add("replication-integral", False, witness=(v, k))
        return rep
    r = (v - 1) // (k - 1)
    rep.add("replication-integral", True, info=f"r={r}")
    if set(np.unique(x)) - {0, 1}:
        rep.add("zero-one", False, witness=_first_bad((x != 0) & (x != 1)))
        return rep
    rep.add("zero-one", True)
    rows = x.sum(axis=1)
    rep.add("row-sums", bool(np.all(rows == k)), witness=_first_bad(rows != k))
    cols = x.sum(axis=0)
    rep.add("col-sums", bool(np.all(cols == r)), witness=_first_bad(cols != r))
    gram = x.T @ x
    want = (r - 1) * np.eye(v, dtype=np.int64) + np.ones((v, v), dtype=np.int64)
    rep.add("pair-balance", bool(np.array_equal(gram, want)), witness=_first_bad(gram != want))
    rep.add("fisher", x.shape[0] >= v,
            witness=None if x.shape[0] >= v else (x.shape[0], v))
    return rep


def _polyphase_frame(m: PolyphaseMatrix):
    """Shared plumbing: incidence, (v, k, r), the BIBD report and the
    divisibility check; returns None for the rest when anything fails."""
    x = m.modulus_squared()
    v = m.cols
    k = int(x.sum(axis=1)[0]) if m.rows else 0
    rep = VerificationReport(subject="")
    try:
        bibd = verify_bibd(x, v, k)
    except ValueError as exc:
        rep.add("bibd:parameters", False, info=str(exc))
        return rep, x, v, k, None, False
    rep.extend(bibd, prefix="bibd:")
    f = m.group.order
    divisible = k % f == 0
    rep.add("group-order-divides-k", divisible,
            witness=None if divisible else (f, k), info=f"f={f}, k={k}")
    ok = bibd.passed and divisible
    r = (v - 1) // (k - 1) if ok else None
    return rep, x, v, k, r, ok


def verify_polyphase_combinatorial(m: PolyphaseMatrix) -> VerificationReport:
    """For every zero entry (i, j), the k triple products
    z^(i,j') z^(i',j')~ z^(i',j) over the blocks j' of i must cover each
    group element exactly k/f times."""
    rep, x, v, k, r, ok = _polyphase_frame(m)
    rep.subject = f"polyphase combinatorial ({m.rows}x{m.cols} over {m.group.name()})"
    if not ok:
        return rep
    g = m.group
    f = g.order
    quota = k // f
    add, neg = g.add_index, g.neg_index
    common_row = np.full((v, v), -1, dtype=np.intp)
    supports = [np.nonzero(x[i])[0] for i in range(m.rows)]
    for i, sup in enumerate(supports):
        for a_pos in range(len(sup)):
            for b_pos in range(a_pos + 1, len(sup)):
                a, b = sup[a_pos], sup[b_pos]
                common_row[a, b] = i
                common_row[b, a] = i
    exps = m.exponents
    bad = None
    for i in range(m.rows):
        zeros = np.nonzero(x[i] == 0)[0]
        if len(zeros) == 0:
            continue
        counts = np.zeros((len(zeros), f), dtype=np.int64)
        for jp in supports[i]:
            ip = common_row[jp, zeros]
            g_vec = add[add[exps[i, jp], neg[exps[ip, jp]]], exps[ip, zeros]]
            np.add.at(counts, (np.arange(len(zeros)), g_vec), 1)
        off = np.nonzero(np.any(counts != quota, axis=1))[0]
        if len(off):
            bad = (i, int(zeros[off[0]]))
            break
    rep.add("triple-products", bad is None, witness=bad, info=f"quota={quota}")
    return rep


def verify_polyphase_algebraic(m: PolyphaseMatrix) -> VerificationReport:
    """Exact group-ring identity: Phi Phi* Phi = (r+k-1) Phi + (k/f) G (J - X)
    where G is the sum of all group elements."""
    rep, x, v, k, r, ok = _polyphase_frame(m)
    rep.subject = f"polyphase algebraic ({m.rows}x{m.cols} over {m.group.name()})"
    if not ok:
        return rep
    grm = m.to_group_ring()
    lhs = grm @ (m.adjoint() @ grm)
    rhs = (r + k - 1) * grm + GroupRingMatrix.all_geometric(
        m.group, (k // m.group.order) * (1 - x)
    )
    diff = lhs.first_difference(rhs)
    rep.add("triple-identity", diff is None, witness=diff, info=f"a={r + k - 1}")
    return rep


def verify_etf_numeric(phi: np.ndarray, tol: float = NUMERIC_TOL) -> VerificationReport:
    """Equal norms, equiangularity, tightness of the Gram, and Welch-bound
    equality, plus the signature quadratic when off-diagonals are nonzero."""
    phi = np.asarray(phi, dtype=np.complex128)
    if phi.ndim != 2 or phi.shape[1] == 0:
        raise ValueError("expected a nonempty 2-d matrix")
    n = phi.shape[1]
    norms = np.sum(np.abs(phi) ** 2, axis=0)
    if np.min(norms) <= tol:
        raise ValueError(f"column {int(np.argmin(norms))} is numerically zero")
    rep = VerificationReport(subject=f"numeric ETF ({phi.shape[0]}x{n})")
    r = float(np.mean(norms))
    rep.add("equal-norms", bool(np.max(np.abs(norms - r)) <= tol),
            residual=float(np.max(np.abs(norms - r))))
    gram = phi.conj().T @ phi
    offmask = ~np.eye(n, dtype=bool)
    if n > 1:
        mods = np.abs(gram[offmask])
        w = float(np.mean(mods))
        res = float(np.max(np.abs(mods - w)))
    else:
        w, res = 0.0, 0.0
    rep.add("equiangular", res <= tol, residual=res)
    sv = np.linalg.svd(phi, compute_uv=False)
    d = int(np.sum(sv > RANK_REL_TOL * sv[0]))
    a = r * n / d
    res = float(np.max(np.abs(gram @ gram - a * gram)))
    rep.add("tightness", res <= tol, residual=res, info=f"a={a:.6g}, d={d}")
    welch = math.sqrt((n - d) / (d * (n - 1))) if n > 1 else 0.0
    coherence = w / r
    rep.add("welch-equality", abs(coherence - welch) <= tol,
            residual=abs(coherence - welch))
    delta = None
    if w > tol:
        s = (gram - r * np.eye(n)) / w
        delta = (a - 2 * r) / w
        res = float(np.max(np.abs(s @ s - delta * s - (n - 1) * np.eye(n))))
        rep.add("signature-quadratic", res <= tol, residual=res,
                info=f"delta={delta:.6g}")
        d_back = n / 2 * (1 - delta / math.sqrt(delta * delta + 4 * (n - 1)))
        rep.add("signature-dimension", abs(d_back - d) <= 1e-6,
                residual=abs(d_back - d))
    else:
        rep.add("signature-quadratic", True, info="vacuous (orthogonal columns)")
    rep.numerics = EtfNumerics(
        n=n, d=d, norm=r, gram_modulus=w, frame_constant=a,
        welch=welch, coherence=coherence,
        delta=None if delta is None else float(delta),
    )
    return rep


def _as_operator(z: np.ndarray):
    """Dense below the cell cutoff, sparse CSR above."""
    if z.size > SPARSE_CELL_CUTOFF:
        from scipy.sparse import csr_matrix

        return csr_matrix(z.astype(np.int64))
    return z.astype(np.int64)


def _offdiag_zero_one(prod, side: int):
    """Check off-diagonal entries are 0/1; works for dense and sparse."""
    if isinstance(prod, np.ndarray):
        off = prod[~np.eye(side, dtype=bool)]
        ok = bool(np.all((off == 0) | (off == 1)))
        witness = None
        if not ok:
            bad = (prod != 0) & (prod != 1) & ~np.eye(side, dtype=bool)
            witness = _first_bad(bad)
        return ok, witness
    p = prod.tocoo()
    mask = (p.row != p.col) & (p.data != 0) & (p.data != 1)
    if not mask.any():
        return True, None
    i = int(np.argmax(mask))
    return False, (int(p.row[i]), int(p.col[i]))


def verify_gq_axioms(z: np.ndarray, s: int, t: int, check_spread: bool = False) -> VerificationReport:
    """Point-block incidence of a generalized quadrangle of order (s, t):
    blocks of size s+1, t+1 blocks per point, no repeated pairs, and the
    triple product Z Z^T Z = (s+t) Z + J."""
    z = np.asarray(z)
    rep = VerificationReport(subject=f"GQ({s},{t}) axioms")
    n_blocks = (t + 1) * (s * t + 1)
    n_points = (s + 1) * (s * t + 1)
    if z.shape != (n_blocks, n_points):
        rep.add("dimensions", False, witness=tuple(z.shape),
                info=f"expected {n_blocks}x{n_points}")
        return rep
    rep.add("dimensions", True)
    if set(np.unique(z)) - {0, 1}:
        rep.add("zero-one", False, witness=_first_bad((z != 0) & (z != 1)))
        return rep
    rep.add("zero-one", True)
    rows = z.sum(axis=1)
    rep.add("row-sums", bool(np.all(rows == s + 1)), witness=_first_bad(rows != s + 1))
    cols = z.sum(axis=0)
    rep.add("col-sums", bool(np.all(cols == t + 1)), witness=_first_bad(cols != t + 1))
    op = _as_operator(z)
    blocks_pairs = op @ op.T
    ok, witness = _offdiag_zero_one(blocks_pairs, z.shape[0])
    rep.add("block-pair-intersections", ok, witness=witness)
    point_pairs = op.T @ op
    ok, witness = _offdiag_zero_one(point_pairs, z.shape[1])
    rep.add("point-pair-collinearity", ok, witness=witness)
    triple = op @ point_pairs
    if isinstance(triple, np.ndarray):
        bad = triple != ((s + t) * z + 1)
        rep.add("triple-product", not bad.any(), witness=_first_bad(bad))
    else:
        diff = triple - (s + t) * op
        dense_ok = diff.nnz == z.shape[0] * z.shape[1] and bool(np.all(diff.data == 1))
        witness = None
        if not dense_ok:
            dd = np.asarray(diff.todense())
            witness = _first_bad(dd != 1)
        rep.add("triple-product", dense_ok, witness=witness)
    if check_spread:
        v = s * t + 1
        spread = np.kron(np.eye(v, dtype=np.int64), np.ones((1, s + 1), dtype=np.int64))
        ok = z.shape[0] >= v and np.array_equal(np.asarray(z[:v]), spread)
        rep.add("spread", bool(ok))
    return rep


def verify_drackn(a: GroupRingMatrix, n: int, f: int, c: int) -> VerificationReport:
    """Self-adjoint, hollow, monomial off the diagonal, and the exact
    quadratic A^2 = (n - fc - 2) A + (n-1) I + c G (J - I); then each
    nontrivial character evaluation must be an ETF signature matrix."""
    if a.rows != n or a.cols != n:
        raise ValueError(f"expected {n}x{n}, got {a.rows}x{a.cols}")
    if a.group.order != f:
        raise ValueError(f"group order {a.group.order} != f = {f}")
    rep = VerificationReport(subject=f"({n},{f},{c})-DRACKN")
    adj = a.adjoint()
    rep.add("self-adjoint", a == adj, witness=a.first_difference(adj))
    diag = a.coeffs[np.arange(n), np.arange(n)]
    rep.add("zero-diagonal", bool(np.all(diag == 0)), witness=_first_bad(diag.any(axis=1)))
    ones = np.sum(a.coeffs == 1, axis=2)
    nonz = np.sum(a.coeffs != 0, axis=2)
    off = ~np.eye(n, dtype=bool)
    monomial = (ones == 1) & (nonz == 1)
    rep.add("monomial-off-diagonal", bool(np.all(monomial[off])),
            witness=_first_bad(~monomial & off))
    delta = n - f * c - 2
    lhs = a @ a
    rhs = (
        delta * a
        + GroupRingMatrix.from_scalar(a.group, (n - 1) * np.eye(n, dtype=np.int64))
        + GroupRingMatrix.all_geometric(
            a.group, c * (np.ones((n, n), dtype=np.int64) - np.eye(n, dtype=np.int64))
        )
    )
    diff = lhs.first_difference(rhs)
    rep.add("quadratic", diff is None, witness=diff, info=f"delta={delta}")
    eye = np.eye(n)
    for gamma in characters_of(a.group):
        if gamma.is_trivial:
            continue
        sig = a.evaluate(gamma)
        name = f"signature@{gamma.exponents}"
        res = max(
            float(np.max(np.abs(sig - sig.conj().T))),
            float(np.max(np.abs(np.diagonal(sig)))),
            float(np.max(np.abs(np.abs(sig[off]) - 1))),
            float(np.max(np.abs(sig @ sig - delta * sig - (n - 1) * eye))),
        )
        d = n / 2 * (1 - delta / math.sqrt(delta * delta + 4 * (n - 1)))
        rep.add(name, res <= NUMERIC_TOL, residual=res, info=f"d={d:.6g}")
    return rep


def verify_srg_collinearity(z: np.ndarray, s: int, t: int) -> VerificationReport:
    """Collinearity graph of a GQ(s, t): strongly regular with parameters
    ((s+1)(st+1), s(t+1), s-1, t+1)."""
    rep = verify_gq_axioms(z, s, t)
    if not rep.passed:
        rep.subject = f"SRG of GQ({s},{t}) (GQ axioms failed)"
        return rep
    z = np.asarray(z, dtype=np.int64)
    n = (s + 1) * (s * t + 1)
    deg = s * (t + 1)
    lam, mu = s - 1, t + 1
    zf = z.astype(np.float64)
    adj = np.rint(zf.T @ zf).astype(np.int64) - (t + 1) * np.eye(n, dtype=np.int64)
    rep = VerificationReport(subject=f"SRG({n},{deg},{lam},{mu})")
    rep.add("gq-axioms", True)
    simple = (
        np.array_equal(adj, adj.T)
        and not np.diagonal(adj).any()
        and not (((adj != 0) & (adj != 1)).any())
    )
    rep.add("adjacency-simple", bool(simple))
    rows = adj.sum(axis=1)
    rep.add("regular", bool(np.all(rows == deg)), witness=_first_bad(rows != deg))
    lhs = adj.astype(np.float64) @ adj.astype(np.float64)
    lhs = np.rint(lhs).astype(np.int64)
    rhs = (
        (lam - mu) * adj
        + (deg - mu) * np.eye(n, dtype=np.int64)
        + mu * np.ones((n, n), dtype=np.int64)
    )
    rep.add("srg-quadratic", bool(np.array_equal(lhs, rhs)), witness=_first_bad(lhs != rhs))
    return rep


@dataclass(frozen=True)
class ScreenRow:
    v: int
    k: int
    r: int
    b: int
    u: int
    real_feasible: bool


def screen_parameters(k_min: int, k_max: int) -> list[ScreenRow]:
    """All (v, k) surviving the integrality screen: u ranges over divisors
    of k(k-1)(k-2) up to (k-1)(k-2)/2, determines v and r, and must also
    divide r(k-1)(k-2); b must be integral and at least v.  k = 2 admits
    every v (u = 0), so no rows are enumerated for it.  The flag marks
    the parity rule for real phases: v, k even and r odd."""
    if not 2 <= k_min <= k_max <= 20:
        raise ValueError(f"need 2 <= k_min <= k_max <= 20, got ({k_min}, {k_max})")
    rows = []
    for k in range(k_min, k_max + 1):
        kk = k * (k - 1) * (k - 2)
        for u in range(1, (k - 1) * (k - 2) // 2 + 1):
            if kk % u:
                continue
            v = k * (k - 1) ** 2 * (k - 2) // u - k * (k - 2)
            r = kk // u - (k - 1)
            if (r * (k - 1) * (k - 2)) % u:
                continue
            if (v * r) % k:
                continue
            b = v * r // k
            if b < v:
                continue
            real = v % 2 == 0 and k % 2 == 0 and r % 2 == 1
            rows.append(ScreenRow(v=v, k=k, r=r, b=b, u=u, real_feasible=real))
    rows.sort(key=lambda row: (row.k, row.v))
    return rows


def count_blocks_through_vertex(geom, vertex) -> int:
    vertex = tuple(vertex)
    if vertex not in set(geom.vertices):
        raise ValueError(f"{vertex} is not a vertex of the geometry")
    return sum(1 for blk in geom.blocks if vertex in blk.members)


# Expected screener output for 3 <= k <= 9, tabulated by hand from the
# divisibility rules, as (v, k, r, b, u).  The command line cross-check
# compares freshly screened rows against this list.
REFERENCE_ROWS: tuple[tuple[int, int, int, int, int], ...] = (
    (9, 3, 4, 12, 1),
    (16, 4, 5, 20, 3),
    (28, 4, 9, 63, 2),
    (64, 4, 21, 336, 1),
    (25, 5, 6, 30, 6),
    (45, 5, 11, 99, 4),
    (65, 5, 16, 208, 3),
    (105, 5, 26, 546, 2),
    (225, 5, 56, 2520, 1),
    (36, 6, 7, 42, 10),
    (51, 6, 10, 85, 8),
    (76, 6, 15, 190, 6),
    (96, 6, 19, 304, 5),
    (126, 6, 25, 525, 4),
    (276, 6, 55, 2530, 2),
    (576, 6, 115, 11040, 1),
    (49, 7, 8, 56, 15),
    (91, 7, 15, 195, 10),
    (175, 7, 29, 725, 6),
    (217, 7, 36, 1116, 5),
    (385, 7, 64, 3520, 3),
    (595, 7, 99, 8415, 2),
    (1225, 7, 204, 35700, 1),
    (64, 8, 9, 72, 21),
    (120, 8, 17, 255, 14),
    (288, 8, 41, 1476, 7),
    (344, 8, 49, 2107, 6),
    (736, 8, 105, 9660, 3),
    (1128, 8, 161, 22701, 2),
    (2304, 8, 329, 94752, 1),
    (81, 9, 10, 90, 28),
    (225, 9, 28, 700, 14),
    (441, 9, 55, 2695, 8),
    (513, 9, 64, 3648, 7),
    (945, 9, 118, 12390, 4),
    (1953, 9, 244, 52948, 2),
    (3969, 9, 496, 218736, 1),
)
