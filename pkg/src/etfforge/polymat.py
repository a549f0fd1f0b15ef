"""Matrices over a group ring, and the monomial-constrained kind.

A PolyphaseMatrix is the constrained object the constructions emit:
every entry is either zero or a single group element z^g.  It is stored
as a support mask plus an index-encoded exponent array, which keeps the
"zero or one monomial" invariant structural.  A GroupRingMatrix is the
general object that products and adjoints land in, stored as an
(rows, cols, f) integer coefficient array.

Products are exact: the group-ring matmul runs one BLAS multiply per
pair of group elements on float64 views and rounds back, which is exact
while every intermediate stays far below 2^53 (true by orders of
magnitude for everything built here).

Text serialization of a polyphase matrix:

    POLYPHASE rows=<b> cols=<v> group=Z{q1}x...
    <one line per row: "." for a zero entry, "g1,g2,..." for z^(g1,...)>

Lines use spaces between entries, LF endings, UTF-8.
"""

from __future__ import annotations

import numpy as np

from .groupring import AbelianGroup, Character, GroupRingElement


def _exact_int_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # float64 BLAS is exact for integer matrices of this size and then some
    return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)


class GroupRingMatrix:
    """Dense matrix with GroupRingElement entries, coefficients last axis."""

    def __init__(self, group: AbelianGroup, coeffs):
        self.group = group
        self.coeffs = np.asarray(coeffs, dtype=np.int64)
        if self.coeffs.ndim != 3 or self.coeffs.shape[2] != group.order:
            raise ValueError("coefficient array must be rows x cols x |group|")

    @property
    def rows(self) -> int:
        return self.coeffs.shape[0]

    @property
    def cols(self) -> int:
        return self.coeffs.shape[1]

    @classmethod
    def zeros(cls, group: AbelianGroup, rows: int, cols: int) -> "GroupRingMatrix":
        return cls(group, np.zeros((rows, cols, group.order), dtype=np.int64))

    @classmethod
    def identity(cls, group: AbelianGroup, n: int) -> "GroupRingMatrix":
        c = np.zeros((n, n, group.order), dtype=np.int64)
        c[np.arange(n), np.arange(n), 0] = 1
        return cls(group, c)

    @classmethod
    def from_scalar(cls, group: AbelianGroup, a) -> "GroupRingMatrix":
        """Integer matrix a, embedded entrywise as a*z^0."""
        a = np.asarray(a, dtype=np.int64)
        c = np.zeros(a.shape + (group.order,), dtype=np.int64)
        c[:, :, 0] = a
        return cls(group, c)

    @classmethod
    def all_geometric(cls, group: AbelianGroup, a) -> "GroupRingMatrix":
        """Integer matrix a, each entry times the sum of all group elements."""
        a = np.asarray(a, dtype=np.int64)
        return cls(group, np.repeat(a[:, :, None], group.order, axis=2))

    def entry(self, i: int, j: int) -> GroupRingElement:
        return GroupRingElement(self.group, self.coeffs[i, j])

    def __add__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        self._check(other)
        return GroupRingMatrix(self.group, self.coeffs + other.coeffs)

    def __sub__(self, other: "GroupRingMatrix") -> "GroupRingMatrix":
        self._check(other)
        return GroupRingMatrix(self.group, self.coeffs - other.coeffs)

    def __rmul__(self, scalar: int) -> "GroupRingMatrix":
        if not isinstance(scalar, (int, np.integer)):
            return NotImplemented
        return GroupRingMatrix(self.group, int(scalar) * self.coeffs)

    def __matmul__(self, other) -> "GroupRingMatrix":
        if isinstance(other, PolyphaseMatrix):
            other = other.to_group_ring()
        self._check(other)
        if self.cols != other.rows:
            raise ValueError("inner dimensions do not match")
        g = self.group
        f = g.order
        out = np.zeros((self.rows, other.cols, f), dtype=np.int64)
        a = self.coeffs.astype(np.float64)
        b = other.coeffs.astype(np.float64)
        for gi in range(f):
            for hi in range(f):
                t = g.add_index[gi, hi]
                out[:, :, t] += np.rint(a[:, :, gi] @ b[:, :, hi]).astype(np.int64)
        return GroupRingMatrix(g, out)

    def adjoint(self) -> "GroupRingMatrix":
        """Conjugate transpose: transpose plus entrywise involution."""
        c = self.coeffs[:, :, self.group.neg_index]
        return GroupRingMatrix(self.group, np.transpose(c, (1, 0, 2)))

    def is_self_adjoint(self) -> bool:
        return self == self.adjoint()

    def evaluate(self, gamma: Character) -> np.ndarray:
        if gamma.group != self.group:
            raise ValueError("character belongs to a different group")
        return np.tensordot(self.coeffs, gamma.values, axes=([2], [0]))

    def __eq__(self, other):
        return (
            isinstance(other, GroupRingMatrix)
            and other.group == self.group
            and bool(np.array_equal(other.coeffs, self.coeffs))
        )

    def first_difference(self, other: "GroupRingMatrix"):
        """(i, j) of the first differing entry, or None."""
        diff = np.nonzero(np.any(self.coeffs != other.coeffs, axis=2))
        if len(diff[0]) == 0:
            return None
        return int(diff[0][0]), int(diff[1][0])

    def _check(self, other):
        if not isinstance(other, GroupRingMatrix) or other.group != self.group:
            raise ValueError("matrices live over different group rings")

    def __repr__(self):
        return f"GroupRingMatrix({self.rows}x{self.cols} over {self.group.name()})"


class PolyphaseMatrix:
    """Matrix whose entries are zero or a single z^g."""

    def __init__(self, group: AbelianGroup, support, exponents):
        self.group = group
        self.support = np.asarray(support, dtype=bool)
        self.exponents = np.asarray(exponents, dtype=np.intp)
        if self.support.shape != self.exponents.shape or self.support.ndim != 2:
            raise ValueError("support and exponent arrays must be equal 2-d shapes")
        if self.support.any():
            exps = self.exponents[self.support]
            if exps.min() < 0 or exps.max() >= group.order:
                raise ValueError("exponent index out of range")

    @property
    def rows(self) -> int:
        return self.support.shape[0]

    @property
    def cols(self) -> int:
        return self.support.shape[1]

    @classmethod
    def from_entries(cls, group: AbelianGroup, entries) -> "PolyphaseMatrix":
        """Build from a nested list of None (zero) or group-element tuples."""
        rows = len(entries)
        cols = len(entries[0]) if rows else 0
        support = np.zeros((rows, cols), dtype=bool)
        exps = np.zeros((rows, cols), dtype=np.intp)
        for i, row in enumerate(entries):
            if len(row) != cols:
                raise ValueError("ragged entry rows")
            for j, e in enumerate(row):
                if e is not None:
                    support[i, j] = True
                    exps[i, j] = group.index(e)
        return cls(group, support, exps)

    def entry(self, i: int, j: int):
        if not self.support[i, j]:
            return None
        return self.group.element(int(self.exponents[i, j]))

    def replaced(self, i: int, j: int, g) -> "PolyphaseMatrix":
        """Copy with entry (i, j) set to z^g (or zero for None)."""
        support = self.support.copy()
        exps = self.exponents.copy()
        if g is None:
            support[i, j] = False
            exps[i, j] = 0
        else:
            support[i, j] = True
            exps[i, j] = self.group.index(g)
        return PolyphaseMatrix(self.group, support, exps)

    def modulus_squared(self) -> np.ndarray:
        """0/1 incidence of entrywise |.|^2, the underlying design."""
        return self.support.astype(np.int64)

    def to_group_ring(self) -> GroupRingMatrix:
        c = np.zeros((self.rows, self.cols, self.group.order), dtype=np.int64)
        ii, jj = np.nonzero(self.support)
        c[ii, jj, self.exponents[ii, jj]] = 1
        return GroupRingMatrix(self.group, c)

    def adjoint(self) -> GroupRingMatrix:
        return self.to_group_ring().adjoint()

    def __matmul__(self, other) -> GroupRingMatrix:
        return self.to_group_ring() @ other

    def __rmatmul__(self, other) -> GroupRingMatrix:
        if isinstance(other, GroupRingMatrix):
            return other @ self.to_group_ring()
        return NotImplemented

    def evaluate(self, gamma: Character) -> np.ndarray:
        if gamma.group != self.group:
            raise ValueError("character belongs to a different group")
        return np.where(self.support, gamma.values[self.exponents], 0.0)

    def filter_bank_lift(self) -> np.ndarray:
        """Replace each z^g by the f x f translation permutation and each
        zero by an f x f zero block."""
        g = self.group
        f = g.order
        # lift of z^g has (a, b) entry [a - b == g]
        perms = np.zeros((f, f, f), dtype=np.int64)
        for gi in range(f):
            perms[gi, g.add_index[gi, np.arange(f)], np.arange(f)] = 1
        out = np.zeros((self.rows * f, self.cols * f), dtype=np.int64)
        for i, j in zip(*np.nonzero(self.support)):
            out[i * f : (i + 1) * f, j * f : (j + 1) * f] = perms[self.exponents[i, j]]
        return out

    def __eq__(self, other):
        return (
            isinstance(other, PolyphaseMatrix)
            and other.group == self.group
            and bool(np.array_equal(other.support, self.support))
            and bool(np.array_equal(other.exponents[other.support], self.exponents[self.support]))
        )

    def __repr__(self):
        return f"PolyphaseMatrix({self.rows}x{self.cols} over {self.group.name()})"


def format_polyphase(m: PolyphaseMatrix) -> str:
    lines = [f"POLYPHASE rows={m.rows} cols={m.cols} group={m.group.name()}"]
    for i in range(m.rows):
        cells = []
        for j in range(m.cols):
            e = m.entry(i, j)
            cells.append("." if e is None else ",".join(str(c) for c in e))
        lines.append(" ".join(cells))
    return "\n".join(lines) + "\n"


def parse_polyphase(text: str) -> PolyphaseMatrix:
    lines = [ln for ln in text.split("\n") if ln.strip()]
    if not lines or not lines[0].startswith("POLYPHASE"):
        raise ValueError("missing POLYPHASE header")
    fields = {}
    for tok in lines[0].split()[1:]:
        key, _, val = tok.partition("=")
        fields[key] = val
    try:
        rows, cols = int(fields["rows"]), int(fields["cols"])
        group = AbelianGroup.from_name(fields["group"])
    except KeyError as exc:
        raise ValueError(f"header missing field {exc}") from exc
    if len(lines) - 1 != rows:
        raise ValueError(f"expected {rows} rows, found {len(lines) - 1}")
    entries = []
    for ln in lines[1:]:
        cells = ln.split()
        if len(cells) != cols:
            raise ValueError(f"expected {cols} entries per row, found {len(cells)}")
        row = []
        for cell in cells:
            if cell == ".":
                row.append(None)
            else:
                g = tuple(int(c) for c in cell.split(","))
                if len(g) != len(group.factors):
                    raise ValueError(f"entry {cell!r} has wrong arity for {group.name()}")
                row.append(tuple(c % q for c, q in zip(g, group.factors)))
        entries.append(row)
    return PolyphaseMatrix.from_entries(group, entries)


def format_incidence(x: np.ndarray) -> str:
    return "\n".join("".join(str(int(v)) for v in row) for row in np.asarray(x)) + "\n"


def parse_incidence(text: str) -> np.ndarray:
    rows = [ln for ln in text.split("\n") if ln.strip()]
    if not rows:
        raise ValueError("empty incidence file")
    width = len(rows[0])
    out = np.zeros((len(rows), width), dtype=np.int64)
    for i, ln in enumerate(rows):
        if len(ln) != width or set(ln) - {"0", "1"}:
            raise ValueError(f"bad incidence row {i}")
        out[i] = [int(c) for c in ln]
    return out


def format_complex_csv(c: np.ndarray) -> str:
    c = np.asarray(c, dtype=np.complex128)
    lines = []
    for row in c:
        # adding 0.0 turns -0.0 into +0.0 so signs are reproducible
        lines.append(",".join(f"{v.real + 0.0:.12g}{v.imag + 0.0:+.12g}i" for v in row))
    return "\n".join(lines) + "\n"
