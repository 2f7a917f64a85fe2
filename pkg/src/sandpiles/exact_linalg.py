"""Exact integer linear algebra: matrices, Smith Normal Form, determinants.

All arithmetic is arbitrary-precision; nothing here ever overflows or
rounds.  The Smith form uses classical elimination with a min-|entry| pivot
rule, implemented iteratively.  On each round the globally smallest nonzero
entry of the active submatrix is moved to the pivot slot and one
floor-division clearing pass is run over its column and row; any nonzero
remainder strictly shrinks the candidate pivot, so re-selecting and
repeating terminates.  Once the cross is clear, a divisibility sweep folds
any non-multiple of the pivot into the pivot row and the round restarts.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import abelian
from .abelian import AbelianGroup


@dataclass(frozen=True)
class IntMatrix:
    """Dense integer matrix, row-major, immutable."""

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ValueError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, rows) -> "IntMatrix":
        rows = [list(r) for r in rows]
        n_rows = len(rows)
        n_cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != n_cols:
                raise ValueError("ragged rows")
        return cls(n_rows, n_cols, tuple(int(x) for r in rows for x in r))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(1 if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    def entry(self, i: int, j: int) -> int:
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"entry ({i},{j}) outside {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c : (i + 1) * c]) for i in range(self.rows)]

    def transpose(self) -> "IntMatrix":
        return IntMatrix.from_rows(
            [[self.entry(i, j) for i in range(self.rows)] for j in range(self.cols)]
        )

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("dimension mismatch in matrix product")
        a, b = self.to_rows(), other.to_rows()
        out = [
            [sum(a[i][k] * b[k][j] for k in range(self.cols)) for j in range(other.cols)]
            for i in range(self.rows)
        ]
        if not out:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix.from_rows(out)

    def __str__(self) -> str:
        return format_matrix(self)


@dataclass(frozen=True)
class SnfResult:
    """Invariant factors s_1 | ... | s_r plus optional transforms.

    When transforms were requested, P @ M @ Q equals the diagonal matrix
    carrying the invariant factors, and both P and Q are unimodular.
    """

    invariant_factors: tuple[int, ...]
    matrix_rows: int
    matrix_cols: int
    P: IntMatrix | None = None
    Q: IntMatrix | None = None

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    def diagonal_matrix(self) -> IntMatrix:
        d = [[0] * self.matrix_cols for _ in range(self.matrix_rows)]
        for t, s in enumerate(self.invariant_factors):
            d[t][t] = s
        return IntMatrix(
            self.matrix_rows,
            self.matrix_cols,
            tuple(x for row in d for x in row),
        )


def smith_normal_form(M: IntMatrix, want_transforms: bool = False) -> SnfResult:
    """Smith Normal Form of an arbitrary integer matrix.

    Returns the invariant factors (positive, each dividing the next) and,
    when ``want_transforms`` is set, unimodular P and Q with P @ M @ Q
    equal to the diagonal form.  Transform tracking roughly doubles the
    work, so sweeps leave it off.
    """
    m, n = M.rows, M.cols
    a = M.to_rows()
    p_rows = [[1 if i == j else 0 for j in range(m)] for i in range(m)] if want_transforms else None
    q_cols = [[1 if i == j else 0 for j in range(n)] for i in range(n)] if want_transforms else None

    t = 0
    factors: list[int] = []
    while t < min(m, n):
        while True:
            # Select the entry of least absolute value in the active block.
            pi = pj = -1
            best = 0
            for i in range(t, m):
                row = a[i]
                for j in range(t, n):
                    v = row[j]
                    if v:
                        if v < 0:
                            v = -v
                        if best == 0 or v < best:
                            best = v
                            pi, pj = i, j
                            if best == 1:
                                break
                if best == 1:
                    break
            if best == 0:
                break  # active block is zero; elimination is finished
            if pi != t:
                a[t], a[pi] = a[pi], a[t]
                if p_rows is not None:
                    p_rows[t], p_rows[pi] = p_rows[pi], p_rows[t]
            if pj != t:
                for r in a:
                    r[t], r[pj] = r[pj], r[t]
                if q_cols is not None:
                    for r in q_cols:
                        r[t], r[pj] = r[pj], r[t]
            piv = a[t][t]
            rt = a[t]
            clean = True
            for i in range(t + 1, m):
                v = a[i][t]
                if v:
                    quo = v // piv
                    if quo:
                        ri = a[i]
                        for j in range(t, n):
                            ri[j] -= quo * rt[j]
                        if p_rows is not None:
                            pi_row, pt_row = p_rows[i], p_rows[t]
                            for j in range(m):
                                pi_row[j] -= quo * pt_row[j]
                    if a[i][t]:
                        clean = False
            if not clean:
                continue  # smaller remainder appeared; re-select pivot
            for j in range(t + 1, n):
                v = rt[j]
                if v:
                    quo = v // piv
                    if quo:
                        for i in range(t, m):
                            a[i][j] -= quo * a[i][t]
                        if q_cols is not None:
                            for r in q_cols:
                                r[j] -= quo * r[t]
                    if rt[j]:
                        clean = False
            if not clean:
                continue
            if piv not in (1, -1):
                # Divisor-chain repair: fold a row holding a non-multiple of
                # the pivot into the pivot row, then re-run the round.
                bad = -1
                for i in range(t + 1, m):
                    ri = a[i]
                    for j in range(t + 1, n):
                        if ri[j] % piv:
                            bad = i
                            break
                    if bad >= 0:
                        break
                if bad >= 0:
                    rb = a[bad]
                    for j in range(t, n):
                        rt[j] += rb[j]
                    if p_rows is not None:
                        pt_row, pb_row = p_rows[t], p_rows[bad]
                        for j in range(m):
                            pt_row[j] += pb_row[j]
                    continue
            break
        if a[t][t] == 0:
            break
        if a[t][t] < 0:
            rt = a[t]
            for j in range(t, n):
                rt[j] = -rt[j]
            if p_rows is not None:
                p_rows[t] = [-x for x in p_rows[t]]
        factors.append(a[t][t])
        t += 1

    P = IntMatrix.from_rows(p_rows) if p_rows is not None else None
    Q = IntMatrix.from_rows(q_cols) if q_cols is not None else None
    return SnfResult(tuple(factors), m, n, P, Q)


def determinant(M: IntMatrix) -> int:
    """Exact determinant via Bareiss fraction-free elimination."""
    if M.rows != M.cols:
        raise ValueError(f"determinant of non-square {M.rows}x{M.cols} matrix")
    n = M.rows
    if n == 0:
        return 1
    a = M.to_rows()
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            ri, rk = a[i], a[k]
            lead = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pivot - lead * rk[j]) // prev
            ri[k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def smith_group(M: IntMatrix) -> tuple[int, AbelianGroup]:
    """Cokernel Z^cols / (row space of M): free rank and torsion part."""
    snf = smith_normal_form(M)
    free_rank = M.cols - snf.rank
    torsion = abelian.from_cyclic_orders(s for s in snf.invariant_factors if s > 1)
    return free_rank, torsion


def parse_matrix(text: str) -> IntMatrix:
    """Parse the matrix text format: "rows cols" header, then row lines."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    header = lines[0].split()
    if len(header) != 2:
        raise ValueError(f"header must be 'rows cols', got {lines[0]!r}")
    try:
        rows, cols = int(header[0]), int(header[1])
    except ValueError as exc:
        raise ValueError(f"non-integer header {lines[0]!r}") from exc
    if rows < 0 or cols < 0:
        raise ValueError("matrix dimensions must be nonnegative")
    body = lines[1:]
    if cols == 0:
        # Zero-width rows print as blank lines, which strip away above.
        if body:
            raise ValueError(f"expected no entries for a {rows}x0 matrix")
        return IntMatrix(rows, cols, ())
    if len(body) != rows:
        raise ValueError(f"expected {rows} row lines, got {len(body)}")
    out = []
    for ln in body:
        try:
            row = [int(tok) for tok in ln.split()]
        except ValueError as exc:
            raise ValueError(f"non-integer matrix entry in line {ln!r}") from exc
        if len(row) != cols:
            raise ValueError(f"expected {cols} entries per row, got {len(row)}")
        out.extend(row)
    return IntMatrix(rows, cols, tuple(out))


def format_matrix(M: IntMatrix) -> str:
    """Inverse of :func:`parse_matrix`."""
    lines = [f"{M.rows} {M.cols}"]
    for r in M.to_rows():
        lines.append(" ".join(str(x) for x in r))
    return "\n".join(lines) + "\n"
