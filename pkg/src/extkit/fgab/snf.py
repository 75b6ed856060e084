"""Smith normal form and exact integer linear systems.

Matrices are plain lists of lists of Python ints, so every entry is
arbitrary precision.  Nothing here ever touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass

Matrix = list[list[int]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = 1
    return m


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Product of an (r x k) and a (k x c) matrix.

    ``inner`` must be given when ``a`` has no rows, because the inner
    dimension cannot be read off an empty list.
    """
    rows = len(a)
    k = len(a[0]) if rows else (inner if inner is not None else len(b))
    cols = len(b[0]) if b else 0
    out = zeros(rows, cols)
    for i in range(rows):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x:
                bt = b[t]
                for j in range(cols):
                    if bt[j]:
                        oi[j] += x * bt[j]
    return out


def matvec(a: Matrix, v: list[int]) -> list[int]:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def transpose(a: Matrix, cols: int | None = None) -> Matrix:
    if not a:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*a)]


def hstack(*blocks: Matrix, rows: int | None = None) -> Matrix:
    if rows is None:
        rows = len(blocks[0])
    out = [[] for _ in range(rows)]
    for b in blocks:
        if not b:
            continue
        for i in range(rows):
            out[i].extend(b[i])
    return out


def columns(a: Matrix, ncols: int) -> list[list[int]]:
    return [[row[j] for row in a] for j in range(ncols)]


def from_columns(cols: list[list[int]], nrows: int) -> Matrix:
    if not cols:
        return [[] for _ in range(nrows)]
    return [[c[i] for c in cols] for i in range(nrows)]


def ncols_of(a: Matrix, default: int = 0) -> int:
    return len(a[0]) if a else default


@dataclass(frozen=True)
class IntMatrixDecomposition:
    """``left @ original @ right == diag`` with ``left``/``right`` unimodular.

    The inverses of the two transforms are carried along because every
    cokernel computation needs them and they come for free during the
    elimination.
    """

    original: tuple[tuple[int, ...], ...]
    left: tuple[tuple[int, ...], ...]
    diag: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]
    left_inv: tuple[tuple[int, ...], ...]
    right_inv: tuple[tuple[int, ...], ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.original), len(self.right)

    @property
    def rank(self) -> int:
        r = 0
        for i in range(min(self.shape)):
            if self.diag[i][i] != 0:
                r += 1
        return r

    @property
    def invariant_factors(self) -> list[int]:
        """Diagonal entries, including trailing zeros up to min(rows, cols)."""
        return [self.diag[i][i] for i in range(min(self.shape))]


def _freeze(m: Matrix) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(r) for r in m)


def smith_normal_form(m: Matrix, ncols: int | None = None) -> IntMatrixDecomposition:
    """Smith normal form with the smallest-absolute-value pivot rule.

    Ties go to the lowest row index, then the lowest column index, which
    makes the transforms deterministic for a given input.
    """
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    a = [list(r) for r in m]
    u = identity(rows)
    uinv = identity(rows)
    v = identity(cols)
    vinv = identity(cols)

    def swap_rows(i: int, j: int) -> None:
        if i == j:
            return
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]
        # uinv columns swap
        for row in uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i: int, j: int) -> None:
        if i == j:
            return
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]
        vinv[i], vinv[j] = vinv[j], vinv[i]

    def add_row(src: int, dst: int, k: int) -> None:
        # row_dst += k * row_src
        if not k:
            return
        ra, rd = a[src], a[dst]
        for j in range(cols):
            if ra[j]:
                rd[j] += k * ra[j]
        us, ud = u[src], u[dst]
        for j in range(rows):
            if us[j]:
                ud[j] += k * us[j]
        # uinv: column src -= k * column dst
        for row in uinv:
            if row[dst]:
                row[src] -= k * row[dst]

    def add_col(src: int, dst: int, k: int) -> None:
        # col_dst += k * col_src
        if not k:
            return
        for row in a:
            if row[src]:
                row[dst] += k * row[src]
        for row in v:
            if row[src]:
                row[dst] += k * row[src]
        vs, vd = vinv[src], vinv[dst]
        for j in range(cols):
            if vd[j]:
                vs[j] -= k * vd[j]

    def negate_row(i: int) -> None:
        a[i] = [-x for x in a[i]]
        u[i] = [-x for x in u[i]]
        for row in uinv:
            row[i] = -row[i]

    t = 0
    while t < min(rows, cols):
        # pivot search over the trailing submatrix
        best = None
        for i in range(t, rows):
            ri = a[i]
            for j in range(t, cols):
                x = ri[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
        if best is None:
            break
        _, pi, pj = best
        swap_rows(t, pi)
        swap_cols(t, pj)
        while True:
            p = a[t][t]
            done = True
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(t, i, -(a[i][t] // p))
                    if a[i][t]:
                        done = False
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(t, j, -(a[t][j] // p))
                    if a[t][j]:
                        done = False
            if not done:
                # a smaller remainder appeared in row/column t: re-pivot there
                best = None
                for i in range(t, rows):
                    if a[i][t] and (best is None or abs(a[i][t]) < best[0]):
                        best = (abs(a[i][t]), i, t)
                for j in range(t, cols):
                    if a[t][j] and (best is None or abs(a[t][j]) < best[0]):
                        best = (abs(a[t][j]), t, j)
                _, pi, pj = best
                swap_rows(t, pi)
                swap_cols(t, pj)
                continue
            # divisibility of the trailing block
            bad = None
            for i in range(t + 1, rows):
                for j in range(t + 1, cols):
                    if a[i][j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if a[t][t] < 0:
            negate_row(t)
        t += 1

    return IntMatrixDecomposition(
        original=_freeze(m),
        left=_freeze(u),
        diag=_freeze(a),
        right=_freeze(v),
        left_inv=_freeze(uinv),
        right_inv=_freeze(vinv),
    )


def integer_kernel(m: Matrix, ncols: int | None = None) -> list[list[int]]:
    """Basis (as a list of column vectors) of {x : m x = 0} over the integers."""
    cols = len(m[0]) if m else (ncols or 0)
    if not m:
        return [[1 if i == j else 0 for i in range(cols)] for j in range(cols)]
    dec = smith_normal_form(m)
    r = dec.rank
    return [[dec.right[i][j] for i in range(cols)] for j in range(r, cols)]


def solve_integer(m: Matrix, b: list[int], ncols: int | None = None) -> list[int] | None:
    """One integer solution of ``m x = b``, or None if there is none."""
    rows = len(m)
    cols = len(m[0]) if rows else (ncols or 0)
    if rows == 0:
        return [0] * cols
    dec = smith_normal_form(m)
    ub = matvec([list(r) for r in dec.left], b)
    y = [0] * cols
    for i in range(rows):
        d = dec.diag[i][i] if i < cols else 0
        if d:
            if ub[i] % d:
                return None
            y[i] = ub[i] // d
        elif ub[i]:
            return None
    return matvec([list(r) for r in dec.right], y)
