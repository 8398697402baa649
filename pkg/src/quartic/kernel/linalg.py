"""Dense linear algebra on lists of mpmath scalars, with tolerance-aware ranks."""

from __future__ import annotations

from fractions import Fraction

import mpmath

from ..errors import CertificateError
from .roots import to_mp
from .tolerance import DEFAULT_PROFILE, ToleranceProfile


def as_mp_matrix(rows) -> list[list]:
    rows = [[to_mp(x) for x in row] for row in rows]
    if not rows or not rows[0]:
        raise ValueError("empty matrix")
    width = len(rows[0])
    if any(len(r) != width for r in rows):
        raise ValueError("ragged matrix")
    return rows


def transpose(a):
    return [list(col) for col in zip(*a)]


def matmul(a, b):
    bt = transpose(b)
    return [[mpmath.fsum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a, v):
    return [mpmath.fsum(x * y for x, y in zip(row, v)) for row in a]


def frobenius(a):
    return mpmath.sqrt(mpmath.fsum(abs(x) ** 2 for row in a for x in row))


def max_abs(a):
    return max(abs(x) for row in a for x in row)


def _conj(x):
    return mpmath.conj(x) if isinstance(x, mpmath.mpc) else x


def _householder_step(a, k, col):
    """Reflect rows k.. of column ``col`` onto e_k; returns the reflector or None."""
    m = len(a)
    x = [a[i][col] for i in range(k, m)]
    norm = mpmath.sqrt(mpmath.fsum(abs(t) ** 2 for t in x))
    if norm == 0:
        return None
    phase = x[0] / abs(x[0]) if x[0] != 0 else 1
    alpha = -phase * norm
    v = list(x)
    v[0] -= alpha
    vnorm = mpmath.sqrt(mpmath.fsum(abs(t) ** 2 for t in v))
    if vnorm == 0:
        return None
    v = [t / vnorm for t in v]
    return v


def _apply_reflector(a, k, v, cols):
    m = len(a)
    for j in cols:
        s = mpmath.fsum(_conj(v[i - k]) * a[i][j] for i in range(k, m))
        if s != 0:
            for i in range(k, m):
                a[i][j] -= 2 * v[i - k] * s


def pivoted_qr_diagonal(matrix) -> list:
    """|R_kk| of a Householder QR with column pivoting, largest first."""
    a = [list(r) for r in as_mp_matrix(matrix)]
    m, n = len(a), len(a[0])
    cols = list(range(n))
    diag = []
    for k in range(min(m, n)):
        norms = [mpmath.fsum(abs(a[i][j]) ** 2 for i in range(k, m)) for j in cols[k:]]
        best = max(range(len(norms)), key=lambda t: norms[t]) + k
        cols[k], cols[best] = cols[best], cols[k]
        col = cols[k]
        v = _householder_step(a, k, col)
        if v is None:
            diag.extend([mpmath.mpf(0)] * (min(m, n) - k))
            break
        _apply_reflector(a, k, v, cols[k:])
        diag.append(abs(a[k][col]))
    return diag


def singular_values(matrix) -> list:
    a = mpmath.matrix(as_mp_matrix(matrix))
    complex_entries = any(isinstance(x, mpmath.mpc) and x.imag != 0 for x in a)
    s = mpmath.svd_c(a, compute_uv=False) if complex_entries else mpmath.svd_r(a, compute_uv=False)
    return sorted((abs(x) for x in s), reverse=True)


def rank_with_tolerance(matrix, profile: ToleranceProfile = DEFAULT_PROFILE) -> int:
    """Number of singular values above ``eps_rank`` times the largest one.

    A column-pivoted QR decides quickly; when a diagonal ratio falls inside a
    2^±16 band around the threshold the full SVD settles it.
    """
    with profile.workprec():
        diag = pivoted_qr_diagonal(matrix)
        top = diag[0] if diag else 0
        if top == 0:
            return 0
        eps = profile.eps_rank
        band = mpmath.mpf(2) ** 16
        ratios = [d / top for d in diag]
        if all(r > eps * band or r < eps / band for r in ratios):
            return sum(1 for r in ratios if r > eps)
        sv = singular_values(matrix)
        return sum(1 for s in sv if s > eps * sv[0])


def nullspace(matrix, profile: ToleranceProfile = DEFAULT_PROFILE, dim: int | None = None) -> list[list]:
    """Basis of the (numerical) right kernel in reduced row echelon shape.

    The rank comes from ``rank_with_tolerance`` unless ``dim`` fixes the
    kernel dimension.  Basis vectors carry a 1 at their free column and zeros
    at the other free columns, so exact kernels come out rational-friendly.
    """
    a = [list(r) for r in as_mp_matrix(matrix)]
    m, n = len(a), len(a[0])
    rank = n - dim if dim is not None else rank_with_tolerance(a, profile)
    scale = max_abs(a)
    pivots: list[int] = []
    row = 0
    for col in range(n):
        if row >= rank:
            break
        best = max(range(row, m), key=lambda i: abs(a[i][col]))
        if abs(a[best][col]) <= profile.eps_rank * scale:
            continue
        a[row], a[best] = a[best], a[row]
        piv = a[row][col]
        a[row] = [x / piv for x in a[row]]
        for i in range(m):
            if i != row and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[row])]
        pivots.append(col)
        row += 1
    if len(pivots) != rank:
        return _svd_nullspace(matrix, n - rank)
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [mpmath.mpf(0)] * n
        v[fc] = mpmath.mpf(1)
        for r, pc in enumerate(pivots):
            v[pc] = -a[r][fc]
        basis.append(v)
    return basis


def _svd_nullspace(matrix, k: int) -> list[list]:
    a = mpmath.matrix(as_mp_matrix(matrix))
    rows, cols = a.rows, a.cols
    if rows < cols:  # pad so the full V is returned
        pad = mpmath.zeros(cols - rows, cols)
        a = mpmath.matrix([[a[i, j] for j in range(cols)] for i in range(rows)]
                          + [[pad[i, j] for j in range(cols)] for i in range(cols - rows)])
    _, s, vh = mpmath.svd_c(a)
    order = sorted(range(cols), key=lambda i: abs(s[i]))
    return [[mpmath.conj(vh[i, j]) for j in range(cols)] for i in order[:k]]


def solve(matrix, rhs) -> list:
    """Gaussian elimination with partial pivoting for a square system."""
    a = [list(r) + [b] for r, b in zip(as_mp_matrix(matrix), [to_mp(x) for x in rhs])]
    n = len(a)
    for k in range(n):
        best = max(range(k, n), key=lambda i: abs(a[i][k]))
        if a[best][k] == 0:
            raise CertificateError("singular linear system")
        a[k], a[best] = a[best], a[k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f != 0:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    x = [0] * n
    for k in range(n - 1, -1, -1):
        x[k] = (a[k][n] - mpmath.fsum(a[k][j] * x[j] for j in range(k + 1, n))) / a[k][k]
    return x


def inverse(matrix) -> list[list]:
    n = len(matrix)
    cols = [solve(matrix, [int(i == j) for i in range(n)]) for j in range(n)]
    return transpose(cols)


def lstsq(matrix, rhs) -> tuple[list, mpmath.mpf]:
    """Least-squares solution by Householder QR; returns (x, residual 2-norm)."""
    a = [list(r) + [b] for r, b in zip(as_mp_matrix(matrix), [to_mp(x) for x in rhs])]
    m, n = len(a), len(a[0]) - 1
    for k in range(n):
        v = _householder_step(a, k, k)
        if v is not None:
            _apply_reflector(a, k, v, range(k, n + 1))
    x = [0] * n
    for k in range(n - 1, -1, -1):
        if a[k][k] == 0:
            raise CertificateError("rank-deficient least-squares system")
        x[k] = (a[k][n] - mpmath.fsum(a[k][j] * x[j] for j in range(k + 1, n))) / a[k][k]
    residual = mpmath.sqrt(mpmath.fsum(abs(a[i][n]) ** 2 for i in range(n, m)))
    return x, residual


def rationalize(x, denominator_bound: int, profile: ToleranceProfile = DEFAULT_PROFILE):
    """Best rational approximation with bounded denominator, if within eps_residual.

    Returns ``None`` when ``x`` is not (numerically) real or no such fraction exists.
    """
    x = to_mp(x)
    scale = max(1, abs(x))
    if isinstance(x, mpmath.mpc):
        if abs(x.imag) > profile.eps_residual * scale:
            return None
        x = x.real
    if not mpmath.isfinite(x):
        return None
    exact = mp_to_fraction(x)
    q = exact.limit_denominator(denominator_bound)
    if abs(x - to_mp(q)) < profile.eps_residual * scale:
        return q
    return None


def mp_to_fraction(x) -> Fraction:
    """Exact value of a real mpf as a Fraction."""
    man, exp = mpmath.mpf(x).man_exp
    man = int(man) * (-1 if x < 0 else 1)
    return Fraction(man * 2 ** exp) if exp >= 0 else Fraction(man, 2 ** -exp)


def default_denominator_bound(profile: ToleranceProfile) -> int:
    # keeps bound**2 * eps_residual small so irrational inputs are rejected
    return 2 ** (profile.precision_bits // 5)


def exact_nullspace(matrix) -> list[list[Fraction]]:
    """Kernel basis of a rational matrix by fraction-exact row reduction."""
    rows = [[Fraction(v) for v in row] for row in matrix]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        lead = rows[r][c]
        rows[r] = [v / lead for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][free]
        basis.append(vec)
    return basis
