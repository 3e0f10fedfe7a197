"""Self-contained eigensolvers for the discretized operators.

Three routes, each matched to a matrix class that actually occurs here:

* dense symmetric matrices: Householder reduction to tridiagonal form
  followed by the implicit-shift QL iteration (eigenvalues only);
* general real tridiagonal matrices, which are non-normal and may carry
  complex spectra: Francis double-shift QR on the (already Hessenberg)
  matrix, after a diagonal balancing similarity that equalizes paired
  off-diagonal magnitudes;
* symmetric periodic tridiagonal matrices (band plus one wrap-around
  corner): Sturm-type bisection driven by the inertia of the shifted
  LDL^T factorization, which costs O(n) per probe and is how the large
  mode sweeps stay cheap.

The inner loops are numba-compiled when numba is available and fall back
to pure Python otherwise.  This module also hosts the sector-exclusion
certificate for tridiagonal matrices with positive diagonal and
nonpositive off-diagonal products: such a matrix has no eigenvalue in the
open sector {Re z < mu, |Im z| < delta (1 - Re z / mu)} with mu the
smallest diagonal entry, provided 0 < delta <= (pi/2) / sum_k 1/delta_k.
The certificate checks the hypotheses per instance so callers can assert
the exclusion on computed spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency, but keep a fallback
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


_EPS = float(np.finfo(float).eps)
_TINY_PIVOT = 1e-300


class NoConvergence(RuntimeError):
    """An eigenvalue iteration hit its sweep cap without deflating."""


# ---------------------------------------------------------------------------
# matrix carriers
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymTridiagonal:
    """Symmetric tridiagonal matrix: diagonal (n) and off-diagonal (n-1)."""

    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        e = np.asarray(self.offdiag, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or len(e) != max(len(d) - 1, 0):
            raise ValueError("need diag of length n and offdiag of length n-1")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "offdiag", e)

    @property
    def n(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)


@dataclass(frozen=True)
class DenseSymmetric:
    """Dense symmetric matrix; symmetry is validated to 1e-12 relative."""

    data: np.ndarray

    def __post_init__(self):
        a = np.array(self.data, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("matrix must be square")
        scale = np.max(np.abs(a)) if a.size else 0.0
        if scale > 0 and np.max(np.abs(a - a.T)) > 1e-12 * scale:
            raise ValueError("matrix is not symmetric to 1e-12 relative")
        a = 0.5 * (a + a.T)
        a.setflags(write=False)
        object.__setattr__(self, "data", a)

    @property
    def n(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class Tridiagonal:
    """General real tridiagonal matrix.

    ``upper[k]`` is the entry (k, k+1) and ``lower[k]`` the entry (k+1, k).
    """

    diag: np.ndarray
    upper: np.ndarray
    lower: np.ndarray

    def __post_init__(self):
        d = np.asarray(self.diag, dtype=float)
        up = np.asarray(self.upper, dtype=float)
        lo = np.asarray(self.lower, dtype=float)
        if len(up) != max(len(d) - 1, 0) or len(lo) != max(len(d) - 1, 0):
            raise ValueError("off-diagonals must have length n-1")
        object.__setattr__(self, "diag", d)
        object.__setattr__(self, "upper", up)
        object.__setattr__(self, "lower", lo)

    @property
    def n(self) -> int:
        return len(self.diag)

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.upper, 1) + np.diag(self.lower, -1)


@dataclass(frozen=True)
class SectorRegion:
    """Open sector {Re z < mu, |Im z| < delta * (1 - Re z / mu)}."""

    mu: float
    delta: float

    def __post_init__(self):
        if not (self.mu > 0 and self.delta > 0):
            raise ValueError("sector parameters must be positive")


@dataclass(frozen=True)
class CertificateResult:
    hypotheses_ok: bool
    region: SectorRegion | None
    failures: tuple = ()


# ---------------------------------------------------------------------------
# compiled kernels
# ---------------------------------------------------------------------------


@njit(cache=True)
def _tqli_kernel(d, e, max_sweeps):
    """Implicit-shift QL on a symmetric tridiagonal (d, e), eigenvalues only.

    ``e`` has length n with e[n-1] used as workspace.  Returns 0 on success
    or 1 + index of the eigenvalue whose deflation exceeded ``max_sweeps``.
    """
    n = d.shape[0]
    eps = 2.220446049250313e-16
    for low in range(n):
        sweeps = 0
        while True:
            m = low
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= eps * dd:
                    break
                m += 1
            if m == low:
                break
            sweeps += 1
            if sweeps > max_sweeps:
                return low + 1
            g = (d[low + 1] - d[low]) / (2.0 * e[low])
            r = math.hypot(g, 1.0)
            sg = abs(r) if g >= 0.0 else -abs(r)
            g = d[m] - d[low] + e[low] / (g + sg)
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, low - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
            if underflow:
                continue
            d[low] -= p
            e[low] = g
            e[m] = 0.0
    return 0


@njit(cache=True)
def _hqr_kernel(a, wr, wi, max_its):
    """Francis double-shift QR on an upper Hessenberg matrix, in place.

    Fills (wr, wi) with the real and imaginary parts of the eigenvalues.
    Returns 0 on success, or 1 + index of the stuck deflation otherwise.
    """
    n = a.shape[0]
    eps = 2.220446049250313e-16
    anorm = 0.0
    for i in range(n):
        lo = i - 1 if i >= 1 else 0
        for j in range(lo, n):
            anorm += abs(a[i, j])
    if anorm == 0.0:
        for i in range(n):
            wr[i] = 0.0
            wi[i] = 0.0
        return 0
    nn = n - 1
    t = 0.0
    p = 0.0
    q = 0.0
    r = 0.0
    while nn >= 0:
        its = 0
        while True:
            l = nn
            while l >= 1:
                s = abs(a[l - 1, l - 1]) + abs(a[l, l])
                if s == 0.0:
                    s = anorm
                if abs(a[l, l - 1]) <= eps * s:
                    a[l, l - 1] = 0.0
                    break
                l -= 1
            x = a[nn, nn]
            if l == nn:
                wr[nn] = x + t
                wi[nn] = 0.0
                nn -= 1
                break
            y = a[nn - 1, nn - 1]
            w = a[nn, nn - 1] * a[nn - 1, nn]
            if l == nn - 1:
                p = 0.5 * (y - x)
                q = p * p + w
                z = math.sqrt(abs(q))
                x += t
                if q >= 0.0:
                    z = p + (abs(z) if p >= 0.0 else -abs(z))
                    wr[nn - 1] = x + z
                    wr[nn] = x + z
                    if z != 0.0:
                        wr[nn] = x - w / z
                    wi[nn - 1] = 0.0
                    wi[nn] = 0.0
                else:
                    wr[nn - 1] = x + p
                    wr[nn] = x + p
                    wi[nn] = z
                    wi[nn - 1] = -z
                nn -= 2
                break
            if its == max_its:
                return nn + 1
            if its == 10 or its == 20:
                # exceptional shift to break symmetric stalling
                t += x
                for i in range(nn + 1):
                    a[i, i] -= x
                s = abs(a[nn, nn - 1]) + abs(a[nn - 1, nn - 2])
                y = 0.75 * s
                x = 0.75 * s
                w = -0.4375 * s * s
            its += 1
            m = nn - 2
            while m >= l:
                z = a[m, m]
                r = x - z
                s = y - z
                p = (r * s - w) / a[m + 1, m] + a[m, m + 1]
                q = a[m + 1, m + 1] - z - r - s
                r = a[m + 2, m + 1]
                s = abs(p) + abs(q) + abs(r)
                p /= s
                q /= s
                r /= s
                if m == l:
                    break
                u = abs(a[m, m - 1]) * (abs(q) + abs(r))
                v = abs(p) * (abs(a[m - 1, m - 1]) + abs(z) + abs(a[m + 1, m + 1]))
                if u <= eps * v:
                    break
                m -= 1
            for i in range(m + 2, nn + 1):
                a[i, i - 2] = 0.0
                if i != m + 2:
                    a[i, i - 3] = 0.0
            for k in range(m, nn):
                if k != m:
                    p = a[k, k - 1]
                    q = a[k + 1, k - 1]
                    r = 0.0
                    if k != nn - 1:
                        r = a[k + 2, k - 1]
                    x = abs(p) + abs(q) + abs(r)
                    if x != 0.0:
                        p /= x
                        q /= x
                        r /= x
                s = math.sqrt(p * p + q * q + r * r)
                if p < 0.0:
                    s = -s
                if s != 0.0:
                    if k == m:
                        if l != m:
                            a[k, k - 1] = -a[k, k - 1]
                    else:
                        a[k, k - 1] = -s * x
                    p += s
                    x = p / s
                    y = q / s
                    z = r / s
                    q /= p
                    r /= p
                    for j in range(k, nn + 1):
                        p = a[k, j] + q * a[k + 1, j]
                        if k != nn - 1:
                            p += r * a[k + 2, j]
                            a[k + 2, j] -= p * z
                        a[k + 1, j] -= p * y
                        a[k, j] -= p * x
                    mmin = nn if nn < k + 3 else k + 3
                    for i in range(l, mmin + 1):
                        p = x * a[i, k] + y * a[i, k + 1]
                        if k != nn - 1:
                            p += z * a[i, k + 2]
                            a[i, k + 2] -= p * r
                        a[i, k + 1] -= p * q
                        a[i, k] -= p
    return 0


@njit(cache=True)
def _periodic_inertia(d, e, corner, x):
    """Number of eigenvalues below x for the band-plus-corner symmetric matrix.

    Eliminates variables in order, tracking the fill in the last row/column,
    and counts negative pivots (Sylvester's law).  Zero pivots are nudged to
    a tiny positive value, the standard Sturm-count safeguard.
    """
    n = d.shape[0]
    neg = 0
    if n == 1:
        return 1 if d[0] - x < 0.0 else 0
    if n == 2:
        a = d[0] - x
        b = e[0] + corner
        g = d[1] - x
        if a == 0.0:
            a = 1e-300
        if a < 0.0:
            neg += 1
        if g - b * b / a < 0.0:
            neg += 1
        return neg
    a = d[0] - x
    f = corner
    g = d[n - 1] - x
    for i in range(n - 2):
        if a == 0.0:
            a = 1e-300
        if a < 0.0:
            neg += 1
        ei = e[i]
        anext = d[i + 1] - x - ei * ei / a
        fnext = -ei * f / a
        if i + 1 == n - 2:
            fnext += e[n - 2]
        g = g - f * f / a
        a = anext
        f = fnext
    if a == 0.0:
        a = 1e-300
    if a < 0.0:
        neg += 1
    if g - f * f / a < 0.0:
        neg += 1
    return neg


@njit(cache=True)
def _periodic_kth_eigenvalue(d, e, corner, k, tol):
    """k-th smallest eigenvalue (0-based) via inertia bisection."""
    n = d.shape[0]
    r = abs(corner)
    lo = d[0]
    hi = d[0]
    for i in range(n):
        s = 0.0
        if i > 0:
            s += abs(e[i - 1])
        if i < n - 1:
            s += abs(e[i])
        if i == 0 or i == n - 1:
            s += r
        if d[i] - s < lo:
            lo = d[i] - s
        if d[i] + s > hi:
            hi = d[i] + s
    while hi - lo > tol * max(1.0, abs(lo) + abs(hi)):
        mid = 0.5 * (lo + hi)
        if _periodic_inertia(d, e, corner, mid) <= k:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# dense symmetric path
# ---------------------------------------------------------------------------


def _householder_tridiagonalize(matrix: np.ndarray):
    """Reduce a symmetric matrix to tridiagonal form by Householder similarity.

    Returns (diag, offdiag).  The reflector of step i annihilates row i left
    of the subdiagonal; the rank-2 update runs on the shrinking leading
    block, so the whole reduction is BLAS-2 bound.
    """
    a = np.array(matrix, dtype=float, copy=True)
    n = a.shape[0]
    e = np.zeros(max(n - 1, 0))
    for i in range(n - 1, 0, -1):
        if i > 1:
            row = a[i, :i].copy()
            scale = np.abs(row).sum()
            if scale == 0.0:
                e[i - 1] = 0.0
                continue
            u = row / scale
            h = u @ u
            f = u[-1]
            g = -math.copysign(math.sqrt(h), f)
            e[i - 1] = scale * g
            h -= f * g
            u[-1] = f - g
            block = a[:i, :i]
            p = (block @ u) / h
            k = (u @ p) / (2.0 * h)
            q = p - k * u
            block -= np.outer(q, u)
            block -= np.outer(u, q)
        else:
            e[0] = a[1, 0]
    return np.diag(a).copy(), e


def eig_dense_symmetric(matrix, k: int | None = None, max_sweeps: int = 50) -> np.ndarray:
    """All eigenvalues of a symmetric matrix, ascending (or the first k).

    Householder tridiagonalization followed by implicit-shift QL; each
    eigenvalue is deflated to relative machine precision or NoConvergence
    is raised after ``max_sweeps`` sweeps.
    """
    if not isinstance(matrix, DenseSymmetric):
        matrix = DenseSymmetric(np.asarray(matrix, dtype=float))
    n = matrix.n
    if n == 0:
        return np.zeros(0)
    if n == 1:
        vals = np.array([matrix.data[0, 0]])
        return vals if k is None else vals[:k]
    d, e = _householder_tridiagonalize(matrix.data)
    epad = np.zeros(n)
    epad[: n - 1] = e
    status = _tqli_kernel(d, epad, max_sweeps)
    if status != 0:
        raise NoConvergence(
            f"QL iteration exceeded {max_sweeps} sweeps at eigenvalue {status - 1}")
    d.sort()
    return d if k is None else d[:k]


def eig_sym_tridiagonal(tri: SymTridiagonal, max_sweeps: int = 50) -> np.ndarray:
    """Eigenvalues of a symmetric tridiagonal matrix via QL, ascending."""
    n = tri.n
    if n == 1:
        return tri.diag.copy()
    d = tri.diag.copy()
    epad = np.zeros(n)
    epad[: n - 1] = tri.offdiag
    status = _tqli_kernel(d, epad, max_sweeps)
    if status != 0:
        raise NoConvergence(
            f"QL iteration exceeded {max_sweeps} sweeps at eigenvalue {status - 1}")
    d.sort()
    return d


def sturm_count(tri: SymTridiagonal, x: float) -> int:
    """Number of eigenvalues of a symmetric tridiagonal matrix below x."""
    d = np.ascontiguousarray(tri.diag, dtype=float)
    e = np.ascontiguousarray(tri.offdiag, dtype=float)
    return int(_periodic_inertia(d, e, 0.0, float(x)))


def eig_periodic_sym_tridiagonal(diag, offdiag, corner: float, k: int = 1,
                                 tol: float = 1e-13) -> np.ndarray:
    """The k smallest eigenvalues of a symmetric periodic tridiagonal matrix.

    The matrix is the tridiagonal (diag, offdiag) plus ``corner`` at the two
    wrap-around positions (0, n-1) and (n-1, 0).  Each eigenvalue comes from
    inertia bisection, so the result is reliable for tightly clustered pairs.
    """
    d = np.ascontiguousarray(diag, dtype=float)
    e = np.ascontiguousarray(offdiag, dtype=float)
    if len(e) != len(d) - 1:
        raise ValueError("offdiag must have length n-1")
    if not 1 <= k <= len(d):
        raise ValueError("k out of range")
    return np.array([
        _periodic_kth_eigenvalue(d, e, float(corner), j, tol) for j in range(k)
    ])


# ---------------------------------------------------------------------------
# general tridiagonal path
# ---------------------------------------------------------------------------


def _balanced_dense(tri: Tridiagonal) -> np.ndarray:
    """Hessenberg matrix similar to ``tri`` with equilibrated off-diagonals.

    A diagonal similarity can rescale each (upper, lower) pair freely as
    long as the product is preserved, so paired entries are set to the
    (signed) square root of their product's magnitude.
    """
    n = tri.n
    up = tri.upper.copy()
    lo = tri.lower.copy()
    for i in range(n - 1):
        prod = up[i] * lo[i]
        if prod == 0.0:
            continue
        t = math.sqrt(abs(prod))
        s = 1.0 if up[i] >= 0.0 else -1.0
        up[i] = s * t
        lo[i] = s * t if prod > 0.0 else -s * t
    a = np.zeros((n, n))
    idx = np.arange(n)
    a[idx, idx] = tri.diag
    if n > 1:
        a[idx[:-1], idx[1:]] = up
        a[idx[1:], idx[:-1]] = lo
    return a


def eig_general_tridiagonal(tri: Tridiagonal, max_its: int = 40) -> np.ndarray:
    """All eigenvalues of a real tridiagonal matrix as complex numbers.

    Balancing followed by Francis double-shift QR.  The result is sorted by
    (real, imaginary) part, which keeps conjugate pairs adjacent.
    """
    n = tri.n
    if n == 0:
        return np.zeros(0, dtype=complex)
    a = _balanced_dense(tri)
    wr = np.zeros(n)
    wi = np.zeros(n)
    status = _hqr_kernel(a, wr, wi, max_its)
    if status != 0:
        raise NoConvergence(
            f"QR iteration exceeded {max_its} iterations while deflating row {status - 1}")
    ev = wr + 1j * wi
    return ev[np.lexsort((ev.imag, ev.real))]


def char_poly_tridiagonal(tri: Tridiagonal, z) -> complex:
    """det(A - z I) for a tridiagonal A via the three-term recurrence.

    P_0 = 1, P_1 = delta_1 - z, and
    P_{k+1}(z) = (delta_{k+1} - z) P_k(z) - upper_k * lower_k * P_{k-1}(z).
    Exact in exact arithmetic; for large n the value can overflow float
    range since it grows like the product of the diagonal entries.
    """
    z = complex(z)
    if tri.n == 0:
        return 1.0 + 0.0j
    prev = 1.0 + 0.0j
    cur = tri.diag[0] - z
    for i in range(1, tri.n):
        nxt = (tri.diag[i] - z) * cur - tri.upper[i - 1] * tri.lower[i - 1] * prev
        prev, cur = cur, nxt
    return cur


# ---------------------------------------------------------------------------
# sector exclusion certificate
# ---------------------------------------------------------------------------


def sector_exclusion_certificate(tri: Tridiagonal, delta: float) -> CertificateResult:
    """Check the spectral sector-exclusion hypotheses for a tridiagonal matrix.

    Hypotheses: every diagonal entry positive, every product
    upper_k * lower_k nonpositive, and 0 < delta <= (pi/2) * (sum 1/diag)^-1.
    When they hold, the matrix has no eigenvalue in the returned open
    sector with right vertex mu = min(diag); callers assert that on the
    computed spectrum.
    """
    failures = []
    diag = tri.diag
    if tri.n == 0:
        failures.append("empty matrix")
    if tri.n and not np.all(diag > 0.0):
        failures.append("diagonal entries must be positive")
    if tri.n > 1 and not np.all(tri.upper * tri.lower <= 0.0):
        failures.append("off-diagonal products must be nonpositive")
    delta = float(delta)
    if not failures:
        delta_max = (np.pi / 2.0) / np.sum(1.0 / diag)
        if not 0.0 < delta <= delta_max:
            failures.append(
                f"delta must lie in (0, {delta_max:.6g}], got {delta:.6g}")
    mu = float(diag.min()) if tri.n else 0.0
    region = SectorRegion(mu, delta) if (mu > 0.0 and delta > 0.0) else None
    return CertificateResult(hypotheses_ok=not failures, region=region,
                             failures=tuple(failures))


def point_in_sector(z, region: SectorRegion) -> bool:
    """Strict membership in the open sector (boundary excluded)."""
    z = complex(z)
    if not z.real < region.mu:
        return False
    return abs(z.imag) < region.delta * (1.0 - z.real / region.mu)
