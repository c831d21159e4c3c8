"""Dense complex linear algebra for small Hermitian problems.

The eigensolver is a cyclic Jacobi method with a round-robin pivot order, so
each round applies up to ``d // 2`` disjoint complex rotations as one unitary
and stacks of matrices are diagonalized together. The SVD reuses it through the
Gram matrix ``m^H m``, and polynomial roots come from a balanced companion
matrix followed by multiplicity-aware refinement.
"""

from functools import lru_cache
from math import factorial

import numpy as np

from .config import DEFAULTS
from .errors import ComplexRootsDetected, ConvergenceError, NotHermitian, NotSquare

_EPS = np.finfo(float).eps

__all__ = [
    "as_matrix",
    "hermitian_eigensystem",
    "eigvalsh",
    "svd",
    "trace_power",
    "real_poly_roots",
]


def as_matrix(m, *, stacked=False):
    """Return ``m`` as a finite complex128 array of square matrices.

    With ``stacked=True`` leading batch axes are allowed.
    """
    a = np.asarray(m, dtype=complex)
    if a.ndim < 2 or (a.ndim > 2 and not stacked):
        raise NotSquare(f"expected a matrix, got an array of shape {a.shape}")
    if a.shape[-1] != a.shape[-2]:
        raise NotSquare(f"matrix of shape {a.shape[-2:]} is not square")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has NaN or infinite entries")
    return a


@lru_cache(maxsize=None)
def _round_robin(d):
    """Pivot pairs grouped into rounds of disjoint pairs covering every (p, q) once."""
    n = d + d % 2
    players = list(range(n))
    rounds = []
    for _ in range(n - 1):
        pairs = sorted(
            (min(a, b), max(a, b))
            for a, b in zip(players[: n // 2], reversed(players[n // 2 :]))
            if max(a, b) < d
        )
        p = np.array([a for a, _ in pairs], dtype=np.intp)
        q = np.array([b for _, b in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _jacobi(a, want_vectors=True, max_sweeps=60):
    """Diagonalize a stack ``(B, d, d)`` of Hermitian matrices.

    Returns the (unsorted) diagonal and the accumulated unitary.
    """
    batch, d, _ = a.shape
    eye = np.eye(d, dtype=complex)
    v = np.broadcast_to(eye, a.shape).copy() if want_vectors else None
    scale = np.abs(a).reshape(batch, -1).max(axis=1, initial=0.0)
    floor = (1e-32 * scale)[:, None]
    rel = 4 * _EPS

    for _ in range(max_sweeps):
        rotated = False
        for p, q in _round_robin(d):
            apq = a[:, p, q]
            app = a[:, p, p].real
            aqq = a[:, q, q].real
            r = np.abs(apq)
            active = (r > rel * np.sqrt(np.abs(app * aqq))) & (r > floor)
            if not active.any():
                continue
            rotated = True
            rs = np.where(active, r, 1.0)
            theta = (aqq - app) / (2.0 * rs)
            t = np.copysign(1.0, theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            # e^{-i phi} for a_pq = r e^{i phi}; phase-rotating q first makes a_pq real
            ph = np.where(active, apq / rs, 1.0).conj()

            j = np.broadcast_to(eye, a.shape).copy()
            j[:, p, p] = c
            j[:, p, q] = s
            j[:, q, p] = -s * ph
            j[:, q, q] = c * ph
            a = np.swapaxes(j.conj(), 1, 2) @ a @ j
            # the rotated 2x2 blocks are known exactly
            a[:, p, q] = np.where(active, 0.0, a[:, p, q])
            a[:, q, p] = np.where(active, 0.0, a[:, q, p])
            a[:, p, p] = app - t * r
            a[:, q, q] = aqq + t * r
            if want_vectors:
                v = v @ j
        if not rotated:
            return np.diagonal(a, axis1=1, axis2=2).real.copy(), v
    raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps")


def _prepare_hermitian(m, tol):
    a = as_matrix(m, stacked=True)
    residual = np.abs(a - np.swapaxes(a.conj(), -1, -2)).max() if a.size else 0.0
    if residual > tol:
        raise NotHermitian(f"Hermiticity residual {residual:.3g} exceeds {tol:.3g}")
    return 0.5 * (a + np.swapaxes(a.conj(), -1, -2))


def hermitian_eigensystem(m, tol=DEFAULTS.hermitian):
    """Eigenvalues and eigenvectors of a Hermitian matrix or a stack of them.

    Parameters
    ----------
    m : array_like, shape (..., d, d)
        Hermitian up to ``tol`` in the max norm; the Hermitian part is used.
    tol : float
        Accepted ``max |m - m^H|``.

    Returns
    -------
    values : ndarray, shape (..., d)
        Real eigenvalues sorted in descending order.
    vectors : ndarray, shape (..., d, d)
        Unitary matrix whose columns are the matching eigenvectors.

    Raises
    ------
    NotSquare, NotHermitian
    """
    a = _prepare_hermitian(m, tol)
    lead, d = a.shape[:-2], a.shape[-1]
    values, vectors = _jacobi(a.reshape((-1, d, d)))
    order = np.argsort(-values, axis=1, kind="stable")
    values = np.take_along_axis(values, order, axis=1)
    vectors = np.take_along_axis(vectors, order[:, None, :], axis=2)
    return values.reshape(lead + (d,)), vectors.reshape(lead + (d, d))


def eigvalsh(m, tol=DEFAULTS.hermitian):
    """Descending eigenvalues only (skips eigenvector accumulation)."""
    a = _prepare_hermitian(m, tol)
    lead, d = a.shape[:-2], a.shape[-1]
    values, _ = _jacobi(a.reshape((-1, d, d)), want_vectors=False)
    return -np.sort(-values, axis=1).reshape(lead + (d,))


def _orthonormal_columns(w, s, cutoff):
    """Normalize ``w[:, i] / s[i]`` with two Gram-Schmidt passes; fill null columns from the standard basis."""
    d = w.shape[0]
    u = np.zeros_like(w)
    basis = np.eye(d, dtype=complex)
    for i in range(d):
        if s[i] > cutoff:
            x = w[:, i] / s[i]
        else:
            # pick the basis vector least covered by the columns so far
            resid = basis - u[:, :i] @ (u[:, :i].conj().T @ basis)
            x = basis[:, np.argmax(np.linalg.norm(resid, axis=0))]
        for _ in range(2):
            x = x - u[:, :i] @ (u[:, :i].conj().T @ x)
        u[:, i] = x / np.linalg.norm(x)
    return u


def svd(m, *, refinements=1):
    """Singular value decomposition ``m = U diag(s) V^H`` of a square matrix.

    ``V`` comes from the eigenvectors of ``m^H m``. Each refinement pass
    re-diagonalizes the Gram matrix of ``m V``, whose columns are already
    nearly orthogonal, which recovers small singular values to relative
    rather than absolute accuracy. ``U`` is ``m V`` with normalized and
    re-orthogonalized columns.

    Returns
    -------
    u : ndarray, shape (d, d)
    s : ndarray, shape (d,)
        Nonnegative, descending.
    v : ndarray, shape (d, d)
    """
    a = as_matrix(m)
    d = a.shape[0]
    eye = np.eye(d, dtype=complex)
    if d == 0 or not np.any(a):
        return eye.copy(), np.zeros(d), eye.copy()

    _, v = hermitian_eigensystem(a.conj().T @ a, tol=np.inf)
    for _ in range(refinements):
        w = a @ v
        _, v2 = hermitian_eigensystem(w.conj().T @ w, tol=np.inf)
        v = v @ v2
    w = a @ v
    s = np.linalg.norm(w, axis=0)
    order = np.argsort(-s, kind="stable")
    s, v, w = s[order], v[:, order], w[:, order]
    cutoff = max(d, 1) * _EPS * s[0]
    u = _orthonormal_columns(w, s, cutoff)
    s = np.where(s > cutoff, s, 0.0)
    return u, s, v


def trace_power(m, k, tol=DEFAULTS.trace_imag):
    """``Tr(m^k)`` by repeated squaring, returned as a real number.

    Raises
    ------
    NotHermitian
        If the imaginary part of the trace exceeds ``tol``.
    """
    a = as_matrix(m)
    if int(k) != k or k < 1:
        raise ValueError(f"power must be a positive integer, got {k}")
    result, base, k = None, a, int(k)
    while k:
        if k & 1:
            result = base if result is None else result @ base
        k >>= 1
        if k:
            base = base @ base
    tr = np.trace(result)
    if abs(tr.imag) > tol:
        raise NotHermitian(f"trace has imaginary part {tr.imag:.3g}")
    return float(tr.real)


def _companion_eigenvalues(monic):
    n = len(monic) - 1
    comp = np.zeros((n, n))
    comp[0, :] = -monic[1:]
    comp[np.arange(1, n), np.arange(n - 1)] = 1.0
    # LAPACK geev balances (gebal, permute + scale) before the QR iteration
    return np.linalg.eigvals(comp)


def _newton(coeffs, x, steps=60):
    """Newton iteration on a real polynomial from ``x``; returns the last good iterate."""
    deriv = np.polyder(coeffs)
    best, best_val = x, abs(np.polyval(coeffs, x))
    for _ in range(steps):
        slope = np.polyval(deriv, x)
        if slope == 0:
            break
        step = np.polyval(coeffs, x) / slope
        x = x - step
        val = abs(np.polyval(coeffs, x))
        if val <= best_val:
            best, best_val = x, val
        if abs(step) <= 2 * _EPS * max(1.0, abs(x)):
            break
    return best


def _single_linkage(z, radius):
    """Group points whose chained pairwise distances are within ``radius``."""
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    dist = np.abs(z[:, None] - z[None, :])
    for i, j in zip(*np.nonzero(np.triu(dist <= radius, 1))):
        parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def _refine_cluster(monic, center, multiplicity, radius):
    """Locate a real root of the given multiplicity near ``center`` via the (m-1)-th derivative."""
    target = np.polyder(monic, multiplicity - 1) if multiplicity > 1 else monic
    x = _newton(target / factorial(multiplicity - 1), center)
    if abs(x - center) > max(radius, 1e-12):
        return center
    return x


def _fit_multiple_roots(monic, centers, mults, max_iter=30):
    """Gauss-Newton fit of ``prod (x - z_k)^m_k`` to ``monic`` over the centers ``z_k``.

    Multiplicities stay fixed, so each step solves an overdetermined linear
    system with one unknown per distinct root.
    """
    z = np.array(centers, dtype=float)
    mults = np.asarray(mults)
    scale = np.abs(np.poly(-np.abs(np.repeat(z, mults))))[1:]
    weight = 1.0 / np.maximum(scale, _EPS * scale.max(initial=1.0))
    for _ in range(max_iter):
        resid = (np.poly(np.repeat(z, mults)) - monic)[1:]
        jac = np.empty((len(resid), len(z)))
        for i in range(len(z)):
            m = mults.copy()
            m[i] -= 1
            jac[:, i] = -mults[i] * np.poly(np.repeat(z, m))
        step = np.linalg.lstsq(jac * weight[:, None], -resid * weight, rcond=None)[0]
        z = z + step
        if np.max(np.abs(step)) <= 4 * _EPS * max(1.0, np.max(np.abs(z))):
            break
    return z


def _backward_error(monic, roots):
    """Coefficient mismatch of the rebuilt polynomial, relative to prod(x + |r|)."""
    rebuilt = np.poly(roots)
    scale = np.max(np.abs(np.poly(-np.abs(roots))))
    return np.max(np.abs(rebuilt - monic)) / scale


def real_poly_roots(coefficients, imag_tol=DEFAULTS.root_imag, backward_tol=1e-10):
    """All roots of a real polynomial known to have only real roots.

    Parameters
    ----------
    coefficients : sequence of float
        Highest degree first; the leading coefficient must be nonzero.
    imag_tol : float
        Imaginary parts at most this large are dropped.
    backward_tol : float
        Coefficient mismatch allowed when a cluster of companion eigenvalues
        is collapsed into one multiple real root, measured relative to the
        coefficients of ``prod(x + |r_i|)``.

    Returns
    -------
    ndarray
        Roots with multiplicity, sorted descending.

    Raises
    ------
    ComplexRootsDetected
        If the roots cannot be explained as a real multiset.

    Notes
    -----
    A root of multiplicity ``m`` perturbed by rounding spreads into a ring of
    radius about ``eps ** (1 / m)`` in the companion eigenvalues, far beyond
    ``imag_tol``. Such rings are grouped by single linkage over a growing
    radius; each group with a real centroid is replaced by one real root of
    that multiplicity, refined by Newton's method on the ``(m - 1)``-th
    derivative, and the grouping is accepted only when the rebuilt polynomial
    matches the input to ``backward_tol``.
    """
    c = np.asarray(coefficients, dtype=float)
    if c.ndim != 1 or len(c) == 0:
        raise ValueError("coefficients must be a nonempty 1-D sequence")
    if not np.all(np.isfinite(c)):
        raise ValueError("coefficients must be finite")
    if c[0] == 0:
        raise ValueError("leading coefficient must be nonzero")
    monic = c / c[0]
    # exact zero roots deflate without error
    zeros = len(monic) - len(np.trim_zeros(monic, "b"))
    monic = np.trim_zeros(monic, "b")
    return np.sort(np.concatenate([_nonzero_roots(monic, imag_tol, backward_tol), np.zeros(zeros)]))[::-1]


def _nonzero_roots(monic, imag_tol, backward_tol):
    n = len(monic) - 1
    if n == 0:
        return np.zeros(0)
    z = _companion_eigenvalues(monic)

    if np.all(np.abs(z.imag) <= imag_tol):
        x = np.sort(z.real)[::-1]
        polished = x.copy()
        for i in range(n):
            gaps = np.abs(np.delete(x, i) - x[i])
            guard = 0.5 * gaps.min() if n > 1 else np.inf
            y = _newton(monic, x[i])
            if abs(y - x[i]) < guard:
                polished[i] = y
        return np.sort(polished)[::-1]

    spread = 1.0 + np.max(np.abs(z))
    radius = imag_tol
    while radius <= 0.5 * spread:
        roots = _collapse_clusters(monic, z, radius, imag_tol)
        if roots is not None and _backward_error(monic, roots) <= backward_tol:
            return np.sort(roots)[::-1]
        radius *= 2.0
    worst = np.max(np.abs(z.imag))
    raise ComplexRootsDetected(f"polynomial has a root with imaginary part ~{worst:.3g}")


def _collapse_clusters(monic, z, radius, imag_tol):
    clusters = []
    for group in _single_linkage(z, radius):
        centroid = z[group].mean()
        if abs(centroid.imag) > imag_tol:
            return None
        clusters.append([centroid.real, len(group)])
    # refine, then merge groups whose refined centers coincide
    while True:
        clusters = [[_refine_cluster(monic, x, m, radius), m] for x, m in clusters]
        fitted = _fit_multiple_roots(monic, [x for x, _ in clusters], [m for _, m in clusters])
        if np.all(np.isfinite(fitted)):
            clusters = [[x, m] for x, (_, m) in zip(fitted, clusters)]
        clusters.sort()
        merged = [clusters[0]]
        for x, m in clusters[1:]:
            px, pm = merged[-1]
            if abs(x - px) <= radius:
                merged[-1] = [(px * pm + x * m) / (pm + m), pm + m]
            else:
                merged.append([x, m])
        if len(merged) == len(clusters):
            break
        clusters = merged
    return np.repeat([x for x, _ in clusters], [m for _, m in clusters])
