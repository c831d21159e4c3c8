"""Partial-transpose moments and their conversion to spectra.

The k-th PT moment is the power sum ``p_k = sum_i x_i**k`` over the
eigenvalues ``x_i`` of the partial transpose. Power sums and elementary
symmetric polynomials determine each other through Newton's identities,
and the elementary symmetric polynomials are the coefficients of the
characteristic polynomial, so a full moment vector pins down the spectrum.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np

from . import numkit
from .config import DEFAULTS
from .errors import InvalidMoments
from .states import pt_spectrum

__all__ = [
    "PTMomentVector",
    "ElementarySymmetric",
    "RanaReport",
    "power_sums",
    "pt_moments",
    "moments_to_elementary",
    "elementary_to_moments",
    "elementary_by_determinant",
    "moments_by_determinant",
    "characteristic_polynomial",
    "reconstruct_spectrum",
    "check_rana",
]


def _as_vector(values, name):
    v = np.array(values, dtype=float).reshape(-1)
    if v.size == 0:
        raise InvalidMoments(f"{name} vector is empty")
    if not np.all(np.isfinite(v)):
        raise InvalidMoments(f"{name} vector has non-finite entries")
    return v


@dataclass(frozen=True)
class PTMomentVector:
    """Moments ``(p_1, ..., p_k)`` of a PT spectrum living in dimension ``ambient_dim``.

    The constructor checks structure only (finite entries, ``k <= ambient_dim``)
    so that power sums of arbitrary real spectra can be represented too.
    :meth:`check_physical` tests the constraints every density matrix obeys.
    """

    values: np.ndarray
    ambient_dim: int

    def __post_init__(self):
        v = _as_vector(self.values, "moment")
        if int(self.ambient_dim) != self.ambient_dim or self.ambient_dim < 1:
            raise InvalidMoments(f"ambient dimension must be a positive integer, got {self.ambient_dim}")
        if v.size > self.ambient_dim:
            raise InvalidMoments(f"{v.size} moments exceed ambient dimension {self.ambient_dim}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "ambient_dim", int(self.ambient_dim))

    def __len__(self):
        return self.values.size

    def check_physical(self, tol=DEFAULTS.trace):
        """Raise InvalidMoments unless ``p_1 = 1`` and ``1/d <= p_2 <= 1`` within ``tol``."""
        p = self.values
        if abs(p[0] - 1.0) > tol:
            raise InvalidMoments(f"p_1 = {p[0]!r}, expected 1")
        if p.size > 1 and not (1.0 / self.ambient_dim - tol <= p[1] <= 1.0 + tol):
            raise InvalidMoments(f"p_2 = {p[1]!r} outside [1/{self.ambient_dim}, 1]")
        return self


@dataclass(frozen=True)
class ElementarySymmetric:
    """Elementary symmetric polynomials ``(e_1, ..., e_k)``; ``e_0 = 1`` is implicit."""

    values: np.ndarray

    def __post_init__(self):
        v = _as_vector(self.values, "elementary symmetric")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __len__(self):
        return self.values.size


@dataclass(frozen=True)
class RanaReport:
    in_interval: bool
    negative_count: int
    bound: int

    @property
    def holds(self):
        return self.in_interval and self.negative_count <= self.bound

    def to_dict(self):
        return {
            "in_interval": self.in_interval,
            "negative_count": self.negative_count,
            "bound": self.bound,
            "holds": self.holds,
        }


def _values(x):
    return x.values if isinstance(x, (PTMomentVector, ElementarySymmetric)) else x


def power_sums(spectra, k_max):
    """``sum_i x_i**k`` for ``k = 1..k_max`` along the last axis of ``spectra``."""
    x = np.asarray(spectra, dtype=float)
    powers = np.cumprod(np.broadcast_to(x[..., None, :], x.shape[:-1] + (k_max, x.shape[-1])), axis=-2)
    return powers.sum(axis=-1)


def pt_moments(state, k_max=None):
    """PT moments ``p_1..p_k_max`` of a state, as power sums of the PT spectrum.

    Parameters
    ----------
    state : BipartiteState
    k_max : int, optional
        Defaults to the full dimension ``d``.

    Returns
    -------
    PTMomentVector
    """
    d = state.d
    k_max = d if k_max is None else k_max
    if int(k_max) != k_max or not 1 <= k_max <= d:
        raise InvalidMoments(f"k_max must lie in [1, {d}], got {k_max}")
    return PTMomentVector(power_sums(pt_spectrum(state), int(k_max)), d)


def moments_to_elementary(p):
    """Newton's identities ``k e_k = sum_{i=1..k} (-1)**(i-1) e_{k-i} p_i``.

    Parameters
    ----------
    p : PTMomentVector or sequence of float
        Power sums ``(p_1, ..., p_k)``; no physical constraint is imposed.

    Returns
    -------
    ElementarySymmetric
        ``(e_1, ..., e_k)``.
    """
    p = _as_vector(_values(p), "moment")
    e = np.zeros(p.size + 1)
    e[0] = 1.0
    for k in range(1, p.size + 1):
        i = np.arange(1, k + 1)
        e[k] = np.sum((-1.0) ** (i - 1) * e[k - i] * p[i - 1]) / k
    return ElementarySymmetric(e[1:])


def elementary_to_moments(e, ambient_dim=None):
    """Inverse of :func:`moments_to_elementary`.

    ``p_k = sum_{i=1..k-1} (-1)**(i-1) e_i p_{k-i} + (-1)**(k-1) k e_k``.
    """
    e = _as_vector(_values(e), "elementary symmetric")
    p = np.zeros(e.size)
    for k in range(1, e.size + 1):
        i = np.arange(1, k)
        p[k - 1] = np.sum((-1.0) ** (i - 1) * e[i - 1] * p[k - i - 1]) + (-1.0) ** (k - 1) * k * e[k - 1]
    return PTMomentVector(p, e.size if ambient_dim is None else ambient_dim)


def _lower_hessenberg(first_column, band, superdiag):
    k = len(first_column)
    m = np.zeros((k, k))
    m[:, 0] = first_column
    for i in range(k):
        for j in range(1, i + 1):
            m[i, j] = band[i - j]
        if i + 1 < k:
            m[i, i + 1] = superdiag[i]
    return m


def elementary_by_determinant(p, k):
    """``e_k`` as ``det(M) / k!`` with ``M`` the lower Hessenberg matrix of power sums.

    Row ``i`` of ``M`` is ``(p_{i+1}, p_i, ..., p_1, i+1, 0, ...)``. Kept as an
    independent check on the recurrence; it is costly and unstable for large ``k``.
    """
    p = _as_vector(_values(p), "moment")[:k]
    m = _lower_hessenberg(p, p, np.arange(1, k))
    return float(np.linalg.det(m)) / factorial(k)


def moments_by_determinant(e, k):
    """``p_k`` as ``det(M)`` with rows ``(i e_i, e_{i-1}, ..., e_1, 1, 0, ...)``."""
    e = _as_vector(_values(e), "elementary symmetric")[:k]
    m = _lower_hessenberg(np.arange(1, k + 1) * e, e, np.ones(k - 1))
    return float(np.linalg.det(m))


def characteristic_polynomial(e, d=None):
    """Coefficients ``(1, -e_1, e_2, ..., (-1)**d e_d)`` of ``prod_i (x - x_i)``, highest degree first."""
    e = _as_vector(_values(e), "elementary symmetric")
    d = e.size if d is None else d
    if e.size != d:
        raise InvalidMoments(f"need {d} elementary symmetric values, got {e.size}")
    signs = (-1.0) ** np.arange(1, d + 1)
    return np.concatenate([[1.0], signs * e])


def reconstruct_spectrum(p, tol=DEFAULTS.trace):
    """Recover the PT spectrum from the full moment vector.

    Parameters
    ----------
    p : PTMomentVector or sequence of float
        A plain sequence is taken to be complete (``ambient_dim = len(p)``).
    tol : float
        Tolerance of the physical checks on ``p_1`` and ``p_2``.

    Returns
    -------
    ndarray
        Descending eigenvalues, repeated by multiplicity.

    Raises
    ------
    InvalidMoments
        Partial vector, or ``p_1``/``p_2`` outside their physical range.
    ComplexRootsDetected
        No real spectrum has these moments.
    """
    if not isinstance(p, PTMomentVector):
        values = _as_vector(p, "moment")
        p = PTMomentVector(values, values.size)
    if len(p) != p.ambient_dim:
        raise InvalidMoments(
            f"reconstruction needs all {p.ambient_dim} moments, got {len(p)}"
        )
    p.check_physical(tol)
    e = moments_to_elementary(p)
    return numkit.real_poly_roots(characteristic_polynomial(e, p.ambient_dim))


def check_rana(spectrum, dim_a, dim_b, tol=DEFAULTS.rana):
    """Test a PT spectrum against Rana's bound.

    Every eigenvalue of a partially transposed state lies in ``[-1/2, 1]`` and
    at most ``(dim_a - 1)(dim_b - 1)`` of them are negative.

    Returns
    -------
    RanaReport
        ``in_interval`` uses the band ``[-1/2 - tol, 1 + tol]``; values below
        ``-tol`` count as negative.
    """
    x = np.asarray(spectrum, dtype=float).reshape(-1)
    if x.size != dim_a * dim_b:
        raise ValueError(f"spectrum has {x.size} values, expected {dim_a * dim_b}")
    in_interval = bool(np.all((x >= -0.5 - tol) & (x <= 1.0 + tol)))
    return RanaReport(in_interval, int(np.count_nonzero(x < -tol)), (dim_a - 1) * (dim_b - 1))
