"""Entanglement diagnostics built on the partial-transpose spectrum.

Covers the closed-form PT spectrum of pure states, negativity, the PPT test,
the moment-based test for maximally entangled two-qubit states, the moment
vector of a maximally entangled ``n x n`` state, and the mixture property of
the minimal PT eigenvalue ``-1/2``.
"""

import enum
from dataclasses import dataclass

import numpy as np

from .config import DEFAULTS
from .errors import IncompatibleDimensions, WrongDimensions
from .moments import PTMomentVector, power_sums, reconstruct_spectrum
from .states import BipartiteState, SchmidtForm, pt_spectrum

__all__ = [
    "Verdict",
    "CertificationReport",
    "MixtureCheck",
    "pure_pt_spectrum",
    "negativity",
    "negativity_from_spectrum",
    "ppt_check",
    "certify_max_entangled_2q",
    "certify_from_spectrum",
    "max_entangled_moment_vector",
    "lambda_min_from_max_entangled_moments",
    "mixture_lambda_min_property",
]

BELL_MOMENTS = np.array([1.0, 1.0, 0.25, 0.25])


class Verdict(str, enum.Enum):
    MAXIMALLY_ENTANGLED = "maximally_entangled"
    NOT_MAXIMALLY_ENTANGLED = "not_maximally_entangled"


@dataclass(frozen=True)
class CertificationReport:
    """Outcome of :func:`certify_max_entangled_2q`.

    ``moment_residual`` is ``max_k |p_k - (1, 1, 1/4, 1/4)_k|``; the verdict
    depends on it alone. ``lambda_min`` and ``negativity`` come from the same
    PT spectrum and corroborate it.
    """

    verdict: Verdict
    lambda_min: float
    negativity: float
    moment_residual: float
    tolerance: float
    moments: tuple

    def to_dict(self):
        return {
            "verdict": self.verdict.value,
            "lambda_min": self.lambda_min,
            "negativity": self.negativity,
            "moment_residual": self.moment_residual,
            "tolerance": self.tolerance,
            "moments": list(self.moments),
        }


def pure_pt_spectrum(sf):
    """PT spectrum of a pure state from its Schmidt coefficients.

    For coefficients ``sigma_1..sigma_d`` the eigenvalues are ``sigma_i**2``
    and ``+-sigma_i sigma_j`` for ``i < j``, ``d**2`` values in total.

    Parameters
    ----------
    sf : SchmidtForm or sequence of float

    Returns
    -------
    ndarray
        Sorted descending.
    """
    s = np.asarray(sf.sigmas if isinstance(sf, SchmidtForm) else sf, dtype=float)
    i, j = np.triu_indices(s.size, k=1)
    cross = s[i] * s[j]
    return -np.sort(-np.concatenate([s * s, cross, -cross]))


def negativity_from_spectrum(spectrum, threshold=DEFAULTS.negative):
    """``|sum of eigenvalues below -threshold|``."""
    x = np.asarray(spectrum, dtype=float)
    return abs(float(np.sum(x, where=x < -threshold, axis=-1)))


def negativity(state, threshold=DEFAULTS.negative):
    """Negativity ``|sum_i min(x_i, 0)|`` over the PT spectrum ``x`` of ``state``."""
    return negativity_from_spectrum(pt_spectrum(state), threshold)


def ppt_check(state, tol=DEFAULTS.ppt):
    """True iff the partial transpose has no eigenvalue below ``-tol``.

    Every separable state passes. For 2x2 and 2x3 systems (either order)
    passing also implies separability.
    """
    return bool(pt_spectrum(state)[-1] >= -tol)


def certify_from_spectrum(spectrum, tol=DEFAULTS.certify):
    """Certification report from an already computed two-qubit PT spectrum."""
    x = np.asarray(spectrum, dtype=float)
    if x.shape != (4,):
        raise WrongDimensions(f"expected four PT eigenvalues, got shape {x.shape}")
    p = power_sums(x, 4)
    residual = float(np.max(np.abs(p - BELL_MOMENTS)))
    verdict = Verdict.MAXIMALLY_ENTANGLED if residual <= tol else Verdict.NOT_MAXIMALLY_ENTANGLED
    return CertificationReport(
        verdict=verdict,
        lambda_min=float(x.min()),
        negativity=negativity_from_spectrum(x),
        moment_residual=residual,
        tolerance=float(tol),
        moments=tuple(float(v) for v in p),
    )


def certify_max_entangled_2q(state, tol=DEFAULTS.certify):
    """Decide whether a two-qubit state is maximally entangled from its PT moments.

    The state is maximally entangled exactly when ``(p_1, .., p_4)`` equals
    ``(1, 1, 1/4, 1/4)``; equivalently ``lambda_min = -1/2`` or negativity
    ``1/2``. The verdict uses the moment condition at tolerance ``tol``.

    Raises
    ------
    WrongDimensions
        Unless ``dim_a == dim_b == 2``.
    """
    if (state.dim_a, state.dim_b) != (2, 2):
        raise WrongDimensions(f"certification needs a 2x2 system, got {state.dim_a}x{state.dim_b}")
    return certify_from_spectrum(pt_spectrum(state), tol)


def max_entangled_moment_vector(n):
    """``p_k = ((n+1) + (n-1)(-1)**k) / (2 n**(k-1))`` for ``k = 1..n**2``."""
    if int(n) != n or n < 2:
        raise ValueError(f"n must be an integer >= 2, got {n}")
    k = np.arange(1, n * n + 1)
    p = ((n + 1) + (n - 1) * (-1.0) ** k) / (2.0 * float(n) ** (k - 1))
    return PTMomentVector(p, n * n)


def lambda_min_from_max_entangled_moments(n):
    """Smallest root recovered from :func:`max_entangled_moment_vector`; equals ``-1/n``."""
    return float(reconstruct_spectrum(max_entangled_moment_vector(n))[-1])


@dataclass(frozen=True)
class MixtureCheck:
    """Minimal PT eigenvalues of ``t sigma + (1-t) tau`` and of both components.

    ``triggered`` says the mixture reached ``-1/2``; ``holds`` is then true iff
    both components sit at ``-1/2`` too, and it is vacuously true otherwise.
    """

    lambda_min_mixture: float
    lambda_min_sigma: float
    lambda_min_tau: float
    triggered: bool
    holds: bool


def mixture_lambda_min_property(
    sigma, tau, t, trigger_tol=DEFAULTS.mixture_trigger, tol=DEFAULTS.mixture_component
):
    """Check that a mixture can only reach PT eigenvalue ``-1/2`` if both parts do.

    Parameters
    ----------
    sigma, tau : BipartiteState
        Same subsystem dimensions.
    t : float
        Weight of ``sigma``, strictly between 0 and 1.
    trigger_tol : float
        The mixture counts as reaching ``-1/2`` when its minimal PT eigenvalue
        is within this distance.
    tol : float
        Allowed distance of the components' minimal eigenvalues from ``-1/2``.

    Raises
    ------
    IncompatibleDimensions
    ValueError
        If ``t`` is outside ``(0, 1)``.
    """
    if (sigma.dim_a, sigma.dim_b) != (tau.dim_a, tau.dim_b):
        raise IncompatibleDimensions(
            f"cannot mix {sigma.dim_a}x{sigma.dim_b} with {tau.dim_a}x{tau.dim_b}"
        )
    if not 0.0 < t < 1.0:
        raise ValueError(f"mixing weight must lie in (0, 1), got {t}")
    rho = BipartiteState(sigma.dim_a, sigma.dim_b, t * sigma.rho + (1.0 - t) * tau.rho)
    lm_rho, lm_sigma, lm_tau = (float(pt_spectrum(s)[-1]) for s in (rho, sigma, tau))
    triggered = abs(lm_rho + 0.5) <= trigger_tol
    holds = not triggered or (abs(lm_sigma + 0.5) <= tol and abs(lm_tau + 0.5) <= tol)
    return MixtureCheck(lm_rho, lm_sigma, lm_tau, triggered, holds)
