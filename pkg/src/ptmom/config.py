"""Default numerical tolerances shared by every module."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    """Tolerance defaults. Every public function that needs one also takes it as a keyword."""

    # input Hermiticity residual accepted (and symmetrized away)
    hermitian: float = 1e-10
    # |Tr rho - 1| accepted for a state
    trace: float = 1e-10
    # eigenvalues of rho in [-positivity, 0) are clamped to zero
    positivity: float = 1e-10
    unitary: float = 1e-10
    normalization: float = 1e-10
    # imaginary part of Tr(m^k) that is silently discarded
    trace_imag: float = 1e-10
    # imaginary part of a polynomial root that is flattened to real
    root_imag: float = 1e-7
    # threshold below which a PT eigenvalue counts as negative
    negative: float = 1e-10
    ppt: float = 1e-10
    certify: float = 1e-8
    rana: float = 1e-8
    # mixture property: trigger band around -1/2 and component agreement
    mixture_trigger: float = 1e-7
    mixture_component: float = 1e-6


DEFAULTS = Tolerances()
