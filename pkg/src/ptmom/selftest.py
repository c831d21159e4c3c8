"""Built-in fixture checks for the Bell state, the two-qutrit maximally
entangled state and their moment data, run by ``ptmom selftest``."""

from fractions import Fraction

import numpy as np
from numpy.testing import assert_allclose, assert_array_equal

from . import certify, moments, numkit, states

R2 = 1 / np.sqrt(2)
BELL_SPECTRUM = [0.5, 0.5, 0.5, -0.5]
BELL_P = [1, 1, 0.25, 0.25]
BELL_E = [1, 0, -0.25, -1 / 16]
QUTRIT_SPECTRUM = [1 / 3] * 6 + [-1 / 3] * 3
QUTRIT_P = [1, 1, 1 / 9, 1 / 9, 1 / 81, 1 / 81, 1 / 729, 1 / 729, 1 / 6561]
QUTRIT_E = [1, 0, -8 / 27, -2 / 27, 2 / 81, 8 / 729, 0, -1 / 2187, -1 / 19683]


def _qutrit_poly():
    # (3x - 1)^6 (3x + 1)^3 / 3^9, expanded in exact arithmetic
    c = [Fraction(1)]
    for root, mult in ((Fraction(1, 3), 6), (Fraction(-1, 3), 3)):
        for _ in range(mult):
            c = [a - root * b for a, b in zip(c + [0], [0] + c)]
    return np.array([float(x) for x in c])


def _bell():
    return states.max_entangled(2)


def _qutrit():
    return states.max_entangled(3)


def check_bell_pt_spectrum():
    vals, _ = numkit.hermitian_eigensystem(states.partial_transpose(_bell()))
    assert_allclose(vals, BELL_SPECTRUM, atol=1e-12)


def check_svd_identity():
    _, s, _ = numkit.svd(np.eye(2) * R2)
    assert_allclose(s, [R2, R2], atol=1e-12)


def check_trace_power():
    assert_allclose(numkit.trace_power(states.partial_transpose(_bell()), 3), 0.25, atol=1e-12)
    assert_allclose(numkit.trace_power(states.partial_transpose(_qutrit()), 5), 1 / 81, atol=1e-12)


def check_poly_roots():
    assert_allclose(numkit.real_poly_roots([1, -1, 0, 0.25, -1 / 16]), BELL_SPECTRUM, atol=1e-7)
    assert_allclose(numkit.real_poly_roots(_qutrit_poly()), QUTRIT_SPECTRUM, atol=1e-6)


def check_vec():
    assert_allclose(states.vec(np.eye(2) * R2), [R2, 0, 0, R2], atol=0)
    singlet = states.vec(R2 * np.array([[0, 1], [-1, 0]]))
    assert_allclose(singlet, [0, R2, -R2, 0], atol=0)


def check_schmidt_bell():
    sf = states.schmidt(states.vec(np.eye(2) * R2), 2, 2)
    assert_allclose(sf.sigmas, [R2, R2], atol=1e-12)


def check_partial_transpose_spectra():
    assert_allclose(states.pt_spectrum(_bell()), BELL_SPECTRUM, atol=1e-12)
    assert_allclose(states.pt_spectrum(_qutrit()), QUTRIT_SPECTRUM, atol=1e-12)


def check_swap():
    f = states.swap_operator(2)
    assert_array_equal(f @ np.array([0, 1, 0, 0]), [0, 0, 1, 0])
    x = np.array([0, R2, -R2, 0])
    assert_allclose(f @ x, -x, atol=0)
    assert_allclose(np.vdot(x, f @ x).real, -1.0, atol=1e-15)
    assert_allclose(numkit.eigvalsh(f)[-1], -1.0, atol=1e-12)


def check_max_entangled_construction():
    u = states.haar_unitary(2, 11)
    v = states.haar_unitary(2, 12)
    p = moments.pt_moments(states.max_entangled(2, u, v), 4).values
    assert_allclose(p, BELL_P, atol=1e-12)
    spec = states.pt_spectrum(_qutrit())
    assert np.sum(np.isclose(spec, 1 / 3, atol=1e-10)) == 6
    assert np.sum(np.isclose(spec, -1 / 3, atol=1e-10)) == 3


def check_ginibre_rana_interval():
    spec = states.pt_spectrum(states.random_state("ginibre_mixed", 2, 2, 4, seed=2024))
    assert np.all(spec >= -0.5 - 1e-10) and np.all(spec <= 1 + 1e-10)


def check_pt_moments():
    assert_allclose(moments.pt_moments(_bell(), 4).values, BELL_P, atol=1e-12)
    assert_allclose(moments.pt_moments(_qutrit(), 9).values, QUTRIT_P, atol=1e-12)


def check_newton_conversions():
    assert_allclose(moments.moments_to_elementary(BELL_P).values, BELL_E, atol=1e-12)
    assert_allclose(moments.moments_to_elementary(QUTRIT_P).values, QUTRIT_E, atol=1e-12)
    assert_allclose(moments.elementary_to_moments(BELL_E).values, BELL_P, atol=1e-12)
    assert_allclose(moments.elementary_to_moments(QUTRIT_E).values, QUTRIT_P, atol=1e-12)


def check_characteristic_polynomial():
    assert_allclose(moments.characteristic_polynomial(BELL_E, 4), [1, -1, 0, 0.25, -1 / 16], atol=1e-15)
    assert_allclose(moments.characteristic_polynomial(QUTRIT_E, 9), _qutrit_poly(), atol=1e-15)


def check_reconstruction():
    assert_allclose(moments.reconstruct_spectrum(BELL_P), BELL_SPECTRUM, atol=1e-7)
    assert_allclose(moments.reconstruct_spectrum(QUTRIT_P), QUTRIT_SPECTRUM, atol=1e-6)


def check_rana_reports():
    r = moments.check_rana(BELL_SPECTRUM, 2, 2)
    assert (r.in_interval, r.negative_count, r.bound) == (True, 1, 1)
    r = moments.check_rana(QUTRIT_SPECTRUM, 3, 3)
    assert (r.in_interval, r.negative_count, r.bound) == (True, 3, 4)


def check_pure_pt_spectrum():
    assert_allclose(certify.pure_pt_spectrum([R2, R2]), BELL_SPECTRUM, atol=1e-15)


def check_negativity_and_ppt():
    assert_allclose(certify.negativity(_bell()), 0.5, atol=1e-12)
    assert not certify.ppt_check(_bell())


def check_certification():
    for seed in range(5):
        rep = certify.certify_max_entangled_2q(states.random_state("max_entangled", 2, 2, seed=seed))
        assert rep.verdict is certify.Verdict.MAXIMALLY_ENTANGLED
        assert abs(rep.lambda_min + 0.5) <= 1e-9 and abs(rep.negativity - 0.5) <= 1e-9


def check_max_entangled_moment_vectors():
    assert_allclose(certify.max_entangled_moment_vector(2).values, BELL_P, atol=1e-15)
    assert_allclose(certify.max_entangled_moment_vector(3).values, QUTRIT_P, atol=1e-15)
    for n in (2, 3):
        assert abs(certify.lambda_min_from_max_entangled_moments(n) + 1 / n) <= 1e-6


def check_mixture_of_rotated_bell_states():
    psi = states.max_entangled(2, states.haar_unitary(2, 3), states.haar_unitary(2, 4))
    res = certify.mixture_lambda_min_property(psi, psi, 0.4)
    assert res.triggered and res.holds
    assert_allclose([res.lambda_min_mixture, res.lambda_min_sigma, res.lambda_min_tau], -0.5, atol=1e-9)


CHECKS = tuple((name[len("check_") :], fn) for name, fn in sorted(globals().items()) if name.startswith("check_"))


def run():
    """Run every check; return a list of ``(name, passed, message)``."""
    results = []
    for name, fn in CHECKS:
        try:
            fn()
        except Exception as exc:  # report every failure, keep going
            results.append((name, False, f"{type(exc).__name__}: {exc}".strip()))
        else:
            results.append((name, True, ""))
    return results
