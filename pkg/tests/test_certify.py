import json

import numpy as np
import pytest
from numpy.testing import assert_allclose

from ptmom import _json, certify, moments, numkit, states
from ptmom.errors import IncompatibleDimensions, WrongDimensions

R2 = 1 / np.sqrt(2)
BELL = states.max_entangled(2)
MIXED = states.BipartiteState(2, 2, np.eye(4) / 4)


def werner(v):
    return states.BipartiteState(2, 2, v * BELL.rho + (1 - v) * np.eye(4) / 4)


def pure_with_schmidt(s0, seed):
    s1 = np.sqrt(1 - s0**2)
    u, v = states.haar_unitary(2, seed), states.haar_unitary(2, seed + 1)
    psi = states.vec(u @ np.diag([s1, s0]) @ v.conj().T)
    return states.BipartiteState.from_vector(psi, 2, 2)


# closed-form pure-state spectrum


def test_pure_pt_spectrum_fixtures():
    assert_allclose(certify.pure_pt_spectrum([R2, R2]), [0.5, 0.5, 0.5, -0.5], atol=1e-15)
    assert_allclose(certify.pure_pt_spectrum([1, 0]), [1, 0, 0, 0], atol=0)
    s = [np.sqrt(0.8), np.sqrt(0.2)]
    psi = states.vec(np.diag(s))
    direct = np.linalg.eigvalsh(states.partial_transpose(states.BipartiteState.from_vector(psi, 2, 2)))[::-1]
    assert_allclose(certify.pure_pt_spectrum(s), direct, atol=1e-12)
    assert_allclose(certify.pure_pt_spectrum(s), [0.8, 0.4, 0.2, -0.4], atol=1e-12)


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6])
def test_pure_pt_spectrum_matches_eigensolver(d):
    for seed in range(10):
        psi = states.haar_vector(d * d, 31 * seed + d)
        s = states.BipartiteState.from_vector(psi, d, d)
        closed = certify.pure_pt_spectrum(states.schmidt(psi, d, d))
        assert closed.size == d * d
        assert np.abs(closed - states.pt_spectrum(s)).max() <= 1e-8


# negativity and PPT


def test_negativity_fixtures():
    assert certify.negativity(BELL) == pytest.approx(0.5, abs=1e-12)
    assert certify.negativity(states.max_entangled(3)) == pytest.approx(1.0, abs=1e-12)
    assert certify.negativity(MIXED) == 0.0
    sep = states.random_state("separable_mixture", 2, 2, 3, seed=4)
    assert certify.negativity(sep) <= 1e-9


def test_negativity_of_werner_states():
    # PT spectrum of the Werner family: (1+v)/4 three times and (1-3v)/4
    for v in (0.2, 0.5, 0.9):
        assert certify.negativity(werner(v)) == pytest.approx(max(0.0, (3 * v - 1) / 4), abs=1e-12)


def test_ppt_fixtures():
    assert certify.ppt_check(states.random_state("separable_mixture", 2, 2, 2, seed=8))
    assert not certify.ppt_check(BELL)
    assert certify.ppt_check(MIXED)
    assert certify.ppt_check(werner(1 / 3)) and not certify.ppt_check(werner(0.34))


# two-qubit certification


def test_certify_rotated_bell_states():
    for seed in range(50):
        rep = certify.certify_max_entangled_2q(states.random_state("max_entangled", 2, 2, seed=seed))
        assert rep.verdict is certify.Verdict.MAXIMALLY_ENTANGLED
        assert rep.moment_residual <= 1e-9
        assert rep.lambda_min == pytest.approx(-0.5, abs=1e-9)
        assert rep.negativity == pytest.approx(0.5, abs=1e-9)


def test_certify_negative_fixtures():
    rep = certify.certify_max_entangled_2q(MIXED)
    assert rep.verdict is certify.Verdict.NOT_MAXIMALLY_ENTANGLED
    assert rep.moment_residual == pytest.approx(0.75, abs=1e-15)
    w = werner(0.9)
    rep = certify.certify_max_entangled_2q(w)
    assert rep.verdict is certify.Verdict.NOT_MAXIMALLY_ENTANGLED
    purity = 0.9**2 + 2 * 0.9 * 0.1 / 4 + 0.1**2 / 4
    assert rep.moments[1] == pytest.approx(purity, abs=1e-14)
    assert rep.moments[1] == pytest.approx(np.trace(w.rho @ w.rho).real, abs=1e-14)


def test_certify_near_boundary_pure_states():
    # Schmidt coefficient just below 1/sqrt(2) must still be rejected at 1e-8
    for s0 in (0.69, 0.70, 0.707):
        rep = certify.certify_max_entangled_2q(pure_with_schmidt(s0, 3))
        assert rep.verdict is certify.Verdict.NOT_MAXIMALLY_ENTANGLED


def test_equivalence_chain():
    pool = [BELL, MIXED, werner(0.9), werner(0.999999)]
    pool += [states.random_state(k, 2, 2, seed=s) for k in ("max_entangled", "haar_pure", "ginibre_mixed") for s in range(30)]
    pool += [pure_with_schmidt(s0, 7) for s0 in (0.0, 0.3, 0.69, 0.7071)]
    for s in pool:
        rep = certify.certify_max_entangled_2q(s)
        a = rep.moment_residual <= 1e-8
        b = abs(rep.lambda_min + 0.5) <= 1e-7
        c = abs(rep.negativity - 0.5) <= 1e-7
        assert a == b == c


def test_certify_wrong_dimensions():
    with pytest.raises(WrongDimensions):
        certify.certify_max_entangled_2q(states.max_entangled(3))
    with pytest.raises(WrongDimensions):
        certify.certify_from_spectrum([1, 0, 0])


def test_report_json_layout():
    rep = certify.certify_max_entangled_2q(BELL)
    doc = json.loads(_json.dumps(rep.to_dict()))
    assert list(doc) == ["verdict", "lambda_min", "negativity", "moment_residual", "tolerance", "moments"]
    assert doc["verdict"] == "maximally_entangled"
    assert len(doc["moments"]) == 4


# maximally entangled moment vectors


def test_max_entangled_moment_vector_fixtures():
    assert_allclose(certify.max_entangled_moment_vector(2).values, [1, 1, 0.25, 0.25], atol=0)
    qutrit = [1, 1, 1 / 9, 1 / 9, 1 / 81, 1 / 81, 1 / 729, 1 / 729, 1 / 6561]
    assert_allclose(certify.max_entangled_moment_vector(3).values, qutrit, rtol=1e-15)
    assert certify.max_entangled_moment_vector(2).values[0] == 1
    with pytest.raises(ValueError):
        certify.max_entangled_moment_vector(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_max_entangled_moments_match_states(n):
    s = states.max_entangled(n, states.haar_unitary(n, n), states.haar_unitary(n, n + 1))
    assert_allclose(moments.pt_moments(s).values, certify.max_entangled_moment_vector(n).values, atol=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_lambda_min_from_moments(n):
    direct = numkit.eigvalsh(states.partial_transpose(states.max_entangled(n)))[-1]
    assert certify.lambda_min_from_max_entangled_moments(n) == pytest.approx(-1 / n, abs=1e-6)
    assert certify.lambda_min_from_max_entangled_moments(n) == pytest.approx(direct, abs=1e-6)


def test_max_entangled_reconstruction_multiplicities():
    for n in (2, 3):
        spec = moments.reconstruct_spectrum(certify.max_entangled_moment_vector(n))
        assert np.sum(np.abs(spec - 1 / n) <= 1e-6) == n * (n + 1) // 2
        assert np.sum(np.abs(spec + 1 / n) <= 1e-6) == n * (n - 1) // 2


# mixture property


def test_mixture_fixtures():
    res = certify.mixture_lambda_min_property(BELL, BELL, 0.3)
    assert res.triggered and res.holds
    assert_allclose([res.lambda_min_mixture, res.lambda_min_sigma, res.lambda_min_tau], -0.5, atol=1e-12)

    res = certify.mixture_lambda_min_property(BELL, MIXED, 0.5)
    assert not res.triggered and res.holds
    # half of (1/2, 1/2, 1/2, -1/2) plus half of (1/4, ...)
    assert res.lambda_min_mixture == pytest.approx(-0.125, abs=1e-12)

    psi = states.max_entangled(2, states.haar_unitary(2, 1), states.haar_unitary(2, 2))
    res = certify.mixture_lambda_min_property(psi, psi, 0.7)
    assert res.triggered and res.holds


def test_mixture_of_distinct_bell_states_is_vacuous():
    a = states.max_entangled(2)
    b = states.BipartiteState.from_vector([0, R2, -R2, 0], 2, 2)
    res = certify.mixture_lambda_min_property(a, b, 0.5)
    assert not res.triggered and res.lambda_min_mixture > -0.5 + 1e-3


def test_mixture_errors():
    with pytest.raises(IncompatibleDimensions):
        certify.mixture_lambda_min_property(BELL, states.max_entangled(3), 0.5)
    for t in (0.0, 1.0, -0.1):
        with pytest.raises(ValueError):
            certify.mixture_lambda_min_property(BELL, BELL, t)
