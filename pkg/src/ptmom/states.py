"""Bipartite density matrices, the vec correspondence and the partial transpose.

Basis convention: the product basis vector ``|i j>`` (``i`` on A, ``j`` on B)
sits at index ``i * dim_b + j``. ``vec`` flattens a ``dim_a x dim_b`` matrix
row-major, so ``vec(|i><j|) = |i j>``.

Random states use ``numpy.random.Philox``, a counter-based generator, seeded
with the caller's integer. Given the same seed every sampler draws the same
stream, so corpora are reproducible across platforms.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import _json, numkit
from .config import DEFAULTS
from .errors import (
    InvalidRank,
    InvalidState,
    NotHermitian,
    NotNormalized,
    NotSquare,
    NotUnitary,
    PTMomentError,
)

_EPS = np.finfo(float).eps

KINDS = ("haar_pure", "ginibre_mixed", "max_entangled", "separable_mixture")
_KIND_ALIASES = {
    "haar-pure": "haar_pure",
    "ginibre": "ginibre_mixed",
    "ginibre-mixed": "ginibre_mixed",
    "max-entangled": "max_entangled",
    "separable": "separable_mixture",
    "separable-mixture": "separable_mixture",
}


def _validated_density(rho, d, tol):
    """Symmetrize, check trace and positivity, clamp tiny negative eigenvalues.

    Eigenvalues above ``-floor`` (``floor`` ~ rounding level of ``rho``) are
    indistinguishable from zero and left alone; those in ``[-tol, -floor)``
    are set to zero and the trace restored; anything lower is rejected.
    """
    try:
        rho = numkit._prepare_hermitian(rho, tol.hermitian)
    except NotHermitian as exc:
        raise InvalidState(str(exc)) from None
    tr = np.trace(rho).real
    if abs(tr - 1.0) > tol.trace:
        raise InvalidState(f"trace {tr!r} differs from 1 by more than {tol.trace:g}")

    floor = 4 * d * _EPS * max(np.abs(rho).max(), 1.0)
    try:
        # succeeds iff lambda_min > -floor up to Cholesky rounding
        np.linalg.cholesky(rho + floor * np.eye(d))
        return rho
    except np.linalg.LinAlgError:
        pass
    values, vectors = numkit.hermitian_eigensystem(rho, tol=np.inf)
    if values[-1] < -tol.positivity:
        raise InvalidState(f"density matrix has eigenvalue {values[-1]:.3g}")
    values = np.clip(values, 0.0, None)
    rho = (vectors * values) @ vectors.conj().T
    rho = 0.5 * (rho + rho.conj().T)
    return rho / np.trace(rho).real


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix on ``C^dim_a (x) C^dim_b``.

    Construction symmetrizes ``rho``, checks ``|Tr rho - 1|`` and positivity
    against the tolerances in ``tol``, and stores a read-only copy.

    Parameters
    ----------
    dim_a, dim_b : int
        Local dimensions, both at least 1.
    rho : array_like, shape (dim_a*dim_b, dim_a*dim_b)

    Raises
    ------
    InvalidState
        Wrong shape, non-finite entries, Hermiticity residual, trace or a
        negative eigenvalue outside tolerance.
    """

    dim_a: int
    dim_b: int
    rho: np.ndarray = field(repr=False)
    tol: object = field(default=DEFAULTS, repr=False, compare=False)

    def __post_init__(self):
        if int(self.dim_a) != self.dim_a or int(self.dim_b) != self.dim_b:
            raise InvalidState("dimensions must be integers")
        if self.dim_a < 1 or self.dim_b < 1:
            raise InvalidState(f"dimensions must be positive, got {self.dim_a}x{self.dim_b}")
        d = self.dim_a * self.dim_b
        try:
            rho = numkit.as_matrix(self.rho)
        except (NotSquare, ValueError) as exc:
            raise InvalidState(str(exc)) from None
        if rho.shape != (d, d):
            raise InvalidState(f"rho has shape {rho.shape}, expected {(d, d)}")
        rho = _validated_density(rho, d, self.tol)
        rho.setflags(write=False)
        object.__setattr__(self, "dim_a", int(self.dim_a))
        object.__setattr__(self, "dim_b", int(self.dim_b))
        object.__setattr__(self, "rho", rho)

    @property
    def d(self):
        return self.dim_a * self.dim_b

    @classmethod
    def from_vector(cls, psi, dim_a, dim_b, tol=DEFAULTS):
        """Projector onto the normalized pure state ``psi``."""
        psi = _normalized(psi, dim_a * dim_b, tol.normalization)
        return cls(dim_a, dim_b, np.outer(psi, psi.conj()), tol)

    def __eq__(self, other):
        if not isinstance(other, BipartiteState):
            return NotImplemented
        return (self.dim_a, self.dim_b) == (other.dim_a, other.dim_b) and np.array_equal(
            self.rho, other.rho
        )

    __hash__ = None


def _normalized(psi, d, tol):
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != d:
        raise NotNormalized(f"vector has {psi.size} entries, expected {d}")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > tol:
        raise NotNormalized(f"vector norm {norm!r} differs from 1")
    return psi


def vec(x):
    """Row-major flattening: entry ``x[i, j]`` goes to index ``i * x.shape[1] + j``."""
    x = np.asarray(x, dtype=complex)
    if x.ndim != 2:
        raise ValueError(f"vec expects a matrix, got shape {x.shape}")
    return x.reshape(-1).copy()


def unvec(psi, dim_a, dim_b):
    """Inverse of :func:`vec`."""
    return np.asarray(psi, dtype=complex).reshape(dim_a, dim_b).copy()


@dataclass(frozen=True)
class SchmidtForm:
    """``psi = vec(u @ diag(sigmas) @ v^H)`` with unitary ``u``, ``v`` and descending ``sigmas``."""

    u: np.ndarray = field(repr=False)
    v: np.ndarray = field(repr=False)
    sigmas: np.ndarray

    def vector(self):
        return vec((self.u * self.sigmas) @ self.v.conj().T)


def schmidt(psi, dim_a, dim_b, tol=DEFAULTS.normalization):
    """Schmidt decomposition of a normalized pure state with ``dim_a == dim_b``.

    Conventions, so results are reproducible: the first entry of each column
    of ``u`` with modulus above ``1e-12`` is made real and nonnegative (the
    same phase is applied to ``v``), and runs of equal coefficients are ordered
    lexicographically by the ``u`` columns.

    Raises
    ------
    NotNormalized
    ValueError
        If ``dim_a != dim_b``.
    """
    if dim_a != dim_b:
        raise ValueError("Schmidt decomposition is implemented for dim_a == dim_b only")
    psi = _normalized(psi, dim_a * dim_b, tol)
    u, s, v = numkit.svd(unvec(psi, dim_a, dim_b))

    for i in range(dim_a):
        nz = np.flatnonzero(np.abs(u[:, i]) > 1e-12)
        if nz.size:
            phase = u[nz[0], i] / abs(u[nz[0], i])
            u[:, i] *= phase.conj()
            v[:, i] *= phase.conj()

    def key(i):
        col = u[:, i]
        # group equal coefficients, then order the group by column entries
        return (-round(s[i], 12), *np.round(np.column_stack([col.real, col.imag]).ravel(), 12))

    order = sorted(range(dim_a), key=key)
    return SchmidtForm(u[:, order], v[:, order], s[order])


def partial_transpose_matrix(rho, dim_a, dim_b):
    """Transpose the A indices of ``rho`` (or of a stack of matrices along the last two axes).

    Block ``(i, k)`` of the output, a ``dim_b x dim_b`` tile, is block ``(k, i)``
    of the input. The map is a pure permutation of entries.
    """
    rho = np.asarray(rho)
    lead = rho.shape[:-2]
    t = rho.reshape(lead + (dim_a, dim_b, dim_a, dim_b))
    n = len(lead)
    axes = tuple(range(n)) + (n + 2, n + 1, n, n + 3)
    return t.transpose(axes).reshape(rho.shape).copy()


def partial_transpose(state):
    """Partial transpose of a :class:`BipartiteState` on subsystem A."""
    return partial_transpose_matrix(state.rho, state.dim_a, state.dim_b)


def pt_spectrum(state):
    """Descending eigenvalues of the partial transpose."""
    return numkit.eigvalsh(partial_transpose(state))


def swap_operator(d):
    """``F |i j> = |j i>`` on ``C^d (x) C^d``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    f = np.zeros((d * d, d * d), dtype=complex)
    i, j = np.divmod(np.arange(d * d), d)
    f[j * d + i, i * d + j] = 1.0
    return f


def _check_unitary(u, d, tol):
    u = np.asarray(u, dtype=complex)
    if u.shape != (d, d):
        raise NotUnitary(f"expected a {d}x{d} unitary, got shape {u.shape}")
    err = np.abs(u.conj().T @ u - np.eye(d)).max()
    if err > tol:
        raise NotUnitary(f"unitarity residual {err:.3g} exceeds {tol:g}")
    return u


def max_entangled_vector(d, u=None, v=None, tol=DEFAULTS.unitary):
    """``vec(u v^H) / sqrt(d)``, the locally rotated ``vec(I) / sqrt(d)``."""
    u = np.eye(d, dtype=complex) if u is None else _check_unitary(u, d, tol)
    v = np.eye(d, dtype=complex) if v is None else _check_unitary(v, d, tol)
    return vec(u @ v.conj().T) / np.sqrt(d)


def max_entangled(d, u=None, v=None, tol=DEFAULTS.unitary):
    """Maximally entangled pure state ``(u (x) conj(v)) vec(I) / sqrt(d)``.

    Raises
    ------
    NotUnitary
    """
    psi = max_entangled_vector(d, u, v, tol)
    return BipartiteState.from_vector(psi / np.linalg.norm(psi), d, d)


def _rng(seed):
    if isinstance(seed, np.random.Generator):
        return seed
    if int(seed) != seed or seed < 0:
        raise ValueError(f"seed must be a nonnegative integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(int(seed)))


def _ginibre(rng, rows, cols):
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2)


def haar_unitary(d, seed):
    """Haar-random ``d x d`` unitary: QR of a complex Gaussian matrix with ``diag(R) > 0``."""
    rng = _rng(seed)
    q, r = np.linalg.qr(_ginibre(rng, d, d))
    diag = np.diagonal(r)
    return q * (diag / np.abs(diag))


def haar_vector(d, seed):
    """Haar-random unit vector, the first column of :func:`haar_unitary`."""
    return haar_unitary(d, seed)[:, 0].copy()


def random_state(kind, dim_a, dim_b, rank=None, seed=0):
    """Sample a bipartite state.

    Parameters
    ----------
    kind : {"haar_pure", "ginibre_mixed", "max_entangled", "separable_mixture"}
        Hyphenated aliases ("haar-pure", "ginibre", "max-entangled",
        "separable") are accepted.
    dim_a, dim_b : int
    rank : int, optional
        Pure kinds need 1 (the default for them). ``ginibre_mixed`` uses a
        ``d x rank`` Gaussian factor and ``separable_mixture`` mixes ``rank``
        random product states with equal weights; both default to ``d``.
    seed : int
        Seed for the Philox generator.

    Raises
    ------
    InvalidRank
        Rank outside ``[1, d]`` or not 1 for a pure kind.
    ValueError
        Unknown kind, or ``dim_a != dim_b`` for ``max_entangled``.
    """
    kind = _KIND_ALIASES.get(kind, kind)
    if kind not in KINDS:
        raise ValueError(f"unknown state kind {kind!r}")
    d = dim_a * dim_b
    pure = kind in ("haar_pure", "max_entangled")
    if rank is None:
        rank = 1 if pure else d
    if int(rank) != rank or not 1 <= rank <= d:
        raise InvalidRank(f"rank {rank} outside [1, {d}]")
    if pure and rank != 1:
        raise InvalidRank(f"{kind} states have rank 1, got {rank}")
    rng = _rng(seed)

    if kind == "haar_pure":
        return BipartiteState.from_vector(haar_vector(d, rng), dim_a, dim_b)
    if kind == "max_entangled":
        if dim_a != dim_b:
            raise ValueError("max_entangled needs dim_a == dim_b")
        u = haar_unitary(dim_a, rng)
        v = haar_unitary(dim_a, rng)
        return max_entangled(dim_a, u, v)
    if kind == "ginibre_mixed":
        g = _ginibre(rng, d, int(rank))
        rho = g @ g.conj().T
        return BipartiteState(dim_a, dim_b, rho / np.trace(rho).real)
    rho = np.zeros((d, d), dtype=complex)
    for _ in range(int(rank)):
        psi = np.kron(haar_vector(dim_a, rng), haar_vector(dim_b, rng))
        rho += np.outer(psi, psi.conj())
    return BipartiteState(dim_a, dim_b, rho / rank)


def state_to_json(state):
    """Serialize to the state-file format ``{"dim_a", "dim_b", "re", "im"}``."""
    return _json.dumps(
        {
            "dim_a": state.dim_a,
            "dim_b": state.dim_b,
            "re": state.rho.real.tolist(),
            "im": state.rho.imag.tolist(),
        }
    )


def state_from_json(text, tol=DEFAULTS):
    """Parse a state file. Every malformed or invalid document raises InvalidState."""
    try:
        doc = json.loads(text)
    except (ValueError, TypeError) as exc:
        raise InvalidState(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise InvalidState("state file must be a JSON object")
    missing = {"dim_a", "dim_b", "re", "im"} - doc.keys()
    if missing:
        raise InvalidState(f"state file lacks {sorted(missing)}")
    dim_a, dim_b = doc["dim_a"], doc["dim_b"]
    if not all(isinstance(x, int) and not isinstance(x, bool) for x in (dim_a, dim_b)):
        raise InvalidState("dim_a and dim_b must be integers")
    try:
        re = np.array(doc["re"], dtype=float)
        im = np.array(doc["im"], dtype=float)
    except (ValueError, TypeError) as exc:
        raise InvalidState(f"matrix entries must be numbers: {exc}") from None
    if re.shape != im.shape or re.ndim != 2:
        raise InvalidState(f"re and im must be matrices of equal shape, got {re.shape} and {im.shape}")
    try:
        return BipartiteState(dim_a, dim_b, re + 1j * im, tol)
    except PTMomentError as exc:
        raise InvalidState(str(exc)) from None


def save_state(state, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(state_to_json(state) + "\n")


def load_state(path, tol=DEFAULTS):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise InvalidState(f"cannot read {path}: {exc}") from None
    return state_from_json(text, tol)
