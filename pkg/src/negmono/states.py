"""Dense complex linear algebra for small multipartite quantum states.

Every state carries an explicit tuple of local dimensions.  Subsystem 0 is
the leftmost tensor factor and amplitudes are laid out row-major, so the
basis index of ``|a b c>`` on dims ``(dA, dB, dC)`` is ``(a*dB + b)*dC + c``.
All values are immutable after construction and every operation is a pure
function, so concurrent use needs no locking.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import prod

import numpy as np

NORM_ATOL = 1e-12
HERM_ATOL = 1e-12
PSD_ATOL = 1e-10


def validate_dims(dims) -> tuple[int, ...]:
    """Normalize a sequence of local dimensions to a tuple of ints >= 2."""
    out = tuple(int(d) for d in dims)
    if not out:
        raise ValueError("dims must contain at least one tensor factor")
    if any(d < 2 for d in out):
        raise ValueError(f"every local dimension must be >= 2, got {out}")
    return out


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PureState:
    """Normalized complex amplitude vector over explicit tensor factors.

    Attributes
    ----------
    amplitudes : np.ndarray
        Complex vector of length ``prod(dims)`` with Euclidean norm 1
        (within 1e-12).
    dims : tuple[int, ...]
        Local dimension of each tensor factor, leftmost first.
    """

    amplitudes: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = validate_dims(self.dims)
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != prod(dims):
            raise ValueError(
                f"amplitude length {amps.size} does not match dims {dims} "
                f"(product {prod(dims)})"
            )
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > NORM_ATOL:
            raise ValueError(f"state vector is not normalized: |norm - 1| = {abs(norm - 1.0):.3e}")
        object.__setattr__(self, "amplitudes", _frozen(amps))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    @property
    def n_factors(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace matrix with tensor factors."""

    matrix: np.ndarray
    dims: tuple[int, ...]

    def __post_init__(self):
        dims = validate_dims(self.dims)
        mat = np.array(self.matrix, dtype=complex)
        d = prod(dims)
        if mat.shape != (d, d):
            raise ValueError(f"matrix shape {mat.shape} does not match dims {dims}")
        asym = np.abs(mat - mat.conj().T).max()
        if asym > HERM_ATOL:
            raise ValueError(f"matrix is not Hermitian: max asymmetry {asym:.3e}")
        tr = mat.trace()
        if abs(tr - 1.0) > HERM_ATOL:
            raise ValueError(f"matrix trace {tr} is not 1")
        min_eig = float(np.linalg.eigvalsh((mat + mat.conj().T) / 2.0).min())
        if min_eig < -PSD_ATOL:
            raise ValueError(f"matrix has negative eigenvalue {min_eig:.3e}")
        object.__setattr__(self, "matrix", _frozen(mat))
        object.__setattr__(self, "dims", dims)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_factors(self) -> int:
        return len(self.dims)


@dataclass(frozen=True)
class SchmidtForm:
    """Schmidt decomposition of a pure state across one bipartition.

    ``coefficients`` are the non-increasing singular values of the reshaped
    amplitude matrix; ``left_basis[:, i]`` / ``right_basis[i, :]`` are the
    matching orthonormal vectors, so the state is
    ``sum_i coefficients[i] * left_basis[:, i] (x) right_basis[i, :]``.
    """

    coefficients: np.ndarray
    left_basis: np.ndarray
    right_basis: np.ndarray

    def reconstruct(self) -> np.ndarray:
        """Rebuild the flat amplitude vector in (left, right) axis order."""
        mat = (self.left_basis * self.coefficients) @ self.right_basis
        return mat.reshape(-1)


def ket(amplitudes, dims) -> PureState:
    """Build a normalized :class:`PureState` from raw amplitudes.

    The input is normalized; a zero vector or a length mismatch raises
    ``ValueError``.
    """
    dims = validate_dims(dims)
    amps = np.asarray(amplitudes, dtype=complex).reshape(-1)
    if amps.size != prod(dims):
        raise ValueError(
            f"amplitude length {amps.size} does not match dims {dims} (product {prod(dims)})"
        )
    norm = np.linalg.norm(amps)
    if norm < 1e-14:
        raise ValueError("cannot normalize a zero vector")
    return PureState(amps / norm, dims)


def tensor(a: PureState, b: PureState) -> PureState:
    """Tensor (Kronecker) product of two pure states; dims concatenate."""
    return PureState(np.kron(a.amplitudes, b.amplitudes), a.dims + b.dims)


def density(psi: PureState) -> DensityMatrix:
    """Rank-1 projector ``|psi><psi|`` as a :class:`DensityMatrix`."""
    return DensityMatrix(np.outer(psi.amplitudes, psi.amplitudes.conj()), psi.dims)


def _check_subsystems(indices, n: int, *, allow_empty: bool = False) -> tuple[int, ...]:
    idx = sorted({int(i) for i in indices})
    if not idx and not allow_empty:
        raise ValueError("subsystem index set must be nonempty")
    if idx and (idx[0] < 0 or idx[-1] >= n):
        raise ValueError(f"subsystem indices {idx} out of range for {n} factors")
    return tuple(idx)


def partial_trace(rho: DensityMatrix, keep) -> DensityMatrix:
    """Trace out every factor not listed in ``keep``.

    The result keeps the retained factors in their original order and
    preserves the trace exactly up to roundoff.
    """
    keep = _check_subsystems(keep, rho.n_factors)
    dims = list(rho.dims)
    drop = [i for i in range(len(dims)) if i not in keep]
    t = rho.matrix.reshape(rho.dims + rho.dims)
    for i in sorted(drop, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + len(dims))
        del dims[i]
    d = prod(dims)
    return DensityMatrix(t.reshape(d, d), tuple(dims))


def partial_transpose(rho, subsystems, dims=None) -> np.ndarray:
    """Transpose the listed factors; returns a plain Hermitian matrix.

    ``rho`` is a :class:`DensityMatrix`, or any Hermitian matrix when
    ``dims`` is given (the output of a partial transposition is generally
    not positive, so round trips need the raw form).  Applying the same
    transposition twice returns the original matrix exactly, and the
    trace is untouched.
    """
    if isinstance(rho, DensityMatrix):
        mat, dims = rho.matrix, rho.dims
    else:
        if dims is None:
            raise ValueError("dims is required for a raw matrix input")
        dims = validate_dims(dims)
        mat = np.asarray(rho, dtype=complex)
    n = len(dims)
    subs = _check_subsystems(subsystems, n, allow_empty=True)
    t = mat.reshape(dims + dims)
    axes = list(range(2 * n))
    for i in subs:
        axes[i], axes[i + n] = axes[i + n], axes[i]
    d = mat.shape[0]
    return t.transpose(axes).reshape(d, d)


def trace_norm(m: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix.

    Inputs with asymmetry up to 1e-12 are symmetrized before the
    eigensolve; anything beyond that is rejected rather than silently
    repaired.
    """
    mat = np.asarray(m, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {mat.shape}")
    asym = np.abs(mat - mat.conj().T).max() if mat.size else 0.0
    if asym > HERM_ATOL:
        raise ValueError(f"matrix is not Hermitian within tolerance: asymmetry {asym:.3e}")
    sym = (mat + mat.conj().T) / 2.0
    return float(np.abs(np.linalg.eigvalsh(sym)).sum())


def schmidt(psi: PureState, left) -> SchmidtForm:
    """Schmidt decomposition of ``psi`` across the ``left`` | complement cut."""
    left = _check_subsystems(left, psi.n_factors)
    right = tuple(i for i in range(psi.n_factors) if i not in left)
    if not right:
        raise ValueError("left side of the bipartition must be a proper subset")
    t = psi.amplitudes.reshape(psi.dims)
    d_left = prod(psi.dims[i] for i in left)
    d_right = prod(psi.dims[i] for i in right)
    mat = t.transpose(left + right).reshape(d_left, d_right)
    u, s, vh = np.linalg.svd(mat, full_matrices=False)
    return SchmidtForm(coefficients=_frozen(s), left_basis=_frozen(u), right_basis=_frozen(vh))


def haar_random_pure(dims, seed) -> PureState:
    """Draw a Haar-distributed pure state, reproducible bit-for-bit from ``seed``.

    ``seed`` may be an int or anything ``numpy.random.default_rng`` accepts
    (e.g. a ``SeedSequence``), which campaign code uses to derive
    per-sample streams.
    """
    dims = validate_dims(dims)
    rng = np.random.default_rng(seed)
    d = prod(dims)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return PureState(z / np.linalg.norm(z), dims)


def haar_random_mixed(dims, env_dim: int, seed) -> DensityMatrix:
    """Induced random mixed state: Haar pure state on ``dims + (env_dim,)``,
    environment traced out.  ``env_dim`` bounds the rank of the result."""
    dims = validate_dims(dims)
    psi = haar_random_pure(dims + (int(env_dim),), seed)
    return partial_trace(density(psi), range(len(dims)))


def state_to_json_dict(psi: PureState) -> dict:
    return {
        "dims": list(psi.dims),
        "amplitudes": [[float(a.real), float(a.imag)] for a in psi.amplitudes],
    }


def write_state_json(psi: PureState, path) -> None:
    """Write a state in the interchange format ``{"dims": [...], "amplitudes": [[re, im], ...]}``."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(state_to_json_dict(psi), fh)
        fh.write("\n")


def read_state_json(path) -> tuple[PureState, float]:
    """Read a state file, normalizing if needed.

    Returns the normalized state together with the norm of the raw vector
    (the applied normalization factor; 1.0 means the file was already
    normalized).
    """
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    try:
        dims = validate_dims(data["dims"])
        pairs = data["amplitudes"]
        amps = np.array([complex(re, im) for re, im in pairs], dtype=complex)
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed state file {path}: {exc}") from exc
    if amps.size != prod(dims):
        raise ValueError(
            f"state file {path}: {amps.size} amplitudes do not match dims {dims}"
        )
    norm = float(np.linalg.norm(amps))
    if norm < 1e-14:
        raise ValueError(f"state file {path} contains a zero vector")
    return PureState(amps / norm, dims), norm
