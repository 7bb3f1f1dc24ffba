from utils.utils_basic import InvalidInputError

from functools import reduce
import numpy as np

HERMITIAN_TOL = 1e-12
MAX_SWEEPS = 100

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)

def as_matrix(m) -> np.ndarray:
    """
    Converts the input into a read-only complex matrix.

    Args:
        m: Anything numpy can turn into a 2d array.

    Returns:
        np.ndarray: a new complex matrix that cannot be written to
    """
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise InvalidInputError(f"Expected a matrix, got an array with {a.ndim} dimensions.")
    a.setflags(write=False)
    return a

def hermitian_residual(m:np.ndarray) -> float:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidInputError(f"Expected a square matrix, got shape {m.shape}.")
    return float(np.max(np.abs(m - m.conj().T), initial=0.0))

def is_hermitian(m:np.ndarray) -> bool:
    m = np.asarray(m, dtype=complex)
    scale = max(1.0, float(np.max(np.abs(m), initial=0.0)))
    return hermitian_residual(m) <= HERMITIAN_TOL * scale

def require_hermitian(m:np.ndarray, name:str = "matrix") -> np.ndarray:
    m = as_matrix(m)
    if not is_hermitian(m):
        raise InvalidInputError(f"The {name} is not Hermitian (residual {hermitian_residual(m):.3e}).")
    return m

def kron(*factors:np.ndarray) -> np.ndarray:
    """
    Kronecker product of one or more matrices, left factor most significant.
    """
    if not factors:
        raise InvalidInputError("kron needs at least one factor.")
    return as_matrix(reduce(np.kron, [np.asarray(f, dtype=complex) for f in factors]))

def dagger(m:np.ndarray) -> np.ndarray:
    return as_matrix(np.asarray(m).conj().T)

def commutator(a:np.ndarray, b:np.ndarray) -> np.ndarray:
    return as_matrix(a @ b - b @ a)

def operator_norm(m:np.ndarray) -> float:
    """
    Spectral norm (largest singular value) of a matrix.
    """
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    return float(np.linalg.norm(m, ord=2))

def partial_trace(m:np.ndarray, dims:list[int], keep) -> np.ndarray:
    """
    Traces out all subsystems not listed in keep.

    Args:
        m: Square matrix on the tensor product of the subsystems.
        dims: Subsystem sizes, first entry is the most significant factor.
        keep: Indices of the subsystems to keep, any iterable. Empty means full trace.

    Returns:
        np.ndarray: reduced matrix on the kept subsystems in their original order, 1x1 for an empty keep set
    """
    m = as_matrix(m)
    dims = [int(d) for d in dims]
    keep = set(int(k) for k in keep)
    n = len(dims)
    if any(d < 1 for d in dims):
        raise InvalidInputError(f"Subsystem sizes must be positive, got {dims}.")
    total = int(np.prod(dims)) if dims else 1
    if m.shape != (total, total):
        raise InvalidInputError(f"Matrix of shape {m.shape} does not match subsystem sizes {dims}.")
    if any(k < 0 or k >= n for k in keep):
        raise InvalidInputError(f"Keep indices {sorted(keep)} out of range for {n} subsystems.")

    t = np.asarray(m).reshape(dims + dims)
    remaining = n
    for i in sorted(set(range(n)) - keep, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + remaining)
        remaining -= 1
    kept = int(np.prod([dims[k] for k in sorted(keep)])) if keep else 1
    return as_matrix(t.reshape(kept, kept))

def _jacobi_symmetric(a:np.ndarray) -> np.ndarray:
    '''
        Cyclic Jacobi sweeps on a real symmetric matrix, returns the diagonal after convergence.
    '''
    a = np.array(a, dtype=float)
    n = a.shape[0]
    scale = max(float(np.max(np.abs(a), initial=0.0)), np.finfo(float).tiny)
    previous = np.inf
    for _ in range(MAX_SWEEPS):
        off = np.sqrt(np.sum(np.tril(a, -1) ** 2))
        # stop at rounding level or once a sweep no longer reduces the off-diagonal mass
        if off <= n * np.finfo(float).eps * scale or off >= previous:
            break
        previous = off
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                diff = a[q, q] - a[p, p]
                # tan of the rotation angle, written without forming diff / apq so a tiny apq cannot overflow
                sign = 1.0 if diff == 0 or (diff > 0) == (apq > 0) else -1.0
                t = sign * abs(2.0 * apq) / (abs(diff) + np.hypot(diff, 2.0 * apq))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.diagonal(a).copy()

def hermitian_eigenvalues(m:np.ndarray) -> np.ndarray:
    """
    Eigenvalues of a Hermitian matrix in ascending order.
    The complex matrix A + iB is embedded into the real symmetric [[A, -B], [B, A]],
    whose spectrum is the Hermitian spectrum with every value doubled.

    Args:
        m: Hermitian matrix.

    Returns:
        np.ndarray: real eigenvalues, ascending
    """
    m = require_hermitian(m)
    a = (np.asarray(m) + np.asarray(m).conj().T) / 2
    re, im = a.real, a.imag
    embedded = np.block([[re, -im], [im, re]])
    values = np.sort(_jacobi_symmetric(embedded))
    return values[::2]

def is_psd(m:np.ndarray, tol:float = 1e-9) -> bool:
    eigenvalues = hermitian_eigenvalues(m)
    if eigenvalues.size == 0:
        return True
    return bool(eigenvalues[0] >= -tol)
