from utils.utils_basic import InvalidInputError, get_logger
from utils.utils_linalg import (SIGMA_Y, IDENTITY_2, as_matrix, hermitian_eigenvalues, is_hermitian,
                                is_psd, kron, partial_trace, require_hermitian)

from enum import IntEnum
from pydantic import BaseModel, ConfigDict, Field, field_validator
import numpy as np

logger = get_logger(__name__)

TP_TOL = 1e-10
CHOI_TOL = 1e-9
DIMS = [2, 2, 2]
PARAM_NAMES = ("c00", "c11", "c22", "c33", "c24", "c12a", "c12b")

class Variant(IntEnum):
    '''
        Covariance variant: 1 transposes the input inside the partial trace, 2 does not.
    '''
    ONE = 1
    TWO = 2

def parse_variant(v) -> Variant:
    try:
        return Variant(int(v))
    except (TypeError, ValueError):
        raise InvalidInputError(f"Variant must be 1 or 2, got {v!r}.")

class PureQubit(BaseModel):
    '''
        Pure state cos(xi/2)|0> + exp(i phi) sin(xi/2)|1>.
    '''
    model_config = ConfigDict(frozen=True)

    xi: float = Field(ge=0.0, le=np.pi)
    phi: float = 0.0

    @field_validator("phi", mode="before")
    @classmethod
    def _wrap_phi(cls, v):
        v = float(v)
        if not np.isfinite(v):
            raise ValueError("Phase must be finite.")
        v = v % (2 * np.pi)
        return 0.0 if v >= 2 * np.pi else v

    def vector(self) -> np.ndarray:
        return np.array([np.cos(self.xi / 2), np.exp(1j * self.phi) * np.sin(self.xi / 2)])

    def projector(self) -> np.ndarray:
        psi = self.vector()
        return np.outer(psi, psi.conj())

    def rotated(self, theta:float) -> "PureQubit":
        '''
            The state after the phase rotation diag(1, exp(i theta)).
        '''
        return PureQubit(xi=self.xi, phi=self.phi + theta)

class CovariantParams(BaseModel):
    '''
        The seven real coefficients of the covariant operator family.
        The record itself is not validated, build_covariant_choi checks it.
    '''
    model_config = ConfigDict(frozen=True)

    c00: float
    c11: float
    c22: float
    c33: float
    c24: float
    c12a: float = 0.0
    c12b: float = 0.0

    @property
    def c12(self) -> complex:
        return complex(self.c12a, self.c12b)

    @classmethod
    def maximally_mixed(cls) -> "CovariantParams":
        return cls(c00=0.25, c11=0.25, c22=0.25, c33=0.25, c24=0.0)

    @classmethod
    def from_vector(cls, v) -> "CovariantParams":
        v = np.asarray(v, dtype=float)
        if v.shape != (7,):
            raise InvalidInputError(f"Expected 7 coefficients, got shape {v.shape}.")
        return cls(**dict(zip(PARAM_NAMES, (float(x) for x in v))))

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in PARAM_NAMES])

    def block(self) -> np.ndarray:
        '''
            The 3x3 block on the basis states (1, 2, 4).
        '''
        c12 = self.c12
        return np.array([[self.c11, c12, c12],
                         [c12.conjugate(), self.c22, self.c24],
                         [c12.conjugate(), self.c24, self.c33]], dtype=complex)

    def violations(self, tol:float = CHOI_TOL) -> list[str]:
        """
        Names every violated constraint of the family.

        Args:
            tol: Positivity tolerance.

        Returns:
            list[str]: human readable constraint failures, empty when valid
        """
        failed = []
        values = self.as_vector()
        if not np.all(np.isfinite(values)):
            failed.append("coefficients must be finite")
            return failed
        trace = self.c00 + self.c11 + self.c22 + self.c33
        if abs(trace - 1.0) > TP_TOL:
            failed.append(f"trace preservation c00+c11+c22+c33 = {trace:.12g} != 1")
        if self.c00 < -tol:
            failed.append(f"positivity c00 = {self.c00:.3e} < 0")
        if not is_psd(self.block(), tol):
            failed.append(f"positivity of the 3x3 block (min eigenvalue {hermitian_eigenvalues(self.block())[0]:.3e})")
        return failed

class ChoiOperator(BaseModel):
    '''
        8x8 positive operator of a 1->2 qubit map, basis |m> with m = 4 a + 2 b + c for
        clone-1 bit a, clone-2 bit b and input bit c.
    '''
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    r: np.ndarray

    @field_validator("r", mode="before")
    @classmethod
    def _valid_choi(cls, v):
        r = np.array(v, dtype=complex)
        if r.shape != (8, 8):
            raise ValueError(f"Choi operator must be 8x8, got shape {r.shape}.")
        if not is_hermitian(r):
            raise ValueError("Choi operator is not Hermitian.")
        if not is_psd(r, CHOI_TOL):
            raise ValueError("Choi operator is not positive semidefinite.")
        tp = np.max(np.abs(partial_trace(r, DIMS, keep={2}) - IDENTITY_2))
        if tp > CHOI_TOL:
            raise ValueError(f"Choi operator is not trace preserving (residual {tp:.3e}).")
        r.setflags(write=False)
        return r

    def spectrum(self) -> np.ndarray:
        return hermitian_eigenvalues(self.r)

def _family_basis() -> tuple[np.ndarray, ...]:
    def unit(entries, value=1.0):
        b = np.zeros((8, 8), dtype=complex)
        for i, j in entries:
            b[i, j] = value
        return b

    coherence = unit([(1, 2), (1, 4), (3, 6), (5, 6)])
    basis = (unit([(0, 0), (7, 7)]),
             unit([(1, 1), (6, 6)]),
             unit([(2, 2), (5, 5)]),
             unit([(3, 3), (4, 4)]),
             unit([(2, 4), (4, 2), (3, 5), (5, 3)]),
             coherence + coherence.T,
             1j * coherence - 1j * coherence.T)
    for b in basis:
        b.setflags(write=False)
    return basis

FAMILY_BASIS = _family_basis()
FLIP_CLONES = kron(SIGMA_Y, SIGMA_Y, IDENTITY_2)

def covariant_basis(v:Variant = Variant.TWO) -> tuple[np.ndarray, ...]:
    """
    Matrices multiplying each coefficient, in the order c00, c11, c22, c33, c24, c12a, c12b.
    For variant 1 every direction is conjugated by sigma_Y x sigma_Y x 1.
    """
    if Variant(v) == Variant.ONE:
        return tuple(as_matrix(FLIP_CLONES @ b @ FLIP_CLONES.conj().T) for b in FAMILY_BASIS)
    return FAMILY_BASIS

def covariant_matrix(params, v:Variant = Variant.TWO) -> np.ndarray:
    '''
        Linear map of the coefficients onto 8x8 matrices, without any validity check.
    '''
    if isinstance(params, CovariantParams):
        params = params.as_vector()
    values = np.asarray(params, dtype=float)
    return as_matrix(np.tensordot(values, np.array(covariant_basis(v)), axes=1))

def build_covariant_choi(p:CovariantParams, tol:float = CHOI_TOL) -> ChoiOperator:
    """
    Builds the covariant Choi operator of the family from its coefficients.

    Args:
        p: The coefficients.
        tol: Positivity tolerance for the coefficient check.

    Returns:
        ChoiOperator: block diagonal operator on {0}, {1,2,4}, {3,5,6}, {7}
    """
    failed = p.violations(tol)
    if failed:
        raise InvalidInputError("Invalid covariant parameters: " + "; ".join(failed))
    logger.debug("-> Built covariant Choi operator.")
    return ChoiOperator(r=covariant_matrix(p))

def to_variant1(choi:ChoiOperator) -> ChoiOperator:
    '''
        Conjugation by sigma_Y x sigma_Y x 1, a signed permutation of the basis states.
        The map is an involution and takes either variant form to the other.
    '''
    return ChoiOperator(r=FLIP_CLONES @ choi.r @ FLIP_CLONES.conj().T)

def phase_operator(theta:float) -> np.ndarray:
    return as_matrix(np.diag([1.0, np.exp(1j * theta)]))

def _input_state(rho_in) -> np.ndarray:
    rho = require_hermitian(rho_in, "input density matrix")
    if rho.shape != (2, 2):
        raise InvalidInputError(f"Input density matrix must be 2x2, got shape {rho.shape}.")
    if abs(np.trace(rho) - 1.0) > 1e-10:
        raise InvalidInputError(f"Input density matrix has trace {np.trace(rho).real:.12g}, expected 1.")
    if not is_psd(rho, 1e-10):
        raise InvalidInputError("Input density matrix is not positive semidefinite.")
    return rho

def channel_output(r:np.ndarray, rho_in:np.ndarray, v:Variant) -> np.ndarray:
    """
    Partial trace over the input slot of (1 x sigma) R, with sigma the transposed input for variant 1
    and the input itself for variant 2. No validity checks, any 8x8 matrix is accepted.

    Args:
        r: 8x8 matrix.
        rho_in: 2x2 matrix.
        v: Variant.

    Returns:
        np.ndarray: the 4x4 output on the two clones
    """
    sigma = np.asarray(rho_in).T if Variant(v) == Variant.ONE else np.asarray(rho_in)
    r4 = np.asarray(r).reshape(4, 2, 4, 2)
    return as_matrix(np.einsum("ocpd,dc->op", r4, sigma))

def apply_channel(choi:ChoiOperator, rho_in, v:Variant) -> np.ndarray:
    return channel_output(choi.r, _input_state(rho_in), v)

def _clone_projector(q:PureQubit, clone:int) -> np.ndarray:
    if clone == 1:
        return kron(q.projector(), IDENTITY_2)
    if clone == 2:
        return kron(IDENTITY_2, q.projector())
    raise InvalidInputError(f"Clone index must be 1 or 2, got {clone!r}.")

def fidelity_operator(q:PureQubit, v:Variant, clone:int = 1) -> np.ndarray:
    """
    Observable A with F = Tr[A R] for the single-copy fidelity of one clone.
    The chosen clone carries the projector, the other clone the identity and the
    input slot the (transposed, for variant 1) projector.
    """
    projector = q.projector()
    sigma = projector.T if Variant(v) == Variant.ONE else projector
    return kron(_clone_projector(q, clone), sigma)

def single_copy_fidelity(choi:ChoiOperator, q:PureQubit, v:Variant, clone:int = 1) -> float:
    """
    Overlap of the input state with one clone's reduced state.

    Args:
        choi: The cloning map.
        q: Pure input state.
        v: Variant deciding the input transposition.
        clone: 1 or 2.

    Returns:
        float: fidelity in [0, 1]
    """
    if clone not in (1, 2):
        raise InvalidInputError(f"Clone index must be 1 or 2, got {clone!r}.")
    output = apply_channel(choi, q.projector(), v)
    reduced = partial_trace(output, [2, 2], keep={clone - 1})
    psi = q.vector()
    return float(np.real(psi.conj() @ reduced @ psi))

def random_covariant_params(rng:np.random.Generator) -> CovariantParams:
    """
    Draws a strictly feasible family member.
    The coherence is bounded through the Schur complement of the 3x3 block.
    """
    c00, a, b, e = rng.uniform(0.05, 1.0, size=4)
    x = rng.uniform(0.0, 0.25) * min(b, e)
    c12 = np.sqrt(x * a) * np.exp(2j * np.pi * rng.uniform())
    c24 = x * rng.uniform(-1.0, 1.0)
    total = c00 + a + b + e
    return CovariantParams(c00=c00 / total, c11=a / total, c22=b / total, c33=e / total,
                           c24=c24 / total, c12a=c12.real / total, c12b=c12.imag / total)
