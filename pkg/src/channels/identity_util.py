from channels.utils import (ChoiOperator, CovariantParams, Variant, FAMILY_BASIS, PARAM_NAMES,
                            phase_operator)
from utils.utils_basic import get_logger
from utils.utils_linalg import (SIGMA_X, IDENTITY_2, as_matrix, commutator, kron, operator_norm,
                                require_hermitian)

from pydantic import BaseModel, ConfigDict
import numpy as np

logger = get_logger(__name__)

FLIP_ALL = kron(SIGMA_X, SIGMA_X, SIGMA_X)
# vec index 2 i + j of a 2x2 matrix, transposition swaps entries 1 and 2
TRANSPOSE = as_matrix(np.eye(4)[[0, 2, 1, 3]])

class CovarianceReport(BaseModel):
    '''
        Largest commutator norms found by verify_covariance.
    '''
    model_config = ConfigDict(frozen=True)

    variant: Variant
    phase: float
    bit_flip: float

    @property
    def max_residual(self) -> float:
        return max(self.phase, self.bit_flip)

class IdentityReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    theta: float
    identity: float
    commutator: float
    states: float

    @property
    def max_residual(self) -> float:
        return max(self.identity, self.commutator, self.states)

def phase_unitary(theta:float, v:Variant) -> np.ndarray:
    """
    Three-slot phase rotation a covariant operator commutes with.
    Variant 2 uses P x P x P, variant 1 uses P_-theta x P_-theta x conj(P_-theta).
    """
    if Variant(v) == Variant.TWO:
        p = phase_operator(theta)
        return kron(p, p, p)
    p = phase_operator(-theta)
    return kron(p, p, p.conj())

def verify_covariance(choi, v:Variant, thetas) -> CovarianceReport:
    """
    Measures how far an operator is from phase and bit-flip covariance.
    The bit flip is the plain sigma_X x sigma_X x sigma_X commutator for variant 1
    and the anti-unitary form ||X R* X - R|| for variant 2.

    Args:
        choi: ChoiOperator or any 8x8 matrix.
        v: Variant whose phase rotation is checked.
        thetas: Sampled rotation angles.

    Returns:
        CovarianceReport: maximal spectral norms of the residuals
    """
    r = choi.r if isinstance(choi, ChoiOperator) else as_matrix(choi)
    v = Variant(v)
    phase = max((operator_norm(commutator(r, phase_unitary(t, v))) for t in thetas), default=0.0)
    if v == Variant.ONE:
        flip = operator_norm(commutator(r, FLIP_ALL))
    else:
        flip = operator_norm(FLIP_ALL @ r.conj() @ FLIP_ALL - r)
    return CovarianceReport(variant=v, phase=phase, bit_flip=flip)

def symmetry_project(h) -> CovariantParams:
    """
    Orthogonal projection, in the Frobenius inner product, of a Hermitian 8x8 matrix onto the
    span of the covariant family. Cross-block entries drop out, bit-flip partners and tied
    coherences are averaged.

    Args:
        h: Hermitian 8x8 matrix.

    Returns:
        CovariantParams: coefficients of the projection (not necessarily a valid channel)
    """
    h = require_hermitian(h, "matrix to project")
    coefficients = [np.real(np.vdot(b, h)) / np.real(np.vdot(b, b)) for b in FAMILY_BASIS]
    return CovariantParams(**dict(zip(PARAM_NAMES, (float(c) for c in coefficients))))

def symmetric_projector() -> np.ndarray:
    swap = np.eye(4)[[0, 2, 1, 3]]
    return as_matrix((np.eye(4) + swap) / 2)

def universal_cloner_choi() -> ChoiOperator:
    """
    Choi operator of the universal symmetric 1->2 cloner rho -> (2/3) S (rho x 1) S,
    S the projector onto the symmetric two-qubit subspace. Built in the variant 1 convention
    R = sum_ij M(|i><j|) x |i><j|.
    """
    s = symmetric_projector()
    r = np.zeros((8, 8), dtype=complex)
    for i in range(2):
        for j in range(2):
            e = np.zeros((2, 2))
            e[i, j] = 1.0
            r += kron((2 / 3) * s @ kron(e, IDENTITY_2) @ s, e)
    return ChoiOperator(r=r)

def adjoint(u:np.ndarray) -> np.ndarray:
    '''
        Superoperator of rho -> U rho U^dagger on row-major vectorized 2x2 matrices.
    '''
    u = np.asarray(u)
    return as_matrix(np.kron(u, u.conj()))

def phase_flip_residual(theta:float) -> float:
    """
    Residual of P_theta sigma_X = sigma_X P_-theta as conjugations.
    The two unitaries differ by the global phase exp(-i theta).
    """
    lhs = adjoint(phase_operator(theta) @ SIGMA_X)
    rhs = adjoint(SIGMA_X @ phase_operator(-theta))
    return operator_norm(lhs - rhs)

def random_density_matrix(rng:np.random.Generator, dim:int = 2) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real

def identity_check_transposition(theta:float, trials:int = 100, seed:int = 0) -> IdentityReport:
    """
    Checks Ad(P) Gamma Ad(sigma_X) = Gamma Ad(sigma_X P) and [Ad(P), Gamma Ad(sigma_X)] = 0,
    Gamma being the transposition in the logical basis.

    Args:
        theta: Angle of the phase operator.
        trials: Number of random density matrices the identity is also applied to.
        seed: Seed of the random states.

    Returns:
        IdentityReport: superoperator residuals and the largest residual on the random states
    """
    ad_p = adjoint(phase_operator(theta))
    ad_x = adjoint(SIGMA_X)
    lhs = ad_p @ TRANSPOSE @ ad_x
    rhs = TRANSPOSE @ adjoint(SIGMA_X @ phase_operator(theta))
    flip = TRANSPOSE @ ad_x
    rng = np.random.default_rng(seed)
    states = 0.0
    for _ in range(trials):
        vec = random_density_matrix(rng).reshape(4)
        states = max(states, float(np.linalg.norm(lhs @ vec - rhs @ vec)))
    return IdentityReport(theta=theta,
                          identity=operator_norm(lhs - rhs),
                          commutator=operator_norm(ad_p @ flip - flip @ ad_p),
                          states=states)

def transposition_lemma_residual(c:np.ndarray) -> float:
    """
    Residual of Gamma Ad(C sigma_X) = Ad(sigma_X C) Gamma for a diagonal unitary C.
    """
    c = np.asarray(c)
    return operator_norm(TRANSPOSE @ adjoint(c @ SIGMA_X) - adjoint(SIGMA_X @ c) @ TRANSPOSE)
