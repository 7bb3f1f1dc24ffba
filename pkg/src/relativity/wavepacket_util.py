from relativity.utils import FourVector, LorentzTransform, WignerAngle, wigner_phase, OMEGA0
from utils.utils_basic import CloningException, get_logger
from utils.utils_linalg import hermitian_eigenvalues, require_hermitian

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
import numpy as np

logger = get_logger(__name__)

NORM_TOL = 1e-10

class PacketSample(BaseModel):
    '''
        One quadrature node of a wave packet: frequency, invariant weight and the two helicity amplitudes.
    '''
    model_config = ConfigDict(frozen=True)

    omega: float = Field(gt=0)
    weight: float = Field(gt=0)
    f_plus: complex
    f_minus: complex

class WavePacket(BaseModel):
    '''
        Photon wave packet along a single direction, sampled at a finite set of frequencies.
    '''
    model_config = ConfigDict(frozen=True)

    direction: tuple[float, float, float]
    samples: tuple[PacketSample, ...]

    @field_validator("direction", mode="before")
    @classmethod
    def _unit_direction(cls, v):
        d = np.asarray(v, dtype=float)
        if d.shape != (3,):
            raise ValueError(f"Direction needs 3 components, got shape {d.shape}.")
        norm = np.linalg.norm(d)
        if norm == 0 or not np.isfinite(norm):
            raise ValueError("Direction must be a finite non-zero vector.")
        return tuple(float(c) for c in d / norm)

    @model_validator(mode="after")
    def _normalized(self):
        if not self.samples:
            raise ValueError("Wave packet needs at least one sample.")
        norm = sum(s.weight * (abs(s.f_plus) ** 2 + abs(s.f_minus) ** 2) for s in self.samples)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"Wave packet is not normalized (norm {norm:.12g}).")
        return self

    def momentum(self, sample:PacketSample) -> FourVector:
        return FourVector.from_array(np.concatenate([[1.0], self.direction]) * sample.omega)

    def norm(self) -> float:
        return float(sum(s.weight * (abs(s.f_plus) ** 2 + abs(s.f_minus) ** 2) for s in self.samples))

class PolarizationState(BaseModel):
    '''
        Reduced 2x2 polarization density matrix in the helicity basis {|0> = +1, |1> = -1}.
    '''
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rho: np.ndarray

    @field_validator("rho", mode="before")
    @classmethod
    def _valid_density(cls, v):
        rho = np.array(v, dtype=complex)
        if rho.shape != (2, 2):
            raise ValueError(f"Polarization matrix must be 2x2, got shape {rho.shape}.")
        require_hermitian(rho, "polarization matrix")
        if abs(np.trace(rho) - 1.0) > 1e-12:
            raise ValueError(f"Polarization matrix has trace {np.trace(rho).real:.15g}, expected 1.")
        if hermitian_eigenvalues(rho)[0] < -1e-10:
            raise ValueError("Polarization matrix is not positive semidefinite.")
        if abs(rho[0, 1]) ** 2 > (rho[0, 0] * rho[1, 1]).real + 1e-12:
            raise ValueError("Polarization coherence exceeds the Cauchy-Schwarz bound.")
        rho.setflags(write=False)
        return rho

    def purity(self) -> float:
        return float(np.trace(self.rho @ self.rho).real)

def transform_wavepacket(lorentz:LorentzTransform, wp:WavePacket, omega0:float = OMEGA0) -> WavePacket:
    """
    Applies a Lorentz transformation to a wave packet.
    Each sample keeps its weight, its frequency becomes the time component of the transformed momentum
    and its helicity amplitudes pick up exp(+-i theta_W).

    Args:
        lorentz: The transformation.
        wp: The packet to transform.
        omega0: Frequency of the standard momentum used for the Wigner phase.

    Returns:
        WavePacket: the transformed packet
    """
    samples = []
    direction = None
    for s in wp.samples:
        p = wp.momentum(s)
        lp = lorentz.apply(p)
        if lp.t <= 0:
            raise CloningException(exit_code=1, detail=f"Transformed frequency {lp.t} is not positive.")
        theta = wigner_phase(lorentz, p, omega0).theta
        phase = np.exp(1j * theta)
        samples.append(PacketSample(omega=lp.t, weight=s.weight,
                                    f_plus=s.f_plus * phase, f_minus=s.f_minus / phase))
        if direction is None:
            direction = lp.direction()
    logger.info("-> Transformed wave packet with %d samples.", len(samples))
    return WavePacket(direction=direction, samples=samples)

def polarization_density(wp:WavePacket) -> PolarizationState:
    """
    Traces the momentum degree of freedom out of a packet.
    The matrix is rescaled by its trace, which equals the packet norm.
    """
    rho = np.zeros((2, 2), dtype=complex)
    for s in wp.samples:
        amplitudes = np.array([s.f_plus, s.f_minus])
        rho += s.weight * np.outer(amplitudes, amplitudes.conj())
    rho = (rho + rho.conj().T) / 2
    return PolarizationState(rho=rho / np.trace(rho).real)

def apply_wigner_phase(state:PolarizationState, theta:WignerAngle|float) -> PolarizationState:
    """
    Multiplies the helicity coherence by exp(2 i theta); helicities +-1 give the doubled angle.
    """
    if isinstance(theta, WignerAngle):
        theta = theta.theta
    rho = np.array(state.rho)
    rho[0, 1] *= np.exp(2j * theta)
    rho[1, 0] = np.conj(rho[0, 1])
    return PolarizationState(rho=rho)
