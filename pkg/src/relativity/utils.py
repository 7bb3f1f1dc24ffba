from utils.utils_basic import InvalidInputError, get_logger

from pydantic import BaseModel, ConfigDict, field_validator
import numpy as np

logger = get_logger(__name__)

OMEGA0 = 1.0
ETA = np.diag([1.0, -1.0, -1.0, -1.0])
LIGHT_LIKE_TOL = 1e-9
LORENTZ_TOL = 1e-10
TWO_PI = 2.0 * np.pi

class FourVector(BaseModel):
    '''
        Contravariant 4-vector (t, x, y, z) in units of frequency, c = 1, signature (+,-,-,-).
    '''
    model_config = ConfigDict(frozen=True)

    t: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, a) -> "FourVector":
        a = np.asarray(a, dtype=float)
        if a.shape != (4,):
            raise InvalidInputError(f"A 4-vector needs 4 components, got shape {a.shape}.")
        return cls(t=a[0], x=a[1], y=a[2], z=a[3])

    @classmethod
    def from_direction(cls, omega:float, theta:float, phi:float) -> "FourVector":
        """
        Light-like momentum of frequency omega travelling along the polar angles (theta, phi).
        """
        if not omega > 0:
            raise InvalidInputError(f"Frequency must be positive, got {omega}.")
        return cls(t=omega,
                   x=omega * np.sin(theta) * np.cos(phi),
                   y=omega * np.sin(theta) * np.sin(phi),
                   z=omega * np.cos(theta))

    @classmethod
    def standard(cls, omega0:float = OMEGA0) -> "FourVector":
        return cls(t=omega0, x=0.0, y=0.0, z=omega0)

    def as_array(self) -> np.ndarray:
        return np.array([self.t, self.x, self.y, self.z])

    def minkowski_square(self) -> float:
        a = self.as_array()
        return float(a @ ETA @ a)

    def is_light_like(self, tol:float = LIGHT_LIKE_TOL) -> bool:
        return abs(self.minkowski_square()) <= tol * self.t ** 2 and self.t > 0

    def direction(self) -> np.ndarray:
        spatial = self.as_array()[1:]
        norm = np.linalg.norm(spatial)
        if norm == 0:
            raise InvalidInputError("A 4-vector with vanishing spatial part has no direction.")
        return spatial / norm

class LorentzTransform(BaseModel):
    '''
        Proper orthochronous Lorentz transformation acting on column 4-vectors.
    '''
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    m: np.ndarray

    @field_validator("m", mode="before")
    @classmethod
    def _validate_matrix(cls, v):
        m = np.array(v, dtype=float)
        if m.shape != (4, 4):
            raise ValueError(f"Lorentz matrix must be 4x4, got shape {m.shape}.")
        if not np.all(np.isfinite(m)):
            raise ValueError("Lorentz matrix has non-finite entries.")
        scale = max(1.0, float(np.max(np.abs(m))) ** 2)
        if np.max(np.abs(m.T @ ETA @ m - ETA)) > LORENTZ_TOL * scale:
            raise ValueError("Matrix does not preserve the Minkowski metric.")
        if abs(np.linalg.det(m) - 1.0) > 1e-9 * scale:
            raise ValueError("Lorentz matrix is not proper (det != 1).")
        if m[0, 0] < 1.0 - 1e-12 * scale:
            raise ValueError("Lorentz matrix is not orthochronous.")
        m.setflags(write=False)
        return m

    @classmethod
    def identity(cls) -> "LorentzTransform":
        return cls(m=np.eye(4))

    def inverse(self) -> "LorentzTransform":
        return LorentzTransform(m=ETA @ self.m.T @ ETA)

    def apply(self, p:FourVector) -> FourVector:
        return FourVector.from_array(self.m @ p.as_array())

    def __matmul__(self, other):
        if isinstance(other, LorentzTransform):
            return LorentzTransform(m=self.m @ other.m)
        if isinstance(other, FourVector):
            return self.apply(other)
        return NotImplemented

class WignerAngle(BaseModel):
    '''
        Little-group rotation angle in radians, normalized to [0, 2pi).
    '''
    model_config = ConfigDict(frozen=True)

    theta: float

    @field_validator("theta", mode="before")
    @classmethod
    def _normalize(cls, v):
        v = float(v)
        if not np.isfinite(v):
            raise ValueError("Wigner angle must be finite.")
        v = v % TWO_PI
        # float modulo can land exactly on 2pi for tiny negative inputs
        if v >= TWO_PI:
            v = 0.0
        return v

def angle_distance(a:float, b:float) -> float:
    '''
        Distance of two angles on the circle, in [0, pi].
    '''
    d = (float(a) - float(b)) % TWO_PI
    return min(d, TWO_PI - d)

def _spatial(r:np.ndarray) -> LorentzTransform:
    m = np.eye(4)
    m[1:, 1:] = r
    return LorentzTransform(m=m)

def _rotation_3d(axis:str, angle:float) -> np.ndarray:
    c, s = np.cos(angle), np.sin(angle)
    if axis == "x":
        return np.array([[1, 0, 0], [0, c, -s], [0, s, c]])
    if axis == "y":
        return np.array([[c, 0, s], [0, 1, 0], [-s, 0, c]])
    if axis == "z":
        return np.array([[c, -s, 0], [s, c, 0], [0, 0, 1]])
    raise InvalidInputError(f"Rotation axis must be one of x, y, z, got '{axis}'.")

def rotation(axis:str, angle:float) -> LorentzTransform:
    """
    Active rotation by angle (radians) about a coordinate axis.

    Args:
        axis: One of "x", "y", "z".
        angle: Rotation angle, right-handed.

    Returns:
        LorentzTransform: the rotation as a 4x4 transformation
    """
    return _spatial(_rotation_3d(axis.strip().lower(), angle))

def direction_rotation(theta:float, phi:float) -> LorentzTransform:
    """
    Rotation R_z(phi) R_y(theta) R_z(-phi) taking the z axis to the direction (theta, phi).
    """
    r = _rotation_3d("z", phi) @ _rotation_3d("y", theta) @ _rotation_3d("z", -phi)
    return _spatial(r)

def boost_z(chi:float) -> LorentzTransform:
    if not np.isfinite(chi):
        raise InvalidInputError(f"Rapidity must be finite, got {chi}.")
    m = np.eye(4)
    m[0, 0] = m[3, 3] = np.cosh(chi)
    m[0, 3] = m[3, 0] = np.sinh(chi)
    return LorentzTransform(m=m)

def boost(velocity) -> LorentzTransform:
    """
    Active pure boost giving a particle at rest the 3-velocity `velocity`.

    Args:
        velocity: 3 components in units of c, norm strictly below 1.

    Returns:
        LorentzTransform: the boost matrix
    """
    v = np.asarray(velocity, dtype=float)
    if v.shape != (3,):
        raise InvalidInputError(f"Boost velocity needs 3 components, got shape {v.shape}.")
    speed2 = float(v @ v)
    if speed2 >= 1.0:
        raise InvalidInputError(f"Superluminal boost velocity |v| = {np.sqrt(speed2):.6g}.")
    m = np.eye(4)
    if speed2 == 0.0:
        return LorentzTransform(m=m)
    gamma = 1.0 / np.sqrt(1.0 - speed2)
    m[0, 0] = gamma
    m[0, 1:] = m[1:, 0] = gamma * v
    m[1:, 1:] += (gamma - 1.0) * np.outer(v, v) / speed2
    return LorentzTransform(m=m)

def _require_light_like(p:FourVector) -> None:
    if p.t <= 0:
        raise InvalidInputError(f"Momentum is not future pointing (t = {p.t}).")
    if not p.is_light_like():
        raise InvalidInputError(f"Momentum is not light-like (p.p = {p.minkowski_square():.3e}).")

def standard_transform(p:FourVector, omega0:float = OMEGA0) -> LorentzTransform:
    """
    Standard transformation L(p) taking k = omega0 (1, 0, 0, 1) to the light-like momentum p.
    A boost along z fixes the frequency, the rotation then fixes the direction.
    Along the z axis the azimuth is immaterial and set to 0.

    Args:
        p: Future-pointing light-like momentum.
        omega0: Frequency of the standard momentum.

    Returns:
        LorentzTransform: L(p) with L(p) k = p
    """
    _require_light_like(p)
    if not omega0 > 0:
        raise InvalidInputError(f"Reference frequency must be positive, got {omega0}.")
    rho = np.hypot(p.x, p.y)
    theta = np.arctan2(rho, p.z)
    phi = np.arctan2(p.y, p.x) if rho > 1e-15 * p.t else 0.0
    return direction_rotation(theta, phi) @ boost_z(np.log(p.t / omega0))

def little_group_element(lorentz:LorentzTransform, p:FourVector, omega0:float = OMEGA0) -> LorentzTransform:
    """
    Little-group element W(lambda, p) = L(lambda p)^-1 lambda L(p), which leaves k invariant.
    """
    lp = lorentz.apply(p)
    return standard_transform(lp, omega0).inverse() @ lorentz @ standard_transform(p, omega0)

def wigner_phase(lorentz:LorentzTransform, p:FourVector, omega0:float = OMEGA0) -> WignerAngle:
    """
    Rotation angle of the little-group element, read off its x-y block.
    The sign is chosen so that a rotation R_z(gamma) acting on k yields -gamma.

    Args:
        lorentz: The Lorentz transformation.
        p: Future-pointing light-like momentum.
        omega0: Frequency of the standard momentum.

    Returns:
        WignerAngle: the phase angle in [0, 2pi)
    """
    w = little_group_element(lorentz, p, omega0).m
    return WignerAngle(theta=np.arctan2(w[1, 2], w[1, 1]))

def stabilizer_residual(w:LorentzTransform, omega0:float = OMEGA0) -> float:
    k = FourVector.standard(omega0).as_array()
    return float(np.linalg.norm(w.m @ k - k))

def random_lorentz(rng:np.random.Generator, max_speed:float = 0.9) -> LorentzTransform:
    '''
        Boost with random velocity below max_speed after a random rotation given by z-y-z Euler angles.
    '''
    alpha, gamma = rng.uniform(0.0, TWO_PI, size=2)
    beta = np.arccos(rng.uniform(-1.0, 1.0))
    direction = rng.normal(size=3)
    velocity = direction / np.linalg.norm(direction) * rng.uniform(0.0, max_speed)
    return boost(velocity) @ rotation("z", alpha) @ rotation("y", beta) @ rotation("z", gamma)

def random_light_like(rng:np.random.Generator, omega_range:tuple[float, float] = (0.2, 5.0)) -> FourVector:
    return FourVector.from_direction(rng.uniform(*omega_range), np.arccos(rng.uniform(-1.0, 1.0)),
                                     rng.uniform(0.0, TWO_PI))
