from channels.utils import (CovariantParams, PureQubit, Variant, PARAM_NAMES, covariant_basis,
                            fidelity_operator)
from utils.utils_basic import InvalidInputError, get_logger

from pydantic import BaseModel, ConfigDict, Field, model_validator
from scipy.optimize import minimize_scalar
import numpy as np

logger = get_logger(__name__)

XI_MIN = float(np.arctan(np.sqrt(2.0)))
SEARCH_BRACKET = (0.1, np.pi / 2 - 0.1)
SEARCH_XATOL = 1e-10

class EnsembleMember(BaseModel):
    model_config = ConfigDict(frozen=True)

    state: PureQubit
    weight: float = Field(gt=0)

class Ensemble(BaseModel):
    '''
        Weighted set of pure input states, weights sum to one.
    '''
    model_config = ConfigDict(frozen=True)

    members: tuple[EnsembleMember, ...]

    @model_validator(mode="after")
    def _normalized(self):
        if not self.members:
            raise ValueError("Ensemble needs at least one member.")
        total = sum(m.weight for m in self.members)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"Ensemble weights sum to {total:.15g}, expected 1.")
        return self

    @classmethod
    def singleton(cls, xi:float, phi:float = 0.0) -> "Ensemble":
        return cls(members=[EnsembleMember(state=PureQubit(xi=xi, phi=phi), weight=1.0)])

    @classmethod
    def uniform(cls, states:list[PureQubit]) -> "Ensemble":
        return cls(members=[EnsembleMember(state=s, weight=1.0 / len(states)) for s in states])

class LinearForm(BaseModel):
    '''
        Fidelity as a linear function sum_i g_i c_i of the family coefficients.
    '''
    model_config = ConfigDict(frozen=True)

    g00: float
    g11: float
    g22: float
    g33: float
    g24: float
    g12a: float
    g12b: float

    @classmethod
    def from_vector(cls, v) -> "LinearForm":
        return cls(**{"g" + name[1:]: float(x) for name, x in zip(PARAM_NAMES, v)})

    def as_vector(self) -> np.ndarray:
        return np.array([getattr(self, "g" + name[1:]) for name in PARAM_NAMES])

    def evaluate(self, params:CovariantParams) -> float:
        return float(self.as_vector() @ params.as_vector())

def objective_coefficients(e:Ensemble, v:Variant, clone:int = 1) -> LinearForm:
    """
    Linear form of the ensemble-averaged single-copy fidelity over the covariant family.
    Each coefficient is the fidelity functional evaluated on one basis direction of the family.

    Args:
        e: Input ensemble.
        v: Variant, decides the input transposition and the sigma_Y conjugation of the family.
        clone: Which clone is scored, 1 or 2.

    Returns:
        LinearForm: coefficients (g00, g11, g22, g33, g24, g12a, g12b)
    """
    observable = sum(m.weight * np.asarray(fidelity_operator(m.state, v, clone)) for m in e.members)
    coefficients = [np.real(np.trace(observable @ b)) for b in covariant_basis(v)]
    return LinearForm.from_vector(coefficients)

def member_coefficients(e:Ensemble, v:Variant, clone:int = 1) -> list[LinearForm]:
    '''
        One linear form per ensemble member, used by the worst-case objective.
    '''
    return [objective_coefficients(Ensemble.singleton(m.state.xi, m.state.phi), v, clone) for m in e.members]

def _check_domain(xi:float) -> float:
    xi = float(xi)
    if not (0.0 <= xi <= np.pi / 2):
        raise InvalidInputError(f"xi must lie in [0, pi/2], got {xi}.")
    return xi

def analytic_f1(xi:float) -> float:
    """
    Closed-form optimal fidelity of the variant 1 (input transposed) covariant cloner.

    Args:
        xi: Polar angle of the input state in [0, pi/2].

    Returns:
        float: the optimal single-copy fidelity
    """
    xi = _check_domain(xi)
    c2, s4 = np.cos(xi) ** 2, np.sin(xi) ** 4
    root = np.sqrt(2 * s4 + c2 ** 2)
    return float(0.5 * (1 + 0.5 * c2 * (1 + c2 / root) + s4 / root))

def _f2_branches(xi:float) -> tuple[float, float]:
    xi = _check_domain(xi)
    c2, s4 = np.cos(xi) ** 2, np.sin(xi) ** 4
    root = np.sqrt(2 * s4 + c2 ** 2)
    first = 0.25 * (np.cos(2 * xi) + 3)
    second = 0.5 * (1 + 0.5 * c2 * (-1 + c2 / root) + s4 / root)
    return float(first), float(second)

def analytic_f2(xi:float) -> float:
    """
    Closed-form optimal fidelity of the variant 2 cloner, the larger of two branches.
    Independent of the input phase.
    """
    return max(_f2_branches(xi))

def analytic_branch(xi:float) -> str:
    '''
        Which branch of the variant 2 formula is active: "diagonal" ((cos 2xi + 3)/4) or "coherent".
    '''
    first, second = _f2_branches(xi)
    return "diagonal" if first >= second else "coherent"

def analytic_fidelity(xi:float, v:Variant) -> float:
    return analytic_f1(xi) if Variant(v) == Variant.ONE else analytic_f2(xi)

def find_minimum(v:Variant) -> tuple[float, float]:
    """
    Locates the minimum of the closed-form fidelity curve by bounded scalar search.

    Args:
        v: Variant.

    Returns:
        tuple[float, float]: (xi_min, f_min)
    """
    v = Variant(v)
    result = minimize_scalar(lambda xi: analytic_fidelity(xi, v), bounds=SEARCH_BRACKET,
                             method="bounded", options={"xatol": SEARCH_XATOL})
    logger.info("-> Found minimum of variant %d curve at xi = %.10f.", v, result.x)
    return float(result.x), float(result.fun)
