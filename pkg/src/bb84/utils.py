from channels.utils import PureQubit, Variant
from optimizer.sdp_util import optimize_fidelity
from optimizer.utils import Ensemble, EnsembleMember
from utils.utils_basic import CloningException, get_logger

from enum import Enum
from typing import Literal
from pydantic import BaseModel, ConfigDict
import numpy as np

logger = get_logger(__name__)

REPORT_TOLERANCE = 1e-6

class QuadrupleKind(str, Enum):
    '''
        meridian_pi4: four states spaced equally on a meridian, at xi = pi/4 and 3pi/4.
        mub: the two mutually unbiased bases {|0>, |1>} and {|+>, |->}.
    '''
    MERIDIAN_PI4 = "meridian_pi4"
    MUB = "mub"

class Bb84Row(BaseModel):
    model_config = ConfigDict(frozen=True)

    quadruple: QuadrupleKind
    variant: int
    fidelity: float
    tolerance: float

class Bb84Report(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: list[Bb84Row]
    ordering_check: bool

    def fidelity(self, kind:QuadrupleKind, v:Variant) -> float:
        for row in self.rows:
            if row.quadruple == QuadrupleKind(kind) and row.variant == int(v):
                return row.fidelity
        raise KeyError(f"No row for ({kind}, {int(v)}).")

def quadruple_states(kind:QuadrupleKind, collapsed:bool = False) -> Ensemble:
    """
    Equal-weight ensemble of a BB84 state quadruple.

    Args:
        kind: Which quadruple.
        collapsed: Return the representation reduced by phase and bit-flip covariance instead,
            the singleton xi = pi/4 for the meridian states and {xi = 0, xi = pi/2} with weights 1/2 for mub.

    Returns:
        Ensemble: the input states
    """
    kind = QuadrupleKind(kind)
    if kind == QuadrupleKind.MERIDIAN_PI4:
        if collapsed:
            return Ensemble.singleton(np.pi / 4)
        return Ensemble.uniform([PureQubit(xi=xi, phi=phi)
                                 for xi in (np.pi / 4, 3 * np.pi / 4) for phi in (0.0, np.pi)])
    if collapsed:
        return Ensemble(members=[EnsembleMember(state=PureQubit(xi=0.0), weight=0.5),
                                 EnsembleMember(state=PureQubit(xi=np.pi / 2), weight=0.5)])
    return Ensemble.uniform([PureQubit(xi=0.0), PureQubit(xi=np.pi),
                             PureQubit(xi=np.pi / 2, phi=0.0), PureQubit(xi=np.pi / 2, phi=np.pi)])

def eavesdropper_fidelity(kind:QuadrupleKind, v:Variant, aggregate:Literal["average", "worst_case"] = "worst_case",
                          collapsed:bool = False) -> float:
    """
    Best single-copy fidelity a covariant cloner reaches on every state of the quadruple.
    The default worst-case aggregate scores the least well cloned state.
    On the two mutually unbiased bases variant 1 reaches 5/6 while variant 2 only reaches 2/3,
    so the input convention matters for the eavesdropper.
    """
    result = optimize_fidelity(quadruple_states(kind, collapsed), v, aggregate=aggregate)
    logger.info("-> Eavesdropper fidelity for %s, variant %d: %.10f.", QuadrupleKind(kind).value, v, result.optimum)
    return result.optimum

def report() -> Bb84Report:
    """
    Fidelities of every (quadruple, variant) pair and the ordering
    F2(meridian) < F1(mub) < F1(meridian).
    """
    try:
        rows = [Bb84Row(quadruple=kind, variant=int(v), fidelity=eavesdropper_fidelity(kind, v),
                        tolerance=REPORT_TOLERANCE)
                for kind in QuadrupleKind for v in Variant]
        result = Bb84Report(rows=rows, ordering_check=False)
        lower = result.fidelity(QuadrupleKind.MERIDIAN_PI4, Variant.TWO)
        middle = result.fidelity(QuadrupleKind.MUB, Variant.ONE)
        upper = result.fidelity(QuadrupleKind.MERIDIAN_PI4, Variant.ONE)
        ordered = lower + REPORT_TOLERANCE < middle and middle + REPORT_TOLERANCE < upper
        logger.info("-> Checked ordering of eavesdropper fidelities: %s.", ordered)
        return Bb84Report(rows=rows, ordering_check=ordered)

    except CloningException as e:
        raise e

    except Exception as e:
        raise CloningException(exit_code=1, detail="Unknown error occured while building the BB84 report. Error message:" + str(e))
