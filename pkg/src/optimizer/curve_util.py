from channels.utils import Variant
from optimizer.sdp_util import SymmetryFlags, optimize_fidelity
from optimizer.utils import Ensemble, analytic_fidelity
from utils.utils_basic import InvalidInputError, get_logger

from typing import Literal
import numpy as np
import pandas as pd

logger = get_logger(__name__)

MAX_STEPS = 10000
CSV_FLOAT_FORMAT = "%.9g"

def curve_grid(xi_min:float, xi_max:float, steps:int) -> np.ndarray:
    """
    Uniform grid over [xi_min, xi_max] including both ends.

    Args:
        xi_min: Lower end, at least 0.
        xi_max: Upper end, at most pi/2.
        steps: Number of grid points, between 2 and MAX_STEPS.

    Returns:
        np.ndarray: the grid
    """
    if not (2 <= steps <= MAX_STEPS):
        raise InvalidInputError(f"steps must lie in [2, {MAX_STEPS}], got {steps}.")
    if not (0.0 <= xi_min < xi_max <= np.pi / 2):
        raise InvalidInputError(f"Need 0 <= xi_min < xi_max <= pi/2, got xi_min = {xi_min}, xi_max = {xi_max}.")
    return np.linspace(xi_min, xi_max, steps)

def fidelity_curve(v:Variant, xi_grid, mode:Literal["analytic", "sdp", "both"] = "analytic",
                   flags:SymmetryFlags = SymmetryFlags()) -> pd.DataFrame:
    """
    Optimal fidelity along a grid of polar angles.

    Args:
        v: Variant.
        xi_grid: Angles in [0, pi/2].
        mode: "analytic" for the closed form, "sdp" for the solver, "both" adds their discrepancy.
        flags: Symmetry flags passed to the solver.

    Returns:
        pd.DataFrame: columns xi and f_analytic, f_sdp, discrepancy as the mode requires, in grid order
    """
    if mode not in ("analytic", "sdp", "both"):
        raise InvalidInputError(f"Mode must be analytic, sdp or both, got {mode!r}.")
    v = Variant(v)
    table = pd.DataFrame({"xi": np.asarray(xi_grid, dtype=float)})
    if mode in ("analytic", "both"):
        table["f_analytic"] = [analytic_fidelity(xi, v) for xi in table["xi"]]
    if mode in ("sdp", "both"):
        table["f_sdp"] = [optimize_fidelity(Ensemble.singleton(xi), v, flags).optimum for xi in table["xi"]]
        logger.info("-> Solved %d SDPs for the variant %d curve.", len(table), v)
    if mode == "both":
        table["discrepancy"] = (table["f_sdp"] - table["f_analytic"]).abs()
    return table

def curve_to_csv(table:pd.DataFrame) -> str:
    '''
        CSV text with a header row, '\\n' line ends and 9 significant digits.
    '''
    return table.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
