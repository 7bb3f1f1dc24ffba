from channels.utils import (ChoiOperator, CovariantParams, Variant, PARAM_NAMES, build_covariant_choi,
                            to_variant1)
from optimizer.utils import Ensemble, member_coefficients, objective_coefficients
from utils.utils_basic import CloningException, InvalidInputError, SolverError, get_logger

from typing import Literal
from pydantic import BaseModel, ConfigDict
import numpy as np

logger = get_logger(__name__)

BARRIER_FLOOR = 1e-10
BARRIER_FACTOR = 10.0
CENTERING_TOL = 1e-10
MAX_NEWTON_STEPS = 500
MIN_STEP = 1e-14

# 3x3 block on the states (1, 2, 4) contributed by each family coefficient
_E = np.eye(3)
_HALF = np.outer(_E[0], _E[1]) + np.outer(_E[0], _E[2])
BLOCK_BASIS = np.array([np.zeros((3, 3)),
                        np.outer(_E[0], _E[0]),
                        np.outer(_E[1], _E[1]),
                        np.outer(_E[2], _E[2]),
                        np.outer(_E[1], _E[2]) + np.outer(_E[2], _E[1]),
                        _HALF + _HALF.T,
                        1j * _HALF - 1j * _HALF.T], dtype=complex)

class SymmetryFlags(BaseModel):
    '''
        Optional constraints on top of the covariant family.

        output_swap: c33 = c22, the map is invariant under exchanging the clones.
        transpose_invariant: Im c12 = 0, i.e. R = R^T. Always applied for variant 1.
    '''
    model_config = ConfigDict(frozen=True)

    output_swap: bool = False
    transpose_invariant: bool = False

class SdpResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    optimum: float
    params: CovariantParams
    gap: float
    iterations: int
    constraint_flags: SymmetryFlags
    variant: Variant
    clone: int
    aggregate: Literal["average", "worst_case"]
    history: list[float]
    degeneracies: list[str]

    def choi(self) -> ChoiOperator:
        '''
            The optimal map in the convention of its variant.
        '''
        choi = build_covariant_choi(self.params)
        return to_variant1(choi) if self.variant == Variant.ONE else choi

class BarrierState(BaseModel):
    '''
        Iterate of the barrier method, carried by SolverError when the solver gives up.
    '''
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    x: np.ndarray
    objective: float
    tau: float
    iterations: int

def reduced_parameterization(flags:SymmetryFlags, v:Variant) -> tuple[np.ndarray, np.ndarray, np.ndarray, list[str]]:
    """
    Eliminates the trace constraint and the flag ties: params = p0 + D y.

    Args:
        flags: Active symmetry flags.
        v: Variant, variant 1 always drops Im c12.

    Returns:
        tuple: p0 (7,), D (7, k), the strictly feasible start y0 (k,), and the names of the free variables
    """
    unit = np.eye(7)
    index = {name: i for i, name in enumerate(PARAM_NAMES)}
    columns, start, names = [], [], []
    columns.append(unit[index["c11"]] - unit[index["c00"]])
    start.append(0.25)
    names.append("c11")
    if flags.output_swap:
        columns.append(unit[index["c22"]] + unit[index["c33"]] - 2 * unit[index["c00"]])
        start.append(0.25)
        names.append("c22=c33")
    else:
        for name in ("c22", "c33"):
            columns.append(unit[index[name]] - unit[index["c00"]])
            start.append(0.25)
            names.append(name)
    columns.append(unit[index["c24"]])
    start.append(0.0)
    names.append("c24")
    columns.append(unit[index["c12a"]])
    start.append(0.0)
    names.append("c12a")
    if not (flags.transpose_invariant or Variant(v) == Variant.ONE):
        columns.append(unit[index["c12b"]])
        start.append(0.0)
        names.append("c12b")
    return unit[index["c00"]], np.array(columns).T, np.array(start), names

def _feasible(x, a, b, lmi0, lmis) -> bool:
    if np.any(a @ x + b <= 0):
        return False
    try:
        np.linalg.cholesky(lmi0 + np.tensordot(x, lmis, axes=1))
    except np.linalg.LinAlgError:
        return False
    return True

def _newton_direction(x, tau, c, a, b, lmi0, lmis) -> tuple[np.ndarray, float]:
    s = a @ x + b
    inv = np.linalg.inv(lmi0 + np.tensordot(x, lmis, axes=1))
    m = np.einsum("ab,jbc->jac", inv, lmis)
    grad = -tau * c - a.T @ (1.0 / s) - np.real(np.einsum("jaa->j", m))
    hess = a.T @ (a / s[:, None] ** 2) + np.real(np.einsum("iab,jba->ij", m, m))
    scale = 1.0 / np.sqrt(np.maximum(np.diag(hess), np.finfo(float).tiny))
    scaled = hess * np.outer(scale, scale)
    try:
        step = -scale * np.linalg.solve(scaled, scale * grad)
    except np.linalg.LinAlgError:
        step = -scale * np.linalg.lstsq(scaled, scale * grad, rcond=None)[0]
    decrement = float(max(-grad @ step, 0.0))
    return step, decrement

def barrier_maximize(c, a, b, lmi0, lmis, x0, max_steps:int = MAX_NEWTON_STEPS):
    """
    Log-barrier interior-point method for

        maximize c.x  subject to  a x + b > 0,  lmi0 + sum_j x_j lmis[j] positive definite.

    Every centering stage runs damped Newton steps (step 1/(1+lambda), full steps once lambda < 1/4,
    halved while infeasible) until lambda^2/2 <= CENTERING_TOL. The barrier weight grows by
    BARRIER_FACTOR until 1/tau <= BARRIER_FLOOR.

    Args:
        c: Objective vector (n,).
        a: Linear constraint rows (m, n).
        b: Linear constraint offsets (m,).
        lmi0: Constant Hermitian block (k, k).
        lmis: Hermitian blocks per variable (n, k, k).
        x0: Strictly feasible start (n,).
        max_steps: Newton step cap per centering stage.

    Returns:
        tuple: (x, gap bound, total Newton steps, objective after every stage)
    """
    x = np.array(x0, dtype=float)
    if not _feasible(x, a, b, lmi0, lmis):
        raise SolverError("Starting point is not strictly feasible.")
    barrier_degree = a.shape[0] + lmi0.shape[0]
    tau, total, history = 1.0, 0, []
    while True:
        for step_count in range(max_steps + 1):
            if step_count == max_steps:
                best = BarrierState(x=x, objective=float(c @ x), tau=tau, iterations=total)
                raise SolverError(f"Centering did not converge within {max_steps} Newton steps at tau = {tau:.1e}.", best=best)
            step, decrement = _newton_direction(x, tau, c, a, b, lmi0, lmis)
            if decrement / 2 <= CENTERING_TOL:
                break
            lam = np.sqrt(decrement)
            t = 1.0 if lam < 0.25 else 1.0 / (1.0 + lam)
            while t >= MIN_STEP and not _feasible(x + t * step, a, b, lmi0, lmis):
                t /= 2
            total += 1
            if t < MIN_STEP:
                # rounding level, the iterate cannot move any more
                break
            x = x + t * step
        history.append(float(c @ x))
        if 1.0 / tau <= BARRIER_FLOOR:
            return x, barrier_degree / tau, total, history
        tau *= BARRIER_FACTOR

def _degeneracies(p:CovariantParams, tol:float = 1e-6) -> list[str]:
    found = []
    diagonal = ["c00", "c11", "c22", "c33"]
    for i, first in enumerate(diagonal):
        for second in diagonal[i + 1:]:
            if abs(getattr(p, first) - getattr(p, second)) <= tol:
                found.append(f"{first} = {second}")
    for name in PARAM_NAMES:
        if abs(getattr(p, name)) <= tol:
            found.append(f"{name} = 0")
    return found

def optimize_fidelity(e:Ensemble, v:Variant, flags:SymmetryFlags = SymmetryFlags(), clone:int = 1,
                      aggregate:Literal["average", "worst_case"] = "average") -> SdpResult:
    """
    Maximizes the single-copy fidelity over the covariant family by a small semidefinite program.

    Args:
        e: Input ensemble.
        v: Variant.
        flags: Optional symmetry constraints.
        clone: Which clone is scored, 1 or 2.
        aggregate: "average" maximizes the weighted mean over the ensemble,
            "worst_case" the smallest member fidelity.

    Returns:
        SdpResult: optimum, optimal coefficients and solver diagnostics
    """
    try:
        v = Variant(v)
        if clone not in (1, 2):
            raise InvalidInputError(f"Clone index must be 1 or 2, got {clone!r}.")
        p0, d, y0, names = reduced_parameterization(flags, v)
        block0 = np.tensordot(p0, BLOCK_BASIS, axes=1)
        blocks = np.tensordot(d.T, BLOCK_BASIS, axes=1)
        # c00 > 0
        a_rows, b_rows = [d[0]], [p0[0]]
        if aggregate == "average":
            forms = [objective_coefficients(e, v, clone)]
            c = d.T @ forms[0].as_vector()
            x0 = y0
        elif aggregate == "worst_case":
            # epigraph variable z as the last coordinate: g_k.p(y) - z > 0
            forms = member_coefficients(e, v, clone)
            g = np.array([f.as_vector() for f in forms])
            a_rows = [np.append(d[0], 0.0)] + [np.append(gk @ d, -1.0) for gk in g]
            b_rows = [p0[0]] + [gk @ p0 for gk in g]
            blocks = np.concatenate([blocks, np.zeros((1, 3, 3), dtype=complex)])
            c = np.append(np.zeros(d.shape[1]), 1.0)
            x0 = np.append(y0, np.min(g @ (p0 + d @ y0)) - 1.0)
        else:
            raise InvalidInputError(f"Aggregate must be 'average' or 'worst_case', got {aggregate!r}.")

        offset = forms[0].as_vector() @ p0 if aggregate == "average" else 0.0
        x, gap, iterations, history = barrier_maximize(c, np.array(a_rows), np.array(b_rows), block0, blocks, x0)
        params = CovariantParams.from_vector(p0 + d @ x[:d.shape[1]])
        values = [f.evaluate(params) for f in forms]
        optimum = values[0] if aggregate == "average" else min(values)
        logger.info("-> Solved SDP for variant %d with %d free parameters (%s), optimum %.10f.",
                    v, len(names), ", ".join(names), optimum)
        return SdpResult(optimum=optimum, params=params, gap=gap, iterations=iterations,
                         constraint_flags=flags, variant=v, clone=clone, aggregate=aggregate,
                         history=[h + offset for h in history], degeneracies=_degeneracies(params))

    except CloningException as e:
        raise e

    except Exception as e:
        raise SolverError("Unknown error occured while solving the SDP. Error message:" + str(e))
