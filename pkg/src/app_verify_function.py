from bb84.utils import report
from channels.identity_util import (identity_check_transposition, phase_flip_residual, transposition_lemma_residual,
                                    universal_cloner_choi, verify_covariance)
from channels.utils import (CovariantParams, PureQubit, Variant, build_covariant_choi, random_covariant_params,
                            single_copy_fidelity, to_variant1)
from optimizer.curve_util import fidelity_curve
from optimizer.sdp_util import optimize_fidelity
from optimizer.utils import XI_MIN, Ensemble, analytic_f1, analytic_f2, find_minimum
from relativity.utils import (FourVector, angle_distance, boost_z, little_group_element, random_light_like,
                              random_lorentz, rotation, stabilizer_residual, wigner_phase)
from relativity.wavepacket_util import (PacketSample, WavePacket, apply_wigner_phase, polarization_density,
                                        transform_wavepacket)
from utils.utils_basic import CloningException, get_logger

from pydantic import BaseModel, ConfigDict
import numpy as np
import pandas as pd

logger = get_logger(__name__)

SEED = 20240601
COVARIANCE_THETAS = np.linspace(0.0, 2 * np.pi, 13)

class VerifySettings(BaseModel):
    '''
        Sample sizes of the verification suite.
    '''
    model_config = ConfigDict(frozen=True)

    lorentz_samples: int = 1000
    identity_samples: int = 100
    channel_samples: int = 50
    curve_steps: int = 41
    seed: int = SEED

def _row(check:str, residual:float, tolerance:float) -> dict:
    return {"check": check, "residual": float(residual), "tolerance": tolerance, "passed": bool(residual <= tolerance)}

def _identity_rows(settings:VerifySettings, rng:np.random.Generator) -> list[dict]:
    thetas = rng.uniform(0.0, 2 * np.pi, size=settings.identity_samples)
    reports = [identity_check_transposition(t, trials=1, seed=settings.seed + i) for i, t in enumerate(thetas)]
    diagonal = [np.diag(np.exp(1j * rng.uniform(0.0, 2 * np.pi, size=2))) for _ in range(settings.identity_samples)]
    return [
        _row("phase flip P(t) X = X P(-t) as conjugations", max(phase_flip_residual(t) for t in thetas), 1e-13),
        _row("transposition identity Ad(P) G Ad(X) = G Ad(XP)", max(r.identity for r in reports), 1e-13),
        _row("commutator [Ad(P), G Ad(X)] = 0", max(r.commutator for r in reports), 1e-13),
        _row("transposition identity on random states", max(r.states for r in reports), 1e-13),
        _row("diagonal unitary lemma G Ad(CX) = Ad(XC) G", max(transposition_lemma_residual(c) for c in diagonal), 1e-13),
    ]

def _channel_rows(settings:VerifySettings, rng:np.random.Generator) -> list[dict]:
    members = [random_covariant_params(rng) for _ in range(settings.channel_samples)]
    real_members = [CovariantParams(**{**p.model_dump(), "c12b": 0.0}) for p in members]
    phase_v2 = max(verify_covariance(build_covariant_choi(p), Variant.TWO, COVARIANCE_THETAS).max_residual
                   for p in members)
    phase_v1 = max(verify_covariance(to_variant1(build_covariant_choi(p)), Variant.ONE, COVARIANCE_THETAS).max_residual
                   for p in real_members)
    universal = universal_cloner_choi()
    universal_v1 = verify_covariance(universal, Variant.ONE, COVARIANCE_THETAS).max_residual
    universal_v2 = verify_covariance(to_variant1(universal), Variant.TWO, COVARIANCE_THETAS).max_residual
    states = [PureQubit(xi=np.arccos(rng.uniform(-1, 1)), phi=rng.uniform(0, 2 * np.pi))
              for _ in range(settings.channel_samples)]
    universal_fidelity = max(abs(single_copy_fidelity(universal, q, Variant.ONE) - 5 / 6) for q in states)
    return [
        _row("variant 2 family covariance (phase, conjugate flip)", phase_v2, 1e-12),
        _row("variant 1 family covariance (phase, bit flip)", phase_v1, 1e-12),
        _row("universal cloner covariance, variant 1", universal_v1, 1e-12),
        _row("universal cloner covariance, variant 2 form", universal_v2, 1e-12),
        _row("universal cloner fidelity 5/6", universal_fidelity, 1e-10),
    ]

def _wigner_rows(settings:VerifySettings, rng:np.random.Generator) -> list[dict]:
    stabilizer, cocycle, scaling = 0.0, 0.0, 0.0
    for _ in range(settings.lorentz_samples):
        first, second, p = random_lorentz(rng), random_lorentz(rng), random_light_like(rng)
        stabilizer = max(stabilizer, stabilizer_residual(little_group_element(first, p)))
        combined = wigner_phase(second @ first, p).theta
        chained = wigner_phase(second, first.apply(p)).theta + wigner_phase(first, p).theta
        cocycle = max(cocycle, angle_distance(combined, chained))
        scaled = FourVector.from_array(2.5 * p.as_array())
        scaling = max(scaling, angle_distance(wigner_phase(first, p).theta, wigner_phase(first, scaled).theta))
    k = FourVector.standard()
    rotation_case = angle_distance(wigner_phase(rotation("z", 0.7), k).theta, -0.7)
    boost_case = angle_distance(wigner_phase(boost_z(0.9), k).theta, 0.0)

    packet = WavePacket(direction=(0.3, -0.4, 0.866),
                        samples=[PacketSample(omega=1.0, weight=0.5, f_plus=0.6, f_minus=0.8j),
                                 PacketSample(omega=2.0, weight=0.5, f_plus=0.8, f_minus=-0.6)])
    lorentz = random_lorentz(rng)
    theta = wigner_phase(lorentz, packet.momentum(packet.samples[0]))
    reduced = polarization_density(transform_wavepacket(lorentz, packet)).rho
    expected = apply_wigner_phase(polarization_density(packet), theta).rho
    return [
        _row("little group stabilizes k", stabilizer, 1e-8),
        _row("Wigner phase cocycle", cocycle, 1e-9),
        _row("Wigner phase independent of frequency", scaling, 1e-9),
        _row("Wigner phase of R_z(0.7) is -0.7", rotation_case, 1e-12),
        _row("Wigner phase of z boost is 0", boost_case, 1e-12),
        _row("polarization matrix commutes with packet transformation", float(np.max(np.abs(reduced - expected))), 1e-10),
    ]

def _optimizer_rows(settings:VerifySettings) -> tuple[list[dict], list[str]]:
    grid = np.linspace(0.0, np.pi / 2, settings.curve_steps)
    curves = {v: fidelity_curve(v, grid, mode="both") for v in Variant}
    dominance = float(np.max(curves[Variant.TWO]["f_analytic"] - curves[Variant.ONE]["f_analytic"]))
    xi1, f1 = find_minimum(Variant.ONE)
    xi2, f2 = find_minimum(Variant.TWO)
    spread = [optimize_fidelity(Ensemble.singleton(XI_MIN, phi), Variant.TWO).optimum for phi in (0.0, 0.7, 1.0, 2.5, np.pi)]
    rows = [
        _row("analytic F1(xi_min) = 5/6", abs(analytic_f1(XI_MIN) - 5 / 6), 1e-12),
        _row("analytic F2(xi_min) = 2/3", abs(analytic_f2(XI_MIN) - 2 / 3), 1e-12),
        _row("analytic F1(pi/2) = 1/2 + sqrt(1/8)", abs(analytic_f1(np.pi / 2) - 0.5 - np.sqrt(1 / 8)), 1e-12),
        _row("analytic F2(pi/4) = 3/4", abs(analytic_f2(np.pi / 4) - 0.75), 1e-12),
        _row("SDP vs closed form, variant 1", curves[Variant.ONE]["discrepancy"].max(), 1e-6),
        _row("SDP vs closed form, variant 2", curves[Variant.TWO]["discrepancy"].max(), 1e-6),
        _row("curve dominance F1 >= F2", max(dominance, 0.0), 1e-8),
        _row("minimum position, variant 1", abs(xi1 - XI_MIN), 1e-6),
        _row("minimum position, variant 2", abs(xi2 - XI_MIN), 1e-6),
        _row("minimum value 5/6, variant 1", abs(f1 - 5 / 6), 1e-7),
        _row("minimum value 2/3, variant 2", abs(f2 - 2 / 3), 1e-7),
        _row("variant 2 optimum independent of input phase", max(spread) - min(spread), 1e-7),
    ]

    notes, covariance = [], 0.0
    for xi in (np.pi / 8, XI_MIN, 1.3):
        for v in Variant:
            result = optimize_fidelity(Ensemble.singleton(xi), v)
            choi = result.choi()
            covariance = max(covariance, verify_covariance(choi, v, COVARIANCE_THETAS).max_residual)
            q = PureQubit(xi=xi)
            clones = (single_copy_fidelity(choi, q, v, 1), single_copy_fidelity(choi, q, v, 2))
            notes.append(f"variant {int(v)}, xi = {xi:.6f}: unconstrained optimum has "
                         f"c22 - c33 = {result.params.c22 - result.params.c33:+.3e}, "
                         f"clone fidelities {clones[0]:.9f} / {clones[1]:.9f}")
    rows.append(_row("optimal maps are covariant", covariance, 1e-9))
    return rows, notes

def _bb84_rows() -> list[dict]:
    result = report()
    return [_row("BB84 ordering F2(meridian) < F(mub) < F1(meridian)", 0.0 if result.ordering_check else 1.0, 0.0)]

def run_verification(settings:VerifySettings = VerifySettings()) -> tuple[pd.DataFrame, list[str]]:
    """
    Runs the covariance, identity, Wigner-phase, optimizer and BB84 checks.

    Args:
        settings: Sample sizes and seed.

    Returns:
        tuple: residual table with columns check, residual, tolerance, passed; and informational notes
    """
    logger.info("Verification started...")
    try:
        rng = np.random.default_rng(settings.seed)
        rows = _identity_rows(settings, rng)
        logger.info("-> Checked superoperator identities.")
        rows += _channel_rows(settings, rng)
        logger.info("-> Checked channel covariance.")
        rows += _wigner_rows(settings, rng)
        logger.info("-> Checked Wigner phases.")
        optimizer_rows, notes = _optimizer_rows(settings)
        rows += optimizer_rows
        logger.info("-> Checked optimizer against closed forms.")
        rows += _bb84_rows()
        logger.info("-> Done.")
        return pd.DataFrame(rows, columns=["check", "residual", "tolerance", "passed"]), notes

    except CloningException as e:
        raise e

    except Exception as e:
        raise CloningException(exit_code=1, detail="Unknown error occured while verifying. Error message:" + str(e))
