from app_verify_function import VerifySettings, run_verification
from bb84.utils import report
from channels.utils import PureQubit, Variant, apply_channel, parse_variant, single_copy_fidelity
from optimizer.curve_util import curve_grid, curve_to_csv, fidelity_curve
from optimizer.sdp_util import SymmetryFlags, optimize_fidelity
from optimizer.utils import Ensemble, analytic_branch, analytic_fidelity
from relativity.utils import (OMEGA0, FourVector, LorentzTransform, boost, little_group_element, rotation,
                              stabilizer_residual, wigner_phase)
from utils.utils_basic import CloningException, InvalidInputError, VerificationError, get_logger, write_output
from utils.utils_linalg import partial_trace

from functools import wraps
from pydantic import ValidationError
import click
import numpy as np
import sys

logger = get_logger(__name__)

VARIANTS = click.Choice(["1", "2"])

def handle_errors(command):
    '''
        Maps library errors onto exit codes: 0 success, 1 verification or solver failure, 2 invalid input.
    '''
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)

        except CloningException as e:
            click.echo("Error: " + e.detail, err=True)
            sys.exit(e.exit_code)

        except ValidationError as e:
            click.echo("Error: invalid input. " + str(e), err=True)
            sys.exit(2)

        except Exception as e:
            click.echo("Error: unknown error occured. Error message:" + str(e), err=True)
            sys.exit(1)
    return wrapper

def parse_floats(text:str, count:int, name:str) -> list[float]:
    parts = [p.strip() for p in text.split(",")]
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise InvalidInputError(f"--{name} expects {count} comma separated numbers, got '{text}'.")
    if len(values) != count or not all(np.isfinite(values)):
        raise InvalidInputError(f"--{name} expects {count} comma separated finite numbers, got '{text}'.")
    return values

def format_matrix(m:np.ndarray) -> str:
    def entry(z):
        z = complex(z)
        if z.imag == 0:
            return f"{z.real:.9g}"
        return f"{z.real:.9g}{z.imag:+.9g}j"
    return "\n".join("  " + "  ".join(entry(z) for z in row) for row in np.asarray(m))

@click.group()
def cli():
    '''
        Relativistically covariant photon cloning: fidelity curves, Wigner phases, cloning demos,
        BB84 eavesdropper fidelities and the verification suite.
    '''

@cli.command("curve")
@click.option("--variant", type=VARIANTS, default="1", show_default=True)
@click.option("--xi-min", type=float, default=0.0, show_default=True, help="Lower end of the xi grid in radians.")
@click.option("--xi-max", type=float, default=np.pi / 2, help="Upper end of the xi grid in radians, default pi/2.")
@click.option("--steps", type=int, default=41, show_default=True)
@click.option("--mode", type=click.Choice(["analytic", "sdp", "both"]), default="analytic", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output CSV path, standard output if omitted.")
@handle_errors
def cmd_curve(variant, xi_min, xi_max, steps, mode, out):
    '''
        Optimal fidelity as a function of xi, written as CSV.
    '''
    grid = curve_grid(xi_min, xi_max, steps)
    table = fidelity_curve(parse_variant(variant), grid, mode)
    write_output(curve_to_csv(table), out)
    logger.info("-> Wrote %d curve rows.", len(table))

@cli.command("wigner")
@click.option("--p", "momentum", required=True, help="Photon momentum as 'omega,theta,phi' (radians).")
@click.option("--rotate", multiple=True, help="Rotation 'axis,angle' with axis x, y or z; repeatable, applied in order.")
@click.option("--boost", "velocity", default=None, help="Boost velocity 'vx,vy,vz', applied after the rotations.")
@click.option("--omega0", type=float, default=OMEGA0, show_default=True, help="Frequency of the standard momentum.")
@handle_errors
def cmd_wigner(momentum, rotate, velocity, omega0):
    '''
        Wigner phase and little-group element of a photon momentum under a Lorentz transformation.
    '''
    omega, theta, phi = parse_floats(momentum, 3, "p")
    p = FourVector.from_direction(omega, theta, phi)
    lorentz = LorentzTransform.identity()
    for spec in rotate:
        parts = spec.split(",")
        if len(parts) != 2:
            raise InvalidInputError(f"--rotate expects 'axis,angle', got '{spec}'.")
        lorentz = rotation(parts[0], parse_floats(parts[1], 1, "rotate")[0]) @ lorentz
    if velocity is not None:
        lorentz = boost(parse_floats(velocity, 3, "boost")) @ lorentz
    w = little_group_element(lorentz, p, omega0)
    phase = wigner_phase(lorentz, p, omega0)
    click.echo(f"theta_w = {phase.theta:.9g}")
    click.echo("W =")
    click.echo(format_matrix(w.m))
    click.echo(f"stabilizer_residual = {stabilizer_residual(w, omega0):.3e}")

@cli.command("clone")
@click.option("--xi", type=float, required=True, help="Polar angle of the input state in radians.")
@click.option("--phi", type=float, default=0.0, show_default=True, help="Phase of the input state in radians.")
@click.option("--variant", type=VARIANTS, default="1", show_default=True)
@click.option("--theta-w", type=float, default=0.0, show_default=True, help="Wigner phase rotating the input before cloning.")
@handle_errors
def cmd_clone(xi, phi, variant, theta_w):
    '''
        Solves for the optimal symmetric cloner at xi and applies it to the (rotated) input state.
    '''
    v = parse_variant(variant)
    if not 0.0 <= xi <= np.pi / 2:
        raise InvalidInputError(f"--xi must lie in [0, pi/2], got {xi}.")
    result = optimize_fidelity(Ensemble.singleton(xi, phi), v, SymmetryFlags(output_swap=True))
    choi = result.choi()
    # helicities +-1 turn the Wigner phase into the doubled logical phase
    state = PureQubit(xi=xi, phi=phi).rotated(2 * theta_w)
    output = apply_channel(choi, state.projector(), v)
    click.echo(f"variant = {int(v)}")
    click.echo(f"sdp_optimum = {result.optimum:.9f}")
    click.echo(f"analytic = {analytic_fidelity(xi, v):.9f}")
    if v == Variant.TWO:
        click.echo(f"branch = {analytic_branch(xi)}")
    for clone in (1, 2):
        click.echo(f"clone {clone} =")
        click.echo(format_matrix(partial_trace(output, [2, 2], keep={clone - 1})))
        click.echo(f"fidelity_clone{clone} = {single_copy_fidelity(choi, state, v, clone):.9f}")

@cli.command("bb84")
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Output JSON path, standard output if omitted.")
@handle_errors
def cmd_bb84(out):
    '''
        Eavesdropper fidelities for the BB84 state quadruples as JSON.
    '''
    write_output(report().model_dump_json(indent=2) + "\n", out)

@cli.command("verify")
@click.option("--lorentz-samples", type=click.IntRange(min=1), default=1000, show_default=True)
@click.option("--curve-steps", type=click.IntRange(min=2), default=41, show_default=True)
@click.option("--seed", type=int, default=VerifySettings().seed, show_default=True)
@handle_errors
def cmd_verify(lorentz_samples, curve_steps, seed):
    '''
        Runs the covariance, identity, Wigner-phase, optimizer and BB84 checks; exit 1 if any fails.
    '''
    table, notes = run_verification(VerifySettings(lorentz_samples=lorentz_samples, curve_steps=curve_steps, seed=seed))
    click.echo(table.to_string(index=False, formatters={"residual": "{:.3e}".format, "tolerance": "{:.0e}".format}))
    for note in notes:
        click.echo("note: " + note)
    failed = table.loc[~table["passed"], "check"].tolist()
    if failed:
        raise VerificationError(f"{len(failed)} check(s) failed: " + "; ".join(failed))
    click.echo("All checks passed.")

if __name__ == "__main__":
    cli()
