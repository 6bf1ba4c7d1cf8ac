"""Command-line front end.

Subcommands ``simulate``, ``covariance-sweep``, ``stability`` and ``verify``
write CSV or a short report. Whenever ``--out`` is given, a JSON run manifest
is written next to the output; passing that manifest back through
``--config`` reproduces the file byte for byte.

Exit codes: 0 success, 1 verification failed, 2 usage error, 3 divergence,
4 unstable step refused.
"""

from __future__ import annotations

import argparse
import contextlib
import datetime as _dt
import json
import math
import sys

import numpy as np

from . import __version__
from .covariance import (
    PoleError,
    SingularSystemError,
    build_update,
    closed_form_covariance,
    solve_stationary,
)
from .ensemble import EnsembleConfig, default_burn_in, run_ensemble
from .integrator import GENERATOR_VERSION, DivergenceError, NoiseMode, SimulationConfig, State, simulate
from .params import N2_WATER, PhysicalParams, noise_amplitude
from .potentials import Cubic, Harmonic, Morse
from .stability import analyze_stability

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_DIVERGED = 3
EXIT_UNSTABLE = 4

PRESETS = {
    "n2-water": {
        "mass": N2_WATER.params.mass,
        "eta": N2_WATER.params.friction,
        "kT": N2_WATER.params.thermal_energy,
        "ks": N2_WATER.spring_constant,
    },
}

# options that do not affect the numbers written
_NOT_RECORDED = {"command", "config", "out"}


class UsageError(Exception):
    pass


def fmt(value: float) -> str:
    """Shortest round-trip text for a float."""
    return repr(float(value))


# ---------------------------------------------------------------- parsing

def _common(p: argparse.ArgumentParser, dt: float | None):
    g = p.add_argument_group("model")
    g.add_argument("--preset", choices=sorted(PRESETS), default="n2-water")
    g.add_argument("--mass", type=float, help="pN s^2/nm")
    g.add_argument("--eta", type=float, help="friction, pN s/nm")
    g.add_argument("--kT", type=float, help="thermal energy, pN nm")
    g.add_argument("--ks", type=float, help="spring constant, pN/nm")
    g.add_argument("--bond-length", type=float, default=0.0, help="nm (default 0)")
    g.add_argument("--potential", choices=["harmonic", "morse", "cubic"], default="harmonic")
    g.add_argument("--morse-depth", type=float, help="Morse well depth D")
    g.add_argument("--morse-beta", type=float, help="Morse steepness, 1/nm")
    g.add_argument("--cubic-kc", type=float, help="cubic force constant, 1/nm")
    g.add_argument("--dt", type=float, default=dt, help="time step, s")
    p.add_argument("--out", help="write output here instead of stdout")
    p.add_argument("--config", help="key = value file or JSON run manifest")


def _run_options(p: argparse.ArgumentParser, steps: int | None):
    g = p.add_argument_group("run")
    g.add_argument("--steps", type=int, default=steps)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--noise", choices=[m.value for m in NoiseMode], default=NoiseMode.VARIANCE_DT.value)
    g.add_argument("--x0", type=float, help="initial position, nm (default: bond length)")
    g.add_argument("--v0", type=float, default=0.0, help="initial velocity, nm/s")


def _grid_options(p: argparse.ArgumentParser):
    g = p.add_argument_group("dt grid")
    g.add_argument("--dt-min", type=float, default=1e-17)
    g.add_argument("--dt-max", type=float, default=4e-15)
    g.add_argument("--points", type=int, default=200)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="diatomic-langevin", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="one trajectory as CSV")
    _common(p, dt=1e-15)
    _run_options(p, steps=100)

    p = sub.add_parser("covariance-sweep", help="stationary covariance over a dt grid")
    _common(p, dt=None)
    _grid_options(p)

    p = sub.add_parser("stability", help="stability report for one dt, or CSV over a grid")
    _common(p, dt=None)
    _grid_options(p)
    p.add_argument("--grid", action="store_true", help="emit CSV over the dt grid")

    p = sub.add_parser("verify", help="Monte Carlo ensemble against the analytic covariance")
    _common(p, dt=5e-16)
    _run_options(p, steps=None)
    p.add_argument("--ensemble", type=int, default=10_000, help="number of trajectories")
    p.add_argument("--burn-in", type=int, help="steps discarded (default 20 m/eta)")
    p.add_argument("--samples", type=int, default=100, help="sampled time points after burn-in")
    p.add_argument("--stride", type=int, default=10, help="steps between sampled time points")
    p.add_argument("--tolerance", type=float, default=0.05)
    return parser


def read_config(path: str) -> dict:
    """Flat ``key = value`` file, or the ``parameters`` of a JSON manifest."""
    with open(path) as fh:
        text = fh.read()
    with contextlib.suppress(json.JSONDecodeError):
        doc = json.loads(text)
        if isinstance(doc, dict):
            return dict(doc.get("parameters", doc))
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key] = value
    return out


def parse_args(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        try:
            cfg = read_config(args.config)
        except OSError as exc:
            parser.error(f"cannot read config: {exc}")
        except UsageError as exc:
            parser.error(str(exc))
        sub = parser._subparsers._group_actions[0].choices[args.command]
        actions = {a.dest: a for a in sub._actions}
        defaults = {}
        for key, value in cfg.items():
            dest = key.lstrip("-").replace("-", "_")
            if dest not in actions or dest in _NOT_RECORDED or dest == "help":
                parser.error(f"unknown config key {key!r} for {args.command}")
            if isinstance(actions[dest], argparse._StoreTrueAction) and isinstance(value, str):
                if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                    parser.error(f"config key {key!r} expects true or false")
                value = value.lower() in ("true", "1", "yes")
            defaults[dest] = value
        sub.set_defaults(**defaults)
        # explicit flags still win: argparse only falls back to defaults
        args = parser.parse_args(argv)
        for dest, action in actions.items():
            value = getattr(args, dest, None)
            if action.choices is not None and value is not None and value not in action.choices:
                parser.error(f"invalid value {value!r} for {dest.replace('_', '-')}")
    return parser, args


# ---------------------------------------------------------------- model

def model_from_args(args):
    base = PRESETS[args.preset]
    mass = args.mass if args.mass is not None else base["mass"]
    eta = args.eta if args.eta is not None else base["eta"]
    kT = args.kT if args.kT is not None else base["kT"]
    ks = args.ks if args.ks is not None else base["ks"]
    b = args.bond_length
    try:
        params = PhysicalParams(mass=mass, friction=eta, thermal_energy=kT, bond_length=b)
        if args.potential == "harmonic":
            pot = Harmonic(ks, b)
        elif args.potential == "cubic":
            if args.cubic_kc is None:
                raise UsageError("--potential cubic needs --cubic-kc")
            pot = Cubic(ks, args.cubic_kc, b)
        else:
            if args.morse_depth is None or args.morse_beta is None:
                raise UsageError("--potential morse needs --morse-depth and --morse-beta")
            pot = Morse(args.morse_depth, args.morse_beta, b)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return params, ks, pot


def _require_harmonic(args):
    if args.potential != "harmonic":
        raise UsageError(f"{args.command} is only defined for the harmonic potential")


def _positive(name, value):
    if value is None or not value > 0 or not math.isfinite(value):
        raise UsageError(f"--{name} must be a positive number")


def dt_grid(args) -> np.ndarray:
    _positive("dt-min", args.dt_min)
    _positive("dt-max", args.dt_max)
    if args.points < 2 or args.dt_max <= args.dt_min:
        raise UsageError("dt grid needs --points >= 2 and --dt-max > --dt-min")
    return np.linspace(args.dt_min, args.dt_max, args.points)


def manifest(args) -> dict:
    params, ks, pot = model_from_args(args)
    return {
        "command": args.command,
        "tool_version": __version__,
        "generator_version": GENERATOR_VERSION,
        "numpy_version": np.__version__,
        "noise_mode": getattr(args, "noise", None),
        "seed": getattr(args, "seed", None),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        "resolved": {
            "mass": params.mass,
            "friction": params.friction,
            "thermal_energy": params.thermal_energy,
            "bond_length": params.bond_length,
            "spring_constant": ks,
            "potential": repr(pot),
        },
        "parameters": {k.replace("_", "-"): v for k, v in sorted(vars(args).items()) if k not in _NOT_RECORDED},
    }


# ---------------------------------------------------------------- commands

def cmd_simulate(args, out) -> int:
    params, _, pot = model_from_args(args)
    _positive("dt", args.dt)
    if args.steps is None or args.steps < 0:
        raise UsageError("--steps must be nonnegative")
    x0 = params.bond_length if args.x0 is None else args.x0
    cfg = SimulationConfig(dt=args.dt, n_steps=args.steps, seed=args.seed, noise_mode=NoiseMode(args.noise))
    traj = simulate(State(x0, args.v0), params, pot, cfg)

    out.write("step,time_s,x_nm,v_nm_per_s\n")
    for k in range(len(traj)):
        out.write(f"{k},{fmt(traj.times[k])},{fmt(traj.x[k])},{fmt(traj.v[k])}\n")
    if traj.diverged:
        out.write(f"# DIVERGED at step {traj.diverged_at}\n")
        return EXIT_DIVERGED
    return EXIT_OK


def cmd_covariance_sweep(args, out) -> int:
    _require_harmonic(args)
    params, ks, _ = model_from_args(args)
    eps = noise_amplitude(params)
    out.write("dt_s,var_x,cov_xv,var_v,method,stable\n")
    poles = []
    for dt in dt_grid(args):
        dt = float(dt)
        stable = analyze_stability(params, ks, dt).is_stable
        for method in ("closed-form", "linear-solve"):
            try:
                if method == "closed-form":
                    t = closed_form_covariance(params, ks, dt)
                else:
                    t = solve_stationary(build_update(params, ks, dt), eps, dt)
                values = ",".join(fmt(v) for v in t.as_tuple())
            except (PoleError, SingularSystemError):
                values = ",,"
                poles.append((dt, method))
            out.write(f"{fmt(dt)},{values},{method},{str(stable).lower()}\n")
    for dt, method in poles:
        out.write(f"# POLE {method} at dt_s={fmt(dt)}\n")
    return EXIT_OK


def cmd_stability(args, out) -> int:
    _require_harmonic(args)
    params, ks, _ = model_from_args(args)
    if args.grid:
        out.write("dt_s,det_c,trace_c,spectral_radius,paper_condition,stable,jury_1_minus_det,jury_p_plus1,jury_p_minus1\n")
        for dt in dt_grid(args):
            r = analyze_stability(params, ks, float(dt))
            j1, j2, j3 = r.jury_margins
            out.write(
                f"{fmt(r.dt)},{fmt(r.det_c)},{fmt(r.trace_c)},{fmt(r.spectral_radius)},"
                f"{str(r.paper_condition_holds).lower()},{str(r.is_stable).lower()},{fmt(j1)},{fmt(j2)},{fmt(j3)}\n"
            )
        return EXIT_OK
    _positive("dt", args.dt)
    r = analyze_stability(params, ks, args.dt)
    j1, j2, j3 = r.jury_margins
    out.write(
        f"dt               {r.dt:.6g} s\n"
        f"dt_critical      {r.dt_critical:.6g} s  (eta / k_s)\n"
        f"k_s dt^2 < eta dt  {'holds' if r.paper_condition_holds else 'violated'}\n"
        f"det C            {r.det_c:.10g}\n"
        f"trace C          {r.trace_c:.10g}\n"
        f"eigenvalues      {'complex pair' if r.complex_eigenvalues else 'real'}\n"
        f"spectral radius  {r.spectral_radius:.10g}\n"
        f"jury margins     1-det={j1:.6g}  p(1)={j2:.6g}  p(-1)={j3:.6g}\n"
        f"{r.verdict}\n"
    )
    return EXIT_OK


def cmd_verify(args, out) -> int:
    _require_harmonic(args)
    params, ks, pot = model_from_args(args)
    _positive("dt", args.dt)
    if args.noise == NoiseMode.UNIT.value:
        raise UsageError("verify compares against variance-dt noise; --noise unit has no analytic counterpart")
    if args.samples < 1 or args.stride < 1 or args.ensemble < 2:
        raise UsageError("--samples and --stride must be >= 1 and --ensemble >= 2")

    rep = analyze_stability(params, ks, args.dt)
    if not rep.is_stable:
        out.write(
            f"REFUSED: dt={args.dt:.6g} s is unstable (spectral radius {rep.spectral_radius:.6g}, "
            f"dt_critical {rep.dt_critical:.6g} s); no stationary covariance exists\n"
        )
        return EXIT_UNSTABLE

    try:
        burn_in = args.burn_in if args.burn_in is not None else default_burn_in(params, args.dt)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    steps = args.steps if args.steps is not None else burn_in + (args.samples - 1) * args.stride
    x0 = params.bond_length if args.x0 is None else args.x0
    try:
        ec = EnsembleConfig(
            n_trajectories=args.ensemble,
            sim=SimulationConfig(dt=args.dt, n_steps=steps, noise_mode=NoiseMode(args.noise)),
            burn_in_steps=burn_in,
            sample_stride=args.stride,
            base_seed=args.seed,
        )
        est = run_ensemble(State(x0, args.v0), params, pot, ec)
    except DivergenceError as exc:
        out.write(f"# DIVERGED: {exc}\n")
        return EXIT_DIVERGED
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    ref = closed_form_covariance(params, ks, args.dt)
    errs = [abs(e - a) / abs(a) for e, a in zip(est.triple.as_tuple(), ref.as_tuple())]
    ses = (est.stderr_var_x, est.stderr_cov, est.stderr_var_v)
    ok = all(e <= args.tolerance for e in errs) and est.triple.cov_xv < 0

    out.write(
        f"ensemble {args.ensemble} trajectories, dt={args.dt:.6g} s, burn-in {burn_in} steps, "
        f"{len(est.sample_steps)} sampled steps, seeds {args.seed}..{args.seed + args.ensemble - 1}\n"
    )
    out.write(f"mean x  {est.mean_x:.6g} +/- {est.stderr_mean_x:.3g}   (stationary {params.bond_length:g})\n")
    out.write(f"mean v  {est.mean_v:.6g} +/- {est.stderr_mean_v:.3g}   (stationary 0)\n")
    out.write(f"{'quantity':8s} {'empirical':>14s} {'stderr':>10s} {'analytic':>14s} {'rel.err':>9s}\n")
    for name, e, se, a, r in zip(("var_x", "cov_xv", "var_v"), est.triple.as_tuple(), ses, ref.as_tuple(), errs):
        out.write(f"{name:8s} {e:14.6g} {se:10.3g} {a:14.6g} {r:9.3%}\n")
    if all(v == 0 for v in est.triple.as_tuple()):
        out.write("note: empirical fluctuations are identically zero; the simulation ran without noise\n")
    out.write(f"{'PASS' if ok else 'FAIL'} at tolerance {args.tolerance:g}\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "simulate": cmd_simulate,
    "covariance-sweep": cmd_covariance_sweep,
    "stability": cmd_stability,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    parser, args = parse_args(argv)
    try:
        if args.out:
            with open(args.out, "w", newline="") as fh:
                code = COMMANDS[args.command](args, fh)
            with open(args.out + ".manifest.json", "w") as fh:
                json.dump(manifest(args), fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            code = COMMANDS[args.command](args, sys.stdout)
    except UsageError as exc:
        parser.error(str(exc))
    return code


if __name__ == "__main__":
    sys.exit(main())
