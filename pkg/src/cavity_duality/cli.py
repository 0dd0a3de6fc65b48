"""Command-line entry point: ``cavity-duality <command> [options]``.

Every command writes one CSV table (12 significant digits, header row) plus a
``.cfg`` sidecar echoing the resolved parameters, which can be fed back with
``--config`` to reproduce the run. ``--svg`` adds a static line chart.

Exit codes: 0 success, 2 invalid parameters, 3 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import duality, protocols
from .duality import SwitchSpec
from .evolution import basis_vector, population_series
from .fock import TwoCavityState, array_basis, sector_basis
from .hamiltonians import SystemParams, array_matrix, two_cavity_matrix
from .plotting import line_chart_svg

log = logging.getLogger("cavity_duality")

EXIT_OK, EXIT_PARAM, EXIT_IO = 0, 2, 3
OUT_DIR_ENV = "CAVITY_OUT_DIR"


class ParameterError(ValueError):
    pass


# -- argument types -------------------------------------------------------------


def _int_list(text: str) -> list[int]:
    return [int(v) for v in str(text).split(",") if v.strip()]


def _float_list(text: str) -> list[float]:
    return [float(v) for v in str(text).split(",") if v.strip()]


def _state(text: str) -> TwoCavityState:
    try:
        return TwoCavityState.parse(str(text))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"invalid state {text!r}: expected 'm,n'") from exc


def _state_list(text: str) -> list[TwoCavityState]:
    return [_state(s) for s in str(text).split(";") if s.strip()]


def _complex(text: str) -> complex:
    return complex(str(text).replace(" ", ""))


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    return str(text).strip().lower() in ("1", "true", "yes", "on")


# -- parser ---------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, window: float | None = None) -> None:
    p.add_argument("--config", help="key=value file; command-line flags override it")
    p.add_argument("--out", help="output CSV path (default: $CAVITY_OUT_DIR/<command>.csv)")
    p.add_argument("--svg", action="store_true", help="also write a static SVG line chart")
    p.add_argument("--omega1", type=float, default=1.0, help="first cavity frequency (unit of energy)")
    p.add_argument("--points", type=int, default=protocols.DEFAULT_POINTS, help="time-grid points")
    p.add_argument("--window", type=float, default=window, help="evolution window (units of 1/omega1)")


def _kerr(p: argparse.ArgumentParser, chi: float) -> None:
    p.add_argument("--chi", type=float, default=chi, help="Kerr strength of both cavities")
    p.add_argument("--chi1", type=float, default=None, help="Kerr strength of cavity 1 (overrides --chi)")
    p.add_argument("--chi2", type=float, default=None, help="Kerr strength of cavity 2 (overrides --chi)")


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="cavity-duality",
        description="Two coupled cavities with N-1 photons vs. an N-cavity array with one photon.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    subs = {}

    p = subs["swap"] = sub.add_parser("swap", help="resonant linear swap |T,0> -> |0,T>")
    _common(p)
    p.add_argument("--photons", type=_int_list, default=[5], help="photon number(s) T, comma separated")
    p.add_argument("--J", type=float, default=0.01 * math.pi)

    p = subs["chain"] = sub.add_parser("chain", help="homogeneous chain, photon from site 1 to site N")
    _common(p, window=200.0)
    p.add_argument("--N", type=_int_list, default=[3], help="site count(s), comma separated")
    p.add_argument("--J", type=float, default=math.sqrt(2) / 10)
    p.add_argument("--omega-tilde", dest="omega_tilde", type=float, default=1.0)

    p = subs["kerr-switch"] = sub.add_parser("kerr-switch", help="Kerr state switching |m,n> -> |p,q>")
    _common(p)
    _kerr(p, 0.1)
    p.add_argument("--initial", type=_state, default=TwoCavityState(5, 0))
    p.add_argument("--target", type=_state, default=TwoCavityState(1, 4))
    p.add_argument("--J", type=float, default=0.035)
    p.add_argument("--delta", type=float, default=None, help="detuning omega1-omega2 (default: switching value)")
    p.add_argument("--eta", type=float, default=0.0)

    p = subs["scan-delta"] = sub.add_parser("scan-delta", help="max target populations vs detuning")
    _common(p)
    _kerr(p, 0.2)
    p.add_argument("--initial", type=_state, default=TwoCavityState(5, 0))
    p.add_argument("--targets", type=_state_list, default=None, help="';'-separated states (default: all others)")
    p.add_argument("--J", type=float, default=0.05)
    p.add_argument("--delta-min", dest="delta_min", type=float, default=-2.0)
    p.add_argument("--delta-max", dest="delta_max", type=float, default=0.4)
    p.add_argument("--delta-step", dest="delta_step", type=float, default=0.02)

    p = subs["noon"] = sub.add_parser("noon", help="generalized NOON state from |T,0>")
    _common(p)
    p.add_argument("--photons", type=int, default=5)
    p.add_argument("--chi", type=float, default=0.2)
    p.add_argument("--J", type=float, default=0.05)
    p.add_argument("--eta", type=float, default=0.0)

    p = subs["qubit-transfer"] = sub.add_parser("qubit-transfer", help="move alpha|0>+beta|1> between array sites")
    _common(p)
    p.add_argument("--N", type=int, default=4)
    p.add_argument("--source", type=int, default=1)
    p.add_argument("--target", type=int, default=3)
    p.add_argument("--chi", type=float, default=0.2)
    p.add_argument("--J", type=float, default=0.05)
    p.add_argument("--alpha", type=_complex, default=complex(1 / math.sqrt(2)))
    p.add_argument("--beta", type=_complex, default=complex(1 / math.sqrt(2)))
    p.add_argument("--eta", type=float, default=None, help="bond phase (default: phase-compensating value)")
    p.add_argument("--t", type=float, default=None, help="transfer time (default: switching time)")

    p = subs["avg-energy"] = sub.add_parser("avg-energy", help="<m,T-m|H|m,T-m> vs m")
    _common(p)
    p.add_argument("--photons", type=int, default=28)
    p.add_argument("--delta", type=_float_list, default=[0.0], help="detuning(s); use --delta=-2,0 for negatives")
    p.add_argument("--chi", type=float, default=0.1)

    p = subs["duality-check"] = sub.add_parser("duality-check", help="max entry difference of dual Hamiltonians")
    _common(p)
    p.add_argument("--N", type=int, default=12)
    p.add_argument("--J", type=float, default=0.05)
    p.add_argument("--delta", type=float, default=0.0)
    p.add_argument("--chi", type=float, default=0.1)

    p = subs["ss-solve"] = sub.add_parser("ss-solve", help="switching detuning for |m,n> -> |p,q>")
    _common(p)
    _kerr(p, 0.1)
    p.add_argument("--initial", type=_state, default=TwoCavityState(5, 0))
    p.add_argument("--target", type=_state, default=TwoCavityState(1, 4))
    p.add_argument("--J", type=float, default=None, help="if given, also report two-level switching data")

    return parser, subs


def read_config(path: str) -> dict[str, str]:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParameterError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
            key, value = (s.strip() for s in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def parse_args(argv=None) -> argparse.Namespace:
    parser, subs = build_parser()
    args = parser.parse_args(argv)
    if args.config:
        values = read_config(args.config)
        sub = subs[args.command]
        known = {a.dest for a in sub._actions}
        unknown = sorted(set(values) - known)
        if unknown:
            raise ParameterError(f"unknown config keys for {args.command}: {', '.join(unknown)}")
        if "svg" in values:
            values["svg"] = _bool(values["svg"])
        sub.set_defaults(**values)
        args = parser.parse_args(argv)
    return args


# -- output ---------------------------------------------------------------------


def _fmt(v) -> str:
    if isinstance(v, str):
        return v
    return f"{float(v):.12g}"


def csv_text(header: list[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def _echo_value(v) -> str:
    if isinstance(v, TwoCavityState):
        return f"{v.m},{v.n}"
    if isinstance(v, (list, tuple)):
        return (";" if v and isinstance(v[0], TwoCavityState) else ",").join(_echo_value(x) for x in v)
    if isinstance(v, complex):
        return repr(v).strip("()")
    return repr(v) if isinstance(v, float) else str(v)


def config_echo(args: argparse.Namespace) -> str:
    lines = [f"# cavity-duality {args.command}"]
    for key, value in sorted(vars(args).items()):
        if key in ("command", "config", "out", "verbose") or value is None:
            continue
        lines.append(f"{key}={_echo_value(value)}")
    return "\n".join(lines) + "\n"


def output_path(args: argparse.Namespace) -> Path:
    if args.out:
        return Path(args.out)
    return Path(os.environ.get(OUT_DIR_ENV, ".")) / f"{args.command}.csv"


# -- commands -------------------------------------------------------------------
# each returns (header, rows, summary lines, chart) ; chart = (x, {name: y}, title, xlabel, ylabel) or None


def _chis(args) -> tuple[float, float]:
    chi1 = args.chi if args.chi1 is None else args.chi1
    chi2 = args.chi if args.chi2 is None else args.chi2
    return chi1, chi2


def cmd_swap(args):
    reports = [protocols.linear_swap_experiment(T, args.J, args.window, args.points, args.omega1) for T in args.photons]
    if len(reports) == 1:
        res = reports[0].result
        header = ["t", *res.labels]
        cols = {lab: res.populations[:, k] for k, lab in enumerate(res.labels)}
    else:
        # one target curve per photon number; the default window does not depend on T
        res = reports[0].result
        cols = {r.result.labels[r.target_index]: r.target_population for r in reports}
        header = ["t", *cols]
    rows = np.column_stack([res.times, *cols.values()])
    summary = [f"T={r.scenario['T']}: max P(target)={r.max_target:.12g} at t={r.t_max:.12g}" for r in reports]
    return header, rows, summary, (res.times, cols, "Swap |T,0> -> |0,T>", "t", "population")


def cmd_chain(args):
    reports = [protocols.homogeneous_chain_experiment(N, args.J, args.omega_tilde, args.window, args.points) for N in args.N]
    res = reports[0].result
    if len(reports) == 1:
        cols = {lab: res.populations[:, k] for k, lab in enumerate(res.labels)}
    else:
        cols = {r.result.labels[r.target_index]: r.target_population for r in reports}
    rows = np.column_stack([res.times, *cols.values()])
    summary = [
        f"N={r.scenario['N']}: max <n_N>={r.max_target:.12g} at t={r.t_max:.12g}, "
        f"closed-form error={r.extras['closed_form_error']:.3e}"
        for r in reports
    ]
    return ["t", *cols], rows, summary, (res.times, cols, "Homogeneous chain, end-site occupation", "t", "<n>")


def cmd_kerr_switch(args):
    chi1, chi2 = _chis(args)
    spec = SwitchSpec(args.initial, args.target, chi1, chi2)
    r = protocols.kerr_switch_experiment(spec, args.J, args.omega1, args.window, args.points, args.delta, args.eta)
    res = r.result
    cols = {lab: res.populations[:, k] for k, lab in enumerate(res.labels)}
    tl = r.extras["two_level"]
    if tl is not None:
        cols[f"twolevel_{spec.initial.label}"] = r.extras["two_level_initial"]
        cols[f"twolevel_{spec.target.label}"] = r.extras["two_level_target"]
    rows = np.column_stack([res.times, *cols.values()])
    summary = [
        f"delta={r.scenario['delta']:.12g}",
        f"max P({spec.target.label})={r.max_target:.12g} at t={r.t_max:.12g}",
        f"leakage={r.leakage:.6g}",
    ]
    if tl is not None:
        summary += [
            f"lambda_s={tl.lambda_s:.12g} lambda_n={tl.lambda_n:.12g} t_switch={tl.t_switch:.12g}",
            f"two-level validity={tl.validity:.4g} max deviation={r.extras['two_level_deviation']:.4g}",
        ]
    chart = {spec.initial.label: cols[spec.initial.label], spec.target.label: cols[spec.target.label]}
    if tl is not None:
        chart.update({k: v for k, v in cols.items() if k.startswith("twolevel_")})
    return ["t", *cols], rows, summary, (res.times, chart, "Kerr state switching", "t", "population")


def cmd_scan_delta(args):
    chi1, chi2 = _chis(args)
    if chi1 != chi2:
        raise ParameterError("scan-delta requires equal Kerr strengths (chi1 == chi2)")
    if args.delta_step <= 0 or args.delta_max < args.delta_min:
        raise ParameterError("need delta_step > 0 and delta_max >= delta_min")
    initial = args.initial
    targets = args.targets or [s for s in sector_basis(initial.total).states if s != initial]
    count = int(round((args.delta_max - args.delta_min) / args.delta_step)) + 1
    deltas = np.round(args.delta_min + args.delta_step * np.arange(count), 12)
    points = protocols.delta_scan(initial, targets, deltas, chi1, args.J, args.omega1, args.window, args.points)
    labels = [t.label for t in targets]
    rows = [[p.delta, *(p.maxima[lab] for lab in labels)] for p in points]
    peaks = protocols.scan_peaks(points)
    summary = []
    for t in targets:
        d, v = peaks[t.label]
        predicted = duality.ss_detuning(SwitchSpec(initial, t, chi1, chi2)) if t.m != initial.m else float("nan")
        summary.append(f"{t.label}: peak {v:.6g} at Delta={d:.6g} (switching condition {predicted:.6g})")
    cols = {lab: np.array([r[k + 1] for r in rows]) for k, lab in enumerate(labels)}
    return ["Delta", *labels], rows, summary, (deltas, cols, f"Max population from {initial.label}", "Delta", "max P")


def cmd_noon(args):
    r = protocols.noon_generation(args.photons, args.chi, args.J, args.eta, args.omega1)
    T = args.photons
    params = SystemParams(args.omega1, args.omega1, args.J, args.chi, args.chi, args.eta)
    res = population_series(two_cavity_matrix(params, T), basis_vector(T + 1, 0),
                            np.linspace(0.0, r.t, args.points), sector_basis(T).labels)
    cols = {lab: res.populations[:, k] for k, lab in enumerate(res.labels)}
    rows = np.column_stack([res.times, *cols.values()])
    summary = [
        f"t={r.t:.12g} phi={r.phi:.12g}",
        f"fidelity={r.fidelity:.12g} optimal-phase fidelity={r.optimal_fidelity:.12g}",
        f"two-level validity={r.two_level.validity:.4g}",
    ]
    return ["t", *cols], rows, summary, (res.times, cols, "NOON generation", "t", "population")


def cmd_qubit_transfer(args):
    params = protocols.ss_array_params(args.N, args.source, args.target, args.chi, args.J, args.omega1)
    r = protocols.qubit_transfer(args.alpha, args.beta, args.source, args.target, params, args.eta, args.t)
    basis = array_basis(args.N, include_vacuum=True)
    H = array_matrix(params.with_eta(r.eta), include_vacuum=True)
    res = population_series(H, basis_vector(basis.dim, args.source), np.linspace(0.0, r.t, args.points), basis.labels)
    cols = {lab: res.populations[:, k] for k, lab in enumerate(res.labels) if lab != "vac"}
    rows = np.column_stack([res.times, *cols.values()])
    summary = [
        f"t={r.t:.12g} eta={r.eta:.12g}",
        f"photon transfer probability={r.target_population:.12g}",
        f"fidelity={r.fidelity:.12g}",
    ]
    return ["t", *cols], rows, summary, (res.times, cols, "Single-photon transfer in the array", "t", "population")


def cmd_avg_energy(args):
    curves = {f"E_Delta{d:g}": protocols.avg_energy_curve(args.photons, d, args.chi, args.omega1)[:, 1] for d in args.delta}
    m = np.arange(args.photons + 1)
    rows = np.column_stack([m, *curves.values()])
    summary = []
    for d in args.delta:
        partners = protocols.energy_partners(args.photons, d, args.chi, args.omega1)
        lonely = [k for k, v in partners.items() if not v]
        summary.append(f"Delta={d:g}: {len(lonely)} states without partner: {lonely}")
    return ["m", *curves], rows, summary, (m, curves, "Average energy", "m", "<H>")


def cmd_duality_check(args):
    rows, summary = [], []
    omega2 = args.omega1 - args.delta
    worst = (0.0, 0.0)
    for N in range(2, args.N + 1):
        lin_two = two_cavity_matrix(SystemParams(args.omega1, omega2, args.J), N - 1)
        lin_arr = array_matrix(duality.duality_array_params(N, args.omega1, omega2, args.J))
        kerr_two = two_cavity_matrix(SystemParams(args.omega1, omega2, args.J, args.chi, args.chi), N - 1)
        sums = duality.nonlinear_duality_diagonals(N, args.omega1, omega2, args.chi)
        kerr_arr = array_matrix(duality.kerr_array_params(N, sums, args.chi, args.J))
        lin, kerr = float(np.max(np.abs(lin_two - lin_arr))), float(np.max(np.abs(kerr_two - kerr_arr)))
        worst = (max(worst[0], lin), max(worst[1], kerr))
        rows.append([N, lin, kerr])
    summary.append(f"max discrepancy N<= {args.N}: linear={worst[0]:.3e} kerr={worst[1]:.3e}")
    arr = np.array(rows, dtype=float)
    chart = (arr[:, 0], {"linear": arr[:, 1], "kerr": arr[:, 2]}, "Duality discrepancy", "N", "max |dH|")
    return ["N", "linear_max_diff", "kerr_max_diff"], rows, summary, chart


def cmd_ss_solve(args):
    chi1, chi2 = _chis(args)
    spec = SwitchSpec(args.initial, args.target, chi1, chi2)
    delta = duality.ss_detuning(spec)
    omega2 = args.omega1 - delta
    residual = duality.verify_average_energy_equality(spec, args.omega1, omega2)
    header = ["Delta", "omega2", "residual"]
    row = [delta, omega2, residual]
    summary = [f"Delta={delta:.12g} omega2={omega2:.12g} energy residual={residual:.3e}"]
    if args.J is not None:
        basis = sector_basis(spec.initial.total)
        H = two_cavity_matrix(SystemParams(args.omega1, omega2, args.J, chi1, chi2), spec.initial.total)
        tl = duality.two_level_parameters(H, basis.index_of(spec.initial), basis.index_of(spec.target))
        header += ["lambda_s", "lambda_n", "theta", "t_switch", "validity"]
        row += [tl.lambda_s, tl.lambda_n, tl.theta, tl.t_switch, tl.validity]
        summary.append(f"t_switch={tl.t_switch:.12g} theta={tl.theta:.12g} validity={tl.validity:.4g}")
    return header, [row], summary, None


COMMANDS = {
    "swap": cmd_swap,
    "chain": cmd_chain,
    "kerr-switch": cmd_kerr_switch,
    "scan-delta": cmd_scan_delta,
    "noon": cmd_noon,
    "qubit-transfer": cmd_qubit_transfer,
    "avg-energy": cmd_avg_energy,
    "duality-check": cmd_duality_check,
    "ss-solve": cmd_ss_solve,
}


def run(args: argparse.Namespace) -> int:
    try:
        header, rows, summary, chart = COMMANDS[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM

    path = output_path(args)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(csv_text(header, rows), encoding="utf-8")
        path.with_suffix(".cfg").write_text(config_echo(args), encoding="utf-8")
        if args.svg and chart is not None:
            x, series, title, xlabel, ylabel = chart
            path.with_suffix(".svg").write_text(line_chart_svg(x, series, title, xlabel, ylabel), encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO

    for line in summary:
        print(line)
    print(f"wrote {path}")
    return EXIT_OK


def main(argv=None) -> int:
    try:
        args = parse_args(argv)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
