"""Command-line front end: ``python -m dmtele <command> ...``.

Exit codes: 0 success, 1 usage error, 2 numerical failure (including a
failed ``verify`` check).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional, Sequence


from . import sweep as sw
from .concurrence import wootters_concurrence
from .linalg import NonConvergenceError, hermitian_eig
from .model import (ModelParams, channel_concurrence, critical_temperature,
                    hamiltonian, spectrum_closed_form, thermal_state)
from .teleport import (PureInput, average_fidelity_closed,
                       average_fidelity_quadrature, channel_probabilities,
                       classical_threshold_temperature, fidelity,
                       output_concurrence_paper, teleport_output)


class UsageError(Exception):
    pass


def _records_to_text(records: list[dict], fmt: str) -> str:
    if fmt == "json":
        clean = [{k: (float(sw.format_value(v)) if isinstance(v, float) else v)
                  for k, v in r.items()} for r in records]
        return json.dumps(clean, indent=1) + "\n"
    keys = list(records[0])
    lines = [",".join(keys)]
    for r in records:
        lines.append(",".join(sw.format_value(r[k]) if isinstance(r[k], float) or r[k] is None
                              else str(r[k]) for k in keys))
    return "\n".join(lines) + "\n"


def _params(args) -> ModelParams:
    return ModelParams(args.J, args.D, args.T)


def _input(args) -> PureInput:
    if args.c_in is not None:
        return PureInput.from_concurrence(args.c_in, args.phi)
    return PureInput(args.theta, args.phi)


def cmd_spectrum(args) -> str:
    params = _params(args)
    numeric = hermitian_eig(hamiltonian(params)).eigenvalues
    closed = sorted(spectrum_closed_form(params), key=lambda e: e.energy)
    records = [{"label": e.label, "energy_closed": float(e.energy), "energy_numeric": float(w)}
               for e, w in zip(closed, numeric)]
    return _records_to_text(records, args.format)


def cmd_thermal(args) -> str:
    state = thermal_state(_params(args))
    basis = ("11", "10", "01", "00")
    records = [{"row": basis[i], "col": basis[j], "re": float(state.rho[i, j].real),
                "im": float(state.rho[i, j].imag), "Z": state.Z, "log_Z": state.log_Z}
               for i in range(4) for j in range(4)]
    return _records_to_text(records, args.format)


def cmd_concurrence(args) -> str:
    params = _params(args)
    record = {"J": params.J, "D": params.D, "T": params.T,
              "channel_concurrence": channel_concurrence(params),
              "wootters": wootters_concurrence(thermal_state(params).rho)}
    return _records_to_text([record], args.format)


def cmd_critical_temp(args) -> str:
    record = {"J": float(args.J), "D": float(args.D),
              "Tc": critical_temperature(args.J, args.D),
              "T_threshold": classical_threshold_temperature(args.J, args.D)}
    return _records_to_text([record], args.format)


def cmd_teleport(args) -> str:
    params = _params(args)
    inp = _input(args)
    rho_out = teleport_output(inp, channel_probabilities(thermal_state(params)))
    record = {"J": params.J, "D": params.D, "T": params.T, "theta": inp.theta, "phi": inp.phi,
              "C_in": inp.concurrence,
              "C_out_oracle": wootters_concurrence(rho_out),
              "C_out_paper": output_concurrence_paper(params, inp.concurrence),
              "fidelity": fidelity(inp, rho_out)}
    return _records_to_text([record], args.format)


def cmd_fidelity(args) -> str:
    params = _params(args)
    n = args.quadrature_n
    record = {"J": params.J, "D": params.D, "T": params.T,
              "F_avg_closed": average_fidelity_closed(params),
              "F_avg_quadrature": average_fidelity_quadrature(params, n, n)}
    if args.theta_given or args.c_in is not None:
        inp = _input(args)
        rho_out = teleport_output(inp, channel_probabilities(thermal_state(params)))
        record.update(theta=inp.theta, phi=inp.phi, fidelity=fidelity(inp, rho_out))
    return _records_to_text([record], args.format)


def cmd_sweep(args) -> str:
    if args.axis1 is None:
        raise UsageError("sweep requires --axis1")
    if args.quantity is None:
        raise UsageError("sweep requires --quantity")
    axis1 = sw.Axis.parse(args.axis1)
    axis2 = sw.Axis.parse(args.axis2) if args.axis2 else None
    fixed = {"J": args.J, "D": args.D, "T": args.T, "theta": args.theta, "phi": args.phi}
    if args.c_in is not None:
        fixed["C_in"] = args.c_in
    spec = sw.SweepSpec(args.quantity, axis1, axis2, fixed, args.quadrature_n)
    rows = sw.run_sweep(spec, workers=args.workers)
    names = [a.name for a in spec.axes]
    if args.format == "json":
        return sw.rows_to_json(rows, names, spec.quantity)
    return sw.rows_to_csv(rows, names, spec.quantity)


def cmd_verify(args) -> tuple[str, bool]:
    report = sw.verify(args.grid_density, args.quadrature_n)
    if args.format == "json":
        return json.dumps(report.to_dict(), indent=1) + "\n", report.passed
    return report.to_text(), report.passed


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--J", type=float, default=1.0, help="exchange coupling (default 1)")
    common.add_argument("--D", type=float, default=0.0, help="DM strength along z (default 0)")
    common.add_argument("--T", type=float, default=0.5, help="temperature, k_B = 1 (default 0.5)")
    common.add_argument("--theta", type=float, default=None,
                        help="input amplitude angle in [0, pi] (default pi/2)")
    common.add_argument("--phi", type=float, default=0.0, help="input phase in [0, 2 pi]")
    common.add_argument("--c-in", type=float, default=None,
                        help="input concurrence; overrides --theta")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output path (default stdout)")
    common.add_argument("--quadrature-n", type=int, default=32,
                        help="nodes per angle for the fidelity quadrature")

    parser = argparse.ArgumentParser(
        prog="dmtele",
        description="Thermal entanglement and teleportation in a two-qubit "
                    "Heisenberg chain with a Dzyaloshinskii-Moriya term.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("spectrum", parents=[common], help="closed-form and numeric spectrum")
    sub.add_parser("thermal", parents=[common], help="thermal density matrix")
    sub.add_parser("concurrence", parents=[common], help="thermal channel concurrence")
    sub.add_parser("critical-temp", parents=[common],
                   help="entanglement critical temperature and 2/3-fidelity threshold")
    sub.add_parser("teleport", parents=[common], help="teleported state summary")
    sub.add_parser("fidelity", parents=[common], help="average fidelity")
    p_sweep = sub.add_parser("sweep", parents=[common], help="parameter sweep")
    p_sweep.add_argument("--axis1", help="name:start:stop:count")
    p_sweep.add_argument("--axis2", help="name:start:stop:count")
    p_sweep.add_argument("--quantity", choices=sw.QUANTITIES)
    p_sweep.add_argument("--workers", type=int, default=1)
    p_verify = sub.add_parser("verify", parents=[common], help="oracle cross-check report")
    p_verify.add_argument("--grid-density", type=int, default=10)
    return parser


COMMANDS = {
    "spectrum": cmd_spectrum,
    "thermal": cmd_thermal,
    "concurrence": cmd_concurrence,
    "critical-temp": cmd_critical_temp,
    "teleport": cmd_teleport,
    "fidelity": cmd_fidelity,
    "sweep": cmd_sweep,
    "verify": cmd_verify,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    args.theta_given = args.theta is not None
    if args.theta is None:
        args.theta = math.pi / 2

    ok = True
    try:
        result = COMMANDS[args.command](args)
        if isinstance(result, tuple):
            result, ok = result
    except NonConvergenceError as exc:
        print(f"dmtele: numerical failure: {exc}", file=sys.stderr)
        return 2
    except (UsageError, ValueError) as exc:
        print(f"dmtele: error: {exc}", file=sys.stderr)
        return 1

    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(result)
    else:
        sys.stdout.write(result)
    return 0 if ok else 2


if __name__ == "__main__":
    sys.exit(main())
