"""Parameter sweeps, CSV/JSON serialization and the oracle cross-check report."""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterable, NamedTuple, Optional

import numpy as np

from .concurrence import wootters_concurrence, xstate_concurrence
from .linalg import hermitian_eig, mat_exp_hermitian
from .model import (ModelParams, channel_concurrence, critical_temperature,
                    gibbs_state_oracle, hamiltonian, partition_function,
                    spectrum_closed_form, thermal_state)
from .teleport import (CLASSICAL_FIDELITY, PureInput, average_fidelity_closed,
                       average_fidelity_quadrature, bell_populations,
                       bell_populations_closed, channel_probabilities,
                       classical_threshold_temperature, output_concurrence_paper,
                       teleport_output)

__all__ = [
    "AXIS_NAMES",
    "QUANTITIES",
    "NA",
    "Axis",
    "SweepSpec",
    "SweepRow",
    "evaluate",
    "run_sweep",
    "format_value",
    "rows_to_csv",
    "rows_from_csv",
    "rows_to_json",
    "rows_from_json",
    "CheckResult",
    "VerificationReport",
    "verify",
]

AXIS_NAMES = ("J", "D", "T", "theta", "C_in")
QUANTITIES = ("channel_concurrence", "C_out_oracle", "C_out_paper", "F_avg_closed",
              "F_avg_quadrature", "Tc", "T_threshold")
NA = "NA"
DEFAULT_FIXED = {"J": 1.0, "D": 0.0, "T": 0.5, "theta": math.pi / 2, "phi": 0.0}


@dataclass(frozen=True)
class Axis:
    name: str
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown axis {self.name!r}; choose from {', '.join(AXIS_NAMES)}")
        if self.count < 2:
            raise ValueError(f"axis {self.name}: count must be at least 2")
        if not self.start < self.stop:
            raise ValueError(f"axis {self.name}: start must be below stop")
        if self.name == "T" and self.start <= 0:
            raise ValueError("axis T: temperatures must be positive")
        if self.name == "C_in" and not (0 <= self.start and self.stop <= 1):
            raise ValueError("axis C_in must stay within [0, 1]")
        if self.name == "theta" and not (0 <= self.start and self.stop <= math.pi):
            raise ValueError("axis theta must stay within [0, pi]")

    @classmethod
    def parse(cls, text: str) -> "Axis":
        """Parse ``name:start:stop:count``."""
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError(f"axis must look like name:start:stop:count, got {text!r}")
        name, start, stop, count = parts
        return cls(name, float(start), float(stop), int(count))

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.count)


@dataclass(frozen=True)
class SweepSpec:
    quantity: str
    axis1: Axis
    axis2: Optional[Axis] = None
    fixed: dict = field(default_factory=dict)
    quadrature_n: int = 32

    def __post_init__(self):
        if self.quantity not in QUANTITIES:
            raise ValueError(f"unknown quantity {self.quantity!r}; choose from {', '.join(QUANTITIES)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("the two sweep axes must differ")
        if {"theta", "C_in"} <= set(names):
            raise ValueError("theta and C_in both set the input state; sweep only one")
        unknown = set(self.fixed) - set(AXIS_NAMES) - {"phi"}
        if unknown:
            raise ValueError(f"unknown fixed parameters: {sorted(unknown)}")
        if self.quadrature_n < 8:
            raise ValueError("quadrature_n must be at least 8")
        point = {**DEFAULT_FIXED, **self.fixed}
        if point["T"] <= 0:
            raise ValueError("fixed temperature must be positive")

    @property
    def axes(self) -> tuple[Axis, ...]:
        return (self.axis1,) if self.axis2 is None else (self.axis1, self.axis2)


class SweepRow(NamedTuple):
    coords: tuple
    value: Optional[float]


def _input_for(point: dict) -> PureInput:
    if "C_in" in point:
        return PureInput.from_concurrence(point["C_in"], point["phi"])
    return PureInput(point["theta"], point["phi"])


def evaluate(quantity: str, point: dict, quadrature_n: int = 32) -> Optional[float]:
    """Evaluate one sweep quantity at a parameter point.

    ``point`` holds ``J``, ``D``, ``T``, ``phi`` and either ``theta`` or
    ``C_in``; ``C_in`` wins when both are present.
    """
    J, D = point["J"], point["D"]
    if quantity == "Tc":
        return critical_temperature(J, D) if J != 0 else None
    if quantity == "T_threshold":
        return classical_threshold_temperature(J, D) if J != 0 else None
    params = ModelParams(J, D, point["T"])
    if quantity == "channel_concurrence":
        return channel_concurrence(params)
    if quantity == "C_out_oracle":
        inp = _input_for(point)
        probs = channel_probabilities(thermal_state(params))
        return wootters_concurrence(teleport_output(inp, probs))
    if quantity == "C_out_paper":
        c_in = point["C_in"] if "C_in" in point else abs(math.sin(point["theta"]))
        return output_concurrence_paper(params, c_in)
    if quantity == "F_avg_closed":
        return average_fidelity_closed(params)
    if quantity == "F_avg_quadrature":
        return average_fidelity_quadrature(params, quadrature_n, quadrature_n)
    raise ValueError(f"unknown quantity {quantity!r}")


def _evaluate_args(args):
    return evaluate(*args)


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate ``spec.quantity`` on the axis grid, axis1 outermost.

    With ``workers > 1`` cells are evaluated in a process pool; the row
    order does not depend on it.
    """
    base = {**DEFAULT_FIXED, **spec.fixed}
    if any(a.name == "theta" for a in spec.axes):
        base.pop("C_in", None)
    coords = list(itertools.product(*(a.values() for a in spec.axes)))
    jobs = []
    for c in coords:
        point = dict(base)
        point.update({a.name: float(v) for a, v in zip(spec.axes, c)})
        jobs.append((spec.quantity, point, spec.quadrature_n))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            values = list(pool.map(_evaluate_args, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        values = [_evaluate_args(j) for j in jobs]
    return [SweepRow(tuple(float(x) for x in c), v) for c, v in zip(coords, values)]


def format_value(value: Optional[float]) -> str:
    if value is None:
        return NA
    return f"{value:.12g}"


def _parse_value(text: str) -> Optional[float]:
    return None if text == NA else float(text)


def rows_to_csv(rows: Iterable[SweepRow], axis_names: Iterable[str], quantity: str) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow([*axis_names, quantity])
    for row in rows:
        writer.writerow([*(format_value(c) for c in row.coords), format_value(row.value)])
    return buf.getvalue()


def rows_from_csv(text: str) -> tuple[list[str], str, list[SweepRow]]:
    """Inverse of :func:`rows_to_csv`: returns axis names, quantity and rows."""
    reader = csv.reader(io.StringIO(text))
    header = next(reader)
    rows = [SweepRow(tuple(float(x) for x in rec[:-1]), _parse_value(rec[-1]))
            for rec in reader if rec]
    return header[:-1], header[-1], rows


def _json_number(value: Optional[float]):
    return None if value is None else float(format_value(value))


def rows_to_json(rows: Iterable[SweepRow], axis_names: Iterable[str], quantity: str) -> str:
    names = list(axis_names)
    records = []
    for row in rows:
        rec = {n: _json_number(c) for n, c in zip(names, row.coords)}
        rec[quantity] = _json_number(row.value)
        records.append(rec)
    return json.dumps(records, indent=1) + "\n"


def rows_from_json(text: str, axis_names: Iterable[str], quantity: str) -> list[SweepRow]:
    names = list(axis_names)
    return [SweepRow(tuple(rec[n] for n in names), rec[quantity]) for rec in json.loads(text)]


# --------------------------------------------------------------------------
# verification report

@dataclass
class CheckResult:
    name: str
    max_error: float
    tolerance: float
    passed: bool
    kind: str = "check"  # "check", "regression" or "deviation"
    detail: str = ""


@dataclass
class VerificationReport:
    grid_density: int
    checks: list[CheckResult]

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.kind != "deviation")

    def get(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {"grid_density": self.grid_density, "passed": self.passed,
                "checks": [asdict(c) for c in self.checks]}

    def to_text(self) -> str:
        lines = [f"verification grid density {self.grid_density}"]
        for c in self.checks:
            if c.kind == "deviation":
                status = "paper-formula deviation"
            else:
                status = "PASS" if c.passed else "FAIL"
            lines.append(f"{status:>24}  {c.name:<34} max_err={c.max_error:.3e} "
                         f"tol={c.tolerance:.1e}  {c.detail}".rstrip())
        lines.append("overall: " + ("PASS" if self.passed else "FAIL"))
        return "\n".join(lines) + "\n"


def standard_grid(n: int) -> list[ModelParams]:
    """``n^3`` points over ``J in [-2, 2] \\ {0}``, ``D in [0, 3]``, ``T in [0.05, 5]``."""
    js = [j for j in np.linspace(-2.0, 2.0, n) if abs(j) > 1e-12]
    ds = np.linspace(0.0, 3.0, n)
    ts = np.linspace(0.05, 5.0, n)
    return [ModelParams(j, d, t) for j in js for d in ds for t in ts]


def _check(name, errors, tol, detail="", kind="check") -> CheckResult:
    worst = float(max(errors, default=0.0))
    return CheckResult(name, worst, tol, bool(worst <= tol), kind, detail)


def _eq8_comparison(n: int) -> list[CheckResult]:
    js = [j for j in np.linspace(-2.0, 2.0, n) if abs(j) > 1e-12]
    ds = np.linspace(0.0, 3.0, n)
    ts = np.linspace(0.05, 5.0, n)
    cs = np.linspace(0.25, 1.0, 4)
    shape = (len(js), len(ds), len(ts), len(cs))
    oracle = np.zeros(shape)
    printed = np.zeros(shape)
    for (a, j), (b, d), (c, t) in itertools.product(enumerate(js), enumerate(ds), enumerate(ts)):
        params = ModelParams(j, d, t)
        probs = channel_probabilities(thermal_state(params))
        for k, c_in in enumerate(cs):
            rho_out = teleport_output(PureInput.from_concurrence(c_in), probs)
            oracle[a, b, c, k] = wootters_concurrence(rho_out)
            printed[a, b, c, k] = output_concurrence_paper(params, c_in)

    zero_tol = 1e-12
    on_o = oracle > zero_tol
    on_p = printed > zero_tol
    mismatch = on_o != on_p
    unresolved = 0
    for idx in zip(*np.nonzero(mismatch)):
        # accept a disagreement sitting next to a boundary of either region
        ok = False
        for axis in range(4):
            for step in (-1, 1):
                nb = list(idx)
                nb[axis] += step
                if 0 <= nb[axis] < shape[axis]:
                    nb = tuple(nb)
                    if on_o[nb] != on_o[idx] or on_p[nb] != on_p[idx]:
                        ok = True
        unresolved += not ok
    both = on_o & on_p
    ratios = oracle[both] / printed[both]
    ratio_text = (f"oracle/printed ratio in [{ratios.min():.6f}, {ratios.max():.6f}]"
                  if ratios.size else "no common positive region")
    region = CheckResult(
        "Eq8 zero-region agreement", float(unresolved), 0.0, unresolved == 0, "check",
        f"{int(mismatch.sum())} cell(s) disagree, {unresolved} away from a boundary")
    deviation = CheckResult(
        "Eq8 printed vs protocol oracle", float(np.max(np.abs(oracle - printed))), 0.0,
        False, "deviation", ratio_text)

    cold = ModelParams(1.0, 0.0, 0.01)
    probs = channel_probabilities(thermal_state(cold))
    c_oracle = wootters_concurrence(teleport_output(PureInput(math.pi / 2), probs))
    c_paper = output_concurrence_paper(cold, 1.0)
    spot = CheckResult(
        "Eq8 low-T spot (J=1,D=0,T=0.01)",
        max(abs(c_paper - 0.5), abs(c_oracle - 1.0)), 1e-3,
        abs(c_paper - 0.5) <= 1e-3 and abs(c_oracle - 1.0) <= 1e-4, "regression",
        f"printed={c_paper:.6f} oracle={c_oracle:.6f}")
    return [region, deviation, spot]


def verify(grid_density: int = 10, quadrature_n: int = 32) -> VerificationReport:
    """Compare every closed form with its independent oracle on the standard grid."""
    if grid_density < 5:
        raise ValueError("grid_density must be at least 5")
    grid = standard_grid(grid_density)
    z_err, spec_err, rho_err, eq5_err, x_err, bell_err, fa_err = ([] for _ in range(7))
    for params in grid:
        h = hamiltonian(params)
        w, _ = hermitian_eig(h)
        closed = spectrum_closed_form(params)
        energies = np.sort([e.energy for e in closed])
        spec_err.append(np.max(np.abs(energies - w)))
        spec_err.extend(np.linalg.norm(h @ e.state - e.energy * e.state) for e in closed)

        z_closed = partition_function(params)
        z_trace = np.trace(mat_exp_hermitian(h, -params.beta)).real
        z_err.append(abs(z_closed - z_trace) / z_trace)

        state = thermal_state(params)
        rho_err.append(np.max(np.abs(state.rho - gibbs_state_oracle(params))))

        c_w = wootters_concurrence(state.rho)
        eq5_err.append(abs(channel_concurrence(params) - c_w))
        x_err.append(abs(xstate_concurrence(state.rho) - c_w))
        bell_err.append(np.max(np.abs(bell_populations(state.rho) - bell_populations_closed(params))))
        fa_err.append(abs(average_fidelity_closed(params)
                          - average_fidelity_quadrature(params, quadrature_n, quadrature_n)))

    checks = [
        _check("partition function vs tr exp(-bH)", z_err, 1e-12, "relative"),
        _check("spectrum closed form vs eigensolver", spec_err, 1e-10),
        _check("thermal state vs Gibbs oracle", rho_err, 1e-10),
        _check("Eq5 channel concurrence vs Wootters", eq5_err, 1e-10),
        _check("X-state formula vs Wootters", x_err, 1e-10),
        _check("Bell populations closed vs trace", bell_err, 1e-12),
        _check("Eq11 average fidelity vs quadrature", fa_err, 1e-8, f"n={quadrature_n}"),
    ]
    checks.extend(_eq8_comparison(grid_density))

    tc = critical_temperature(1.0, 0.0)
    tc_exact = 2.0 / math.log(3.0)
    checks.append(CheckResult("Tc(J=1,D=0) = 2/ln3", abs(tc - tc_exact), 1e-6,
                              abs(tc - tc_exact) <= 1e-6, "regression", f"Tc={tc:.9f}"))
    tt = classical_threshold_temperature(1.0, 0.0)
    tt_exact = 2.0 / math.log(11.0)
    checks.append(CheckResult("T_threshold(J=1,D=0) = 2/ln11", abs(tt - tt_exact), 1e-6,
                              abs(tt - tt_exact) <= 1e-6, "regression", f"T={tt:.9f}"))
    fa = average_fidelity_closed(ModelParams(1.0, 0.0, tt_exact))
    checks.append(CheckResult("F_A(T=2/ln11) = 2/3", abs(fa - CLASSICAL_FIDELITY), 1e-9,
                              abs(fa - CLASSICAL_FIDELITY) <= 1e-9, "regression"))
    return VerificationReport(grid_density, checks)
