"""Convergence studies over step-halving ladders.

Runs a solver at a sequence of halved step sizes, measures maximum errors
against the exact solution, and chains empirical orders
log2(err_coarse / err_fine) between consecutive levels.  One extra run at
twice the base step supplies the order for the first reported row.  Reports
render to csv (the stable contract), markdown, or json-lines.
"""

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import relaxation, subdiffusion
from .caputo import Scheme
from .problems import RelaxationFamily, SubdiffusionFamily
from .subdiffusion import Sampled, SineMode, SubdiffusionProblem

__all__ = [
    "Coupling",
    "Ladder",
    "ReportRow",
    "ConvergenceReport",
    "estimate_order",
    "run_relaxation_study",
    "run_subdiffusion_study",
    "render_report",
    "parse_report_jsonl",
]

# errors at roundoff level carry no rate information; their orders stay blank
ORDER_FLOOR = 1e-12

_FORMATS = ("csv", "markdown", "jsonl")


class Coupling(Enum):
    NONE = "none"
    SPACE_FROM_TIME = "space-from-time"  # h = pi * tau / 3


@dataclass(frozen=True)
class Ladder:
    """Halving ladder of step sizes base_step / 2^i for i = 0..levels-1."""

    base_step: float
    levels: int
    coupling: Coupling = Coupling.NONE

    def __post_init__(self):
        if self.base_step <= 0.0:
            raise ValueError(f"base_step must be positive, got {self.base_step}")
        if self.levels < 2:
            raise ValueError(f"need at least 2 levels, got {self.levels}")

    def steps(self) -> list[float]:
        return [self.base_step / 2 ** i for i in range(self.levels)]


@dataclass(frozen=True)
class ReportRow:
    step: float
    max_error: float
    order: float | None


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple

    def __post_init__(self):
        rows = tuple(self.rows)
        object.__setattr__(self, "rows", rows)
        for prev, cur in zip(rows, rows[1:]):
            if cur.step != prev.step / 2.0:
                raise ValueError("report steps must halve exactly")
        for row in rows:
            if row.max_error < 0.0:
                raise ValueError("max_error must be >= 0")


def estimate_order(err_coarse: float, err_fine: float) -> float:
    """Empirical order log2(err_coarse / err_fine) for one step halving."""
    if err_coarse <= 0.0 or err_fine <= 0.0:
        raise ValueError("both errors must be positive")
    return math.log2(err_coarse / err_fine)


def _chain_orders(steps, errors) -> ConvergenceReport:
    # errors[0] belongs to the extra coarse run and only feeds the first order
    rows = []
    for i in range(1, len(steps)):
        ec, ef = errors[i - 1], errors[i]
        order = estimate_order(ec, ef) if min(ec, ef) > ORDER_FLOOR else None
        rows.append(ReportRow(steps[i], ef, order))
    return ConvergenceReport(tuple(rows))


def run_relaxation_study(family: RelaxationFamily, scheme: Scheme,
                         ladder: Ladder, corrected: bool = False,
                         m: int | None = None) -> ConvergenceReport:
    """Error ladder for a relaxation problem.

    Each row's error is the maximum of |exact(x_n) - computed_n| over all
    grid nodes n >= 1 (node 0 is exact by construction).  With corrected=True
    the singularity-corrected solver runs instead, which requires the
    homogeneous family; m defaults to the smallest valid degree.
    """
    if ladder.coupling is not Coupling.NONE:
        raise ValueError("relaxation ladders do not couple step sizes")
    if corrected:
        if family.forcing is not None or family.y0 != 1.0:
            raise ValueError(
                f"correction applies to the homogeneous problem only, "
                f"not {family.name}")
        if m is None:
            m = relaxation.choose_m(family.alpha)
    steps = [2.0 * ladder.base_step] + ladder.steps()
    errors = []
    for h in steps:
        if corrected:
            series = relaxation.solve_corrected(family.alpha, family.B, m,
                                                family.T, h, scheme)
        else:
            problem = relaxation.RelaxationProblem(
                alpha=family.alpha, B=family.B, forcing=family.forcing,
                y0=family.y0, T=family.T, h=h)
            series = (relaxation.solve_ml1(problem)
                      if scheme is Scheme.MODIFIED_L1
                      else relaxation.solve_l1(problem))
        x = series.x
        errors.append(float(np.max(np.abs(series.values[1:] - family.exact(x[1:])))))
    return _chain_orders(steps, errors)


def run_subdiffusion_study(family: SubdiffusionFamily, scheme: Scheme,
                           ladder: Ladder, corrected: bool = False,
                           m: int | None = None) -> ConvergenceReport:
    """Error ladder for a subdiffusion problem with the coupled grid
    h = pi tau / 3 (N = 3 M space intervals).

    Each row's error is the maximum over interior space nodes at the final
    time.  The base step and its halvings must divide T into whole steps.
    """
    if ladder.coupling is not Coupling.SPACE_FROM_TIME:
        raise ValueError("subdiffusion ladders require the h = pi tau / 3 coupling")
    if family.T != 1.0:
        raise ValueError("coupled studies are defined for T = 1")
    if corrected:
        if family.mode != 1 or family.amplitude != 1.0:
            raise ValueError(
                "the corrected solver handles the unit first mode only")
        if m is None:
            m = relaxation.choose_m(family.alpha)
    steps = [2.0 * ladder.base_step] + ladder.steps()
    errors = []
    for tau in steps:
        M = round(family.T / tau)
        if abs(M * tau - family.T) > 1e-9:
            raise ValueError(f"tau = {tau} does not divide T = {family.T}")
        N = 3 * M
        if corrected:
            sol = subdiffusion.solve_corrected(family.alpha, m, family.T,
                                               N, M, scheme)
        else:
            if family.amplitude == 1.0:
                initial = SineMode(family.mode)
            else:
                xs = np.arange(N + 1) * (math.pi / N)
                values = family.amplitude * np.sin(family.mode * xs)
                values[0] = 0.0
                values[-1] = 0.0
                initial = Sampled(values)
            problem = SubdiffusionProblem(alpha=family.alpha, N=N, M=M,
                                          T=family.T, initial=initial)
            sol = (subdiffusion.solve_ml1(problem)
                   if scheme is Scheme.MODIFIED_L1
                   else subdiffusion.solve_l1(problem))
        x_interior = sol.x[1:-1]
        exact = family.exact(x_interior, family.T)
        errors.append(float(np.max(np.abs(sol.final[1:-1] - exact))))
    return _chain_orders(steps, errors)


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def render_report(report: ConvergenceReport, fmt: str = "csv") -> str:
    """Render a report as text.

    csv and markdown print 6 significant digits; jsonl keeps full binary64
    precision and round-trips through parse_report_jsonl.
    """
    if fmt not in _FORMATS:
        raise ValueError(f"format must be one of {_FORMATS}, got {fmt!r}")
    if fmt == "csv":
        lines = ["step,max_error,order"]
        for row in report.rows:
            order = "" if row.order is None else _fmt(row.order)
            lines.append(f"{_fmt(row.step)},{_fmt(row.max_error)},{order}")
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = ["| step | max_error | order |", "| --- | --- | --- |"]
        for row in report.rows:
            order = "" if row.order is None else _fmt(row.order)
            lines.append(f"| {_fmt(row.step)} | {_fmt(row.max_error)} | {order} |")
        return "\n".join(lines) + "\n"
    lines = []
    for row in report.rows:
        lines.append(json.dumps(
            {"step": row.step, "max_error": row.max_error, "order": row.order}))
    return "\n".join(lines) + "\n"


def parse_report_jsonl(text: str) -> ConvergenceReport:
    """Inverse of render_report(..., "jsonl")."""
    rows = []
    for line in text.splitlines():
        if not line.strip():
            continue
        record = json.loads(line)
        rows.append(ReportRow(record["step"], record["max_error"], record["order"]))
    return ConvergenceReport(tuple(rows))
