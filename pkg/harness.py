#!/usr/bin/env python3
"""
Verification Harness Module
Grid checks of the log-concavity results for Q_nu(a, b), 1 - Q_nu(a, b) and the noncentral
chi density, the kernel and small-b facts they rest on, and exploratory scans of the
open cases. Every scan produces per-cell rows for CSV output.
"""

import concurrent.futures
import csv
import functools
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Iterable, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np

from concavity import default_t_grid, lemma2_statistic, log_density_curvature
from config import (
    B_RANGE_PAD,
    BASE_SLACK,
    CSV_DIGITS,
    CURVATURE_SLACK,
    DEFAULT_A_GRID,
    DEFAULT_B_POINTS,
    DEFAULT_NU_GRID,
    DEFAULT_TOL,
    FR_A_AXIS,
    FR_B_AXIS,
    FR_FIXED_B,
    FR_NU_AXIS,
    HARNESS_WORKERS,
    MIN_TOL,
    MONOTONE_SLACK,
    SMALL_B_GRID,
    SMALL_B_NU_GRID,
    SMALL_B_RELATIVE_GATE,
    TAIL_FLOOR,
    TP2_POINTS,
    TP2_T1,
    TP2_T2,
)
from errors import DomainError
from marcum import MarcumPoint, marcum_cdf, marcum_q
from nu0 import solve_nu0
from special_fn import check_finite

logger = logging.getLogger(__name__)

CSV_COLUMNS = ('property_id', 'nu', 'a', 'b_lo', 'b_hi', 'worst_margin', 'verdict')


class PropertyId(str, Enum):
    LOGCONCAVE_Q_B = "logconcave-q-b"
    LOGCONCAVE_CDF_B = "logconcave-cdf-b"
    FINNER_ROTERS = "finner-roters"
    TP2 = "tp2"
    SMALL_B = "small-b"
    INTEGRAND = "integrand-logconcave"
    LEMMA2 = "lemma2-monotone"
    RICE = "rice"


class Verdict(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    EXPLORATORY = "exploratory"
    EXPECTED_VIOLATION = "expected_violation"
    ERROR = "error"


class _Claim(Enum):
    ASSERTED = "asserted"
    EXPECTED_VIOLATION = "expected_violation"
    EXPLORATORY = "exploratory"


@dataclass
class ScanConfig:
    """
    One verification scan.

    nu_grid / a_grid / b_grid are the cell coordinates and the b axis. b_grid=None gives each
    (nu, a) cell a uniform grid over [0, a + 8] with DEFAULT_B_POINTS points, or with spacing
    second_difference_step when that is set. slack=None selects 1e-9 + 4 tol / min(window).
    nu_grid defaults to default_nu_grid(). The remaining fields are read only by the scans
    that need them.
    """

    property_id: PropertyId
    nu_grid: List[float] = field(default_factory=lambda: default_nu_grid())
    a_grid: List[float] = field(default_factory=lambda: list(DEFAULT_A_GRID))
    b_grid: Optional[List[float]] = None
    second_difference_step: Optional[float] = None
    slack: Optional[float] = None
    tol: float = DEFAULT_TOL
    t1: float = TP2_T1
    t2: float = TP2_T2
    s_grid: Optional[List[float]] = None
    t_grid: Optional[List[float]] = None
    nu_axis: Optional[List[float]] = None
    a_axis: Optional[List[float]] = None
    fixed_b: Optional[List[float]] = None

    def __post_init__(self):
        try:
            self.property_id = PropertyId(self.property_id)
        except ValueError:
            choices = ', '.join(p.value for p in PropertyId)
            raise DomainError('property', f"unknown property {self.property_id!r} (choose from {choices})") from None


@dataclass(frozen=True)
class CellResult:
    """One CSV row. worst_margin > 0 means the checked inequality is violated in the cell."""

    property_id: str
    nu: Union[float, str]
    a: Union[float, str]
    b_lo: float
    b_hi: float
    worst_margin: float
    verdict: Verdict
    skipped: int = 0


@dataclass
class ScanReport:
    """Outcome of one scan; violations lists the failing asserted cells with their margins."""

    property_id: PropertyId
    cells_checked: int
    violations: List[Tuple[CellResult, float]]
    worst_margin: float
    verdict: Verdict
    cells: List[CellResult] = field(default_factory=list)
    skipped: int = 0
    message: str = ""

    @property
    def expected_violations(self) -> List[CellResult]:
        return [c for c in self.cells if c.verdict is Verdict.EXPECTED_VIOLATION]


def _finish(property_id: PropertyId, cells: List[CellResult]) -> ScanReport:
    violations = [(c, c.worst_margin) for c in cells if c.verdict is Verdict.FAIL]
    finite = [c.worst_margin for c in cells if not math.isnan(c.worst_margin)]
    worst = max(finite) if finite else math.nan
    if violations:
        verdict = Verdict.FAIL
    elif cells and all(c.verdict is Verdict.EXPLORATORY for c in cells):
        verdict = Verdict.EXPLORATORY
    else:
        verdict = Verdict.PASS
    return ScanReport(property_id, len(cells), violations, worst, verdict, cells,
                      sum(c.skipped for c in cells))


def _verdict(claim: _Claim, margin: float) -> Verdict:
    if claim is _Claim.EXPLORATORY or math.isnan(margin):
        return Verdict.EXPLORATORY
    if claim is _Claim.EXPECTED_VIOLATION:
        return Verdict.EXPECTED_VIOLATION if margin > 0.0 else Verdict.FAIL
    return Verdict.PASS if margin <= 0.0 else Verdict.FAIL


def _grid(name: str, values: Optional[Iterable[float]], minimum: float = 0.0,
          strict: bool = False, points: int = 1) -> np.ndarray:
    if values is None:
        raise DomainError(name, "grid is required")
    grid = np.array([check_finite(name, v) for v in values], dtype=float)
    if len(grid) < points:
        raise DomainError(name, f"needs at least {points} points, got {len(grid)}")
    if np.any(np.diff(grid) <= 0.0):
        raise DomainError(name, "must be sorted and strictly increasing")
    if (strict and grid[0] <= minimum) or grid[0] < minimum:
        raise DomainError(name, f"values must be {'>' if strict else '>='} {minimum:g}")
    return grid


def _uniform(name: str, grid: np.ndarray) -> np.ndarray:
    steps = np.diff(grid)
    if not np.allclose(steps, steps[0], rtol=1e-9, atol=0.0):
        raise DomainError(name, "second differences need uniform spacing")
    return grid


def _linspace(axis: Tuple[float, float, int]) -> List[float]:
    lo, hi, n = axis
    return list(np.linspace(lo, hi, n))


@functools.lru_cache(maxsize=1)
def critical_order() -> float:
    """nu_0, solved once per process."""
    return solve_nu0(tol=1e-12).root


def default_nu_grid() -> List[float]:
    """DEFAULT_NU_GRID plus the solved critical order."""
    return sorted(DEFAULT_NU_GRID + [critical_order()])


def _map_cells(jobs: Sequence[Callable[[], CellResult]]) -> List[CellResult]:
    workers = max(1, min(HARNESS_WORKERS, len(jobs)))
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(lambda job: job(), jobs))


# ---------------------------------------------------------------------------
# Second differences of log values along one axis
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _AxisOutcome:
    margin: float  # max over windows of (second difference of log - allowed slack)
    where: float
    skipped: int


def _second_log_difference(window: np.ndarray) -> float:
    logs = np.log(window)
    return float(logs[0] + logs[2] - 2.0 * logs[1])


def _log_concavity_margin(evaluate: Callable[[float, float], float], grid: np.ndarray,
                          tol: float, slack: Optional[float]) -> _AxisOutcome:
    """
    Largest excess of log v(x - D) + log v(x + D) - 2 log v(x) over the allowed slack.

    Points whose value is below the tail floor are skipped. A window that exceeds the base
    slack is evaluated again at tol / 10 before it counts.
    """
    values = np.array([evaluate(x, tol) for x in grid])
    keep = values > TAIL_FLOOR
    skipped = int(np.count_nonzero(~keep))
    tighter = max(0.1 * tol, MIN_TOL)
    worst, where = math.nan, math.nan
    for i in range(1, len(grid) - 1):
        if not (keep[i - 1] and keep[i] and keep[i + 1]):
            continue
        window = values[i - 1:i + 2]
        second = _second_log_difference(window)
        used_tol = tol
        if second > BASE_SLACK and tighter < tol:
            window = np.array([evaluate(x, tighter) for x in grid[i - 1:i + 2]])
            second = _second_log_difference(window)
            used_tol = tighter
        allowed = slack if slack is not None else BASE_SLACK + 4.0 * used_tol / float(window.min())
        margin = second - allowed
        if math.isnan(worst) or margin > worst:
            worst, where = margin, float(grid[i])
    return _AxisOutcome(worst, where, skipped)


def _cell_b_grid(config: ScanConfig, a: float) -> np.ndarray:
    if config.b_grid is not None:
        return _uniform('b_grid', _grid('b_grid', config.b_grid, points=3))
    hi = a + B_RANGE_PAD
    if config.second_difference_step is not None:
        step = check_finite('second_difference_step', config.second_difference_step)
        if step <= 0.0:
            raise DomainError('second_difference_step', f"must be positive, got {step}")
        return np.arange(0.0, hi + 0.5 * step, step)
    return np.linspace(0.0, hi, DEFAULT_B_POINTS)


def _q_in_b(nu: float, a: float) -> Callable[[float, float], float]:
    return lambda b, tol: marcum_q(MarcumPoint(nu, a, b), tol=tol).value


def _cdf_in_b(nu: float, a: float) -> Callable[[float, float], float]:
    return lambda b, tol: marcum_cdf(MarcumPoint(nu, a, b), tol=tol).value


def _b_axis_cell(label: str, nu: float, a: float, grid: np.ndarray, claim: _Claim,
                 evaluate: Callable[[float, float], float], config: ScanConfig) -> Callable[[], CellResult]:
    def job():
        outcome = _log_concavity_margin(evaluate, grid, config.tol, config.slack)
        if outcome.skipped:
            logger.debug("%s nu=%g a=%g: %d points below the tail floor skipped",
                           label, nu, a, outcome.skipped)
        return CellResult(label, nu, a, float(grid[0]), float(grid[-1]), outcome.margin,
                          _verdict(claim, outcome.margin), outcome.skipped)
    return job


# ---------------------------------------------------------------------------
# Log-concavity of Q and 1 - Q in b
# ---------------------------------------------------------------------------

def check_logconcave_Q_in_b(config: ScanConfig) -> ScanReport:  # noqa: N802
    """
    Q_nu(a, b) log-concave in b for all a >= 0 iff nu >= 1/2.

    Cells with nu >= 1/2 must pass; nu < 1/2 with a = 0 must show a violation (near b = 0);
    nu < 1/2 with a > 0 is exploratory.
    """
    nus = _grid('nu_grid', config.nu_grid, strict=True)
    as_ = _grid('a_grid', config.a_grid)
    jobs = []
    for nu in nus:
        for a in as_:
            if nu >= 0.5:
                claim = _Claim.ASSERTED
            elif a == 0.0:
                claim = _Claim.EXPECTED_VIOLATION
            else:
                claim = _Claim.EXPLORATORY
            jobs.append(_b_axis_cell(PropertyId.LOGCONCAVE_Q_B.value, float(nu), float(a),
                                     _cell_b_grid(config, a), claim, _q_in_b(nu, a), config))
    return _finish(PropertyId.LOGCONCAVE_Q_B, _map_cells(jobs))


def check_logconcave_oneminusQ_in_b(config: ScanConfig) -> ScanReport:  # noqa: N802
    """
    1 - Q_nu(a, b) log-concave in b when nu >= 1/2 and a <= 1, or nu >= nu_0.

    Everything outside that domain (in particular nu in [1/2, nu_0) with a > 1) is exploratory.
    """
    nus = _grid('nu_grid', config.nu_grid, strict=True)
    as_ = _grid('a_grid', config.a_grid)
    nu0 = critical_order()
    jobs = []
    for nu in nus:
        for a in as_:
            covered = (nu >= 0.5 and a <= 1.0) or nu >= nu0
            claim = _Claim.ASSERTED if covered else _Claim.EXPLORATORY
            jobs.append(_b_axis_cell(PropertyId.LOGCONCAVE_CDF_B.value, float(nu), float(a),
                                     _cell_b_grid(config, a), claim, _cdf_in_b(nu, a), config))
    return _finish(PropertyId.LOGCONCAVE_CDF_B, _map_cells(jobs))


# ---------------------------------------------------------------------------
# Squared parameterization: six statements along b, nu and a
# ---------------------------------------------------------------------------

def _squared_q(nu: float, nc: float, x: float, tol: float) -> float:
    return marcum_q(MarcumPoint(nu, math.sqrt(nc), math.sqrt(x)), tol=tol).value


def _squared_cdf(nu: float, nc: float, x: float, tol: float) -> float:
    return marcum_cdf(MarcumPoint(nu, math.sqrt(nc), math.sqrt(x)), tol=tol).value


def _range_text(grid: np.ndarray) -> str:
    return f"{format_value(grid[0])}:{format_value(grid[-1])}"


def _axis_job(label: str, nu, a, b_lo: float, b_hi: float, grid: np.ndarray, claim: _Claim,
              evaluate: Callable[[float, float], float], config: ScanConfig) -> Callable[[], CellResult]:
    def job():
        outcome = _log_concavity_margin(evaluate, grid, config.tol, config.slack)
        return CellResult(label, nu, a, b_lo, b_hi, outcome.margin,
                          _verdict(claim, outcome.margin), outcome.skipped)
    return job


def check_finner_roters(config: ScanConfig) -> ScanReport:
    """
    The six log-concavity statements for 1 - Q_nu(sqrt(a), sqrt(b)) and Q_nu(sqrt(a), sqrt(b)).

    Here a and b are the noncentrality and the quantile before square roots. For the nu- and
    a-axis scans the scanned column of the CSV row holds "lo:hi" and b_lo = b_hi = fixed b.
    """
    nus = _grid('nu_grid', config.nu_grid, strict=True)
    ncs = _grid('a_grid', config.a_grid)
    b_axis = _uniform('b_grid', _grid('b_grid', config.b_grid if config.b_grid is not None
                                      else _linspace(FR_B_AXIS), points=3))
    nu_axis = _uniform('nu_axis', _grid('nu_axis', config.nu_axis if config.nu_axis is not None
                                        else _linspace(FR_NU_AXIS), strict=True, points=3))
    a_axis = _uniform('a_axis', _grid('a_axis', config.a_axis if config.a_axis is not None
                                      else _linspace(FR_A_AXIS), points=3))
    fixed_b = _grid('fixed_b', config.fixed_b if config.fixed_b is not None else FR_FIXED_B)
    b_lo, b_hi = float(b_axis[0]), float(b_axis[-1])
    jobs = []

    # along b
    for nu in nus:
        for nc in ncs:
            nu, nc = float(nu), float(nc)
            jobs.append(_axis_job("fr-cdf-b", nu, nc, b_lo, b_hi, b_axis, _Claim.ASSERTED,
                                  functools.partial(_squared_cdf, nu, nc),
                                  config))
            claim = _Claim.ASSERTED if nu >= 1.0 else _Claim.EXPLORATORY
            jobs.append(_axis_job("fr-sf-b", nu, nc, b_lo, b_hi, b_axis, claim,
                                  functools.partial(_squared_q, nu, nc),
                                  config))

    # along nu; Q below nu = 1/2 is the open case
    upper_nu = nu_axis[nu_axis >= 0.5]
    lower_nu = nu_axis[nu_axis <= 0.5]
    for nc in ncs:
        for x in fixed_b:
            nc, x = float(nc), float(x)
            cdf_nu = functools.partial(lambda c, b, n, tol: _squared_cdf(n, c, b, tol), nc, x)
            sf_nu = functools.partial(lambda c, b, n, tol: _squared_q(n, c, b, tol), nc, x)
            jobs.append(_axis_job("fr-cdf-nu", _range_text(nu_axis), nc, x, x, nu_axis,
                                  _Claim.ASSERTED, cdf_nu, config))
            if len(upper_nu) >= 3:
                jobs.append(_axis_job("fr-sf-nu", _range_text(upper_nu), nc, x, x, upper_nu,
                                      _Claim.ASSERTED, sf_nu, config))
            if len(lower_nu) >= 3:
                jobs.append(_axis_job("fr-sf-nu", _range_text(lower_nu), nc, x, x, lower_nu,
                                      _Claim.EXPLORATORY, sf_nu, config))

    # along a
    for nu in nus:
        for x in fixed_b:
            nu, x = float(nu), float(x)
            cdf_a = functools.partial(lambda n, b, c, tol: _squared_cdf(n, c, b, tol), nu, x)
            sf_a = functools.partial(lambda n, b, c, tol: _squared_q(n, c, b, tol), nu, x)
            jobs.append(_axis_job("fr-cdf-a", nu, _range_text(a_axis), x, x, a_axis,
                                  _Claim.ASSERTED, cdf_a, config))
            jobs.append(_axis_job("fr-sf-a", nu, _range_text(a_axis), x, x, a_axis,
                                  _Claim.ASSERTED, sf_a, config))

    return _finish(PropertyId.FINNER_ROTERS, _map_cells(jobs))


# ---------------------------------------------------------------------------
# Kernel and asymptotic facts
# ---------------------------------------------------------------------------

def _log_cosh(x: np.ndarray) -> np.ndarray:
    x = np.abs(x)
    return x + np.log1p(np.exp(-2.0 * x)) - math.log(2.0)


def check_tp2_kernel(t1: float, t2: float, s_grid: Optional[Sequence[float]] = None) -> ScanReport:
    """
    g(s, t2) / g(s, t1) = cosh(t2 s) / cosh(t1 s) is nondecreasing in s on the grid.

    The CSV row carries t1 / t2 in the nu / a columns and the s range in b_lo / b_hi.
    worst_margin is the largest decrease between neighbours minus 1e-12.
    """
    t1 = check_finite('t1', t1)
    t2 = check_finite('t2', t2)
    if not 0.0 < t1 <= t2:
        raise DomainError('t2', f"needs 0 < t1 <= t2, got t1={t1}, t2={t2}")
    if s_grid is None:
        s_grid = np.linspace(0.0, 1.0, TP2_POINTS + 2)[1:-1]
    grid = _grid('s_grid', s_grid, strict=True, points=2)
    if grid[-1] >= 1.0:
        raise DomainError('s_grid', "values must lie in (0, 1)")
    log_ratio = _log_cosh(t2 * grid) - _log_cosh(t1 * grid)
    margin = float(np.max(-np.diff(log_ratio))) - MONOTONE_SLACK
    cell = CellResult(PropertyId.TP2.value, t1, t2, float(grid[0]), float(grid[-1]), margin,
                      _verdict(_Claim.ASSERTED, margin))
    return _finish(PropertyId.TP2, [cell])


def check_small_b_asymptotic(nu: float, b_grid: Optional[Sequence[float]] = None) -> ScanReport:
    """
    -log Q_nu(0, b) / (C b^{2nu}) -> 1 as b -> 0, with C = 2^{-nu} / Gamma(nu + 1).

    Passes when the ratio at the smallest b is within 2% of 1 and the deviation shrinks
    monotonically as b decreases along the grid.
    """
    nu = check_finite('nu', nu)
    if nu <= 0.0:
        raise DomainError('nu', f"must be positive, got {nu}")
    if b_grid is None:
        lo_hi = SMALL_B_GRID
        b_grid = np.geomspace(lo_hi[1], lo_hi[0], lo_hi[2])
    grid = _grid('b_grid', sorted(b_grid), strict=True, points=2)
    if grid[-1] > 0.2:
        raise DomainError('b_grid', "values must lie in (0, 0.2]")
    grid = grid[::-1]

    c = 2.0 ** (-nu) / math.gamma(nu + 1.0)
    deviations = []
    skipped = 0
    for b in grid:
        lower = marcum_cdf(MarcumPoint(nu, 0.0, float(b))).value
        if lower < TAIL_FLOOR:
            skipped += 1
            continue
        deviations.append(abs(-math.log1p(-lower) / (c * b ** (2.0 * nu)) - 1.0))
    if not deviations:
        margin = math.nan
    else:
        margin = deviations[-1] - SMALL_B_RELATIVE_GATE
        for before, after in zip(deviations[:-1], deviations[1:]):
            margin = max(margin, after - before - MONOTONE_SLACK)
    cell = CellResult(PropertyId.SMALL_B.value, nu, 0.0, float(grid[-1]), float(grid[0]), margin,
                      _verdict(_Claim.ASSERTED, margin), skipped)
    return _finish(PropertyId.SMALL_B, [cell])


# ---------------------------------------------------------------------------
# Density-level statements on t grids
# ---------------------------------------------------------------------------

def _curvature(nu: float, a: float, t: float) -> float:
    if a == 0.0:
        return -(2.0 * nu - 1.0) / (t * t) - 1.0
    return log_density_curvature(MarcumPoint(nu, a, 0.0), t)


def _t_grid(config: ScanConfig, a: float) -> np.ndarray:
    if config.t_grid is not None:
        return _grid('t_grid', config.t_grid, strict=True, points=2)
    return default_t_grid(a)


def _curvature_job(label: str, nu: float, a: float, grid: np.ndarray, claim: _Claim) -> Callable[[], CellResult]:
    def job():
        margin = max(_curvature(nu, a, t) for t in grid) - CURVATURE_SLACK
        return CellResult(label, nu, a, float(grid[0]), float(grid[-1]), margin, _verdict(claim, margin))
    return job


def check_integrand_logconcave(config: ScanConfig) -> ScanReport:
    """
    Log-concavity of the density in t. Asserted when nu >= 1/2 and a <= 1, or nu >= nu_0;
    a violation is expected for nu < 1/2 and for nu = 1/2 with a > 1 (curvature -> a^2 - 1
    as t -> 0); other cells are exploratory. b_lo / b_hi hold the t range.
    """
    nus = _grid('nu_grid', config.nu_grid, strict=True)
    as_ = _grid('a_grid', config.a_grid)
    nu0 = critical_order()
    jobs = []
    for nu in nus:
        for a in as_:
            if (nu >= 0.5 and a <= 1.0) or nu >= nu0:
                claim = _Claim.ASSERTED
            elif nu <= 0.5:
                claim = _Claim.EXPECTED_VIOLATION
            else:
                claim = _Claim.EXPLORATORY
            jobs.append(_curvature_job(PropertyId.INTEGRAND.value, float(nu), float(a), _t_grid(config, a), claim))
    return _finish(PropertyId.INTEGRAND, _map_cells(jobs))


def check_lemma2_monotone(config: ScanConfig) -> ScanReport:
    """f'(t) / (t f(t)) decreasing in t for nu >= 1/2; nu < 1/2 cells are exploratory."""
    nus = _grid('nu_grid', config.nu_grid, strict=True)
    as_ = _grid('a_grid', config.a_grid)

    def cell(nu, a, grid):
        def job():
            point = MarcumPoint(nu, a, 0.0)
            psi = np.array([lemma2_statistic(point, t) for t in grid])
            margin = float(np.max(np.diff(psi))) - MONOTONE_SLACK
            claim = _Claim.ASSERTED if nu >= 0.5 else _Claim.EXPLORATORY
            return CellResult(PropertyId.LEMMA2.value, nu, a, float(grid[0]), float(grid[-1]),
                              margin, _verdict(claim, margin))
        return job

    jobs = [cell(float(nu), float(a), _t_grid(config, a)) for nu in nus for a in as_]
    return _finish(PropertyId.LEMMA2, _map_cells(jobs))


def check_rice(config: ScanConfig) -> ScanReport:
    """Rice (nu = 1) density, CDF and survival function are all log-concave."""
    as_ = _grid('a_grid', config.a_grid)
    jobs = []
    for a in as_:
        a = float(a)
        b_grid = _cell_b_grid(config, a)
        jobs.append(_curvature_job("rice-pdf", 1.0, a, _t_grid(config, a), _Claim.ASSERTED))
        jobs.append(_b_axis_cell("rice-cdf", 1.0, a, b_grid, _Claim.ASSERTED, _cdf_in_b(1.0, a), config))
        jobs.append(_b_axis_cell("rice-sf", 1.0, a, b_grid, _Claim.ASSERTED, _q_in_b(1.0, a), config))
    return _finish(PropertyId.RICE, _map_cells(jobs))


# ---------------------------------------------------------------------------
# Dispatch, suites and output
# ---------------------------------------------------------------------------

def run_scan(config: ScanConfig) -> ScanReport:
    """Run the scan named by config.property_id."""
    pid = config.property_id
    if pid is PropertyId.LOGCONCAVE_Q_B:
        return check_logconcave_Q_in_b(config)
    if pid is PropertyId.LOGCONCAVE_CDF_B:
        return check_logconcave_oneminusQ_in_b(config)
    if pid is PropertyId.FINNER_ROTERS:
        return check_finner_roters(config)
    if pid is PropertyId.TP2:
        return check_tp2_kernel(config.t1, config.t2, config.s_grid)
    if pid is PropertyId.SMALL_B:
        reports = [check_small_b_asymptotic(nu, config.b_grid)
                   for nu in _grid('nu_grid', config.nu_grid, strict=True)]
        return _finish(PropertyId.SMALL_B, [c for r in reports for c in r.cells])
    if pid is PropertyId.INTEGRAND:
        return check_integrand_logconcave(config)
    if pid is PropertyId.LEMMA2:
        return check_lemma2_monotone(config)
    return check_rice(config)


def default_suite() -> List[ScanConfig]:
    """One scan per property on the default grids."""
    return [
        ScanConfig(PropertyId.LOGCONCAVE_Q_B),
        ScanConfig(PropertyId.LOGCONCAVE_CDF_B),
        ScanConfig(PropertyId.FINNER_ROTERS),
        ScanConfig(PropertyId.TP2),
        ScanConfig(PropertyId.SMALL_B, nu_grid=list(SMALL_B_NU_GRID)),
        ScanConfig(PropertyId.INTEGRAND),
        ScanConfig(PropertyId.LEMMA2),
        ScanConfig(PropertyId.RICE),
    ]


def run_suite(configs: Sequence[ScanConfig]) -> List[ScanReport]:
    """
    Run every scan, isolating failures. Reports come back in the order of configs,
    whatever order the workers finish in.

    Args:
        configs: Nonempty list of ScanConfig

    Returns:
        list: One ScanReport per config; a scan that raised has verdict ERROR
    """
    if not configs:
        raise DomainError('configs', "suite needs at least one scan")

    results = {}
    with concurrent.futures.ThreadPoolExecutor(max_workers=max(1, min(len(configs), HARNESS_WORKERS))) as executor:
        future_to_index = {executor.submit(run_scan, config): i for i, config in enumerate(configs)}
        for future in concurrent.futures.as_completed(future_to_index):
            index = future_to_index[future]
            config = configs[index]
            try:
                results[index] = future.result()
                logger.info("🔍 %s: %s", config.property_id.value, results[index].verdict.value)
            except Exception as e:
                logger.warning("❌ %s failed: %s", config.property_id.value, e)
                results[index] = ScanReport(config.property_id, 0, [], math.nan, Verdict.ERROR,
                                            message=f"{type(e).__name__}: {e}")
    return [results[i] for i in range(len(configs))]


def format_value(value, digits: int = CSV_DIGITS) -> str:
    if isinstance(value, str):
        return value
    return format(float(value), f".{digits}g")


def write_csv(reports: Sequence[ScanReport], stream: TextIO) -> None:
    """One row per cell, columns property_id, nu, a, b_lo, b_hi, worst_margin, verdict."""
    writer = csv.writer(stream, lineterminator='\n')
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        if report.verdict is Verdict.ERROR:
            writer.writerow([report.property_id.value, '', '', '', '', 'nan', Verdict.ERROR.value])
            continue
        for cell in report.cells:
            writer.writerow([cell.property_id, format_value(cell.nu), format_value(cell.a),
                             format_value(cell.b_lo), format_value(cell.b_hi),
                             format_value(cell.worst_margin), cell.verdict.value])


_BADGES = {
    Verdict.PASS: "✅",
    Verdict.FAIL: "❌",
    Verdict.EXPLORATORY: "🔍",
    Verdict.ERROR: "⚠️",
}


def summary_text(reports: Sequence[ScanReport]) -> str:
    """Plain-text summary, one line per scan."""
    lines = []
    for report in reports:
        badge = _BADGES.get(report.verdict, "")
        if report.verdict is Verdict.ERROR:
            lines.append(f"{badge} {report.property_id.value}: error ({report.message})")
            continue
        lines.append(
            f"{badge} {report.property_id.value}: {report.verdict.value}, "
            f"{report.cells_checked} cells, {len(report.violations)} violations, "
            f"{len(report.expected_violations)} expected violations, "
            f"worst margin {format_value(report.worst_margin, 8)}"
            + (f", {report.skipped} points skipped" if report.skipped else "")
        )
    return "\n".join(lines)
