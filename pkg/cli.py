#!/usr/bin/env python3
"""
Command-line front end: eval, diag, nu0, scan and suite.

Exit codes: 0 ok, 2 usage or domain error, 3 numerical failure, 4 an asserted property failed.
"""

import contextlib
import logging
import sys
from typing import List, Optional, Sequence

import click
import numpy as np

from concavity import classify_shape, h, l, lemma2_statistic, log_density_curvature
from config import CSV_DIGITS, DEFAULT_B_POINTS, DEFAULT_TOL, LOG_FORMAT, LOG_LEVEL, PLAIN_DIGITS, TP2_T1, TP2_T2
from errors import DomainError, MarcumError
from harness import (
    PropertyId,
    ScanConfig,
    Verdict,
    default_suite,
    format_value,
    run_scan,
    run_suite,
    summary_text,
    write_csv,
)
from marcum import MarcumPoint, MethodChoice, marcum_q
from nu0 import solve_nu0
from special_fn import ratio_derivative_unchecked, ratio_unchecked

logger = logging.getLogger(__name__)

EXIT_NUMERICAL = 3
EXIT_REGRESSION = 4

# module parameter names that differ from the flag spelling
_FLAGS = {'b_grid': '--b-lo/--b-hi/--b-points', 'nu_grid': '--nu', 'a_grid': '--a'}


def _flag(parameter: str) -> str:
    return _FLAGS.get(parameter, '--' + parameter.replace('_', '-'))


@contextlib.contextmanager
def _numerics():
    """Map toolkit errors onto click usage errors (exit 2) and exit 3."""
    try:
        yield
    except DomainError as e:
        raise click.BadParameter(e.message, param_hint=_flag(e.parameter))
    except MarcumError as e:
        click.echo(f"❌ {e}", err=True)
        sys.exit(EXIT_NUMERICAL)


def _fmt(value, layout: str) -> str:
    return format_value(value, CSV_DIGITS if layout == 'csv' else PLAIN_DIGITS)


format_option = click.option('--format', 'layout', type=click.Choice(['csv', 'plain']), default='plain',
                             show_default=True, help='csv: 17 significant digits, plain: 8')


@click.group()
def cli():
    """Marcum Q evaluation and log-concavity verification."""
    logging.basicConfig(level=getattr(logging, LOG_LEVEL.upper(), logging.WARNING),
                        format=LOG_FORMAT, stream=sys.stderr)


@cli.command('eval')
@click.option('--nu', type=float, required=True, help='Order, nu > 0')
@click.option('--a', type=float, required=True, help='Noncentrality, a >= 0')
@click.option('--b', type=float, required=True, help='Threshold, b >= 0')
@click.option('--method', type=click.Choice([m.value for m in MethodChoice]), default='auto', show_default=True)
@click.option('--tol', type=float, default=DEFAULT_TOL, show_default=True)
@format_option
def cmd_eval(nu, a, b, method, tol, layout):
    """Print Q_nu(a, b) with its error bound and method."""
    with _numerics():
        result = marcum_q(MarcumPoint(nu, a, b), method, tol)
    if layout == 'csv':
        click.echo(f"{_fmt(result.value, layout)},{_fmt(result.abs_err, layout)},{result.method.value}")
    else:
        click.echo(f"{_fmt(result.value, layout)}  abs_err={_fmt(result.abs_err, layout)}  method={result.method.value}")


@cli.command('diag')
@click.option('--nu', type=float, required=True, help='Order, nu > 0')
@click.option('--t', type=float, required=True, help='Evaluation point, t > 0')
@click.option('--a', type=float, default=None, help='Noncentrality for the density diagnostics')
@click.option('--shape', is_flag=True, help='Also classify the density shape (needs --a)')
@format_option
def cmd_diag(nu, t, a, shape, layout):
    """Print r, r', h and l at (nu, t); with --a also the log curvature and f'/(t f)."""
    with _numerics():
        rows = [('h', h(nu, t)), ('l', l(nu, t)),
                ('r', ratio_unchecked(nu, t).value), ('r_prime', ratio_derivative_unchecked(nu, t).value)]
        point = None
        if a is not None:
            point = MarcumPoint(nu, a, 0.0)
            if a > 0.0:
                rows.append(('curvature', log_density_curvature(point, t)))
            rows.append(('lemma2', lemma2_statistic(point, t)))
        elif shape:
            raise DomainError('a', "--shape needs a noncentrality")
        report = classify_shape(point) if shape else None

    for name, value in rows:
        click.echo(f"{name},{_fmt(value, layout)}" if layout == 'csv' else f"{name:>10} = {_fmt(value, layout)}")
    if report is not None:
        click.echo(report.describe())


@cli.command('nu0')
@click.option('--tol', type=float, default=1e-12, show_default=True, help='Residual target, at least 1e-13')
@format_option
def cmd_nu0(tol, layout):
    """Solve for the critical order nu_0."""
    with _numerics():
        result = solve_nu0(tol=tol)
    if layout == 'csv':
        click.echo(f"{_fmt(result.root, layout)},{_fmt(result.residual, layout)},{result.iterations}")
    else:
        click.echo(f"nu_0 = {_fmt(result.root, layout)}  residual={_fmt(result.residual, layout)}  "
                   f"iterations={result.iterations}")


def _b_grid(b_lo: Optional[float], b_hi: Optional[float], b_points: Optional[int]) -> Optional[List[float]]:
    if b_hi is None:
        if b_lo is not None or b_points is not None:
            raise click.BadParameter("needed with --b-lo or --b-points", param_hint='--b-hi')
        return None
    points = DEFAULT_B_POINTS if b_points is None else b_points
    if points < 3:
        raise click.BadParameter(f"needs at least 3 points, got {points}", param_hint='--b-points')
    return list(np.linspace(0.0 if b_lo is None else b_lo, b_hi, points))


def _emit(reports: Sequence, out: Optional[str]) -> None:
    if out is None:
        write_csv(reports, sys.stdout)
        click.echo(summary_text(reports), err=True)
        return
    with open(out, 'w', newline='') as stream:
        write_csv(reports, stream)
    click.echo(summary_text(reports))


def _exit_code(reports: Sequence) -> int:
    if any(r.verdict is Verdict.FAIL for r in reports):
        return EXIT_REGRESSION
    if any(r.verdict is Verdict.ERROR for r in reports):
        return EXIT_NUMERICAL
    return 0


@cli.command('scan')
@click.option('--property', 'property_id', type=click.Choice([p.value for p in PropertyId]), required=True)
@click.option('--nu', multiple=True, type=float, help='Order grid (repeatable)')
@click.option('--a', multiple=True, type=float, help='Noncentrality grid (repeatable)')
@click.option('--b-lo', type=float, default=None)
@click.option('--b-hi', type=float, default=None)
@click.option('--b-points', type=int, default=None)
@click.option('--t1', type=float, default=TP2_T1, show_default=True)
@click.option('--t2', type=float, default=TP2_T2, show_default=True)
@click.option('--tol', type=float, default=DEFAULT_TOL, show_default=True)
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None,
              help='CSV path; stdout when omitted')
def cmd_scan(property_id, nu, a, b_lo, b_hi, b_points, t1, t2, tol, out):
    """Run one verification scan and write its CSV rows."""
    grids = {}
    if nu:
        grids['nu_grid'] = list(nu)
    if a:
        grids['a_grid'] = list(a)
    with _numerics():
        config = ScanConfig(PropertyId(property_id), tol=tol, t1=t1, t2=t2,
                            b_grid=_b_grid(b_lo, b_hi, b_points), **grids)
        report = run_scan(config)
    _emit([report], out)
    sys.exit(_exit_code([report]))


@cli.command('suite')
@click.option('--default', 'use_default', is_flag=True, default=True,
              help='Run every property on the default grids')
@click.option('--out', type=click.Path(dir_okay=False, writable=True), default=None,
              help='CSV path; stdout when omitted')
def cmd_suite(use_default, out):
    """Run the default verification suite."""
    with _numerics():
        configs = default_suite()
        logger.info("🚀 running %d scans", len(configs))
        reports = run_suite(configs)
    _emit(reports, out)
    sys.exit(_exit_code(reports))


if __name__ == '__main__':
    cli()
