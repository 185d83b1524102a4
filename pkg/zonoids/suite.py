"""
Seeded random verification suites.

Trial ``i`` draws everything from ``numpy.random.default_rng([seed, i])``;
trials run on a thread pool and are collected in trial order, so a summary
depends only on the configuration.
"""
import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from . import generators
from .conf import logbm_settings, override_tolerance
from .exceptions import VerificationError
from .inequalities import (
    check_bm, check_hilbert_projection, check_induction_step, check_km_spectral_form,
    check_local_logbm, check_log_minkowski, check_minkowski_first, check_minkowski_second,
)
from .reports import dump_instance, report_row
from .serializers import Instance
from .verdicts import Verdict

logger = logging.getLogger(__name__)

CHECKS = ('bm', 'mink1', 'mink2', 'local-logbm', 'logmink', 'indstep', 'hilbert', 'km-spectral')

# Polytope volumes and hulls get expensive quickly beyond R^3.
POLYTOPE_MAX_DIM = 3


@dataclass(frozen=True)
class SuiteConfig:
    seed: int = None
    trials: int = None
    dims: Tuple[int, int] = None
    generators: Tuple[int, int] = None
    coordinate_bound: int = None
    backend: str = None
    tolerance: Optional[float] = None
    out_dir: str = None
    threads: int = None
    checks: Tuple[str, ...] = CHECKS

    def __post_init__(self):
        suite = logbm_settings.SUITE
        defaults = {
            'seed': suite['SEED'],
            'trials': suite['TRIALS'],
            'dims': tuple(suite['DIMS']),
            'generators': tuple(suite['GENERATORS']),
            'coordinate_bound': suite['COORDINATE_BOUND'],
            'backend': logbm_settings.BACKEND,
            'out_dir': suite['OUTPUT_DIR'],
            'threads': logbm_settings.THREADS,
        }
        for name, value in defaults.items():
            if getattr(self, name) is None:
                object.__setattr__(self, name, value)


@dataclass
class TrialResult:
    index: int
    dim: int
    reports: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    witnesses: list = field(default_factory=list)


def _draw_instance(rng, config):
    low, high = config.dims
    n = int(rng.integers(low, high + 1))
    lo, hi = config.generators
    bound = config.coordinate_bound
    K = generators.random_zonotope(rng, n, int(rng.integers(max(lo, n), max(hi, n) + 1)), bound)
    if n <= POLYTOPE_MAX_DIM and rng.random() < 0.5:
        L = generators.random_polytope(rng, n, int(rng.integers(n, n + 3)), bound)
    else:
        L = generators.random_zonotope(rng, n, int(rng.integers(max(lo, n), max(hi, n) + 1)), bound)
    t = generators.random_parameter(rng, bound)
    u = generators.random_direction(rng, n, bound)
    if config.backend == 'float':
        K, L = generators.as_float(K), generators.as_float(L)
    return n, K, L, t, u


def _run_check(name, K, L, t, u):
    if name == 'bm':
        return check_bm(K, L, t)
    if name == 'mink1':
        return check_minkowski_first(K, L)
    if name == 'mink2':
        return check_minkowski_second(K, L)
    if name == 'local-logbm':
        return check_local_logbm(K, L)
    if name == 'logmink':
        return check_log_minkowski(K, L)
    if name == 'indstep':
        return check_induction_step(K, L, u) if K.dim >= 3 else None
    if name == 'hilbert':
        return check_hilbert_projection(K, L)
    if name == 'km-spectral':
        return check_km_spectral_form(K, L)
    raise ValueError('Unknown check %r.' % name)


def minimize_witness(K, L, violates, max_exponent=12):
    """
    Smallest instance that still violates: binary search for the coarsest
    dyadic rounding of both bodies, then greedy removal of generators of K.
    ``violates(K, L)`` must be False on instances it cannot evaluate.
    """
    def still(K1, L1):
        try:
            return violates(K1, L1)
        except VerificationError:
            return False

    low, high = 0, max_exponent
    best = (K, L)
    while low <= high:
        middle = (low + high) // 2
        q = 2 ** middle
        try:
            candidate = (generators.rounded_body(K, q), generators.rounded_body(L, q))
        except VerificationError:
            candidate = None
        if candidate is not None and still(*candidate):
            best, high = candidate, middle - 1
        else:
            low = middle + 1

    K, L = best
    shrinking = True
    while shrinking and len(K.generators) > K.dim:
        shrinking = False
        for i in range(len(K.generators)):
            smaller = type(K)(K.dim, K.generators[:i] + K.generators[i + 1:])
            if smaller.full_dimensional and still(smaller, L):
                K, shrinking = smaller, True
                break
    return K, L


def run_trial(index, config: SuiteConfig) -> TrialResult:
    rng = np.random.default_rng([config.seed, index])
    n, K, L, t, u = _draw_instance(rng, config)
    result = TrialResult(index, n)
    for name in config.checks:
        try:
            report = _run_check(name, K, L, t, u)
        except VerificationError as exc:
            logger.debug('Trial %d, %s: %s', index, name, exc)
            result.errors.append((name, exc.__class__.__name__))
            continue
        if report is None:
            continue
        result.reports.append(report)
        if report.verdict is Verdict.VIOLATED:
            logger.warning('Trial %d: %s violated with deficit %s.', index, name, report.deficit)

            def violates(K1, L1, name=name):
                return _run_check(name, K1, L1, t, u).verdict is Verdict.VIOLATED

            small_k, small_l = minimize_witness(K, L, violates)
            task = {'K': 'K', 'L': 'L', 't': t}
            if name == 'indstep':
                task['u'] = u
            path = Path(config.out_dir) / ('witness-%d-%s.json' % (index, name))
            dump_instance(Instance({'K': small_k, 'L': small_l}, task), path)
            result.witnesses.append(str(path))
    return result


def run_random_suite(config: SuiteConfig) -> dict:
    """Run the configured trials and summarize them per check."""
    if config.trials < 0:
        raise ValueError('trials must be nonnegative.')
    logger.info('Running %d trials (seed %s, %d threads).', config.trials, config.seed, config.threads)

    def trial(index):
        return run_trial(index, config)

    with override_tolerance(FLOAT=config.tolerance), \
            ThreadPoolExecutor(max_workers=max(1, config.threads)) as pool:
        results = list(pool.map(trial, range(config.trials)))

    counts, errors, min_deficit = {}, Counter(), {}
    rows, witnesses = [], []
    for result in results:
        for report in result.reports:
            row = report_row(report)
            rows.append(row)
            counts.setdefault(report.name, Counter())[report.verdict.value] += 1
            if report.name not in min_deficit or row['deficit'] < min_deficit[report.name]:
                min_deficit[report.name] = row['deficit']
        for name, kind in result.errors:
            errors['%s:%s' % (name, kind)] += 1
        witnesses.extend(result.witnesses)

    violations = sum(c.get(Verdict.VIOLATED.value, 0) for c in counts.values())
    logger.info('Suite finished: %d reports, %d violations.', len(rows), violations)
    return {
        'seed': config.seed,
        'trials': config.trials,
        'dims': list(config.dims),
        'backend': config.backend,
        'violations': violations,
        'counts': {name: dict(sorted(c.items())) for name, c in sorted(counts.items())},
        'min_deficit': dict(sorted(min_deficit.items())),
        'errors': dict(sorted(errors.items())),
        'witnesses': witnesses,
        'rows': rows,
    }


def with_overrides(config: SuiteConfig, **overrides) -> SuiteConfig:
    """Copy of ``config`` with every override that is not None applied."""
    return replace(config, **{k: v for k, v in overrides.items() if v is not None})
