# Copyright 2025 The Sum Hessian Lab Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

""" Command table: one runner per subcommand, then reports, witnesses and
the exit status. """

import argparse
from dataclasses import asdict, dataclass, field
import logging
import os
import time
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from sum_hessian import messages
from sum_hessian.config import get_config, load_config_file
from sum_hessian.errors import ConditionViolated, DegenerateSpectrum
from sum_hessian.errors import InvalidInput, NoRealRoots
from sum_hessian.tasks import cone as cone_lib
from sum_hessian.tasks import concavity, reports, sampling, solver, symfun
from sum_hessian.tasks.grid import Domain
from sum_hessian.tasks.operator import MatrixPoint, OperatorSpec
from sum_hessian.tasks.operator import coeffs_from_roots, eval_F
from sum_hessian.tasks.operator import eval_F_expanded, grad_F, hess_F
from sum_hessian.tasks.operator import matrix_F_derivatives, root_grad
from sum_hessian.tasks.operator import roots_from_coeffs
from sum_hessian.tasks.operator import second_derivative_form
from sum_hessian.tasks.pre_validations import RunConfig
from sum_hessian.tasks.witness import archive_witness
from sum_hessian.utils import Tracker, agree, max_discrepancy
from sum_hessian.utils import rel_discrepancy

_logger = logging.getLogger(__name__)

HOMOGENEITY_SCALES = (0.5, 2.0, 10.0)
FD_REL_TOL = 1e-5
MATRIX_FD_REL_TOL = 1e-4
MATRIX_FD_STEP = 1e-4
BASIS_TOL = 1e-8
EXACT_RIGIDITY_TOL = 1e-6
ROUND_TRIP_TOL = 1e-8


@dataclass
class Witness:
  """A failed check and the flags that reproduce it."""
  overrides: Dict[str, Any]
  tag: Any
  details: Dict[str, Any] = field(default_factory=dict)
  argv: Optional[List[str]] = None


@dataclass
class Outcome:
  results: Dict[str, Any]
  passed: bool
  provenance: List[str]
  rows: List[Dict[str, Any]] = field(default_factory=list)
  witnesses: List[Witness] = field(default_factory=list)
  files: Dict[str, Any] = field(default_factory=dict)


def build_operator(args: argparse.Namespace) -> OperatorSpec:
  """--y wins over --a; neither gives F = sigma_k."""
  if getattr(args, 'y', None):
    return OperatorSpec.from_roots(args.n, args.k, args.y)
  if getattr(args, 'a', None):
    return OperatorSpec.from_coeffs(args.n, args.k, args.a)
  return OperatorSpec.identity(args.n, args.k)


def _operator_flags(spec: OperatorSpec) -> Dict[str, Any]:
  return {'n': spec.n, 'k': spec.k, 'y': list(spec.y), 'a': None}


def _tracked(total: int, label: str):
  tracker = Tracker(total, label)
  tracker.start()
  return tracker


def _run_symcheck(run: RunConfig, args: argparse.Namespace) -> Outcome:
  if args.x:
    vectors = [np.asarray(args.x, dtype=float)]
  else:
    vectors = []
    for index in range(args.samples):
      rng = sampling.child_rng(run.seed, index)
      vectors.append(sampling.uniform_vector(
        rng, int(rng.integers(1, args.n_max + 1))))
  tol = get_config('rel-tol')
  worst: Dict[str, float] = {}
  per_n: Dict[int, Dict[str, Any]] = {}
  witnesses = []
  skipped = 0

  def note(name, value):
    worst[name] = max(worst.get(name, 0.0), value)
    return value <= tol

  tracker = _tracked(len(vectors), 'symcheck')
  for index, x in enumerate(vectors):
    n = x.size
    ks = [args.k] if args.k else range(1, n + 1)
    row = per_n.setdefault(n, {'n': n, 'samples': 0, 'max_discrepancy': 0.0})
    row['samples'] += 1
    failed = []
    for k in ks:
      value = symfun.sigma(k, x)
      if not note('subsets', rel_discrepancy(
          value, symfun.sigma_by_subsets(k, x))):
        failed.append(('subsets', k))
      for t in HOMOGENEITY_SCALES:
        if not note('homogeneity', rel_discrepancy(
            symfun.sigma(k, t * x), t**k * value)):
          failed.append(('homogeneity', k))
      report = symfun.identity_suite(x, k, tol)
      skipped += len(report.skipped)
      for name, gap in report.discrepancies.items():
        if not note(name, gap):
          failed.append((name, k))
      row['max_discrepancy'] = max(row['max_discrepancy'],
                                   report.max_discrepancy)
    newton = symfun.newton_inequalities(x, tol)
    if not newton.passed:
      failed.append(('newton', None))
    worst['newton'] = min(worst.get('newton', 0.0), newton.worst_gap)
    if failed:
      witnesses.append(Witness(
        overrides={'x': x.tolist(), 'k': args.k, 'samples': 1},
        tag=index, details={'failed': [list(f) for f in failed]}))
    tracker.advance()
  tracker.finish()

  identity_worst = {k: v for k, v in worst.items() if k != 'newton'}
  results = {'samples': len(vectors), 'discrepancies': worst,
             'max_discrepancy': max(identity_worst.values(), default=0.0),
             'quotient_skips': skipped, 'failures': len(witnesses)}
  return Outcome(results=results, passed=not witnesses,
                 provenance=['sigma:subset-enumeration', 'sigma:homogeneity',
                             'sigma:deletion-identity',
                             'sigma:trace-identities',
                             'sigma:square-trace-identity',
                             'quotient:second-derivative-identity',
                             'sigma:newton-inequalities'],
                 rows=[per_n[n] for n in sorted(per_n)],
                 witnesses=witnesses[:1])


def _cone_properties(lam: np.ndarray, y: np.ndarray, k: int,
                     stats: Dict[str, List[float]]) -> List[str]:
  """Property failures at one point; empirical constants go to stats."""
  n = lam.size
  a = coeffs_from_roots(y)
  failures = []
  plain = cone_lib.in_gamma_k(lam, k)
  lifted = cone_lib.in_lifted_cone(lam, y, k)
  if plain.member and not all(cone_lib.in_gamma_k(lam, j).member
                              for j in range(1, k)):
    failures.append('nesting')
  for t in HOMOGENEITY_SCALES:
    if cone_lib.in_lifted_cone(t * lam, t * y, k).member != lifted.member:
      failures.append('scale-invariance')
      break
  cond1 = cone_lib.check_condition(lam, y, a, k, 1)
  cond2 = cone_lib.check_condition(lam, y, a, k, 2)
  # Both conditions are stated for admissible points, where F > 0.
  admissible = symfun.sigma(k, np.concatenate([lam, y])) > 0
  if admissible and cond2 and not lifted.member:
    failures.append('condition-2-implies-lifted')
  if admissible and y.size == 1 and a[0] > 0 and cond1 != cond2:
    failures.append('conditions-agree-for-one-root')
  if plain.member:
    ineq = symfun.cone_inequalities(lam, k)
    if not ineq.passed:
      failures.append('cone-inequalities')
    stats['deleted_ratio'].append(ineq.deleted_ratio)
    stats['xk_ratio'].append(symfun.xk_bound_check(lam, k).ratio)
    if k >= 2:
      stats['maclaurin'].append(symfun.maclaurin_ratio(lam, k))
  if lifted.member and k == n - 1 and n >= 2:
    stats['pinch'].append(cone_lib.pinch_check(lam, y, n))
  if lifted.member and k == n:
    floor = cone_lib.full_degree_floor(lam, y)
    if not floor.smallest > floor.floor:
      failures.append('full-degree-floor')
  return failures


def _run_cone(run: RunConfig, args: argparse.Namespace) -> Outcome:
  spec = build_operator(args)
  n, k = spec.n, spec.k
  stats = {'deleted_ratio': [], 'xk_ratio': [], 'maclaurin': [], 'pinch': []}
  provenance = ['cone:definition', 'cone:lifted-definition',
                'cone:conditions', 'cone:nesting', 'cone:scale-invariance',
                'sigma:cone-inequalities']
  if args.lam:
    lam = np.asarray(args.lam, dtype=float)
    y = np.asarray(spec.y)
    failures = _cone_properties(lam, y, k, stats)
    verdicts = {'gamma_k': asdict(cone_lib.in_gamma_k(lam, k)),
                'lifted': asdict(cone_lib.in_lifted_cone(lam, y, k)),
                'condition_1': cone_lib.check_condition(lam, y, spec.a, k, 1),
                'condition_2': cone_lib.check_condition(lam, y, spec.a, k, 2),
                'cone_margin': cone_lib.cone_margin(lam, k)}
    if np.sum(lam) > 0:
      verdicts['semiconvexity_ratio'] = cone_lib.semiconvexity_ratio(lam)
    witnesses = []
    if failures:
      witnesses.append(Witness(overrides={'lam': lam.tolist(),
                                          **_operator_flags(spec)},
                               tag='point', details={'failed': failures}))
    return Outcome(results={'verdicts': verdicts, 'failures': failures},
                   passed=not failures, provenance=provenance,
                   witnesses=witnesses)

  fixed_roots = bool(args.a or args.y)
  members = 0
  failures = []
  tracker = _tracked(args.samples, 'cone')
  for index in range(args.samples):
    rng = sampling.child_rng(run.seed, 0, index)
    lam = (sampling.uniform_vector(rng, n, -1.0, 1.0)
           + rng.uniform(0.0, 1.5)) * 10.0 ** rng.uniform(-1.0, 1.0)
    y = (np.asarray(spec.y) if fixed_roots
         else sampling.nonneg_roots(rng, 1, 2.0))
    members += cone_lib.in_lifted_cone(lam, y, k).member
    failed = _cone_properties(lam, y, k, stats)
    if failed:
      failures.append({'index': index, 'lam': lam.tolist(),
                       'y': y.tolist(), 'failed': failed})
    tracker.advance()
  tracker.finish()

  m = spec.m if fixed_roots else 1
  found = cone_lib.find_condition_witness(sampling.child_rng(run.seed, 1, 0),
                                          n, k, m)
  results = {
    'samples': args.samples, 'members': members, 'failures': failures,
    'deleted_ratio_min': min(stats['deleted_ratio'], default=None),
    'xk_ratio_max': max(stats['xk_ratio'], default=None),
    'maclaurin_min': min(stats['maclaurin'], default=None),
    'pinch_envelope': cone_lib.pinch_envelope(stats['pinch']),
    'condition_witness': None if found is None else {
      'lam': found[0].tolist(), 'y': found[1].tolist()}}
  witnesses = [Witness(overrides={'lam': f['lam'], 'n': n, 'k': k,
                                  'y': f['y'], 'a': None},
                       tag=f['index'], details={'failed': f['failed']})
               for f in failures[:1]]
  return Outcome(results=results, passed=not failures, provenance=provenance,
                 witnesses=witnesses)


def _run_rr(run: RunConfig, args: argparse.Namespace) -> Outcome:
  provenance = ['operator:real-roots', 'operator:vieta']
  if args.y:
    y = tuple(sorted(args.y, reverse=True))
    a = coeffs_from_roots(y)
  elif args.a:
    a = tuple(args.a)
    try:
      y = roots_from_coeffs(a)
    except NoRealRoots as exc:
      return Outcome(results={'a': list(a), 'error': type(exc).__name__,
                              'message': str(exc)},
                     passed=False, provenance=provenance,
                     witnesses=[Witness(overrides={'a': list(a), 'y': None},
                                        tag='roots')])
  else:
    raise InvalidInput('rr needs --a or --y.')
  pairs = list(zip(coeffs_from_roots(y), a))
  round_trip = max_discrepancy(pairs)
  passed = all(agree(e, c, rel_tol=ROUND_TRIP_TOL) for e, c in pairs)
  return Outcome(results={'a': list(a), 'y': list(y),
                          'round_trip_discrepancy': round_trip},
                 passed=passed, provenance=provenance)


def _lifting_gap(rng: np.random.Generator) -> float:
  """Worst gap of the lifting identity over every degree for one random
  (lambda, y)."""
  n = int(rng.integers(1, 9))
  m = int(rng.integers(0, 4))
  lam = sampling.uniform_vector(rng, n)
  y = rng.uniform(-2.0, 2.0, size=m)
  table = symfun.sigma_table(lam)
  a = coeffs_from_roots(y)
  lifted = np.concatenate([lam, y])
  return max_discrepancy(
    (symfun.sigma(k, lifted),
     table[k] + sum(c * table[k - r] for r, c in enumerate(a, start=1)))
    for k in range(n + m + 1))


def _run_operator_check(run: RunConfig, args: argparse.Namespace) -> Outcome:
  spec = build_operator(args)
  n = spec.n
  step = get_config('fd-step')
  worst = {'lifting': 0.0, 'expanded': 0.0, 'grad': 0.0, 'hess': 0.0,
           'euler': 0.0, 'basis': 0.0, 'matrix_second': 0.0}
  elliptic_failures = 0
  witnesses = []
  tracker = _tracked(args.samples, 'operator-check')
  for index in range(args.samples):
    rng = sampling.child_rng(run.seed, index)
    worst['lifting'] = max(worst['lifting'], _lifting_gap(rng))

    lam = sampling.uniform_vector(rng, n)
    worst['expanded'] = max(worst['expanded'], rel_discrepancy(
      eval_F(spec, lam), eval_F_expanded(spec, lam)))
    grad = grad_F(spec, lam)
    fd = np.zeros(n)
    fd_hess = np.zeros((n, n))
    for i in range(n):
      e = np.zeros(n)
      e[i] = step
      fd[i] = (eval_F(spec, lam + e) - eval_F(spec, lam - e)) / (2 * step)
      fd_hess[:, i] = (grad_F(spec, lam + e) - grad_F(spec, lam - e)) / (
        2 * step)
    worst['grad'] = max(worst['grad'], float(np.max(
      np.abs(grad - fd) / np.maximum(1.0, np.abs(fd)))))
    worst['hess'] = max(worst['hess'], float(np.max(
      np.abs(hess_F(spec, lam) - fd_hess) / np.maximum(1.0, np.abs(fd_hess)))))
    roots_term = float(np.dot(root_grad(spec, lam), spec.y)) if spec.m else 0.0
    worst['euler'] = max(worst['euler'], rel_discrepancy(
      float(np.dot(grad, lam)) + roots_term, spec.k * eval_F(spec, lam)))

    cone_lam = sampling.cone_point(rng, n, spec.k, spec.y)
    if not np.all(grad_F(spec, cone_lam) > 0):
      elliptic_failures += 1

    s = sampling.random_symmetric(rng, n)
    t = sampling.random_symmetric(rng, n)
    q = sampling.random_orthogonal(rng, n)
    pt = MatrixPoint.from_matrix(s)
    derivs = matrix_F_derivatives(spec, pt)
    rotated = matrix_F_derivatives(spec, MatrixPoint.from_matrix(q @ s @ q.T))
    worst['basis'] = max(
      worst['basis'], rel_discrepancy(derivs.value, rotated.value),
      float(np.max(np.abs(q @ derivs.dF @ q.T - rotated.dF)))
      / max(1.0, float(np.max(np.abs(derivs.dF)))))
    fd_second = concavity.finite_difference_second_derivative(
      spec, s, t, MATRIX_FD_STEP)
    assembled = second_derivative_form(spec, pt, t, derivs)
    worst['matrix_second'] = max(worst['matrix_second'],
                                 rel_discrepancy(assembled, fd_second))
    tracker.advance()
  tracker.finish()

  tol = get_config('rel-tol')
  limits = {'lifting': tol, 'expanded': tol, 'euler': tol,
            'grad': FD_REL_TOL, 'hess': FD_REL_TOL, 'basis': BASIS_TOL,
            'matrix_second': MATRIX_FD_REL_TOL}
  failed = sorted(name for name, value in worst.items()
                  if value > limits[name])
  if elliptic_failures:
    failed.append('ellipticity')
  if failed:
    witnesses.append(Witness(overrides=_operator_flags(spec), tag='suite',
                             details={'failed': failed}))
  results = {'samples': args.samples, 'operator': spec.to_record(),
             'max_discrepancy': worst, 'limits': limits,
             'ellipticity_failures': elliptic_failures,
             'failed': failed}
  return Outcome(results=results, passed=not failed,
                 provenance=['operator:lifting-identity',
                             'operator:derivatives',
                             'operator:euler-identity',
                             'operator:ellipticity',
                             'operator:matrix-derivatives'],
                 witnesses=witnesses)


def _quad_form_spec(args: argparse.Namespace,
                    delta: float) -> concavity.QuadFormSpec:
  return concavity.QuadFormSpec(
    variant=concavity.Variant(args.variant), operator=build_operator(args),
    delta=delta, gamma=args.gamma, rhs_reading=args.rhs_reading)


def _quad_form_flags(spec: concavity.QuadFormSpec) -> Dict[str, Any]:
  return {'variant': spec.variant.value, 'gamma': spec.gamma,
          'rhs_reading': spec.rhs_reading, **_operator_flags(spec.operator)}


_CONCAVITY_PROVENANCE = {
  concavity.Variant.SIGMA_K: 'concavity:sigma-k-form',
  concavity.Variant.SUM_F: 'concavity:sum-operator-form',
  concavity.Variant.N_MINUS_ONE: 'concavity:n-minus-one-form',
}


def _run_concavity_verify(run: RunConfig,
                          args: argparse.Namespace) -> Outcome:
  if not args.lam:
    raise InvalidInput('concavity verify needs --lam.')
  spec = _quad_form_spec(args, args.delta)
  report = concavity.verify_pointwise(spec, args.lam)
  results = {'spec': spec.to_record(), 'lam': list(args.lam),
             'report': report.to_record(),
             'max_gamma': concavity.max_gamma(spec, args.lam)}
  witnesses = []
  if not report.passed:
    witnesses.append(Witness(
      overrides={'lam': list(args.lam), 'delta': spec.delta,
                 **_quad_form_flags(spec)},
      tag='point', details={'margin': report.margin}))
  return Outcome(results=results, passed=report.passed,
                 provenance=[_CONCAVITY_PROVENANCE[spec.variant]],
                 witnesses=witnesses)


def _run_concavity_sweep(run: RunConfig, args: argparse.Namespace) -> Outcome:
  spec = _quad_form_spec(args, args.delta[0] if args.delta else 0.0)
  region = concavity.SweepRegion(
    deltas=tuple(args.delta), levels=tuple(args.level),
    samples=args.samples, seed=run.seed, m=args.m, y_max=args.y_max,
    lambda1=tuple(args.lambda1), workers=get_config('workers'))
  rows = (len(region.lambda1) if spec.variant is concavity.Variant.N_MINUS_ONE
          else len(region.deltas))
  tracker = _tracked(rows * len(region.levels) * region.samples,
                     'concavity sweep')
  frontier = concavity.sweep(spec, region, progress=tracker.advance)
  tracker.finish()

  witnesses = []
  for cell in frontier.cells:
    found = cell.witness
    if found is None:
      continue
    flags = _quad_form_flags(spec)
    flags['y'] = found['y']
    witnesses.append(Witness(
      overrides={'lam': found['lam'], 'delta': cell.delta, **flags},
      tag=f'cell{found["cell"]}-{found["index"]}', details=found,
      argv=['concavity', 'verify']))
  return Outcome(results=frontier.to_record(), passed=frontier.passed,
                 provenance=[_CONCAVITY_PROVENANCE[spec.variant],
                             'concavity:level-normalization'],
                 rows=frontier.rows(), witnesses=witnesses)


def _run_andrews(run: RunConfig, args: argparse.Namespace) -> Outcome:
  spec = build_operator(args)
  n = spec.n
  tol = get_config('tol-psd')
  checked = 0
  skipped = 0
  min_gap = None
  worst_fd = 0.0
  witnesses = []
  tracker = _tracked(args.samples, 'andrews')
  for index in range(args.samples):
    rng = sampling.child_rng(run.seed, index)
    lam = sampling.cone_point(rng, n, spec.k, spec.y)
    if np.min(-np.diff(lam)) < args.min_gap:
      skipped += 1
      tracker.advance()
      continue
    q = sampling.random_orthogonal(rng, n)
    s = q @ np.diag(lam) @ q.T
    t = sampling.random_symmetric(rng, n)
    try:
      pt = MatrixPoint.from_matrix(s)
      gap = concavity.andrews_gap(spec, pt, t)
    except DegenerateSpectrum:
      skipped += 1
      tracker.advance()
      continue
    fd_lhs = -concavity.finite_difference_second_derivative(
      spec, s, t, MATRIX_FD_STEP * max(1.0, float(np.max(np.abs(lam)))))
    worst_fd = max(worst_fd, rel_discrepancy(fd_lhs, gap.lhs))
    scale = max(1.0, abs(gap.lhs), abs(gap.rhs))
    relative = gap.gap / scale
    checked += 1
    min_gap = relative if min_gap is None else min(min_gap, relative)
    if relative < -tol and not witnesses:
      witnesses.append(Witness(
        overrides={**_operator_flags(spec), 'samples': index + 1},
        tag=index, details={'lam': lam.tolist(), 'S': s.tolist(),
                            'T': t.tolist(), 'gap': gap.gap}))
    tracker.advance()
  tracker.finish()

  constants = concavity.spot_check_constants(run.seed, n, spec.k,
                                             min(args.samples, 200))
  constants_ok = all(v is None or v > 0 for key, v in constants.items()
                     if key != 'samples')
  fd_ok = worst_fd <= MATRIX_FD_REL_TOL
  passed = not witnesses and fd_ok and constants_ok
  results = {'checked': checked, 'skipped': skipped, 'min_gap': min_gap,
             'fd_lhs_discrepancy': worst_fd, 'constants': constants,
             'operator': spec.to_record()}
  return Outcome(results=results, passed=passed,
                 provenance=['concavity:andrews-inequality',
                             'sigma:quotient-concavity',
                             'sigma:quotient-decomposition'],
                 witnesses=witnesses)


def _run_trace_bounds(run: RunConfig, args: argparse.Namespace) -> Outcome:
  spec = build_operator(args)
  provenance = ['operator:trace-identity', 'operator:trace-growth']
  if args.lam:
    report = concavity.trace_bounds(spec, args.lam, args.condition)
    witnesses = [] if report.passed else [Witness(
      overrides={'lam': list(args.lam), 'condition': args.condition,
                 **_operator_flags(spec)}, tag='point')]
    return Outcome(results={'report': report.to_record()},
                   passed=report.passed, provenance=provenance,
                   witnesses=witnesses)

  ratios = []
  checked = 0
  skipped = 0
  witnesses = []
  rows = []
  tracker = _tracked(args.samples, 'trace-bounds')
  for index in range(args.samples):
    rng = sampling.child_rng(run.seed, index)
    lambda1 = 10.0 ** rng.uniform(1.0, 4.0)
    point = sampling.level_point(rng, spec.n, spec.k, 0.0, lambda1**-spec.k,
                                 decades=0.0)
    if point is None:
      skipped += 1
      tracker.advance()
      continue
    try:
      lam = sampling.unit_level(spec, point.lam)
      report = concavity.trace_bounds(spec, lam, args.condition)
    except (ConditionViolated, InvalidInput):
      skipped += 1
      tracker.advance()
      continue
    checked += 1
    if report.ratio is not None:
      ratios.append(report.ratio)
    rows.append({'index': index, 'lambda1': lam[0],
                 'F': report.k_value / spec.k, 'slack': report.slack,
                 'euler_gap': report.euler_gap, 'ratio': report.ratio})
    if not report.passed and not witnesses:
      witnesses.append(Witness(
        overrides={'lam': lam.tolist(), 'condition': args.condition,
                   **_operator_flags(spec)}, tag=index))
    tracker.advance()
  tracker.finish()
  results = {'checked': checked, 'skipped': skipped,
             'min_ratio': min(ratios, default=None),
             'operator': spec.to_record(), 'condition': args.condition}
  return Outcome(results=results, passed=not witnesses,
                 provenance=provenance, rows=rows, witnesses=witnesses)


def _load_problem(path: str) -> solver.DirichletProblem:
  return solver.DirichletProblem.from_record(load_config_file(path))


def _run_solve(run: RunConfig, args: argparse.Namespace) -> Outcome:
  if args.problem:
    problem = _load_problem(args.problem)
    flags = {'problem': args.problem}
  else:
    spec = build_operator(args)
    problem = solver.DirichletProblem(
      operator=spec, domain=Domain.disk((0.0,) * spec.n, args.radius),
      h=args.h, psi=args.psi, condition=args.condition)
    flags = {**_operator_flags(spec), 'psi': args.psi,
             'radius': args.radius, 'h': args.h,
             'condition': args.condition}
  report = solver.newton_solve(problem)
  grid = problem.grid()
  field_u = grid.full_field(report.u)
  files = {}
  if 'csv' in run.emit:
    files['field_csv'] = reports.write_field_csv(
      os.path.join(run.output_dir, f'{run.name}-field.csv'), report.nodes,
      report.u, {'margin': report.margins})
  files['field_shlb'] = reports.write_shlb(
    os.path.join(run.output_dir, f'{run.name}-field.shlb'), field_u,
    problem.h)
  results = report.to_record()
  results['problem'] = problem.to_record()
  passed = report.converged and report.admissible_everywhere
  witnesses = [] if passed else [Witness(overrides=flags, tag='solve',
                                         details=results)]
  rows = [{'iteration': i, 'residual_inf': r}
          for i, r in enumerate(report.history)]
  return Outcome(results=results, passed=passed,
                 provenance=['solver:damped-newton', 'solver:admissibility',
                             'solver:pogorelov-functional'],
                 rows=rows, witnesses=witnesses, files=files)


def _run_rigidity(run: RunConfig, args: argparse.Namespace) -> Outcome:
  spec = build_operator(args)
  report = solver.rigidity_experiment(spec, args.radii, args.amplitude,
                                      args.mode, args.h)
  if args.amplitude:
    passed = report.non_increasing
  else:
    passed = all(d <= EXACT_RIGIDITY_TOL for d in report.deviations)
  witnesses = [] if passed else [Witness(
    overrides={**_operator_flags(spec), 'radii': list(args.radii),
               'amplitude': args.amplitude, 'mode': args.mode, 'h': args.h},
    tag='radii', details=report.to_record())]
  return Outcome(results=report.to_record(), passed=passed,
                 provenance=['solver:expanding-balls',
                             'solver:quadratic-fit'],
                 rows=report.rows, witnesses=witnesses)


_TASKS: Dict[str, Callable[[RunConfig, argparse.Namespace], Outcome]] = {
  'symcheck': _run_symcheck,
  'cone': _run_cone,
  'rr': _run_rr,
  'operator-check': _run_operator_check,
  'concavity-verify': _run_concavity_verify,
  'concavity-sweep': _run_concavity_sweep,
  'andrews': _run_andrews,
  'trace-bounds': _run_trace_bounds,
  'solve': _run_solve,
  'rigidity': _run_rigidity,
}


def _list_tasks(name: str) -> Callable[[RunConfig, argparse.Namespace],
                                       Outcome]:
  if name not in _TASKS:
    _logger.info('Unable to find "%s".', name)
    raise InvalidInput(f'Unknown command "{name}".')
  return _TASKS[name]


def call_tasks(run: RunConfig, args: argparse.Namespace) -> int:
  """Run the command, write its reports and witnesses, print the summary.
  Returns 0 when every check passed and 1 otherwise."""
  execute = _list_tasks(run.name)
  started = time.time()
  _logger.info('Running %s with seed %d', run.name, run.seed)
  outcome = execute(run, args)

  record = reports.envelope(run.name, run.seed, run.echo(),
                            outcome.provenance, outcome.passed,
                            outcome.results)
  if outcome.files:
    record['files'] = {key: os.path.basename(path)
                       for key, path in outcome.files.items()}
  paths = reports.emit(run.output_dir, run.name, record,
                       rows=outcome.rows, started=started)
  for witness in outcome.witnesses:
    archive_witness(run.output_dir, witness.argv or run.argv,
                    witness.overrides, run.seed, witness.tag,
                    witness.details)

  print(messages.summary(run.name, outcome.passed,
                         reports.to_plain(outcome.results)))
  print(messages.tip_report(paths[0], len(outcome.witnesses)))
  if not outcome.passed:
    _logger.warning('%s failed; %d witness(es) archived', run.name,
                    len(outcome.witnesses))
  return 0 if outcome.passed else 1
