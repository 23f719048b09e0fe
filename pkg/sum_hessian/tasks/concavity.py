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

""" Concavity quadratic forms of sigma_k and of the sum operator F:
assembly, pointwise PSD verification, seeded sweeps over the cone, the
Andrews-type second-derivative inequality and the trace bounds. """

from dataclasses import asdict, dataclass, field, replace
import enum
import logging
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence
from typing import Tuple

import numpy as np

from sum_hessian.config import get_config
from sum_hessian.errors import ConditionViolated, DegenerateSpectrum
from sum_hessian.errors import InvalidInput, NonpositiveOperatorValue
from sum_hessian.errors import NotInCone
from sum_hessian.spectrum import SpectrumLike, to_array
from sum_hessian.tasks import sampling
from sum_hessian.tasks.cone import check_condition, in_lifted_cone
from sum_hessian.tasks.operator import MatrixPoint, OperatorSpec, eval_F
from sum_hessian.tasks.operator import grad_F, hess_F, matrix_F_derivatives
from sum_hessian.tasks.operator import root_grad, second_derivative_form
from sum_hessian.tasks.symfun import quotient_hess, sigma, sigma_table
from sum_hessian.utils import agree, rel_discrepancy, run_threaded

_logger = logging.getLogger(__name__)


class Variant(enum.Enum):
  SIGMA_K = 'sigma-k'
  SUM_F = 'sum-f'
  N_MINUS_ONE = 'n-minus-one'


@dataclass(frozen=True)
class QuadFormSpec:
  """Which concavity inequality to assemble, and its constants.

  Attributes:
    variant: sigma_k form, the sum-operator form, or the k = n - 1 form.
    operator: F; m must be 0 for SIGMA_K.
    delta: semi-convexity constant in [0, 1).
    gamma: gain on the right side; None picks 1/(1+16k), or 1/(2n) for
      N_MINUS_ONE.
    lambda1_slack: the additive term of the N_MINUS_ONE denominators
      (lambda_1 - lambda_i + slack) lambda_1.
    rhs_reading: 'first' puts F_1 on the right side of the N_MINUS_ONE
      form, 'trace' puts sum_i F_i there.
  """
  variant: Variant
  operator: OperatorSpec
  delta: float = 0.0
  gamma: Optional[float] = None
  lambda1_slack: float = 1.0
  rhs_reading: str = 'first'

  def __post_init__(self):
    object.__setattr__(self, 'variant', Variant(self.variant))
    if not 0.0 <= self.delta < 1.0:
      raise InvalidInput(f'delta={self.delta} must lie in [0, 1).')
    if self.variant is Variant.SIGMA_K and self.operator.m:
      raise InvalidInput('The sigma-k form takes an operator with m = 0.')
    if (self.variant is Variant.N_MINUS_ONE
        and self.operator.k != self.operator.n - 1):
      raise InvalidInput('The n-minus-one form needs k = n - 1.')
    if self.rhs_reading not in ('first', 'trace'):
      raise InvalidInput(f'Unknown rhs_reading {self.rhs_reading}.')
    if self.gamma is None:
      object.__setattr__(self, 'gamma', default_gamma(self.variant,
                                                      self.operator))
    if self.gamma < 0:
      raise InvalidInput(f'gamma={self.gamma} must be nonnegative.')

  @property
  def c_sq(self) -> float:
    return 1.0 if self.variant is Variant.N_MINUS_ONE else 2.0

  def to_record(self) -> Dict[str, Any]:
    return {'variant': self.variant.value,
            'operator': self.operator.to_record(),
            'delta': self.delta, 'gamma': self.gamma,
            'lambda1_slack': self.lambda1_slack,
            'rhs_reading': self.rhs_reading}

  @classmethod
  def from_record(cls, record: Dict[str, Any]) -> 'QuadFormSpec':
    record = dict(record)
    record['operator'] = OperatorSpec.from_record(record['operator'])
    return cls(**record)


def default_gamma(variant: Variant, operator: OperatorSpec) -> float:
  if Variant(variant) is Variant.N_MINUS_ONE:
    return 1.0 / (2 * operator.n)
  return 1.0 / (1 + 16 * operator.k)


class _Pieces(NamedTuple):
  lam: np.ndarray
  value: float
  grad: np.ndarray
  hess: np.ndarray
  denominators: np.ndarray
  rhs_weight: float


def _pieces(spec: QuadFormSpec, lam: SpectrumLike) -> _Pieces:
  arr = to_array(lam)
  if any(arr[i] < arr[i + 1] for i in range(arr.size - 1)):
    raise InvalidInput(f'lambda must be sorted descending: {arr.tolist()}')
  op = spec.operator
  value = eval_F(op, arr)
  if not value > 0:
    raise NonpositiveOperatorValue(f'F = {value:.6g} at {arr.tolist()}.')
  if not in_lifted_cone(arr, op.y, op.k).member:
    raise NotInCone(f'{arr.tolist()} with y={list(op.y)} is outside '
                    f'Gamma_{op.k}.')
  lam1 = arr[0]
  if not lam1 > 0:
    raise NotInCone(f'lambda_1 = {lam1:.6g} must be positive.')
  if spec.variant is Variant.N_MINUS_ONE:
    denominators = (lam1 - arr + spec.lambda1_slack) * lam1
  else:
    denominators = np.full(arr.size, (1.0 + 2.0 * spec.delta) * lam1)
  grad = grad_F(op, arr)
  if spec.variant is Variant.N_MINUS_ONE and spec.rhs_reading == 'trace':
    rhs_weight = float(np.sum(grad))
  else:
    rhs_weight = float(grad[0])
  return _Pieces(lam=arr, value=value, grad=grad, hess=hess_F(op, arr),
                 denominators=denominators, rhs_weight=rhs_weight)


def _form(spec: QuadFormSpec, pieces: _Pieces, gamma: float) -> np.ndarray:
  phi = pieces.value
  g = pieces.grad
  matrix = -pieces.hess / phi + spec.c_sq * np.outer(g, g) / phi**2
  bonus = 2.0 * g / (pieces.denominators * phi)
  bonus[0] = -(1.0 + gamma) * pieces.rhs_weight / (pieces.lam[0] * phi)
  matrix[np.diag_indices_from(matrix)] += bonus
  return (matrix + matrix.T) / 2.0


def assemble_form(spec: QuadFormSpec, lam: SpectrumLike) -> np.ndarray:
  """M with xi^T M xi = LHS(xi) - RHS(xi) of the variant's inequality."""
  return _form(spec, _pieces(spec, lam), spec.gamma)


def evaluate_inequality(spec: QuadFormSpec, lam: SpectrumLike,
                        xi: Sequence[float]) -> Tuple[float, float]:
  """Both sides of the inequality at xi, term by term."""
  arr = to_array(lam)
  xi = to_array(xi)
  op = spec.operator
  phi = eval_F(op, arr)
  n = arr.size
  lhs = 0.0
  for p in range(n):
    for q in range(n):
      if p != q:
        lifted = np.delete(op.lifted(arr), [p, q])
        lhs -= sigma(op.k - 2, lifted) * xi[p] * xi[q] / phi
  first = [sigma(op.k - 1, np.delete(op.lifted(arr), i)) for i in range(n)]
  lhs += spec.c_sq * sum(f * x for f, x in zip(first, xi))**2 / phi**2
  lam1 = arr[0]
  for i in range(1, n):
    if spec.variant is Variant.N_MINUS_ONE:
      denominator = (lam1 - arr[i] + spec.lambda1_slack) * lam1
    else:
      denominator = (1.0 + 2.0 * spec.delta) * lam1
    lhs += 2.0 * first[i] * xi[i]**2 / (denominator * phi)
  weight = first[0]
  if spec.variant is Variant.N_MINUS_ONE and spec.rhs_reading == 'trace':
    weight = sum(first)
  rhs = (1.0 + spec.gamma) * weight * xi[0]**2 / (lam1 * phi)
  return lhs, rhs


@dataclass
class QuadFormReport:
  """Verdict of one concavity form at one point."""
  matrix: np.ndarray
  min_eigenvalue: float
  worst_direction: np.ndarray
  margin: float
  passed: bool

  def to_record(self) -> Dict[str, Any]:
    return {'matrix': self.matrix.tolist(),
            'min_eigenvalue': self.min_eigenvalue,
            'worst_direction': self.worst_direction.tolist(),
            'margin': self.margin, 'passed': self.passed}


def _psd_report(matrix: np.ndarray, tol_psd: float) -> QuadFormReport:
  values, vectors = np.linalg.eigh(matrix)
  norm = float(np.linalg.norm(matrix))
  min_eig = float(values[0])
  margin = min_eig / norm if norm > 0 else min_eig
  return QuadFormReport(matrix=matrix, min_eigenvalue=min_eig,
                        worst_direction=vectors[:, 0], margin=margin,
                        passed=margin >= -tol_psd)


def verify_pointwise(spec: QuadFormSpec, lam: SpectrumLike,
                     tol_psd: Optional[float] = None) -> QuadFormReport:
  tol_psd = get_config('tol-psd') if tol_psd is None else tol_psd
  return _psd_report(assemble_form(spec, lam), tol_psd)


def max_gamma(spec: QuadFormSpec, lam: SpectrumLike) -> Optional[float]:
  """Largest gamma keeping the form PSD at lam; None when even gamma = 0
  fails to give a positive definite form."""
  pieces = _pieces(spec, lam)
  base = _form(spec, pieces, 0.0)
  try:
    np.linalg.cholesky(base)
  except np.linalg.LinAlgError:
    return None
  weight = pieces.rhs_weight / (pieces.lam[0] * pieces.value)
  unit = np.zeros(base.shape[0])
  unit[0] = 1.0
  return float(1.0 / (weight * np.linalg.solve(base, unit)[0]))


@dataclass(frozen=True)
class SweepRegion:
  """Where and how densely a sweep samples.

  Attributes:
    deltas: semi-convexity constants, one cell row each (lambda_n >=
      -delta lambda_1). Ignored by N_MINUS_ONE, which samples down to
      -lambda_1/(n-1).
    levels: caps on the normalized level sigma_k(lambda/lambda_1).
    samples: draws per cell.
    seed: root seed; sample i of cell c uses child_rng(seed, c, i).
    m: number of random nonnegative roots per sample (0 keeps the
      operator's roots).
    y_max: roots are uniform in [0, y_max].
    lambda1: raw lambda_1 values of the N_MINUS_ONE cells.
    decades: target levels are log-uniform over this many decades below
      each cap.
    points: explicit descending points that replace sampling.
    workers: threads per cell.
  """
  deltas: Tuple[float, ...] = (0.005,)
  levels: Tuple[float, ...] = (1e-4,)
  samples: int = 1000
  seed: int = 0
  m: int = 0
  y_max: float = 2.0
  lambda1: Tuple[float, ...] = (100.0, 1000.0)
  decades: float = 3.0
  points: Tuple[Tuple[float, ...], ...] = ()
  workers: int = 1

  def to_record(self) -> Dict[str, Any]:
    return {key: (list(value) if isinstance(value, tuple) else value)
            for key, value in asdict(self).items()}


@dataclass
class SweepCell:
  delta: float
  level: float
  lambda1: float
  requested: int
  samples: int = 0
  passed: int = 0
  min_margin: Optional[float] = None
  max_gamma: Optional[float] = None
  witness: Optional[Dict[str, Any]] = None

  @property
  def pass_fraction(self) -> Optional[float]:
    return self.passed / self.samples if self.samples else None

  def to_record(self) -> Dict[str, Any]:
    record = asdict(self)
    record['pass_fraction'] = self.pass_fraction
    return record


@dataclass
class SweepFrontier:
  """Per-cell pass fractions and worst margins of one sweep."""
  spec: QuadFormSpec
  region: SweepRegion
  cells: List[SweepCell] = field(default_factory=list)

  @property
  def passed(self) -> bool:
    sampled = [c for c in self.cells if c.samples]
    return bool(sampled) and all(c.passed == c.samples for c in sampled)

  @property
  def witnesses(self) -> List[Dict[str, Any]]:
    return [c.witness for c in self.cells if c.witness is not None]

  def rows(self) -> List[Dict[str, Any]]:
    """Flat rows for the CSV projection."""
    op = self.spec.operator
    rows = []
    for cell in self.cells:
      witness = cell.witness or {}
      rows.append({
        'variant': self.spec.variant.value, 'n': op.n, 'k': op.k,
        'm': self.region.m or op.m, 'delta': cell.delta,
        'level': cell.level, 'lambda1': cell.lambda1,
        'samples': cell.samples, 'pass_fraction': cell.pass_fraction,
        'min_margin': cell.min_margin, 'max_gamma': cell.max_gamma,
        'witness_lam': witness.get('lam'), 'witness_y': witness.get('y'),
        'witness_margin': witness.get('margin')})
    return rows

  def to_record(self) -> Dict[str, Any]:
    return {'spec': self.spec.to_record(), 'region': self.region.to_record(),
            'cells': [c.to_record() for c in self.cells],
            'passed': self.passed}


class _Outcome(NamedTuple):
  lam: np.ndarray
  y: np.ndarray
  report: QuadFormReport
  gamma_sup: Optional[float]


def _draw(spec: QuadFormSpec, region: SweepRegion, cell: SweepCell,
          cell_id: int, index: int) -> Optional[sampling.LevelPoint]:
  op = spec.operator
  rng = sampling.child_rng(region.seed, cell_id, index)
  if spec.variant is Variant.SIGMA_K:
    roots = np.zeros(0)
  elif region.m:
    roots = sampling.nonneg_roots(rng, region.m, region.y_max)
  else:
    roots = np.asarray(op.y)
  if spec.variant is Variant.N_MINUS_ONE:
    return sampling.level_point(rng, op.n, op.k, -1.0 / (op.n - 1),
                                cell.level, roots, lambda1=cell.lambda1,
                                scale_roots=False, decades=region.decades)
  return sampling.level_point(rng, op.n, op.k, -cell.delta, cell.level,
                              roots, decades=region.decades)


def _evaluate(spec: QuadFormSpec, lam: np.ndarray, y: np.ndarray,
              tol_psd: float) -> _Outcome:
  op = spec.operator
  if tuple(y) != op.y:
    spec = replace(spec, operator=OperatorSpec.from_roots(op.n, op.k, y))
  report = verify_pointwise(spec, lam, tol_psd)
  return _Outcome(lam=lam, y=y, report=report,
                  gamma_sup=max_gamma(spec, lam))


def sweep(spec: QuadFormSpec, region: SweepRegion,
          tol_psd: Optional[float] = None,
          progress: Optional[Callable[[int], None]] = None) -> SweepFrontier:
  """Sample every (delta or lambda_1, level) cell and verify the form at
  each accepted point. Sample order, and so the frontier, is fixed by the
  seed whatever region.workers is."""
  tol_psd = get_config('tol-psd') if tol_psd is None else tol_psd
  frontier = SweepFrontier(spec=spec, region=region)
  op = spec.operator
  if spec.variant is Variant.N_MINUS_ONE:
    rows = [(1.0 / (op.n - 1), l1) for l1 in region.lambda1]
  else:
    rows = [(delta, 1.0) for delta in region.deltas]

  cell_id = 0
  for delta, lam1 in rows:
    cell_spec = replace(spec, delta=delta)
    for level in region.levels:
      count = len(region.points) if region.points else region.samples
      cell = SweepCell(delta=delta, level=level, lambda1=lam1,
                       requested=count)

      def run_chunk(indices, cell=cell, cell_id=cell_id,
                    cell_spec=cell_spec):
        outcomes = []
        for index in indices:
          if region.points:
            lam = np.asarray(region.points[index], dtype=float)
            y = np.asarray(cell_spec.operator.y)
          else:
            point = _draw(cell_spec, region, cell, cell_id, index)
            if point is None:
              outcomes.append(None)
              continue
            lam, y = point.lam, point.y
          outcomes.append(_evaluate(cell_spec, lam, y, tol_psd))
        if progress:
          progress(len(indices))
        return outcomes

      outcomes = run_threaded(run_chunk, range(count), region.workers)
      _collect(cell, outcomes, region.seed, cell_id)
      _logger.info('sweep %s delta=%g level=%g lambda1=%g: %d/%d passed, '
                   'min margin %s', spec.variant.value, delta, level, lam1,
                   cell.passed, cell.samples, cell.min_margin)
      frontier.cells.append(cell)
      cell_id += 1
  return frontier


def _collect(cell: SweepCell, outcomes: List[Optional[_Outcome]], seed: int,
             cell_id: int) -> None:
  worst = None
  for index, outcome in enumerate(outcomes):
    if outcome is None:
      continue
    cell.samples += 1
    margin = outcome.report.margin
    # No positive definite form even at gamma = 0 is a failure.
    gamma_sup = 0.0 if outcome.gamma_sup is None else outcome.gamma_sup
    passed = outcome.report.passed and outcome.gamma_sup is not None
    if passed:
      cell.passed += 1
    if cell.min_margin is None or margin < cell.min_margin:
      cell.min_margin = margin
    if cell.max_gamma is None or gamma_sup < cell.max_gamma:
      cell.max_gamma = gamma_sup
    if not passed and (worst is None or margin < worst):
      worst = margin
      cell.witness = {
        'lam': outcome.lam.tolist(), 'y': outcome.y.tolist(),
        'margin': margin,
        'worst_direction': outcome.report.worst_direction.tolist(),
        'seed': seed, 'cell': cell_id, 'index': index,
        'delta': cell.delta, 'level': cell.level}


class AndrewsGap(NamedTuple):
  lhs: float
  rhs: float
  gap: float


def andrews_gap(spec: OperatorSpec, pt: MatrixPoint, t: np.ndarray,
                lhs: Optional[float] = None) -> AndrewsGap:
  """-d^2 F[T, T] against its lower bound, in pt's eigenbasis.

  `lhs` may be supplied from an independent estimate, e.g. matrix finite
  differences; otherwise it is assembled from the pair coefficients.
  """
  lam = pt.eigvals.array
  gaps = np.abs(lam[:, None] - lam[None, :])[np.triu_indices(lam.size, 1)]
  if gaps.size and gaps.min() <= 1e-6:
    raise DegenerateSpectrum(f'Eigenvalues too close: {lam.tolist()}')
  derivs = matrix_F_derivatives(spec, pt)
  if lhs is None:
    lhs = -second_derivative_form(spec, pt, t, derivs)
  t_hat = pt.in_eigenbasis(t)
  diag = np.diag(t_hat)
  hess = hess_F(spec, lam)
  grad = grad_F(spec, lam)
  rhs = -float(diag @ hess @ diag)
  for p in range(1, lam.size):
    rhs += 2.0 * (grad[p] - grad[0]) / (lam[0] - lam[p]) * t_hat[0, p]**2
  return AndrewsGap(lhs=float(lhs), rhs=rhs, gap=float(lhs) - rhs)


def finite_difference_second_derivative(spec: OperatorSpec, s: np.ndarray,
                                        t: np.ndarray,
                                        h: float = 1e-4) -> float:
  """d^2/dh^2 F(lambda(S + hT)) by central differences on eigvalsh."""
  def value(mat):
    return eval_F(spec, np.linalg.eigvalsh(mat)[::-1])
  s = np.asarray(s, dtype=float)
  t = np.asarray(t, dtype=float)
  return (value(s + h * t) - 2.0 * value(s) + value(s - h * t)) / h**2


@dataclass
class TraceReport:
  """Weighted-trace identity and the sum-of-F_i growth ratio."""
  weighted_trace: float
  k_value: float
  slack: float
  euler_gap: float
  expanded_trace: float
  expanded_gap: float
  trace_sum: float
  trace_sum_expanded: float
  trace_sum_gap: float
  lambda1_power: float
  ratio: Optional[float]
  passed: bool

  def to_record(self) -> Dict[str, Any]:
    return asdict(self)


def trace_bounds(spec: OperatorSpec, lam: SpectrumLike, which_condition: int,
                 tol: Optional[float] = None) -> TraceReport:
  """sum F_i lambda_i <= kF, with the Euler identity behind it, and the
  ratio sum F_i / lambda_1^(1/(k-1))."""
  tol = get_config('rel-tol') if tol is None else tol
  arr = np.sort(to_array(lam))[::-1]
  if not check_condition(arr, spec.y, spec.a, spec.k, which_condition):
    raise ConditionViolated(f'Condition {which_condition} fails at '
                            f'{arr.tolist()} for {spec.to_record()}.')
  value = eval_F(spec, arr)
  if not value > 0:
    raise NonpositiveOperatorValue(f'F = {value:.6g} at {arr.tolist()}.')
  k, n = spec.k, spec.n
  grad = grad_F(spec, arr)
  table = sigma_table(arr)
  weighted = float(np.dot(grad, arr))
  roots_term = float(np.dot(root_grad(spec, arr), spec.y)) if spec.m else 0.0
  expanded = k * table[k] + sum((k - i) * a_i * table[k - i]
                                for i, a_i in enumerate(spec.a, start=1))
  trace_sum = float(np.sum(grad))
  trace_sum_expanded = (n - k + 1) * table[k - 1] + sum(
    (n - k + i + 1) * a_i * table[k - i - 1]
    for i, a_i in enumerate(spec.a, start=1))
  power = arr[0] ** (1.0 / (k - 1)) if arr[0] > 0 else 0.0
  euler_gap = rel_discrepancy(weighted + roots_term, k * value)
  expanded_gap = rel_discrepancy(weighted, expanded)
  trace_sum_gap = rel_discrepancy(trace_sum, trace_sum_expanded)
  slack = k * value - weighted
  passed = (slack >= -tol * max(1.0, k * value)
            and agree(weighted + roots_term, k * value, tol)
            and agree(weighted, expanded, tol)
            and agree(trace_sum, trace_sum_expanded, tol))
  return TraceReport(weighted_trace=weighted, k_value=k * value, slack=slack,
                     euler_gap=euler_gap, expanded_trace=expanded,
                     expanded_gap=expanded_gap, trace_sum=trace_sum,
                     trace_sum_expanded=trace_sum_expanded,
                     trace_sum_gap=trace_sum_gap, lambda1_power=power,
                     ratio=trace_sum / power if power else None,
                     passed=passed)


def _orthogonal_part(vec: np.ndarray, ref: np.ndarray) -> np.ndarray:
  norm = float(np.dot(ref, ref))
  if norm == 0.0:
    return vec
  return vec - np.dot(vec, ref) / norm * ref


def quotient_concavity_ratio(lam: SpectrumLike, xi: Sequence[float],
                             deleted: Sequence[int] = ()) -> Optional[float]:
  """-d^2_xi q_2 of lambda with the `deleted` entries thrown out, over
  |[xi]^perp|^2 / sigma_1 of the same shortened vectors. At least 1 on
  Gamma_2; None when xi is parallel to lambda there."""
  arr = np.delete(to_array(lam), list(deleted))
  xi = np.delete(to_array(xi), list(deleted))
  numerator = -float(xi @ quotient_hess(2, arr) @ xi)
  perp = _orthogonal_part(xi, arr)
  denominator = float(np.dot(perp, perp)) / float(np.sum(arr))
  if denominator <= 1e-14 * float(np.dot(xi, xi)) / abs(float(np.sum(arr))):
    return None
  return numerator / denominator


def decomposition_ratio(lam: SpectrumLike, direction: Sequence[float],
                        k: int) -> Optional[float]:
  """-sigma_{k-1} d^2 q_k over its two-term lower bound, for a direction
  with zero first entry and tail orthogonal to lambda_k..lambda_n (the
  direction is projected onto that set first)."""
  arr = np.sort(to_array(lam))[::-1]
  g = to_array(direction).copy()
  g[0] = 0.0
  g[k - 1:] = _orthogonal_part(g[k - 1:], arr[k - 1:])
  numerator = -sigma(k - 1, arr) * float(g @ quotient_hess(k, arr) @ g)
  head = float(np.prod(arr[:k - 1]))
  first = sum(head * arr[k - 1]**2 * g[j]**2 / arr[j]**3
              for j in range(k - 1))
  second = float(np.prod(arr[:k - 2])) * float(np.sum(g[k - 1:]**2))
  denominator = first + second
  if denominator <= 0:
    return None
  return numerator / denominator


def spot_check_constants(seed: int, n: int, k: int,
                         samples: int = 200) -> Dict[str, Optional[float]]:
  """Smallest observed ratios of the two q_k lower bounds on Gamma_k."""
  quotient, decomposition = [], []
  for index in range(samples):
    rng = sampling.child_rng(seed, index)
    lam = sampling.cone_point(rng, n, k)
    xi = rng.normal(size=n)
    deleted = sorted(rng.choice(n, size=k - 2, replace=False).tolist())
    ratio = quotient_concavity_ratio(lam, xi, deleted)
    if ratio is not None:
      quotient.append(ratio)
    ratio = decomposition_ratio(lam, rng.normal(size=n), k)
    if ratio is not None:
      decomposition.append(ratio)
  return {'quotient_concavity': min(quotient, default=None),
          'decomposition': min(decomposition, default=None),
          'samples': samples}
