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

""" Damped Newton solver for F(D2u) = psi(x) with Dirichlet data, the
Pogorelov functional, manufactured residuals and the expanding-ball
rigidity experiment. """

from dataclasses import dataclass, field
import itertools
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import optimize, sparse
from scipy.sparse import linalg as sparse_linalg

from sum_hessian.config import get_config
from sum_hessian.errors import InadmissibleExact, InvalidInput
from sum_hessian.errors import LinearSolveFailure, NoAdmissibleStart
from sum_hessian.errors import StalledLineSearch
from sum_hessian.tasks.grid import Domain, Grid, hessians
from sum_hessian.tasks.operator import OperatorSpec, eval_F, eval_F_batch
from sum_hessian.tasks.operator import grad_F_batch
from sum_hessian.tasks.symfun import sigma_batch

_logger = logging.getLogger(__name__)

MIN_INTERIOR_PER_AXIS = 8
MAX_BRACKET_DOUBLINGS = 60


@dataclass(frozen=True)
class BoundaryField:
  """Dirichlet data extended to the whole space.

  kind 'zero': 0. kind 'quadratic': c |x - center|^2 / 2. kind
  'perturbed': the quadratic plus amplitude * Im((x_1 + i x_2)^mode) /
  radius^mode, which is amplitude * sin(mode * theta) on the sphere of
  that radius.
  """
  kind: str = 'zero'
  c: float = 0.0
  center: Tuple[float, ...] = ()
  amplitude: float = 0.0
  mode: int = 0
  radius: float = 1.0

  def __post_init__(self):
    if self.kind not in ('zero', 'quadratic', 'perturbed'):
      raise InvalidInput(f'Unknown boundary kind {self.kind}.')

  def __call__(self, points: np.ndarray) -> np.ndarray:
    points = np.asarray(points, dtype=float).reshape(-1, np.shape(points)[-1])
    if self.kind == 'zero':
      return np.zeros(points.shape[0])
    center = np.asarray(self.center or (0.0,) * points.shape[1])
    rel = points - center
    values = self.c * np.sum(rel**2, axis=1) / 2.0
    if self.kind == 'perturbed':
      z = (rel[:, 0] + 1j * rel[:, 1]) / self.radius
      values = values + self.amplitude * np.imag(z**self.mode)
    return values

  @classmethod
  def from_record(cls, record: Optional[Dict[str, Any]]) -> 'BoundaryField':
    if not record:
      return cls()
    record = dict(record)
    if 'center' in record:
      record['center'] = tuple(record['center'])
    return cls(**record)

  def to_record(self) -> Dict[str, Any]:
    return {'kind': self.kind, 'c': self.c, 'center': list(self.center),
            'amplitude': self.amplitude, 'mode': self.mode,
            'radius': self.radius}


@dataclass(frozen=True)
class ClosedFormField:
  """A smooth field with its exact Hessian, for manufactured solutions."""
  value: Callable[[np.ndarray], np.ndarray]
  hessian: Callable[[np.ndarray], np.ndarray]

  @classmethod
  def quadratic(cls, matrix: np.ndarray,
                center: Optional[Sequence[float]] = None) -> 'ClosedFormField':
    """x -> (x - c)^T A (x - c) / 2."""
    matrix = np.asarray(matrix, dtype=float)
    center = np.zeros(matrix.shape[0]) if center is None else np.asarray(
      center, dtype=float)

    def value(points):
      rel = np.atleast_2d(points) - center
      return 0.5 * np.einsum('ni,ij,nj->n', rel, matrix, rel)

    def hessian(points):
      return np.broadcast_to(matrix, (np.atleast_2d(points).shape[0],)
                             + matrix.shape).copy()
    return cls(value=value, hessian=hessian)

  @classmethod
  def quartic(cls, eps: float) -> 'ClosedFormField':
    """x -> |x|^2 / 2 + eps |x|^4."""
    def value(points):
      r2 = np.sum(np.atleast_2d(points)**2, axis=1)
      return 0.5 * r2 + eps * r2**2

    def hessian(points):
      points = np.atleast_2d(points)
      r2 = np.sum(points**2, axis=1)
      eye = np.eye(points.shape[1])
      return (eye * (1.0 + 4.0 * eps * r2)[:, None, None]
              + 8.0 * eps * np.einsum('ni,nj->nij', points, points))
    return cls(value=value, hessian=hessian)


PsiSpec = Union[float, Callable[[np.ndarray], np.ndarray], Dict[str, Any]]


@dataclass(frozen=True)
class DirichletProblem:
  """F(D2u) = psi in the domain, u = boundary on its boundary.

  Attributes:
    operator: F.
    domain: disk or box, dimension 2 or 3.
    h: grid spacing.
    psi: a positive constant, a callable of the node coordinates, or a
      record {'radial': [c0, c1, ...]} meaning sum_j c_j |x - center|^(2j).
    boundary: Dirichlet data, a BoundaryField or a callable of the node
      coordinates.
    condition: admissibility condition (1 or 2) kept by every iterate.
  """
  operator: OperatorSpec
  domain: Domain
  h: float
  psi: PsiSpec = 1.0
  boundary: Union[BoundaryField, Callable[[np.ndarray], np.ndarray]] = (
    BoundaryField())
  condition: int = 1

  def __post_init__(self):
    if self.condition not in (1, 2):
      raise InvalidInput(f'Unknown condition {self.condition}.')
    if self.domain.ndim != self.operator.n:
      raise InvalidInput(f'Domain dimension {self.domain.ndim} differs from '
                         f'operator dimension {self.operator.n}.')
    if not self.h > 0:
      raise InvalidInput(f'Grid spacing must be positive: {self.h}')

  def grid(self) -> Grid:
    grid = Grid(self.domain, self.h)
    counts = grid.interior_counts()
    if min(counts) < MIN_INTERIOR_PER_AXIS:
      raise InvalidInput(f'h={self.h} leaves only {counts} interior nodes '
                         'per axis.')
    return grid

  def psi_values(self, grid: Grid) -> np.ndarray:
    if callable(self.psi):
      values = np.asarray(self.psi(grid.nodes), dtype=float)
    elif isinstance(self.psi, dict):
      coeffs = self.psi.get('radial')
      if coeffs is None:
        raise InvalidInput(f'Unsupported psi record {self.psi}.')
      r2 = np.sum((grid.nodes - np.asarray(self.domain.center))**2, axis=1)
      values = sum(c * r2**j for j, c in enumerate(coeffs))
      values = np.broadcast_to(values, (grid.size,)).astype(float)
    else:
      values = np.full(grid.size, float(self.psi))
    if not np.all(values > 0):
      raise InvalidInput(f'psi must be positive; min is {values.min():.6g}.')
    return values

  @classmethod
  def from_record(cls, record: Dict[str, Any]) -> 'DirichletProblem':
    unknown = set(record) - {'operator', 'domain', 'h', 'psi', 'boundary',
                             'condition'}
    if unknown:
      raise InvalidInput(f'Unknown problem keys: {sorted(unknown)}')
    try:
      return cls(operator=OperatorSpec.from_record(record['operator']),
                 domain=Domain.from_record(record['domain']),
                 h=float(record['h']), psi=record.get('psi', 1.0),
                 boundary=BoundaryField.from_record(record.get('boundary')),
                 condition=int(record.get('condition', 1)))
    except KeyError as exc:
      raise InvalidInput(f'Problem record is missing {exc}.') from exc

  def to_record(self) -> Dict[str, Any]:
    psi = self.psi if not callable(self.psi) else 'callable'
    boundary = (self.boundary.to_record()
                if isinstance(self.boundary, BoundaryField) else 'callable')
    return {'operator': self.operator.to_record(),
            'domain': self.domain.to_record(), 'h': self.h, 'psi': psi,
            'boundary': boundary,
            'condition': self.condition}


@dataclass
class SolveReport:
  """Outcome of one Dirichlet solve."""
  u: np.ndarray
  nodes: np.ndarray
  eigenvalues: np.ndarray
  margins: np.ndarray
  residual_inf: float
  newton_iters: int
  admissible_everywhere: bool
  min_cone_margin: float
  converged: bool
  history: List[float] = field(default_factory=list)
  pogorelov: Dict[float, Tuple[float, Tuple[float, ...]]] = field(
    default_factory=dict)

  def to_record(self) -> Dict[str, Any]:
    return {'residual_inf': self.residual_inf,
            'newton_iters': self.newton_iters,
            'admissible_everywhere': self.admissible_everywhere,
            'min_cone_margin': self.min_cone_margin,
            'converged': self.converged, 'history': self.history,
            'nodes': int(self.nodes.shape[0]),
            'pogorelov': [{'alpha': alpha, 'max_value': value,
                           'node': list(node)}
                          for alpha, (value, node) in
                          sorted(self.pogorelov.items())]}


def batched_eigen(hess: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
  """Descending eigenvalues and matching eigenvectors of each matrix."""
  values, vectors = np.linalg.eigh(hess)
  return values[:, ::-1], vectors[:, :, ::-1]


def cone_margins(spec: OperatorSpec, lam: np.ndarray,
                 condition: int) -> np.ndarray:
  """Scale-free admissibility margin per node: min_j sigma_j / max(1,
  |x|_inf)^j over the cone of the condition. Under condition 1 a negative
  root caps every margin at min(y) / max(1, |x|_inf)."""
  if condition == 1:
    vecs = np.hstack([lam, np.broadcast_to(np.asarray(spec.y),
                                           (lam.shape[0], spec.m))])
    top = spec.k
  else:
    vecs = lam
    top = spec.k - 1
  scale = np.maximum(1.0, np.max(np.abs(vecs), axis=1))
  margins = np.full(lam.shape[0], np.inf)
  for j in range(1, top + 1):
    margins = np.minimum(margins, sigma_batch(j, vecs) / scale**j)
  if condition == 1 and spec.m and min(spec.y) < 0:
    margins = np.minimum(margins, min(spec.y) / scale)
  return margins


def ray_scale(spec: OperatorSpec, target: float) -> float:
  """t > 0 with F(t I) = target, bracketed by doubling."""
  def excess(t):
    return eval_F(spec, np.full(spec.n, t)) - target
  hi = 1.0
  for _ in range(MAX_BRACKET_DOUBLINGS):
    if excess(hi) >= 0:
      break
    hi *= 2.0
  else:
    raise NoAdmissibleStart(f'F(tI) stays below {target:.6g} along the ray.')
  if excess(0.0) >= 0:
    raise NoAdmissibleStart(f'F(0) = {eval_F(spec, np.zeros(spec.n)):.6g} '
                            f'already reaches {target:.6g}.')
  return float(optimize.brentq(excess, 0.0, hi, xtol=1e-15, rtol=1e-15))


def _jacobian(grid: Grid, ops, d_f: np.ndarray) -> sparse.csc_matrix:
  jac = sparse.csr_matrix((grid.size, grid.size))
  for (i, j), (matrix, _) in ops.items():
    weight = d_f[:, i, j] if i == j else 2.0 * d_f[:, i, j]
    jac = jac + sparse.diags(weight) @ matrix
  return jac.tocsc()


class _State:
  """Per-iterate quantities shared by the Newton loop and line search."""

  def __init__(self, spec, grid, ops, psi, u, condition):
    self.u = u
    self.hess = hessians(grid, u, ops)
    self.lam, self.vecs = batched_eigen(self.hess)
    self.residual = eval_F_batch(spec, self.lam) - psi
    self.residual_inf = float(np.max(np.abs(self.residual)))
    self.margins = cone_margins(spec, self.lam, condition)


def newton_solve(problem: DirichletProblem, max_iters: Optional[int] = None,
                 tol_res: Optional[float] = None,
                 max_halvings: Optional[int] = None,
                 eps_cone: Optional[float] = None,
                 alphas: Optional[Sequence[float]] = None,
                 initial: Optional[np.ndarray] = None) -> SolveReport:
  """Damped Newton on F(D2_h u) - psi = 0 over the interior nodes.

  The start is `initial` when given (one value per interior node), else
  u0 = A (|x - c|^2 - R^2) / 2 + g with F(A I) = max psi.
  Each step is halved until every node keeps a cone margin of at least
  eps_cone and the residual max-norm strictly drops.
  """
  max_iters = get_config('max-iters') if max_iters is None else max_iters
  tol_res = get_config('tol-res') if tol_res is None else tol_res
  max_halvings = (get_config('max-halvings') if max_halvings is None
                  else max_halvings)
  eps_cone = get_config('solver-eps-cone') if eps_cone is None else eps_cone
  alphas = get_config('alphas') if alphas is None else alphas
  spec = problem.operator
  if problem.condition == 1 and spec.m and min(spec.y) < 0:
    raise NoAdmissibleStart('Condition 1 needs nonnegative roots.')
  if problem.condition == 2 and spec.m and min(spec.a) < 0:
    raise NoAdmissibleStart('Condition 2 needs nonnegative coefficients.')

  grid = problem.grid()
  psi = problem.psi_values(grid)
  ops = grid.hessian_operators(problem.boundary)
  scale = ray_scale(spec, float(psi.max()))
  if initial is not None:
    u0 = np.asarray(initial, dtype=float)
    if u0.shape != (grid.size,):
      raise InvalidInput(f'Initial iterate has shape {u0.shape}, expected '
                         f'({grid.size},).')
  else:
    rel = grid.nodes - np.asarray(problem.domain.center)
    u0 = (scale * (np.sum(rel**2, axis=1) - problem.domain.circumradius**2)
          / 2.0 + problem.boundary(grid.nodes))
  state = _State(spec, grid, ops, psi, u0, problem.condition)
  if state.margins.min() < eps_cone:
    raise NoAdmissibleStart(f'Initial iterate leaves the cone (margin '
                            f'{state.margins.min():.3e}).')
  _logger.info('newton start: nodes=%d A=%.6g residual=%.3e', grid.size,
               scale, state.residual_inf)

  history = [state.residual_inf]
  iters = 0
  while state.residual_inf > tol_res and iters < max_iters:
    grad = grad_F_batch(spec, state.lam)
    d_f = np.einsum('nip,np,njp->nij', state.vecs, grad, state.vecs)
    try:
      step = sparse_linalg.spsolve(_jacobian(grid, ops, d_f), -state.residual)
    except RuntimeError as exc:
      raise LinearSolveFailure(f'Newton system failed: {exc}') from exc
    if not np.all(np.isfinite(step)):
      raise LinearSolveFailure('Newton step is not finite.')

    t = 1.0
    for _ in range(max_halvings + 1):
      trial = _State(spec, grid, ops, psi, state.u + t * step,
                     problem.condition)
      if (trial.margins.min() >= eps_cone
          and trial.residual_inf < state.residual_inf):
        break
      t /= 2.0
    else:
      raise StalledLineSearch(f'No acceptable step after {max_halvings} '
                              f'halvings at iteration {iters + 1} '
                              f'(residual {state.residual_inf:.3e}).')
    state = trial
    iters += 1
    history.append(state.residual_inf)
    _logger.info('newton iter %d: step=%g residual=%.3e min margin=%.3e',
                 iters, t, state.residual_inf, state.margins.min())

  report = SolveReport(
    u=state.u, nodes=grid.nodes, eigenvalues=state.lam,
    margins=state.margins, residual_inf=state.residual_inf,
    newton_iters=iters,
    admissible_everywhere=bool(np.all(state.margins > 0)),
    min_cone_margin=float(state.margins.min()),
    converged=state.residual_inf <= tol_res, history=history)
  for alpha in alphas:
    report.pogorelov[float(alpha)] = pogorelov_functional(
      grid, state.u, alpha, laplacian=np.trace(state.hess, axis1=1, axis2=2))
  if not report.converged:
    _logger.warning('newton stopped after %d iterations at residual %.3e',
                    iters, state.residual_inf)
  return report


def pogorelov_functional(grid: Grid, u: np.ndarray, alpha: float,
                         boundary: Optional[Callable] = None,
                         laplacian: Optional[np.ndarray] = None
                         ) -> Tuple[float, Tuple[float, ...]]:
  """max over interior nodes of (-u)^alpha Lap_h u, and where it occurs.
  Nodes with u >= 0 contribute 0."""
  u = np.asarray(u, dtype=float)
  if laplacian is None:
    ops = grid.hessian_operators(boundary or BoundaryField())
    laplacian = sum(ops[(i, i)][0] @ u + ops[(i, i)][1]
                    for i in range(grid.ndim))
  values = np.zeros(grid.size)
  negative = u < 0
  values[negative] = (-u[negative]) ** alpha * laplacian[negative]
  best = int(np.argmax(values))
  return float(values[best]), tuple(float(v) for v in grid.nodes[best])


@dataclass
class ManufacturedReport:
  residual_inf: float
  h: float
  nodes: int
  error_inf: Optional[float] = None
  newton_iters: Optional[int] = None

  def to_record(self) -> Dict[str, Any]:
    return {'residual_inf': self.residual_inf, 'h': self.h,
            'nodes': self.nodes, 'error_inf': self.error_inf,
            'newton_iters': self.newton_iters}


def manufactured_residual(spec: OperatorSpec, exact: ClosedFormField,
                          domain: Domain, h: float,
                          condition: int = 1) -> ManufacturedReport:
  """|F(D2_h u) - F(D2 u)|_inf over the interior nodes for a known u."""
  grid = Grid(domain, h)
  exact_hess = exact.hessian(grid.nodes)
  exact_lam, _ = batched_eigen(exact_hess)
  if np.min(cone_margins(spec, exact_lam, condition)) <= 0:
    raise InadmissibleExact('The exact Hessian leaves the cone at some '
                            'node.')
  psi = eval_F_batch(spec, exact_lam)
  ops = grid.hessian_operators(exact.value)
  lam, _ = batched_eigen(hessians(grid, exact.value(grid.nodes), ops))
  residual = float(np.max(np.abs(eval_F_batch(spec, lam) - psi)))
  return ManufacturedReport(residual_inf=residual, h=h, nodes=grid.size)


def solution_error(spec: OperatorSpec, exact: ClosedFormField,
                   domain: Domain, h: float, condition: int = 1,
                   warm_start: bool = False,
                   **solve_opts) -> ManufacturedReport:
  """Solve F(D2u) = F(D2 u_exact) with u_exact on the boundary and report
  |u_h - u_exact|_inf over the interior nodes.

  `warm_start` starts Newton from u_exact at the nodes instead of the
  default start.
  """
  def psi(nodes):
    return eval_F_batch(spec, batched_eigen(exact.hessian(nodes))[0])

  problem = DirichletProblem(operator=spec, domain=domain, h=h, psi=psi,
                             boundary=exact.value, condition=condition)
  grid = problem.grid()
  if np.min(cone_margins(spec, batched_eigen(exact.hessian(grid.nodes))[0],
                         condition)) <= 0:
    raise InadmissibleExact('The exact Hessian leaves the cone at some '
                            'node.')
  solve_opts.setdefault('alphas', ())
  initial = exact.value(grid.nodes) if warm_start else None
  report = newton_solve(problem, initial=initial, **solve_opts)
  error = float(np.max(np.abs(report.u - exact.value(report.nodes))))
  _logger.info('solution error h=%g: %.3e after %d iterations', h, error,
               report.newton_iters)
  return ManufacturedReport(residual_inf=report.residual_inf, h=h,
                            nodes=grid.size, error_inf=error,
                            newton_iters=report.newton_iters)


def _monomials(points: np.ndarray) -> np.ndarray:
  n = points.shape[1]
  cols = [np.ones(points.shape[0])]
  cols.extend(points[:, i] for i in range(n))
  cols.extend(points[:, i] * points[:, j]
              for i, j in itertools.combinations_with_replacement(range(n), 2))
  return np.column_stack(cols)


def fit_quadratic(points: np.ndarray, values: np.ndarray
                  ) -> Tuple[np.ndarray, float]:
  """Least-squares quadratic polynomial; returns (coefficients, max
  deviation of the values from it)."""
  design = _monomials(np.asarray(points, dtype=float))
  coeffs, *_ = np.linalg.lstsq(design, values, rcond=None)
  deviation = float(np.max(np.abs(design @ coeffs - values)))
  return coeffs, deviation


def rigidity_constant(spec: OperatorSpec) -> float:
  """c* with F(c* I) = 1."""
  return ray_scale(spec, 1.0)


@dataclass
class RigidityReport:
  c_star: float
  rows: List[Dict[str, Any]]

  @property
  def deviations(self) -> List[float]:
    return [row['deviation'] for row in self.rows]

  @property
  def non_increasing(self) -> bool:
    devs = self.deviations
    return all(b <= a * (1 + 1e-9) + 1e-12 for a, b in zip(devs, devs[1:]))

  def to_record(self) -> Dict[str, Any]:
    return {'c_star': self.c_star, 'rows': self.rows,
            'non_increasing': self.non_increasing}


def rigidity_experiment(spec: OperatorSpec, radii: Sequence[float],
                        amplitude: float = 0.0, mode: int = 3,
                        h: float = 0.25, inner_radius: float = 1.0,
                        **solve_opts) -> RigidityReport:
  """Solve F(D2u) = 1 on growing balls with boundary data c*|x|^2/2 plus a
  bounded harmonic perturbation, and measure on the inner ball how far
  each solution is from a quadratic polynomial."""
  if list(radii) != sorted(radii):
    raise InvalidInput(f'Radii must be increasing: {list(radii)}')
  c_star = rigidity_constant(spec)
  origin = (0.0,) * spec.n
  rows = []
  for radius in radii:
    if amplitude:
      boundary = BoundaryField(kind='perturbed', c=c_star, center=origin,
                               amplitude=amplitude, mode=mode, radius=radius)
    else:
      boundary = BoundaryField(kind='quadratic', c=c_star, center=origin)
    problem = DirichletProblem(operator=spec,
                               domain=Domain.disk(origin, radius), h=h,
                               psi=1.0, boundary=boundary)
    report = newton_solve(problem, alphas=(), **solve_opts)
    inner = np.linalg.norm(report.nodes, axis=1) <= inner_radius
    _, deviation = fit_quadratic(report.nodes[inner], report.u[inner])
    _logger.info('rigidity R=%g: deviation %.3e after %d iterations', radius,
                 deviation, report.newton_iters)
    rows.append({'radius': float(radius), 'deviation': deviation,
                 'newton_iters': report.newton_iters,
                 'residual_inf': report.residual_inf,
                 'inner_nodes': int(inner.sum())})
  return RigidityReport(c_star=c_star, rows=rows)
