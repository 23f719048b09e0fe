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

""" Uniform node lattices over disks and boxes, with second-difference
stencils that land on the boundary where a neighbour leaves the domain. """

from dataclasses import dataclass
import itertools
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse

from sum_hessian.errors import InvalidInput, StencilOutOfDomain

_logger = logging.getLogger(__name__)

# Nodes closer than THETA_MIN * h to the boundary count as boundary nodes.
THETA_MIN = 1e-6

Field = Union[np.ndarray, Callable[[np.ndarray], np.ndarray]]


@dataclass(frozen=True)
class Domain:
  """A disk (ball) or an axis-aligned box in dimension 2 or 3."""
  kind: str
  center: Tuple[float, ...] = ()
  radius: float = 0.0
  lower: Tuple[float, ...] = ()
  upper: Tuple[float, ...] = ()

  def __post_init__(self):
    if self.kind == 'disk':
      if not self.radius > 0:
        raise InvalidInput(f'Disk radius must be positive: {self.radius}')
      object.__setattr__(self, 'center', tuple(map(float, self.center)))
    elif self.kind == 'box':
      lower = tuple(map(float, self.lower))
      upper = tuple(map(float, self.upper))
      if len(lower) != len(upper) or any(u <= l for l, u in zip(lower, upper)):
        raise InvalidInput(f'Degenerate box {lower} x {upper}.')
      object.__setattr__(self, 'lower', lower)
      object.__setattr__(self, 'upper', upper)
      object.__setattr__(self, 'center', tuple(
        (l + u) / 2 for l, u in zip(lower, upper)))
    else:
      raise InvalidInput(f'Unknown domain kind {self.kind}.')
    if self.ndim not in (2, 3):
      raise InvalidInput(f'Only dimensions 2 and 3 are supported, got '
                         f'{self.ndim}.')

  @classmethod
  def disk(cls, center: Sequence[float], radius: float) -> 'Domain':
    return cls(kind='disk', center=tuple(center), radius=radius)

  @classmethod
  def box(cls, lower: Sequence[float], upper: Sequence[float]) -> 'Domain':
    return cls(kind='box', lower=tuple(lower), upper=tuple(upper))

  @classmethod
  def from_record(cls, record: Dict[str, Any]) -> 'Domain':
    kind = record.get('kind')
    if kind == 'disk':
      return cls.disk(record['center'], record['radius'])
    if kind == 'box':
      return cls.box(record['lower'], record['upper'])
    raise InvalidInput(f'Unknown domain kind {kind}.')

  def to_record(self) -> Dict[str, Any]:
    if self.kind == 'disk':
      return {'kind': 'disk', 'center': list(self.center),
              'radius': self.radius}
    return {'kind': 'box', 'lower': list(self.lower),
            'upper': list(self.upper)}

  @property
  def ndim(self) -> int:
    return len(self.center)

  @property
  def circumradius(self) -> float:
    if self.kind == 'disk':
      return self.radius
    return float(np.linalg.norm(np.subtract(self.upper, self.lower)) / 2)

  def depth(self, points: np.ndarray) -> np.ndarray:
    """Distance inside the boundary; negative outside."""
    points = np.atleast_2d(points)
    if self.kind == 'disk':
      return self.radius - np.linalg.norm(points - self.center, axis=1)
    return np.minimum(np.min(points - self.lower, axis=1),
                      np.min(np.asarray(self.upper) - points, axis=1))

  def crossings(self, points: np.ndarray, step: np.ndarray) -> np.ndarray:
    """Smallest t > 0 with point + t * step on the boundary, per point."""
    points = np.atleast_2d(points)
    step = np.asarray(step, dtype=float)
    if self.kind == 'disk':
      rel = points - self.center
      a = float(np.dot(step, step))
      b = rel @ step
      c = np.sum(rel**2, axis=1) - self.radius**2
      return (-b + np.sqrt(np.maximum(b * b - a * c, 0.0))) / a
    hits = np.full(points.shape[0], np.inf)
    for i, s in enumerate(step):
      if s > 0:
        hits = np.minimum(hits, (self.upper[i] - points[:, i]) / s)
      elif s < 0:
        hits = np.minimum(hits, (self.lower[i] - points[:, i]) / s)
    return hits


@dataclass
class Stencil:
  """Second difference along one lattice direction d, scaled to d^T H d.

  Interior neighbours enter `matrix`; neighbours across the boundary enter
  as (row, coefficient, crossing point) triples.
  """
  direction: Tuple[int, ...]
  matrix: sparse.csr_matrix
  boundary_rows: np.ndarray
  boundary_coeffs: np.ndarray
  boundary_points: np.ndarray

  def constant(self, boundary: Callable[[np.ndarray], np.ndarray],
               size: int) -> np.ndarray:
    out = np.zeros(size)
    if self.boundary_rows.size:
      values = np.asarray(boundary(self.boundary_points), dtype=float)
      np.add.at(out, self.boundary_rows, self.boundary_coeffs * values)
    return out


def _weights(theta_plus, theta_minus, h: float):
  """Weights of u_+, u_-, u_0 in the three-point second difference with
  arms theta_plus * h and theta_minus * h."""
  total = theta_plus + theta_minus
  return (2.0 / (theta_plus * total * h * h),
          2.0 / (theta_minus * total * h * h),
          -2.0 / (theta_plus * theta_minus * h * h))


class Grid:
  """Lattice c + h * j covering the domain, with its interior nodes."""

  def __init__(self, domain: Domain, h: float):
    if not h > 0:
      raise InvalidInput(f'Grid spacing must be positive: {h}')
    self.domain = domain
    self.h = float(h)
    self.ndim = domain.ndim
    if domain.kind == 'disk':
      half = int(np.ceil(domain.radius / h)) + 1
      self.axes = [c + h * np.arange(-half, half + 1) for c in domain.center]
    else:
      self.axes = []
      for lo, hi in zip(domain.lower, domain.upper):
        count = (hi - lo) / h
        if abs(count - round(count)) > 1e-9 * max(1.0, count):
          raise InvalidInput(f'Box side {hi - lo} is not a multiple of '
                             f'h={h}.')
        self.axes.append(lo + h * np.arange(int(round(count)) + 1))
    self.shape = tuple(len(a) for a in self.axes)
    mesh = np.meshgrid(*self.axes, indexing='ij')
    self.points = np.stack([m.ravel() for m in mesh], axis=1)
    self.interior = domain.depth(self.points) > THETA_MIN * self.h
    self.unknown = np.full(self.points.shape[0], -1, dtype=int)
    self.unknown[self.interior] = np.arange(int(self.interior.sum()))
    self.nodes = self.points[self.interior]
    self.directions = self._directions()
    self._stencils: Optional[Dict[Tuple[int, ...], Stencil]] = None
    _logger.debug('Grid %s h=%g shape=%s interior=%d', domain.kind, h,
                  self.shape, self.size)

  @property
  def size(self) -> int:
    return self.nodes.shape[0]

  def _directions(self) -> List[Tuple[int, ...]]:
    dirs = []
    for i in range(self.ndim):
      dirs.append(tuple(int(i == a) for a in range(self.ndim)))
    for i, j in itertools.combinations(range(self.ndim), 2):
      for sign in (1, -1):
        d = [0] * self.ndim
        d[i], d[j] = 1, sign
        dirs.append(tuple(d))
    return dirs

  def interior_counts(self) -> Tuple[int, ...]:
    """Distinct interior coordinates per axis."""
    return tuple(len(np.unique(np.round(self.nodes[:, i] / self.h)))
                 for i in range(self.ndim))

  def flat_index(self, multi: Sequence[int]) -> Optional[int]:
    if any(m < 0 or m >= s for m, s in zip(multi, self.shape)):
      return None
    return int(np.ravel_multi_index(tuple(multi), self.shape))

  def arms(self, offset: Sequence[int]
           ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Neighbours of every interior node at +offset.

    Returns (column, theta, crossing point): column is the neighbour's
    unknown index, or -1 when the arm crosses the boundary at fraction
    theta of the full step, at the returned point.
    """
    offset = np.asarray(offset, dtype=int)
    flats = np.flatnonzero(self.interior)
    multi = np.stack(np.unravel_index(flats, self.shape), axis=1) + offset
    valid = np.all((multi >= 0) & (multi < np.array(self.shape)), axis=1)
    other = np.full(flats.size, -1)
    other[valid] = np.ravel_multi_index(tuple(multi[valid].T), self.shape)
    inside = valid.copy()
    inside[valid] = self.interior[other[valid]]
    cols = np.where(inside, self.unknown[np.maximum(other, 0)], -1)
    theta = np.ones(flats.size)
    step = self.h * offset
    crossing = ~inside
    if crossing.any():
      theta[crossing] = np.minimum(
        1.0, self.domain.crossings(self.nodes[crossing], step))
    points = self.nodes + theta[:, None] * step
    return cols, theta, points

  def stencils(self) -> Dict[Tuple[int, ...], Stencil]:
    if self._stencils is not None:
      return self._stencils
    rows_all = np.arange(self.size)
    out = {}
    for d in self.directions:
      col_p, th_p, pts_p = self.arms(d)
      col_m, th_m, pts_m = self.arms(tuple(-v for v in d))
      w_plus, w_minus, w_zero = _weights(th_p, th_m, self.h)
      rows, cols, vals = [rows_all], [rows_all], [w_zero]
      b_rows, b_coeffs, b_points = [], [], []
      for col, weight, pts in ((col_p, w_plus, pts_p),
                               (col_m, w_minus, pts_m)):
        inner = col >= 0
        rows.append(rows_all[inner])
        cols.append(col[inner])
        vals.append(weight[inner])
        b_rows.append(rows_all[~inner])
        b_coeffs.append(weight[~inner])
        b_points.append(pts[~inner])
      matrix = sparse.csr_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(self.size, self.size))
      out[d] = Stencil(direction=d, matrix=matrix,
                       boundary_rows=np.concatenate(b_rows),
                       boundary_coeffs=np.concatenate(b_coeffs),
                       boundary_points=np.concatenate(b_points))
    self._stencils = out
    return out

  def hessian_operators(self, boundary: Callable[[np.ndarray], np.ndarray]
                        ) -> Dict[Tuple[int, int], Tuple[sparse.csr_matrix,
                                                         np.ndarray]]:
    """(i, j) -> (L_ij, c_ij) with D2_h u[:, i, j] = L_ij u + c_ij.

    Diagonal entries are axis second differences; mixed entries are a
    quarter of the difference of the two diagonal second differences.
    """
    stencils = self.stencils()
    ops = {}
    for i in range(self.ndim):
      axis = stencils[self.directions[i]]
      ops[(i, i)] = (axis.matrix, axis.constant(boundary, self.size))
    for i, j in itertools.combinations(range(self.ndim), 2):
      d_plus = [0] * self.ndim
      d_plus[i], d_plus[j] = 1, 1
      d_minus = list(d_plus)
      d_minus[j] = -1
      plus, minus = stencils[tuple(d_plus)], stencils[tuple(d_minus)]
      matrix = ((plus.matrix - minus.matrix) / 4.0).tocsr()
      const = (plus.constant(boundary, self.size)
               - minus.constant(boundary, self.size)) / 4.0
      ops[(i, j)] = (matrix, const)
    return ops

  def full_field(self, values: np.ndarray, fill: float = np.nan) -> np.ndarray:
    """Interior values spread over the lattice, `fill` elsewhere."""
    out = np.full(self.points.shape[0], fill)
    out[self.interior] = values
    return out.reshape(self.shape)


def hessians(grid: Grid, values: np.ndarray, ops) -> np.ndarray:
  """All nodal discrete Hessians, shape (size, n, n)."""
  n = grid.ndim
  out = np.zeros((grid.size, n, n))
  for (i, j), (matrix, const) in ops.items():
    out[:, i, j] = matrix @ values + const
    out[:, j, i] = out[:, i, j]
  return out


def discrete_hessians(grid: Grid, u: Field,
                      boundary: Optional[Callable] = None) -> np.ndarray:
  """D2_h u at every interior node.

  `u` is either a callable evaluated at the nodes or an array of interior
  values. Boundary crossings take `boundary`, or `u` itself when `u` is
  callable.
  """
  if callable(u):
    values = np.asarray(u(grid.nodes), dtype=float)
    boundary = boundary or u
  else:
    values = np.asarray(u, dtype=float)
    if values.shape == grid.shape:
      values = values.ravel()[grid.interior]
  if boundary is None:
    boundary = _no_boundary
  return hessians(grid, values, grid.hessian_operators(boundary))


def _no_boundary(points: np.ndarray) -> np.ndarray:
  if len(points):
    raise StencilOutOfDomain(f'{len(points)} stencil arms cross the '
                             'boundary but no boundary data was given.')
  return np.zeros(0)


def discrete_hessian(grid: Grid, u: Field, node: Sequence[int],
                     boundary: Optional[Callable] = None) -> np.ndarray:
  """D2_h u at one lattice node, given by its multi-index."""
  flat = grid.flat_index(node)
  if flat is None or not grid.interior[flat]:
    raise StencilOutOfDomain(f'Node {tuple(node)} is not an interior node.')
  row = int(grid.unknown[flat])
  return discrete_hessians(grid, u, boundary)[row]
