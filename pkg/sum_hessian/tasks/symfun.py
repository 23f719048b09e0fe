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

""" Elementary symmetric functions, their deletions, derivatives and
quotients, plus the identity and inequality checks built on them.

Indices are 0-based throughout: `drop={0}` deletes the first entry.
"""

from dataclasses import dataclass, field
import itertools
import logging
import math
from typing import Dict, Iterable, List, NamedTuple, Optional, Tuple

import numpy as np

from sum_hessian.config import get_config
from sum_hessian.errors import DivisionByZero, IndexOutOfRange, InvalidInput
from sum_hessian.errors import NotInCone
from sum_hessian.spectrum import SpectrumLike, to_array
from sum_hessian.utils import rel_discrepancy

_logger = logging.getLogger(__name__)

QUOTIENT_FLOOR = 1e-8


@dataclass(frozen=True)
class SigmaTable:
  """sigma_0..sigma_n of one vector; degrees outside 0..n read as 0."""
  n: int
  values: Tuple[float, ...]

  def __getitem__(self, j: int) -> float:
    if j < 0 or j > self.n:
      return 0.0
    return self.values[j]

  def scaled_check(self, other: 'SigmaTable', t: float) -> float:
    """Largest relative gap between other[j] and t**j * self[j]."""
    return max(rel_discrepancy(other[j], t**j * self[j])
               for j in range(self.n + 1))


def _esp(arr: np.ndarray, kmax: int) -> np.ndarray:
  """e[j] = sigma_j(arr) for j <= kmax by the product recurrence."""
  e = np.zeros(kmax + 1)
  e[0] = 1.0
  for v in arr:
    e[1:] = e[1:] + v * e[:-1]
  return e


def sigma(k: int, x: SpectrumLike) -> float:
  arr = to_array(x)
  if k < 0 or k > arr.size:
    return 0.0
  if k == 0:
    return 1.0
  return float(_esp(arr, k)[k])


def sigma_by_subsets(k: int, x: SpectrumLike) -> float:
  """sigma_k by enumerating every k-subset; the reference for sigma."""
  arr = to_array(x)
  if k < 0 or k > arr.size:
    return 0.0
  return float(sum(math.prod(c) for c in itertools.combinations(arr, k)))


def sigma_table(x: SpectrumLike) -> SigmaTable:
  arr = to_array(x)
  return SigmaTable(n=arr.size, values=tuple(_esp(arr, arr.size).tolist()))


def sigma_batch(k: int, rows: np.ndarray) -> np.ndarray:
  """sigma_k of every row of a (N, n) array."""
  rows = np.atleast_2d(np.asarray(rows, dtype=float))
  count, n = rows.shape
  if k < 0 or k > n:
    return np.zeros(count)
  e = np.zeros((count, k + 1))
  e[:, 0] = 1.0
  for j in range(n):
    e[:, 1:] = e[:, 1:] + rows[:, j:j + 1] * e[:, :-1]
  return e[:, k]


def _check_drop(n: int, drop: Iterable[int]) -> List[int]:
  drop = sorted(set(int(i) for i in drop))
  if len(drop) not in (1, 2):
    raise InvalidInput(f'Can delete one or two entries, got {drop}.')
  for i in drop:
    if i < 0 or i >= n:
      raise IndexOutOfRange(f'Index {i} out of range for n={n}.')
  return drop


def sigma_deleted(k: int, x: SpectrumLike, drop: Iterable[int]) -> float:
  """sigma_k with the entries in `drop` removed (sigma_{k;i}, sigma_{k;ij})."""
  arr = to_array(x)
  drop = _check_drop(arr.size, drop)
  return sigma(k, np.delete(arr, drop))


def sigma_grad(k: int, x: SpectrumLike) -> np.ndarray:
  """Component i is sigma_{k-1;i}(x) = d sigma_k / d x_i."""
  arr = to_array(x)
  return np.array([sigma(k - 1, np.delete(arr, i)) for i in range(arr.size)])


def sigma_hess(k: int, x: SpectrumLike) -> np.ndarray:
  """Entry (p, q), p != q, is sigma_{k-2;pq}; the diagonal is zero."""
  arr = to_array(x)
  n = arr.size
  hess = np.zeros((n, n))
  for p, q in itertools.combinations(range(n), 2):
    hess[p, q] = hess[q, p] = sigma(k - 2, np.delete(arr, [p, q]))
  return hess


def _denominator(k: int, arr: np.ndarray) -> float:
  den = sigma(k - 1, arr)
  scale = max(1.0, float(np.max(np.abs(arr)))) ** max(k - 1, 0)
  if abs(den) <= get_config('abs-floor') * scale:
    raise DivisionByZero(f'sigma_{k - 1} vanishes at {arr.tolist()}.')
  return den


def quotient_q(k: int, x: SpectrumLike) -> float:
  """q_k = sigma_k / sigma_{k-1}."""
  arr = to_array(x)
  return sigma(k, arr) / _denominator(k, arr)


def quotient_grad(k: int, x: SpectrumLike) -> np.ndarray:
  arr = to_array(x)
  den = _denominator(k, arr)
  q = sigma(k, arr) / den
  return (sigma_grad(k, arr) - q * sigma_grad(k - 1, arr)) / den


def quotient_hess(k: int, x: SpectrumLike) -> np.ndarray:
  """Hessian of q_k from sigma_{k-1} q_k = sigma_k differentiated twice."""
  arr = to_array(x)
  den = _denominator(k, arr)
  q = sigma(k, arr) / den
  grad_den = sigma_grad(k - 1, arr)
  grad_q = (sigma_grad(k, arr) - q * grad_den) / den
  cross = np.outer(grad_q, grad_den)
  return (sigma_hess(k, arr) - q * sigma_hess(k - 1, arr)
          - cross - cross.T) / den


@dataclass
class IdentityReport:
  """Both sides of each identity, reduced to the worst relative gap."""
  n: int
  k: int
  tol: float
  discrepancies: Dict[str, float] = field(default_factory=dict)
  skipped: List[str] = field(default_factory=list)

  @property
  def max_discrepancy(self) -> float:
    return max(self.discrepancies.values(), default=0.0)

  @property
  def passed(self) -> bool:
    return self.max_discrepancy <= self.tol

  def record(self, name: str, value: float) -> None:
    self.discrepancies[name] = max(self.discrepancies.get(name, 0.0), value)


def _quotient_identity_gap(k: int, arr: np.ndarray) -> float:
  """Worst gap of the second-derivative identity for q_k, measured
  against the largest term on its right side."""
  s_k, s_km1 = sigma(k, arr), sigma(k - 1, arr)
  g_k, g_km1 = sigma_grad(k, arr), sigma_grad(k - 1, arr)
  h_k, h_km1 = sigma_hess(k, arr), sigma_hess(k - 1, arr)
  lhs = quotient_hess(k, arr) / (s_k / s_km1)
  terms = [h_k / s_k,
           -np.outer(g_k, g_km1) / (s_k * s_km1),
           -np.outer(g_km1, g_k) / (s_k * s_km1),
           -h_km1 / s_km1,
           2.0 * np.outer(g_km1, g_km1) / s_km1**2]
  rhs = sum(terms)
  scale = max(1.0, max(float(np.max(np.abs(t))) for t in terms))
  return float(np.max(np.abs(lhs - rhs))) / scale


def identity_suite(x: SpectrumLike, k: int,
                   tol: Optional[float] = None) -> IdentityReport:
  """Deletion, trace and square-trace identities of sigma_k at x, plus the
  q_k second-derivative identity where sigma_k and sigma_{k-1} are
  away from zero."""
  arr = to_array(x)
  n = arr.size
  if not 1 <= k <= n:
    raise InvalidInput(f'Need 1 <= k <= n, got k={k}, n={n}.')
  report = IdentityReport(n=n, k=k, tol=get_config('rel-tol')
                          if tol is None else tol)
  table = sigma_table(arr)
  s_k = table[k]
  deleted_k = np.array([sigma(k, np.delete(arr, i)) for i in range(n)])
  deleted_km1 = sigma_grad(k, arr)

  for i in range(n):
    report.record('deletion', rel_discrepancy(
      s_k, deleted_k[i] + arr[i] * deleted_km1[i]))
  report.record('deleted_sum', rel_discrepancy(
    float(np.sum(deleted_k)), (n - k) * s_k))
  report.record('euler', rel_discrepancy(
    float(np.dot(deleted_km1, arr)), k * s_k))
  report.record('square_trace', rel_discrepancy(
    float(np.dot(deleted_km1, arr**2)), table[1] * s_k - (k + 1) * table[k + 1]))

  scale = max(1.0, float(np.max(np.abs(arr))))
  if (abs(s_k) > QUOTIENT_FLOOR * scale**k
      and abs(table[k - 1]) > QUOTIENT_FLOOR * scale**(k - 1)):
    report.record('quotient_hessian', _quotient_identity_gap(k, arr))
  else:
    report.skipped.append('quotient_hessian')
  _logger.debug('identity_suite n=%d k=%d max=%.3e skipped=%s', n, k,
                report.max_discrepancy, report.skipped)
  return report


def _require_cone(arr: np.ndarray, k: int) -> None:
  table = sigma_table(arr)
  for j in range(1, k + 1):
    if not table[j] > 0:
      raise NotInCone(f'sigma_{j}={table[j]:.6g} <= 0 at {arr.tolist()}.')


class XkBound(NamedTuple):
  lhs: float
  rhs: float
  ratio: float


def xk_bound_check(x: SpectrumLike, k: int) -> XkBound:
  """x_k against sigma_k^(1/k) + |x_n| on the decreasing rearrangement."""
  arr = np.sort(to_array(x))[::-1]
  _require_cone(arr, k)
  lhs = float(arr[k - 1])
  rhs = sigma(k, arr) ** (1.0 / k) + abs(float(arr[-1]))
  return XkBound(lhs=lhs, rhs=rhs, ratio=lhs / rhs)


@dataclass
class ConeInequalityReport:
  """Pointwise verdicts of the cone-only sigma_k inequalities."""
  trace_lower: bool
  deletion_stable: bool
  monotone: bool
  product_lower: bool
  deleted_ratio: float

  @property
  def passed(self) -> bool:
    return (self.trace_lower and self.deletion_stable and self.monotone
            and self.product_lower and self.deleted_ratio > 0)


def _at_least(lhs: float, rhs: float, tol: float) -> bool:
  return lhs >= rhs - tol * max(1.0, abs(lhs), abs(rhs))


def cone_inequalities(x: SpectrumLike, k: int,
                      tol: Optional[float] = None) -> ConeInequalityReport:
  arr = np.sort(to_array(x))[::-1]
  _require_cone(arr, k)
  tol = get_config('rel-tol') if tol is None else tol
  n = arr.size
  grad = sigma_grad(k, arr)
  s_k, s_km1 = sigma(k, arr), sigma(k - 1, arr)

  trace_lower = _at_least(arr[0] * grad[0], k / n * s_k, tol)
  monotone = all(_at_least(grad[j], grad[i], tol)
                 for i in range(n) for j in range(i + 1, n))
  product_lower = _at_least(s_km1, float(np.prod(arr[:k - 1])), tol)
  deletion_stable = True
  if k >= 2:
    for j in range(n):
      zeroed = arr.copy()
      zeroed[j] = 0.0
      table = sigma_table(zeroed)
      deletion_stable &= all(table[d] > 0 for d in range(1, k))
  deleted_ratio = grad[k - 1] / s_km1
  return ConeInequalityReport(trace_lower=bool(trace_lower),
                              deletion_stable=bool(deletion_stable),
                              monotone=bool(monotone),
                              product_lower=bool(product_lower),
                              deleted_ratio=float(deleted_ratio))


@dataclass
class NewtonReport:
  normalized: Tuple[float, ...]
  worst_gap: float
  passed: bool


def newton_inequalities(x: SpectrumLike,
                        tol: Optional[float] = None) -> NewtonReport:
  """E_j^2 >= E_{j-1} E_{j+1} with E_j = sigma_j / C(n, j); any real x."""
  arr = to_array(x)
  n = arr.size
  tol = get_config('rel-tol') if tol is None else tol
  table = sigma_table(arr)
  normalized = tuple(table[j] / math.comb(n, j) for j in range(n + 1))
  worst = 0.0
  for j in range(1, n):
    square = normalized[j]**2
    product = normalized[j - 1] * normalized[j + 1]
    gap = (square - product) / max(1.0, square, abs(product))
    worst = min(worst, gap)
  return NewtonReport(normalized=normalized, worst_gap=worst,
                      passed=worst >= -tol)


def maclaurin_ratio(x: SpectrumLike, k: int) -> float:
  """sigma_{k-1} / (sigma_1^(1/(k-1)) sigma_k^((k-2)/(k-1))) on Gamma_k."""
  arr = to_array(x)
  if k < 2:
    raise InvalidInput('maclaurin_ratio needs k >= 2.')
  _require_cone(arr, k)
  table = sigma_table(arr)
  return table[k - 1] / (table[1] ** (1.0 / (k - 1))
                         * table[k] ** ((k - 2.0) / (k - 1)))


def negative_floor(x: SpectrumLike) -> float:
  """Smallest K >= 0 with x_i + K >= 0 for every i."""
  return max(0.0, -float(np.min(to_array(x))))
