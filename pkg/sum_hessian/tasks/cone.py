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

""" Garding cones, the lifted admissible set and the two admissibility
conditions of the sum operator. """

from dataclasses import dataclass
import logging
from typing import Iterable, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from sum_hessian.config import get_config
from sum_hessian.errors import InvalidInput, NotInCone
from sum_hessian.spectrum import SpectrumLike, to_array
from sum_hessian.tasks.symfun import sigma_table

_logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ConeVerdict:
  """Membership of a vector in Gamma_k.

  Attributes:
    member: every margin is positive.
    first_failing_degree: least degree j (1-based) with sigma_j <= 0.
    margins: sigma_1..sigma_k of the tested vector.
  """
  member: bool
  first_failing_degree: Optional[int]
  margins: Tuple[float, ...]


def _verdict(vec: np.ndarray, k: int, eps: Optional[float]) -> ConeVerdict:
  if not 1 <= k <= vec.size:
    raise InvalidInput(f'Need 1 <= k <= {vec.size}, got k={k}.')
  eps = get_config('eps-cone') if eps is None else eps
  table = sigma_table(vec)
  scale = max(1.0, float(np.max(np.abs(vec))))
  margins = tuple(table[j] for j in range(1, k + 1))
  failing = None
  for j, value in enumerate(margins, start=1):
    if not value > eps * scale**j:
      failing = j
      break
  return ConeVerdict(member=failing is None, first_failing_degree=failing,
                     margins=margins)


def in_gamma_k(x: SpectrumLike, k: int,
               eps: Optional[float] = None) -> ConeVerdict:
  return _verdict(to_array(x), k, eps)


def in_lifted_cone(lam: SpectrumLike, y: Sequence[float], k: int,
                   eps: Optional[float] = None) -> ConeVerdict:
  """Gamma_k test of the concatenation (lambda, y)."""
  arr = to_array(lam)
  if not 1 <= k <= arr.size:
    raise InvalidInput(f'Need 1 <= k <= n={arr.size}, got k={k}.')
  return _verdict(np.concatenate([arr, np.asarray(y, dtype=float)]), k, eps)


def check_condition(lam: SpectrumLike, y: Sequence[float], a: Sequence[float],
                    k: int, which: int) -> bool:
  """Condition 1: lifted membership and y >= 0.
  Condition 2: lambda in Gamma_{k-1} and a >= 0."""
  y = np.asarray(y, dtype=float)
  a = np.asarray(a, dtype=float)
  if which == 1:
    return (in_lifted_cone(lam, y, k).member
            and bool(y.size == 0 or y.min() >= 0))
  if which == 2:
    in_lower = k - 1 == 0 or in_gamma_k(lam, k - 1).member
    return in_lower and bool(a.size == 0 or a.min() >= 0)
  raise InvalidInput(f'Unknown condition {which}; expected 1 or 2.')


def semiconvexity_ratio(lam: SpectrumLike) -> float:
  """max(0, -lambda_min / sigma_1); (D2u)_min >= -delta Lap u iff <= delta."""
  arr = to_array(lam)
  trace = float(np.sum(arr))
  if trace <= 0:
    raise InvalidInput(f'sigma_1 = {trace:.6g} must be positive.')
  return max(0.0, -float(np.min(arr)) / trace)


def cone_margin(x: SpectrumLike, k: int) -> float:
  """min over j <= k of sigma_j / max(1, |x|_inf^j)."""
  arr = to_array(x)
  table = sigma_table(arr)
  scale = max(1.0, float(np.max(np.abs(arr))))
  return min(table[j] / scale**j for j in range(1, k + 1))


class PinchCheck(NamedTuple):
  lhs: float
  bound: float


def pinch_check(lam: SpectrumLike, y: Sequence[float], n: int) -> PinchCheck:
  """lambda_n against -lambda_1/(n-1) on Gamma_{n-1}^(n+m)."""
  arr = np.sort(to_array(lam))[::-1]
  if arr.size != n or n < 2:
    raise InvalidInput(f'Expected {n} >= 2 eigenvalues, got {arr.size}.')
  if not in_lifted_cone(arr, y, n - 1).member:
    raise NotInCone(f'{arr.tolist()} with y={list(y)} is outside '
                    f'Gamma_{n - 1}.')
  return PinchCheck(lhs=float(arr[-1]), bound=-float(arr[0]) / (n - 1))


def pinch_envelope(samples: Iterable[PinchCheck]) -> Optional[float]:
  """Empirical additive constant: max of bound - lhs over samples."""
  gaps = [s.bound - s.lhs for s in samples]
  return max(gaps) if gaps else None


class DegreeFloor(NamedTuple):
  smallest: float
  floor: float


def full_degree_floor(lam: SpectrumLike, y: Sequence[float]) -> DegreeFloor:
  """For k = n: lambda_n > -a_1 = -(y_1 + ... + y_m) on Gamma_n^(n+m)."""
  arr = to_array(lam)
  y = np.asarray(y, dtype=float)
  if not in_lifted_cone(arr, y, arr.size).member:
    raise NotInCone(f'{arr.tolist()} with y={y.tolist()} is outside '
                    f'Gamma_{arr.size}.')
  return DegreeFloor(smallest=float(np.min(arr)), floor=-float(np.sum(y)))


def find_condition_witness(rng: np.random.Generator, n: int, k: int, m: int,
                           tries: int = 5000
                           ) -> Optional[Tuple[np.ndarray, np.ndarray]]:
  """Search (lambda, y) with y >= 0 and (lambda, y) in Gamma_k^(n+m) but
  lambda outside Gamma_{k-1}^n. None when the search comes up empty."""
  if k < 2:
    return None
  for _ in range(tries):
    lam = np.sort(rng.uniform(-1.0, 1.0, size=n))[::-1]
    y = np.sort(rng.uniform(0.0, 4.0, size=m))[::-1]
    if in_gamma_k(lam, k - 1).member:
      continue
    if in_lifted_cone(lam, y, k).member:
      _logger.info('Condition witness for n=%d k=%d m=%d: lambda=%s y=%s',
                   n, k, m, lam.tolist(), y.tolist())
      return lam, y
  return None
