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

""" Seeded samplers for cone points and level-targeted sweep points. """

import logging
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import optimize

from sum_hessian.errors import InvalidInput, NonpositiveOperatorValue
from sum_hessian.errors import NumericalFailure
from sum_hessian.spectrum import SpectrumLike, to_array
from sum_hessian.tasks.operator import OperatorSpec, eval_F
from sum_hessian.tasks.symfun import sigma, sigma_table

_logger = logging.getLogger(__name__)

BISECTION_STEPS = 80
MAX_RAY_DOUBLINGS = 60


def child_rng(seed: int, *keys: int) -> np.random.Generator:
  """Generator for one sample; identical for a given (seed, keys)."""
  return np.random.default_rng([int(seed)] + [int(k) for k in keys])


def in_cone(vec: np.ndarray, k: int) -> bool:
  table = sigma_table(vec)
  return all(table[j] > 0 for j in range(1, k + 1))


def uniform_vector(rng: np.random.Generator, n: int, low: float = -5.0,
                   high: float = 5.0) -> np.ndarray:
  return rng.uniform(low, high, size=n)


def random_symmetric(rng: np.random.Generator, n: int,
                     scale: float = 1.0) -> np.ndarray:
  a = rng.uniform(-scale, scale, size=(n, n))
  return (a + a.T) / 2.0


def random_orthogonal(rng: np.random.Generator, n: int) -> np.ndarray:
  """Haar-distributed orthogonal matrix."""
  q, r = np.linalg.qr(rng.normal(size=(n, n)))
  return q * np.sign(np.diag(r))


def nonneg_roots(rng: np.random.Generator, m: int,
                 y_max: float = 2.0) -> np.ndarray:
  return np.sort(rng.uniform(0.0, y_max, size=m))[::-1]


def cone_point(rng: np.random.Generator, n: int, k: int,
               y: Sequence[float] = (), tries: int = 1000) -> np.ndarray:
  """Descending lambda with (lambda, y) in Gamma_k^(n+m)."""
  y = np.asarray(y, dtype=float)
  for _ in range(tries):
    lam = rng.uniform(-1.0, 1.0, size=n) + rng.uniform(0.0, 1.5)
    lam *= 10.0 ** rng.uniform(-1.0, 1.0)
    if in_cone(np.concatenate([lam, y]), k):
      return np.sort(lam)[::-1]
  raise NumericalFailure(f'No cone point found for n={n}, k={k} '
                         f'after {tries} tries.')


def normalized_tail(rng: np.random.Generator, n: int,
                    floor: float) -> np.ndarray:
  """lambda_2..lambda_n of a point with lambda_1 = 1, descending, and
  every entry at least `floor`."""
  middle = np.sort(rng.uniform(floor, 1.0, size=n - 2))[::-1]
  top = middle[-1] if middle.size else 1.0
  return np.concatenate([middle, [rng.uniform(floor, top)]])


class LevelPoint(NamedTuple):
  lam: np.ndarray
  y: np.ndarray
  level: float


def level_point(rng: np.random.Generator, n: int, k: int, floor: float,
                level_cap: float, y: Sequence[float] = (),
                lambda1: float = 1.0, scale_roots: bool = True,
                decades: float = 3.0,
                tries: int = 200) -> Optional[LevelPoint]:
  """A point whose normalized level sigma_k(lambda/lambda_1, y/lambda_1)
  lies in [level_cap * 10**-decades, level_cap].

  Each try keeps a random number h in [0, k-2] of the leading tail entries
  lambda_2..lambda_{h+1} as drawn and shrinks the rest of the tail (and y
  when `scale_roots`) by a bisected factor s in (0, 1] until the level hits
  a log-uniform target. With h = 0 the whole tail shrinks; h > 0 reaches
  low levels with lambda_2 of order lambda_1. Returns None when every try
  is rejected.
  """
  y_hat = np.asarray(y, dtype=float) / lambda1
  max_head = min(k - 2, n - 2)
  for _ in range(tries):
    tail = normalized_tail(rng, n, floor)
    target = level_cap * 10.0 ** (-decades * rng.uniform())
    head = int(rng.integers(0, max_head + 1)) if max_head > 0 else 0

    def lifted(s, tail=tail, head=head):
      roots = s * y_hat if scale_roots else y_hat
      return np.concatenate([[1.0], tail[:head], s * tail[head:], roots])

    scale = 1.0
    if sigma(k, lifted(1.0)) > target:
      if sigma(k, lifted(0.0)) >= target:
        continue
      lo, hi = 0.0, 1.0
      for _ in range(BISECTION_STEPS):
        mid = 0.5 * (lo + hi)
        if sigma(k, lifted(mid)) > target:
          hi = mid
        else:
          lo = mid
      scale = lo
    vec = lifted(scale)
    if scale <= 0.0 or not in_cone(vec, k):
      continue
    lam = np.concatenate([[1.0], np.sort(vec[1:n])[::-1]])
    return LevelPoint(lam=lambda1 * lam, y=lambda1 * vec[n:],
                      level=sigma(k, vec))
  _logger.debug('level_point gave up: n=%d k=%d floor=%g cap=%g', n, k,
                floor, level_cap)
  return None


def unit_level(spec: OperatorSpec, lam: SpectrumLike) -> np.ndarray:
  """t lambda with F(t lambda) = 1, for t > 0 on the ray through lambda.

  sigma_k is homogeneous, so m = 0 divides by F^(1/k); otherwise the ray
  is bracketed by doubling and solved with brentq.
  """
  arr = to_array(lam)
  if not spec.m:
    value = eval_F(spec, arr)
    if not value > 0:
      raise NonpositiveOperatorValue(f'F = {value:.6g} at {arr.tolist()}.')
    return arr / value ** (1.0 / spec.k)

  def excess(t):
    return eval_F(spec, t * arr) - 1.0
  if excess(0.0) >= 0:
    raise InvalidInput(f'F(0) = {excess(0.0) + 1.0:.6g} already reaches 1.')
  lo, hi = 0.0, 1.0
  for _ in range(MAX_RAY_DOUBLINGS):
    if excess(hi) >= 0:
      break
    lo, hi = hi, 2.0 * hi
  else:
    raise InvalidInput(f'F stays below 1 along the ray through '
                       f'{arr.tolist()}.')
  return float(optimize.brentq(excess, lo, hi, xtol=1e-15, rtol=1e-15)) * arr
