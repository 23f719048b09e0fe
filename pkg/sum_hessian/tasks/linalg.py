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

""" Cyclic Jacobi eigensolver for small symmetric matrices. """

import logging
from typing import Tuple

import numpy as np

from sum_hessian.errors import DegenerateEigenbasis, InvalidInput

_logger = logging.getLogger(__name__)

MAX_SWEEPS = 50
REL_THRESHOLD = 1e-12


def _off_norm(a: np.ndarray) -> float:
  return float(np.sqrt(np.sum(a**2) - np.sum(np.diag(a)**2)))


def jacobi_eigh(s: np.ndarray, max_sweeps: int = MAX_SWEEPS,
                rel_threshold: float = REL_THRESHOLD
                ) -> Tuple[np.ndarray, np.ndarray]:
  """Eigenvalues (descending) and orthonormal eigenvectors (columns).

  Sweeps every (p, q) pair in row order until the off-diagonal norm is
  below rel_threshold * |S|_F.
  """
  a = np.array(s, dtype=float)
  if a.ndim != 2 or a.shape[0] != a.shape[1]:
    raise InvalidInput(f'Expected a square matrix, got shape {a.shape}.')
  if not np.allclose(a, a.T, rtol=0, atol=1e-12 * max(1.0, np.abs(a).max())):
    raise InvalidInput('Matrix is not symmetric.')
  a = (a + a.T) / 2.0
  n = a.shape[0]
  v = np.eye(n)
  target = rel_threshold * float(np.linalg.norm(a))

  for sweep in range(max_sweeps):
    if _off_norm(a) <= target:
      break
    for p in range(n - 1):
      for q in range(p + 1, n):
        apq = a[p, q]
        if apq == 0.0:
          continue
        tau = (a[q, q] - a[p, p]) / (2.0 * apq)
        t = np.sign(tau) / (abs(tau) + np.sqrt(1.0 + tau * tau))
        if tau == 0.0:
          t = 1.0
        c = 1.0 / np.sqrt(1.0 + t * t)
        s_ = t * c
        rot = np.eye(n)
        rot[p, p] = rot[q, q] = c
        rot[p, q] = s_
        rot[q, p] = -s_
        a = rot.T @ a @ rot
        a[p, q] = a[q, p] = 0.0
        v = v @ rot
  else:
    if _off_norm(a) > target:
      raise DegenerateEigenbasis(
        f'Jacobi did not converge in {max_sweeps} sweeps '
        f'(off-diagonal {_off_norm(a):.3e}).')
  _logger.debug('jacobi_eigh n=%d sweeps=%d', n, sweep)

  values = np.diag(a).copy()
  order = np.argsort(-values, kind='stable')
  return values[order], v[:, order]
