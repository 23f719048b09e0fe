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

""" The sum-Hessian operator F(lambda) = sigma_k(lambda) + sum_r a_r
sigma_{k-r}(lambda), evaluated as sigma_k of the lifted vector (lambda, y)
where y are the real roots of P(t) = t^m + sum_r (-1)^r a_r t^(m-r).
"""

from dataclasses import dataclass
import logging
from typing import Any, Dict, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from sum_hessian.errors import DegenerateEigenbasis, InvalidInput
from sum_hessian.errors import NoRealRoots
from sum_hessian.spectrum import Spectrum, SpectrumLike, to_array
from sum_hessian.tasks.linalg import jacobi_eigh
from sum_hessian.tasks.symfun import sigma, sigma_batch, sigma_table

_logger = logging.getLogger(__name__)

REALITY_TOL = 1e-8
VIETA_TOL = 1e-9
CONFLUENT_TOL = 1e-7


def _char_poly(a: Sequence[float]) -> np.ndarray:
  """Coefficients of P, highest degree first."""
  signs = np.array([(-1.0) ** r for r in range(1, len(a) + 1)])
  return np.concatenate([[1.0], signs * np.asarray(a, dtype=float)])


def roots_from_coeffs(a: Sequence[float],
                      tol: float = REALITY_TOL) -> Tuple[float, ...]:
  """Roots of P in descending order, or NoRealRoots.

  A companion-matrix eigenvalue z counts as real when its imaginary part
  is within tol * (1 + |a|_inf), or when P(Re z) vanishes to
  tol * max(1, |Re z|^m). The second test admits repeated roots, whose
  eigenvalues split off the axis by about sqrt(eps).
  """
  a = np.asarray(a, dtype=float)
  m = a.size
  if m == 0:
    return ()
  if not np.all(np.isfinite(a)):
    raise InvalidInput(f'Coefficients must be finite: {a.tolist()}')
  poly = _char_poly(a)
  companion = np.zeros((m, m))
  companion[0, :] = -poly[1:]
  companion[np.arange(1, m), np.arange(m - 1)] = 1.0
  roots = np.linalg.eigvals(companion)

  scale = 1.0 + float(np.max(np.abs(a)))
  reals = np.real(roots)
  residual_scale = max(1.0, float(np.max(np.abs(reals))) ** m)
  for z, x in zip(roots, reals):
    off_axis = abs(z.imag) > tol * scale
    if off_axis and abs(np.polyval(poly, x)) > tol * residual_scale:
      raise NoRealRoots(f'P has a non-real root {z:.6g} for a={a.tolist()}.')
  return tuple(float(v) for v in np.sort(reals)[::-1])


def coeffs_from_roots(y: Sequence[float]) -> Tuple[float, ...]:
  """(e_1(y), ..., e_m(y))."""
  y = np.asarray(y, dtype=float)
  if not y.size:
    return ()
  table = sigma_table(y)
  return tuple(table[r] for r in range(1, y.size + 1))


@dataclass(frozen=True)
class OperatorSpec:
  """F for dimension n, degree k and m lower-order terms.

  Attributes:
    n: dimension.
    k: degree, 2 <= k <= n.
    a: coefficients a_1..a_m.
    y: the real roots of P, descending; e_r(y) = a_r.
  """
  n: int
  k: int
  a: Tuple[float, ...] = ()
  y: Tuple[float, ...] = ()

  def __post_init__(self):
    object.__setattr__(self, 'a', tuple(float(v) for v in self.a))
    object.__setattr__(self, 'y', tuple(sorted((float(v) for v in self.y),
                                               reverse=True)))
    if not 2 <= self.k <= self.n:
      raise InvalidInput(f'Need 2 <= k <= n, got n={self.n}, k={self.k}.')
    if len(self.a) != len(self.y):
      raise InvalidInput(f'{len(self.a)} coefficients but {len(self.y)} '
                         'roots.')
    if self.m >= self.k:
      raise InvalidInput(f'Need m < k, got m={self.m}, k={self.k}.')
    if not all(np.isfinite(self.a + self.y)):
      raise InvalidInput('Coefficients and roots must be finite.')
    for r, (coeff, elem) in enumerate(zip(self.a, coeffs_from_roots(self.y)),
                                      start=1):
      if abs(coeff - elem) > VIETA_TOL * max(1.0, abs(coeff), abs(elem)):
        raise InvalidInput(f'e_{r}(y)={elem:.12g} does not match '
                           f'a_{r}={coeff:.12g}.')
    if self.m:
      poly = _char_poly(self.a)
      scale = max(1.0, max(abs(v) for v in self.y) ** self.m)
      for root in self.y:
        if abs(np.polyval(poly, root)) > REALITY_TOL * scale:
          raise InvalidInput(f'y={root:.12g} is not a root of P.')

  @property
  def m(self) -> int:
    return len(self.a)

  @classmethod
  def identity(cls, n: int, k: int) -> 'OperatorSpec':
    """F = sigma_k."""
    return cls(n=n, k=k)

  @classmethod
  def from_coeffs(cls, n: int, k: int, a: Sequence[float],
                  tol: float = REALITY_TOL) -> 'OperatorSpec':
    return cls(n=n, k=k, a=tuple(a), y=roots_from_coeffs(a, tol))

  @classmethod
  def from_roots(cls, n: int, k: int, y: Sequence[float]) -> 'OperatorSpec':
    return cls(n=n, k=k, a=coeffs_from_roots(y), y=tuple(y))

  @classmethod
  def from_record(cls, record: Dict[str, Any]) -> 'OperatorSpec':
    """{n, k, a} or {n, k, y}; given both, they must agree; m is optional."""
    unknown = set(record) - {'n', 'k', 'm', 'a', 'y'}
    if unknown:
      raise InvalidInput(f'Unknown operator keys: {sorted(unknown)}')
    try:
      n, k = int(record['n']), int(record['k'])
    except KeyError as exc:
      raise InvalidInput(f'Operator record is missing {exc}.') from exc
    if record.get('y') is not None and record.get('a') is not None:
      spec = cls(n=n, k=k, a=tuple(record['a']), y=tuple(record['y']))
    elif record.get('y') is not None:
      spec = cls.from_roots(n, k, record['y'])
    else:
      spec = cls.from_coeffs(n, k, record.get('a') or ())
    if 'm' in record and int(record['m']) != spec.m:
      raise InvalidInput(f'm={record["m"]} but {spec.m} coefficients given.')
    return spec

  def to_record(self) -> Dict[str, Any]:
    return {'n': self.n, 'k': self.k, 'm': self.m, 'a': list(self.a),
            'y': list(self.y)}

  def lifted(self, lam: SpectrumLike) -> np.ndarray:
    """(lambda, y) as one vector of length n + m."""
    arr = to_array(lam)
    if arr.size != self.n:
      raise InvalidInput(f'Expected {self.n} eigenvalues, got {arr.size}.')
    return np.concatenate([arr, np.asarray(self.y)])


def eval_F(spec: OperatorSpec, lam: SpectrumLike) -> float:
  return sigma(spec.k, spec.lifted(lam))


def eval_F_expanded(spec: OperatorSpec, lam: SpectrumLike) -> float:
  """sigma_k(lambda) + sum_r a_r sigma_{k-r}(lambda)."""
  table = sigma_table(to_array(lam))
  return table[spec.k] + sum(coeff * table[spec.k - r]
                             for r, coeff in enumerate(spec.a, start=1))


def grad_F(spec: OperatorSpec, lam: SpectrumLike) -> np.ndarray:
  """F_i = sigma_{k-1} of (lambda, y) with the i-th lambda slot deleted."""
  vec = spec.lifted(lam)
  return np.array([sigma(spec.k - 1, np.delete(vec, i))
                   for i in range(spec.n)])


def hess_F(spec: OperatorSpec, lam: SpectrumLike) -> np.ndarray:
  """F_ij = sigma_{k-2} of (lambda, y) without slots i and j; zero diagonal."""
  vec = spec.lifted(lam)
  hess = np.zeros((spec.n, spec.n))
  for i in range(spec.n):
    for j in range(i + 1, spec.n):
      hess[i, j] = hess[j, i] = sigma(spec.k - 2, np.delete(vec, [i, j]))
  return hess


def root_grad(spec: OperatorSpec, lam: SpectrumLike) -> np.ndarray:
  """sigma_{k-1} of (lambda, y) with the j-th root deleted, per root."""
  vec = spec.lifted(lam)
  return np.array([sigma(spec.k - 1, np.delete(vec, spec.n + j))
                   for j in range(spec.m)])


def _lift_rows(spec: OperatorSpec, rows: np.ndarray) -> np.ndarray:
  rows = np.atleast_2d(np.asarray(rows, dtype=float))
  roots = np.broadcast_to(np.asarray(spec.y), (rows.shape[0], spec.m))
  return np.hstack([rows, roots])


def eval_F_batch(spec: OperatorSpec, rows: np.ndarray) -> np.ndarray:
  return sigma_batch(spec.k, _lift_rows(spec, rows))


def grad_F_batch(spec: OperatorSpec, rows: np.ndarray) -> np.ndarray:
  lifted = _lift_rows(spec, rows)
  return np.column_stack([
    sigma_batch(spec.k - 1, np.delete(lifted, i, axis=1))
    for i in range(spec.n)])


@dataclass(frozen=True)
class MatrixPoint:
  """A symmetric matrix S with its spectral decomposition.

  Attributes:
    S: the matrix.
    eigvals: descending spectrum.
    eigvecs: orthonormal columns matching eigvals.
  """
  S: np.ndarray
  eigvals: Spectrum
  eigvecs: np.ndarray

  @classmethod
  def from_matrix(cls, s: np.ndarray) -> 'MatrixPoint':
    s = np.array(s, dtype=float)
    values, vectors = jacobi_eigh(s)
    point = cls(S=s, eigvals=Spectrum(tuple(values), sorted_desc=True),
                eigvecs=vectors)
    point.validate()
    return point

  def validate(self) -> None:
    v = self.eigvecs
    scale = max(1.0, float(np.linalg.norm(self.S)))
    rebuilt = v @ np.diag(self.eigvals.array) @ v.T
    if np.max(np.abs(rebuilt - self.S)) > 1e-9 * scale:
      raise DegenerateEigenbasis('Eigendecomposition does not rebuild S.')
    if np.max(np.abs(v.T @ v - np.eye(v.shape[0]))) > 1e-10:
      raise DegenerateEigenbasis('Eigenvectors are not orthonormal.')

  def in_eigenbasis(self, t: np.ndarray) -> np.ndarray:
    return self.eigvecs.T @ np.asarray(t, dtype=float) @ self.eigvecs


class MatrixDerivatives(NamedTuple):
  value: float
  dF: np.ndarray
  pair_coeffs: np.ndarray


def pair_coefficients(spec: OperatorSpec, lam: SpectrumLike) -> np.ndarray:
  """(F_p - F_q) / (lambda_p - lambda_q), switching to its confluent limit
  -F_pq when the eigenvalues nearly coincide. The diagonal is zero."""
  arr = to_array(lam)
  grad = grad_F(spec, arr)
  hess = hess_F(spec, arr)
  close = CONFLUENT_TOL * (1.0 + float(np.max(np.abs(arr))))
  coeffs = np.zeros((spec.n, spec.n))
  for p in range(spec.n):
    for q in range(spec.n):
      if p == q:
        continue
      gap = arr[p] - arr[q]
      if abs(gap) < close:
        coeffs[p, q] = -hess[p, q]
      else:
        coeffs[p, q] = (grad[p] - grad[q]) / gap
  return coeffs


def matrix_F_derivatives(spec: OperatorSpec,
                         pt: MatrixPoint) -> MatrixDerivatives:
  lam = pt.eigvals.array
  grad = grad_F(spec, lam)
  d_f = pt.eigvecs @ np.diag(grad) @ pt.eigvecs.T
  return MatrixDerivatives(value=eval_F(spec, lam), dF=(d_f + d_f.T) / 2.0,
                           pair_coeffs=pair_coefficients(spec, lam))


def second_derivative_form(spec: OperatorSpec, pt: MatrixPoint,
                           t: np.ndarray,
                           derivs: Optional[MatrixDerivatives] = None
                           ) -> float:
  """d^2/ds^2 F(lambda(S + sT)) at s = 0."""
  derivs = derivs or matrix_F_derivatives(spec, pt)
  t_hat = pt.in_eigenbasis(t)
  diag = np.diag(t_hat)
  hess = hess_F(spec, pt.eigvals.array)
  return float(diag @ hess @ diag + np.sum(derivs.pair_coeffs * t_hat**2))
