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

"""Test code for operator.py."""

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np

from sum_hessian.errors import InvalidInput, NoRealRoots
from sum_hessian.tasks import operator
from sum_hessian.tasks import sampling
from sum_hessian.tasks.operator import OperatorSpec
from sum_hessian.tasks.symfun import sigma
from sum_hessian.test.oracles import fd_grad, fd_jacobian
from sum_hessian.test.oracles import fd_second_directional


class RootsTest(parameterized.TestCase):


  @parameterized.parameters(([2.0, 1.0], (1.0, 1.0)),
                            ([3.0, 2.0], (2.0, 1.0)),
                            ([1.5], (1.5,)),
                            ([], ()))
  def test_real_roots(self, a, expected):
    np.testing.assert_allclose(operator.roots_from_coeffs(a), expected,
                               atol=1e-7)


  def test_no_real_roots(self):
    with self.assertRaises(NoRealRoots):
      operator.roots_from_coeffs([0.0, 1.0])


  def test_coeffs_from_roots(self):
    np.testing.assert_allclose(operator.coeffs_from_roots([2.0, 1.0]),
                               (3.0, 2.0))
    self.assertEqual(operator.coeffs_from_roots([]), ())


class OperatorSpecTest(absltest.TestCase):


  def test_constructors_agree(self):
    by_coeffs = OperatorSpec.from_coeffs(4, 3, [3.0, 2.0])
    by_roots = OperatorSpec.from_roots(4, 3, [1.0, 2.0])
    self.assertEqual(by_roots.y, (2.0, 1.0))
    np.testing.assert_allclose(by_coeffs.y, by_roots.y, atol=1e-9)
    self.assertEqual(by_roots.m, 2)
    self.assertEqual(OperatorSpec.identity(3, 2).m, 0)


  def test_rejects_bad_specs(self):
    with self.assertRaises(InvalidInput):
      OperatorSpec(n=3, k=1)
    with self.assertRaises(InvalidInput):
      OperatorSpec(n=3, k=4)
    with self.assertRaises(InvalidInput):
      OperatorSpec.from_roots(3, 2, [1.0, 2.0])
    with self.assertRaises(InvalidInput):
      OperatorSpec(n=3, k=2, a=(1.0,), y=(2.0,))


  def test_records(self):
    spec = OperatorSpec.from_record({'n': 3, 'k': 2, 'a': [1.5]})
    self.assertEqual(spec.y, (1.5,))
    self.assertEqual(OperatorSpec.from_record(spec.to_record()), spec)
    with self.assertRaises(InvalidInput):
      OperatorSpec.from_record({'n': 3, 'k': 2, 'b': [1.0]})
    with self.assertRaises(InvalidInput):
      OperatorSpec.from_record({'n': 3, 'k': 2, 'm': 2, 'a': [1.0]})
    with self.assertRaises(InvalidInput):
      OperatorSpec.from_record({'k': 2})


  def test_lifted_length(self):
    spec = OperatorSpec.from_roots(3, 2, [0.5])
    np.testing.assert_array_equal(spec.lifted([1.0, 2.0, 3.0]),
                                  [1.0, 2.0, 3.0, 0.5])
    with self.assertRaises(InvalidInput):
      spec.lifted([1.0, 2.0])


class EvaluationTest(parameterized.TestCase):


  def test_lifting_identity(self):
    for index in range(100):
      rng = sampling.child_rng(31, index)
      n = int(rng.integers(2, 7))
      k = int(rng.integers(2, n + 1))
      y = rng.uniform(-2.0, 2.0, size=int(rng.integers(0, k)))
      spec = OperatorSpec.from_roots(n, k, y)
      lam = sampling.uniform_vector(rng, n, -3.0, 3.0)
      lifted, expanded = (operator.eval_F(spec, lam),
                          operator.eval_F_expanded(spec, lam))
      self.assertLessEqual(abs(lifted - expanded),
                           1e-9 * max(1.0, abs(lifted)))


  def test_example_value(self):
    spec = OperatorSpec.from_coeffs(3, 2, [3.0])
    lam = [1.0, 2.0, 3.0]
    self.assertAlmostEqual(operator.eval_F(spec, lam), 11.0 + 3.0 * 6.0)


  @parameterized.parameters((3, 2, ()), (4, 3, (1.0, 0.5)), (5, 4, (2.0,)))
  def test_derivatives(self, n, k, y):
    spec = OperatorSpec.from_roots(n, k, y)
    lam = sampling.uniform_vector(sampling.child_rng(n, k), n, -2.0, 2.0)
    np.testing.assert_allclose(
      operator.grad_F(spec, lam),
      fd_grad(lambda v: operator.eval_F(spec, v), lam), rtol=1e-5, atol=1e-6)
    np.testing.assert_allclose(
      operator.hess_F(spec, lam),
      fd_jacobian(lambda v: operator.grad_F(spec, v), lam),
      rtol=1e-5, atol=1e-6)
    if y:
      np.testing.assert_allclose(
        operator.root_grad(spec, lam),
        fd_grad(lambda r: sigma(k, np.concatenate([lam, r])), np.array(y)),
        rtol=1e-5, atol=1e-6)


  def test_ellipticity_in_cone(self):
    spec = OperatorSpec.from_roots(4, 3, [1.0, 0.5])
    for index in range(100):
      rng = sampling.child_rng(37, index)
      lam = sampling.cone_point(rng, 4, 3, y=spec.y)
      self.assertTrue(np.all(operator.grad_F(spec, lam) > 0))


  def test_batches(self):
    spec = OperatorSpec.from_roots(3, 2, [0.7])
    rows = np.array([[1.0, 2.0, 3.0], [-1.0, 0.5, 2.0]])
    np.testing.assert_allclose(operator.eval_F_batch(spec, rows),
                               [operator.eval_F(spec, r) for r in rows])
    np.testing.assert_allclose(operator.grad_F_batch(spec, rows),
                               [operator.grad_F(spec, r) for r in rows])


class MatrixTest(absltest.TestCase):


  def test_pair_coefficients_of_sigma2(self):
    spec = OperatorSpec.identity(3, 2)
    coeffs = operator.pair_coefficients(spec, [3.0, 1.0, 1.0])
    expected = -(np.ones((3, 3)) - np.eye(3))
    np.testing.assert_allclose(coeffs, expected, atol=1e-9)


  def test_sigma2_second_derivative_is_exact(self):
    spec = OperatorSpec.identity(4, 2)
    rng = sampling.child_rng(41)
    for _ in range(20):
      pt = operator.MatrixPoint.from_matrix(sampling.random_symmetric(rng, 4))
      t = sampling.random_symmetric(rng, 4)
      expected = np.trace(t)**2 - np.sum(t * t)
      self.assertAlmostEqual(operator.second_derivative_form(spec, pt, t),
                             expected, places=7)


  def test_second_derivative_matches_finite_difference(self):
    spec = OperatorSpec.from_roots(4, 3, [1.0, 0.5])
    rng = sampling.child_rng(43)

    def f(mat):
      return operator.eval_F(spec, np.linalg.eigvalsh(mat))

    for _ in range(10):
      s = sampling.random_symmetric(rng, 4)
      t = sampling.random_symmetric(rng, 4)
      pt = operator.MatrixPoint.from_matrix(s)
      self.assertAlmostEqual(operator.second_derivative_form(spec, pt, t),
                             fd_second_directional(f, s, t), delta=1e-4)


  def test_matrix_first_derivative(self):
    spec = OperatorSpec.from_roots(3, 2, [0.5])
    rng = sampling.child_rng(47)
    s = sampling.random_symmetric(rng, 3)
    t = sampling.random_symmetric(rng, 3)
    pt = operator.MatrixPoint.from_matrix(s)
    derivs = operator.matrix_F_derivatives(spec, pt)
    h = 1e-6

    def f(mat):
      return operator.eval_F(spec, np.linalg.eigvalsh(mat))

    fd = (f(s + h * t) - f(s - h * t)) / (2 * h)
    self.assertAlmostEqual(float(np.sum(derivs.dF * t)), fd, places=6)
    self.assertAlmostEqual(derivs.value, f(s), places=10)


  def test_eigenbasis(self):
    rng = sampling.child_rng(53)
    q = sampling.random_orthogonal(rng, 3)
    s = q @ np.diag([3.0, -1.0, 0.5]) @ q.T
    pt = operator.MatrixPoint.from_matrix(s)
    np.testing.assert_allclose(pt.eigvals.values, (3.0, 0.5, -1.0), atol=1e-10)
    np.testing.assert_allclose(pt.in_eigenbasis(s),
                               np.diag([3.0, 0.5, -1.0]), atol=1e-9)


if __name__ == '__main__':
  absltest.main()
