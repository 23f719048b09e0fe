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

"""Test code for symfun.py."""

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np

from sum_hessian.errors import DivisionByZero, IndexOutOfRange, InvalidInput
from sum_hessian.errors import NotInCone
from sum_hessian.tasks import sampling
from sum_hessian.tasks import symfun
from sum_hessian.test.oracles import fd_grad, fd_jacobian, load_fixture


class SigmaTest(parameterized.TestCase):
  cases = load_fixture('sigma_cases.json')


  def test_fixture_values(self):
    for case in self.cases['sigma']:
      self.assertAlmostEqual(symfun.sigma(case['k'], case['x']),
                             case['expected'], places=12)
    for case in self.cases['deleted']:
      self.assertAlmostEqual(
        symfun.sigma_deleted(case['k'], case['x'], case['drop']),
        case['expected'], places=12)
    for case in self.cases['quotient']:
      self.assertAlmostEqual(symfun.quotient_q(case['k'], case['x']),
                             case['expected'], places=12)


  def test_matches_subset_enumeration(self):
    for index in range(300):
      rng = sampling.child_rng(11, index)
      x = sampling.uniform_vector(rng, int(rng.integers(1, 9)))
      for k in range(x.size + 1):
        expected = symfun.sigma_by_subsets(k, x)
        self.assertLessEqual(
          abs(symfun.sigma(k, x) - expected), 1e-10 * max(1.0, abs(expected)))


  def test_table_and_batch(self):
    x = [3.0, 2.0, 1.0, -1.0]
    table = symfun.sigma_table(x)
    self.assertEqual(table[0], 1.0)
    self.assertEqual(table[7], 0.0)
    self.assertEqual(table[-1], 0.0)
    self.assertAlmostEqual(table[3], -5.0)
    rows = np.array([x, [1.0, 1.0, 1.0, 1.0]])
    np.testing.assert_allclose(symfun.sigma_batch(2, rows),
                               [symfun.sigma(2, x), 6.0])


  @parameterized.parameters(0.5, 2.0, 10.0)
  def test_homogeneity(self, t):
    x = np.array([1.5, -0.3, 2.2, 0.7, -1.1])
    table = symfun.sigma_table(x)
    self.assertLess(table.scaled_check(symfun.sigma_table(t * x), t), 1e-11)


  def test_deleted_example_matches_expansion(self):
    x = [2.0, 1.0, 5.0]
    self.assertAlmostEqual(symfun.sigma(2, x), 17.0)
    self.assertAlmostEqual(
      symfun.sigma_deleted(2, x, {0}) + x[0] * symfun.sigma_deleted(1, x, {0}),
      17.0)


  def test_deleted_rejects_bad_indices(self):
    with self.assertRaises(IndexOutOfRange):
      symfun.sigma_deleted(1, [1.0, 2.0], {2})
    with self.assertRaises(IndexError):
      symfun.sigma_deleted(1, [1.0, 2.0], {-1})
    with self.assertRaises(InvalidInput):
      symfun.sigma_deleted(1, [1.0, 2.0, 3.0], {0, 1, 2})


class DerivativeTest(parameterized.TestCase):


  def test_grad_examples(self):
    np.testing.assert_allclose(symfun.sigma_grad(2, [2.0, 1.0, 0.0]),
                               [1.0, 2.0, 3.0])
    np.testing.assert_allclose(symfun.sigma_grad(3, [1.0] * 4), [3.0] * 4)


  def test_hess_examples(self):
    hess = symfun.sigma_hess(2, [0.3, -2.0, 7.0])
    np.testing.assert_allclose(hess, np.ones((3, 3)) - np.eye(3))
    self.assertAlmostEqual(symfun.sigma_hess(3, [1.0, 2.0, 3.0])[0, 1], 3.0)
    self.assertAlmostEqual(
      symfun.sigma_hess(3, [3.0, 2.0, 1.0, -1.0])[0, 3], 3.0)


  @parameterized.parameters((2, 4), (3, 5), (4, 6))
  def test_derivatives_match_finite_differences(self, k, n):
    rng = sampling.child_rng(5, k, n)
    x = sampling.uniform_vector(rng, n, -2.0, 2.0)
    np.testing.assert_allclose(
      symfun.sigma_grad(k, x), fd_grad(lambda v: symfun.sigma(k, v), x),
      rtol=1e-5, atol=1e-5)
    np.testing.assert_allclose(
      symfun.sigma_hess(k, x),
      fd_jacobian(lambda v: symfun.sigma_grad(k, v), x),
      rtol=1e-5, atol=1e-5)


  def test_quotient_derivatives(self):
    x = np.array([3.0, 2.0, 1.5, 0.5])
    np.testing.assert_allclose(
      symfun.quotient_grad(3, x), fd_grad(lambda v: symfun.quotient_q(3, v), x),
      rtol=1e-6, atol=1e-8)
    np.testing.assert_allclose(
      symfun.quotient_hess(3, x),
      fd_jacobian(lambda v: symfun.quotient_grad(3, v), x),
      rtol=1e-5, atol=1e-7)


  def test_quotient_zero_denominator(self):
    with self.assertRaises(DivisionByZero):
      symfun.quotient_q(2, [1.0, -1.0])
    with self.assertRaises(ZeroDivisionError):
      symfun.quotient_q(3, [0.0, 0.0, 0.0])


class IdentitySuiteTest(parameterized.TestCase):


  @parameterized.parameters(([2.0, 1.0, 0.0], 2), ([1.0, 1.0, 1.0, 1.0], 3),
                            ([3.0, 2.0, 1.0, -1.0], 3))
  def test_examples_pass(self, x, k):
    report = symfun.identity_suite(x, k, tol=1e-10)
    self.assertTrue(report.passed, report.discrepancies)
    self.assertLessEqual(report.max_discrepancy, 1e-10)


  def test_skips_quotient_at_zero(self):
    report = symfun.identity_suite([1.0, -1.0, 0.0], 2)
    self.assertIn('quotient_hessian', report.skipped)
    self.assertTrue(report.passed)


  def test_random_vectors(self):
    for index in range(200):
      rng = sampling.child_rng(3, index)
      x = sampling.uniform_vector(rng, int(rng.integers(2, 9)))
      for k in range(1, x.size + 1):
        report = symfun.identity_suite(x, k, tol=1e-9)
        self.assertTrue(report.passed, (x.tolist(), k, report.discrepancies))


  def test_rejects_bad_degree(self):
    with self.assertRaises(InvalidInput):
      symfun.identity_suite([1.0, 2.0], 3)


class ConeInequalityTest(absltest.TestCase):


  def test_xk_bound_example(self):
    bound = symfun.xk_bound_check([1.0, 1.0, 1.0], 2)
    self.assertAlmostEqual(bound.ratio, 1.0 / (np.sqrt(3.0) + 1.0))
    scaled = symfun.xk_bound_check([7.0, 7.0, 7.0], 2)
    self.assertAlmostEqual(scaled.ratio, bound.ratio)


  def test_xk_bound_requires_cone(self):
    with self.assertRaises(NotInCone):
      symfun.xk_bound_check([1.0, -5.0, 0.0], 2)


  def test_cone_inequalities_on_cone_samples(self):
    for index in range(200):
      rng = sampling.child_rng(17, index)
      n = int(rng.integers(3, 7))
      k = int(rng.integers(2, n + 1))
      x = sampling.cone_point(rng, n, k)
      report = symfun.cone_inequalities(x, k)
      self.assertTrue(report.passed, (x.tolist(), k, report))
      self.assertGreater(symfun.maclaurin_ratio(x, k), 0.0)


  def test_newton_inequalities_any_vector(self):
    for index in range(100):
      rng = sampling.child_rng(23, index)
      x = sampling.uniform_vector(rng, int(rng.integers(2, 8)))
      self.assertTrue(symfun.newton_inequalities(x).passed)


  def test_negative_floor(self):
    self.assertEqual(symfun.negative_floor([3.0, -0.5, 1.0]), 0.5)
    self.assertEqual(symfun.negative_floor([3.0, 0.5]), 0.0)


if __name__ == '__main__':
  absltest.main()
