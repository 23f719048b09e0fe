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

"""Test code for sampling.py."""

from absl.testing import absltest
import numpy as np

from sum_hessian.errors import InvalidInput, NonpositiveOperatorValue
from sum_hessian.errors import NumericalFailure
from sum_hessian.tasks import sampling
from sum_hessian.tasks.operator import OperatorSpec, eval_F
from sum_hessian.tasks.symfun import sigma


class SamplingTest(absltest.TestCase):


  def test_child_rng_is_reproducible(self):
    first = sampling.child_rng(7, 1, 2).uniform(size=3)
    again = sampling.child_rng(7, 1, 2).uniform(size=3)
    other = sampling.child_rng(7, 2, 1).uniform(size=3)
    np.testing.assert_array_equal(first, again)
    self.assertFalse(np.array_equal(first, other))


  def test_cone_point(self):
    rng = sampling.child_rng(1)
    for _ in range(50):
      lam = sampling.cone_point(rng, 4, 3, y=[0.5])
      self.assertTrue(sampling.in_cone(np.concatenate([lam, [0.5]]), 3))
      self.assertTrue(np.all(np.diff(lam) <= 0))


  def test_cone_point_gives_up(self):
    with self.assertRaises(NumericalFailure):
      sampling.cone_point(sampling.child_rng(1), 3, 2, y=[-100.0], tries=5)


  def test_normalized_tail(self):
    rng = sampling.child_rng(5)
    tail = sampling.normalized_tail(rng, 4, -0.1)
    self.assertLen(tail, 3)
    self.assertTrue(np.all(np.diff(tail) <= 0))
    self.assertTrue(np.all(tail >= -0.1))
    self.assertTrue(np.all(tail <= 1.0))


  def test_level_point_hits_band(self):
    rng = sampling.child_rng(8)
    for _ in range(20):
      point = sampling.level_point(rng, 3, 2, floor=-0.05, level_cap=0.1,
                                   decades=2.0)
      self.assertIsNotNone(point)
      self.assertEqual(point.lam[0], 1.0)
      self.assertLessEqual(point.level, 0.1 * (1 + 1e-9))
      self.assertGreater(point.level, 0.0)
      self.assertAlmostEqual(point.level, sigma(2, point.lam))


  def test_level_point_scales_with_lambda1(self):
    rng = sampling.child_rng(9)
    point = sampling.level_point(rng, 3, 2, floor=0.0, level_cap=0.5,
                                 y=[2.0], lambda1=100.0)
    self.assertEqual(point.lam[0], 100.0)
    self.assertLen(point.y, 1)
    self.assertTrue(sampling.in_cone(np.concatenate([point.lam, point.y]), 2))


  def test_level_point_keeps_lambda2_large(self):
    rng = sampling.child_rng(12)
    ratios = []
    for _ in range(200):
      point = sampling.level_point(rng, 5, 3, floor=-0.005, level_cap=1e-4)
      if point is not None:
        self.assertLessEqual(point.level, 1e-4 * (1 + 1e-9))
        self.assertTrue(np.all(np.diff(point.lam) <= 0))
        self.assertTrue(sampling.in_cone(point.lam, 3))
        ratios.append(point.lam[1] / point.lam[0])
    self.assertGreater(max(ratios), 0.3)
    self.assertLess(min(ratios), 0.1)


  def test_unit_level(self):
    for spec, lam in ((OperatorSpec.identity(4, 3), [3.0, 2.0, 1.0, 0.5]),
                      (OperatorSpec.from_roots(3, 2, [0.5]), [4.0, 1.0, 0.2])):
      base = sampling.unit_level(spec, lam)
      self.assertAlmostEqual(eval_F(spec, base), 1.0, places=12)
      for c in (1e-2, 7.0, 1e3):
        np.testing.assert_allclose(
          sampling.unit_level(spec, c * np.asarray(lam)), base, rtol=1e-10)


  def test_unit_level_rejects(self):
    with self.assertRaises(NonpositiveOperatorValue):
      sampling.unit_level(OperatorSpec.identity(3, 2), [1.0, -2.0, -2.0])
    with self.assertRaises(InvalidInput):
      sampling.unit_level(OperatorSpec.from_roots(3, 2, [0.5]),
                          [1.0, -2.0, -2.0])


  def test_random_matrices(self):
    rng = sampling.child_rng(10)
    s = sampling.random_symmetric(rng, 3)
    np.testing.assert_array_equal(s, s.T)
    q = sampling.random_orthogonal(rng, 4)
    np.testing.assert_allclose(q.T @ q, np.eye(4), atol=1e-12)
    roots = sampling.nonneg_roots(rng, 3)
    self.assertTrue(np.all(roots >= 0))
    self.assertTrue(np.all(np.diff(roots) <= 0))


if __name__ == '__main__':
  absltest.main()
