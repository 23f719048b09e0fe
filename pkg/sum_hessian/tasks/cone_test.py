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

"""Test code for cone.py."""

from absl.testing import absltest
from absl.testing import parameterized
import numpy as np

from sum_hessian.errors import InvalidInput, NotInCone
from sum_hessian.tasks import cone
from sum_hessian.tasks import sampling
from sum_hessian.tasks.symfun import sigma


class MembershipTest(parameterized.TestCase):


  @parameterized.parameters(
    ([1.0, 1.0, -0.4], 2, True, None),
    ([1.0, 1.0, -0.5], 2, False, 2),
    ([-1.0, 0.5, 0.2], 1, False, 1),
    ([2.0, 1.0, 0.5], 3, True, None),
  )
  def test_in_gamma_k(self, x, k, member, failing):
    verdict = cone.in_gamma_k(x, k)
    self.assertEqual(verdict.member, member)
    self.assertEqual(verdict.first_failing_degree, failing)
    self.assertLen(verdict.margins, k)


  def test_eps_shrinks_the_cone(self):
    self.assertTrue(cone.in_gamma_k([1.0, 1.0, -0.4], 2).member)
    verdict = cone.in_gamma_k([1.0, 1.0, -0.4], 2, eps=0.5)
    self.assertFalse(verdict.member)
    self.assertEqual(verdict.first_failing_degree, 2)


  def test_bad_degree(self):
    with self.assertRaises(InvalidInput):
      cone.in_gamma_k([1.0, 2.0], 0)
    with self.assertRaises(InvalidInput):
      cone.in_gamma_k([1.0, 2.0], 3)
    with self.assertRaises(InvalidInput):
      cone.in_lifted_cone([1.0, 2.0], [1.0], 3)


  def test_lifted_cone(self):
    self.assertFalse(cone.in_lifted_cone([1.0, -0.5], [1.0], 2).member)
    self.assertTrue(cone.in_lifted_cone([1.0, -0.5], [2.0], 2).member)


  def test_gamma_k_nesting(self):
    for index in range(300):
      rng = sampling.child_rng(9, index)
      x = sampling.uniform_vector(rng, 5)
      for k in range(2, 6):
        if cone.in_gamma_k(x, k).member:
          self.assertTrue(cone.in_gamma_k(x, k - 1).member)


class ConditionTest(absltest.TestCase):


  def test_conditions(self):
    self.assertTrue(cone.check_condition([1.0, -0.5], [2.0], [2.0], 2, 1))
    self.assertFalse(cone.check_condition([1.0, -0.5], [-2.0], [-2.0], 2, 1))
    self.assertTrue(cone.check_condition([1.0, -0.5], [], [2.0], 2, 2))
    self.assertFalse(cone.check_condition([1.0, -0.5], [], [-1.0], 2, 2))
    self.assertFalse(cone.check_condition([-1.0, -0.5], [], [1.0], 2, 2))
    with self.assertRaises(InvalidInput):
      cone.check_condition([1.0], [], [], 1, 3)


  def test_single_root_never_separates(self):
    rng = sampling.child_rng(4)
    self.assertIsNone(cone.find_condition_witness(rng, 2, 2, 1, tries=500))


  def test_witness_with_two_roots(self):
    rng = sampling.child_rng(4)
    found = cone.find_condition_witness(rng, 2, 2, 2)
    self.assertIsNotNone(found)
    lam, y = found
    self.assertTrue(cone.check_condition(lam, y, [], 2, 1))
    self.assertFalse(cone.in_gamma_k(lam, 1).member)


  def test_semiconvexity_ratio(self):
    self.assertAlmostEqual(cone.semiconvexity_ratio([3.0, 1.0, -1.0]), 1 / 3)
    self.assertEqual(cone.semiconvexity_ratio([3.0, 1.0]), 0.0)
    with self.assertRaises(InvalidInput):
      cone.semiconvexity_ratio([1.0, -2.0])


  def test_cone_margin(self):
    self.assertAlmostEqual(cone.cone_margin([1.0, 1.0, 1.0], 2), 3.0)
    self.assertAlmostEqual(cone.cone_margin([4.0, 0.0, 0.0], 2), 0.0)


class BoundaryEstimateTest(absltest.TestCase):


  def test_pinch(self):
    check = cone.pinch_check([-0.5, 2.0, 1.0], [], 3)
    self.assertEqual(check.lhs, -0.5)
    self.assertEqual(check.bound, -1.0)
    self.assertEqual(cone.pinch_envelope([check]), -0.5)
    self.assertIsNone(cone.pinch_envelope([]))
    with self.assertRaises(NotInCone):
      cone.pinch_check([1.0, 1.0, -3.0], [], 3)


  def test_pinch_holds_on_samples(self):
    for index in range(200):
      rng = sampling.child_rng(13, index)
      lam = sampling.cone_point(rng, 3, 2)
      check = cone.pinch_check(lam, [], 3)
      self.assertGreaterEqual(check.lhs, check.bound - 1e-12)


  def test_full_degree_floor(self):
    floor = cone.full_degree_floor([1.0, -0.2], [0.5])
    self.assertEqual(floor.smallest, -0.2)
    self.assertEqual(floor.floor, -0.5)
    self.assertGreater(sigma(2, [1.0, -0.2, 0.5]), 0.0)
    with self.assertRaises(NotInCone):
      cone.full_degree_floor([1.0, -2.0], [0.5])


if __name__ == '__main__':
  absltest.main()
