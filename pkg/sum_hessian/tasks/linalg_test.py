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

"""Test code for linalg.py."""

from absl.testing import absltest
import numpy as np

from sum_hessian.errors import InvalidInput
from sum_hessian.tasks import sampling
from sum_hessian.tasks.linalg import jacobi_eigh


class JacobiTest(absltest.TestCase):


  def test_matches_dense_solver(self):
    rng = sampling.child_rng(2)
    for n in range(1, 7):
      s = sampling.random_symmetric(rng, n, scale=3.0)
      values, vectors = jacobi_eigh(s)
      np.testing.assert_allclose(values, np.linalg.eigvalsh(s)[::-1],
                                 atol=1e-10)
      np.testing.assert_allclose(vectors.T @ vectors, np.eye(n), atol=1e-12)
      np.testing.assert_allclose(vectors @ np.diag(values) @ vectors.T, s,
                                 atol=1e-10)


  def test_repeated_eigenvalues(self):
    q = sampling.random_orthogonal(sampling.child_rng(3), 4)
    s = q @ np.diag([2.0, 2.0, 2.0, -1.0]) @ q.T
    values, vectors = jacobi_eigh(s)
    np.testing.assert_allclose(values, [2.0, 2.0, 2.0, -1.0], atol=1e-10)
    np.testing.assert_allclose(vectors.T @ vectors, np.eye(4), atol=1e-12)


  def test_diagonal_is_sorted(self):
    values, vectors = jacobi_eigh(np.diag([1.0, 5.0, -2.0]))
    np.testing.assert_array_equal(values, [5.0, 1.0, -2.0])
    np.testing.assert_array_equal(np.abs(vectors[1, 0]), 1.0)


  def test_rejects_bad_input(self):
    with self.assertRaises(InvalidInput):
      jacobi_eigh(np.ones((2, 3)))
    with self.assertRaises(InvalidInput):
      jacobi_eigh(np.array([[1.0, 2.0], [0.0, 1.0]]))


if __name__ == '__main__':
  absltest.main()
