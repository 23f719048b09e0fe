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

"""Test code for spectrum.py."""

from absl.testing import absltest
import numpy as np

from sum_hessian.errors import InvalidInput
from sum_hessian.spectrum import Spectrum, as_spectrum, to_array


class SpectrumTest(absltest.TestCase):


  def test_descending_is_stable(self):
    spec = Spectrum.descending([1.0, 3.0, 1.0, 2.0])
    self.assertEqual(spec.values, (3.0, 2.0, 1.0, 1.0))
    self.assertTrue(spec.sorted_desc)
    self.assertTrue(spec.is_descending())
    self.assertEqual(spec.n, 4)


  def test_rejects_bad_values(self):
    with self.assertRaises(InvalidInput):
      Spectrum(())
    with self.assertRaises(InvalidInput):
      Spectrum((1.0, float('nan')))
    with self.assertRaises(ValueError):
      Spectrum((1.0, 2.0), sorted_desc=True)
    with self.assertRaises(InvalidInput):
      to_array([1.0, float('inf')])


  def test_sorted_and_scaled(self):
    spec = Spectrum((1.0, 4.0, -2.0))
    self.assertFalse(spec.is_descending())
    self.assertEqual(spec.sorted().values, (4.0, 1.0, -2.0))
    flipped = spec.sorted().scaled(-1.0)
    self.assertFalse(flipped.sorted_desc)
    self.assertEqual(flipped.values, (-4.0, -1.0, 2.0))
    self.assertTrue(spec.sorted().scaled(2.0).sorted_desc)


  def test_conversions(self):
    spec = as_spectrum(np.array([[1.0, 2.0]]))
    self.assertEqual(spec.values, (1.0, 2.0))
    self.assertIs(as_spectrum(spec), spec)
    np.testing.assert_array_equal(to_array(spec), [1.0, 2.0])


if __name__ == '__main__':
  absltest.main()
