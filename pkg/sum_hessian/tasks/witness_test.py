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

"""Test code for witness.py."""

import os

from absl.testing import absltest

from sum_hessian.config import load_config_file
from sum_hessian.errors import InvalidInput
from sum_hessian.tasks import witness


class WitnessTest(absltest.TestCase):
  output_dir: str


  def setUp(self):
    self.output_dir = self.create_tempdir().full_path


  def test_name(self):
    self.assertEqual(witness.witness_name('concavity verify', 3, 'c0'),
                     'concavity-verify-s3-c0')


  def test_archive_and_replay(self):
    path = witness.archive_witness(
      self.output_dir, ['concavity', 'verify'],
      {'lam': [100.0, 5.0, 1.0], 'n': 3, 'y': None}, 11, 'c0',
      {'margin': -0.25})
    self.assertEqual(os.path.dirname(path),
                     os.path.join(self.output_dir, witness.WITNESS_DIR))
    record = witness.load_witness(path)
    self.assertEqual(record['seed'], 11)
    self.assertEqual(record['_details'], {'margin': -0.25})
    self.assertEqual(witness.replay_argv(path),
                     ['--config', path, 'concavity', 'verify'])
    overrides = load_config_file(path)
    self.assertNotIn('_argv', overrides)
    self.assertEqual(overrides['lam'], [100.0, 5.0, 1.0])


  def test_load_rejects_other_files(self):
    missing = os.path.join(self.output_dir, 'missing.json')
    with self.assertRaises(InvalidInput):
      witness.load_witness(missing)
    plain = self.create_tempfile(content='{"seed": 1}').full_path
    with self.assertRaises(InvalidInput):
      witness.load_witness(plain)


if __name__ == '__main__':
  absltest.main()
