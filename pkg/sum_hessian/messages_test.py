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

""" Test code for messages.py. """

from absl.testing import absltest

from sum_hessian import messages


class MessagesTest(absltest.TestCase):


  def test_rr(self):
    self.assertEqual(messages.summary('rr', True, {'y': [1.0, 1.0]}),
                     '└── rr PASSED: roots 1, 1')
    output = messages.summary('rr', False, {'error': 'NoRealRoots',
                                            'message': 'complex pair'})
    self.assertIn('NoRealRoots', output)


  def test_sweep(self):
    results = {'cells': [{'samples': 10, 'passed': 9},
                         {'samples': 5, 'passed': 5}]}
    self.assertEqual(messages.summary('concavity-sweep', False, results),
                     '└── concavity sweep FAILED: 14/15 samples passed over '
                     '2 cell(s)')


  def test_every_command_has_a_summary(self):
    self.assertCountEqual(messages.SUMMARIES, [
      'symcheck', 'cone', 'rr', 'operator-check', 'concavity-verify',
      'concavity-sweep', 'andrews', 'trace-bounds', 'solve', 'rigidity'])


  def test_missing_values(self):
    output = messages.summary('concavity-verify', True,
                              {'report': {'margin': 0.25},
                               'max_gamma': None})
    self.assertIn('max gamma n/a', output)


  def test_tip_report(self):
    self.assertTrue(len(messages.tip_report('out/rr.json')) > 1)
    self.assertIn('2 witness(es)', messages.tip_report('out/rr.json', 2))


if __name__ == '__main__':
  absltest.main()
