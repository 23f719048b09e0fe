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

""" Test code for config.py. """

import argparse
import os
from unittest import mock

from absl.testing import absltest

from sum_hessian import config
from sum_hessian.errors import InvalidConfig


class ConfigTest(absltest.TestCase):
  parser: argparse.ArgumentParser


  def setUp(self):
    self.parser = config.process_args()


  def test_lists(self):
    self.assertEqual(config.float_list('1,2.5,-3'), [1.0, 2.5, -3.0])
    self.assertEqual(config.float_list(''), [])
    self.assertEqual(config.float_list([1, 2]), [1.0, 2.0])
    self.assertEqual(config.int_list('2,4'), [2, 4])
    with self.assertRaises(argparse.ArgumentTypeError):
      config.float_list('1,x')


  def test_parse_subcommands(self):
    args = self.parser.parse_args(['--seed', '5', 'concavity', 'sweep',
                                   '--delta', '0.005,0.01', '--n', '5'])
    self.assertEqual(args.command, 'concavity')
    self.assertEqual(args.subcommand, 'sweep')
    self.assertEqual(args.delta, [0.005, 0.01])
    self.assertEqual(args.n, 5)
    self.assertEqual(args.seed, 5)
    args = self.parser.parse_args(['rr', '--a', '2,1'])
    self.assertEqual(args.a, [2.0, 1.0])


  def test_global_flags_after_the_command(self):
    args = self.parser.parse_args([
      'concavity', 'sweep', '--variant', 'sigma-k', '--n', '4', '--k', '2',
      '--delta', '0.005', '--level', '1e-4', '--samples', '20',
      '--seed', '7'])
    self.assertEqual(args.seed, 7)
    self.assertEqual(args.samples, 20)
    self.assertEqual(args.level, [1e-4])
    self.assertEqual(args.rel_tol, 1e-9)
    args = self.parser.parse_args(['rr', '--a', '1', '--workers', '3', '-d',
                                   '--alphas', '1,2'])
    self.assertEqual(args.workers, 3)
    self.assertTrue(args.debug)
    self.assertEqual(args.alphas, [1.0, 2.0])


  def test_flags_before_the_command_survive(self):
    args = self.parser.parse_args(['--seed', '5', '--emit', 'json', 'rr'])
    self.assertEqual(args.seed, 5)
    self.assertEqual(args.emit, ['json'])
    self.assertFalse(args.debug)
    self.assertIsNone(args.config)


  def test_usage_errors_raise(self):
    with self.assertRaises(InvalidConfig):
      self.parser.parse_args(['rr', '--seed', 'seven'])
    with self.assertRaises(InvalidConfig):
      self.parser.parse_args(['nope'])
    with self.assertRaises(InvalidConfig):
      self.parser.parse_args([])


  def test_output_dir_precedence(self):
    with mock.patch.dict(config.config, {'output-dir': None}):
      with mock.patch.dict(os.environ, {config.ENV_OUTPUT_DIR: '/tmp/env'}):
        self.assertEqual(config.output_dir(), '/tmp/env')
      with mock.patch.dict(os.environ, clear=True):
        self.assertEqual(config.output_dir(), config.DEFAULT_OUTPUT_DIR)
    with mock.patch.dict(config.config, {'output-dir': '/tmp/flag'}):
      self.assertEqual(config.output_dir(), '/tmp/flag')


  def test_apply_overrides(self):
    args = self.parser.parse_args(['concavity', 'verify'])
    config.apply_overrides(args, {'lam': [100, 5, 1], 'delta': 0.02,
                                  'tol-psd': 1e-6, 'y': None})
    self.assertEqual(args.lam, [100.0, 5.0, 1.0])
    self.assertEqual(args.delta, 0.02)
    self.assertEqual(args.tol_psd, 1e-6)
    self.assertIsNone(args.y)
    with self.assertRaises(InvalidConfig):
      config.apply_overrides(args, {'colour': 'red'})
    with self.assertRaises(InvalidConfig):
      config.apply_overrides(args, {'command': 'rr'})
    with self.assertRaises(InvalidConfig):
      config.apply_overrides(args, {'lam': 'a,b'})


  def test_load_config_file(self):
    path = self.create_tempfile(
      content='{"seed": 3, "_argv": ["rr"]}').full_path
    self.assertEqual(config.load_config_file(path), {'seed': 3})
    bad = self.create_tempfile(content='[1, 2]').full_path
    with self.assertRaises(InvalidConfig):
      config.load_config_file(bad)
    with self.assertRaises(InvalidConfig):
      config.load_config_file(os.path.join(os.path.dirname(path), 'nope'))


  def test_set_configs(self):
    args = self.parser.parse_args(['--rel-tol', '1e-7', '--workers', '4',
                                   'symcheck'])
    with mock.patch.dict(config.config):
      config.set_configs(args)
      self.assertEqual(config.get_config('rel-tol'), 1e-7)
      self.assertEqual(config.get_config('workers'), 4)
    self.assertEqual(config.get_config('rel-tol'), 1e-9)
    self.assertIsNone(config.get_config('no-such-key'))


if __name__ == '__main__':
  absltest.main()
