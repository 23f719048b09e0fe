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

""" Default configurations values and command-line parsing. """

import argparse
import json
import os
from typing import Any, Dict, List, Optional

from sum_hessian.errors import InvalidConfig

VERSION = '0.3.0'

ENV_OUTPUT_DIR = 'SUM_HESSIAN_OUTPUT_DIR'
DEFAULT_OUTPUT_DIR = 'sum-hessian-out'

config = {
  'version': VERSION,
  'debug': False,
  'seed': 0,
  'output-dir': None,
  'emit': ['json', 'csv'],
  'workers': 1,
  'rel-tol': 1e-9,
  'abs-floor': 1e-12,
  'tol-psd': 1e-8,
  'eps-cone': 0.0,
  'solver-eps-cone': 1e-10,
  'fd-step': 1e-5,
  'max-iters': 50,
  'tol-res': 1e-8,
  'max-halvings': 30,
  'alphas': [0.5, 1.0, 2.0, 4.0],
}

# Keys of `config` a user may override from flags or a config file.
_GLOBAL_KEYS = ('debug', 'seed', 'output-dir', 'emit', 'workers', 'rel-tol',
                'abs-floor', 'tol-psd', 'eps-cone', 'solver-eps-cone',
                'fd-step', 'max-iters', 'tol-res', 'max-halvings', 'alphas')


def get_config(key: str) -> Any:
  if key in config:
    return config[key]


def output_dir() -> str:
  """--output-dir, else $SUM_HESSIAN_OUTPUT_DIR, else ./sum-hessian-out."""
  return (get_config('output-dir') or os.environ.get(ENV_OUTPUT_DIR)
          or DEFAULT_OUTPUT_DIR)


def float_list(text: str) -> List[float]:
  """'1,2.5,-3' -> [1.0, 2.5, -3.0]; '' -> []."""
  if isinstance(text, (list, tuple)):
    return [float(v) for v in text]
  text = str(text).strip()
  if not text:
    return []
  try:
    return [float(v) for v in text.split(',')]
  except ValueError as exc:
    raise argparse.ArgumentTypeError(f'not a list of numbers: {text}') from exc


def int_list(text: str) -> List[int]:
  return [int(v) for v in float_list(text)]


def _add_operator_args(parser: argparse.ArgumentParser,
                       n: Optional[int] = 3, k: Optional[int] = 2) -> None:
  parser.add_argument('--n', type=int, default=n, help='Dimension n.')
  parser.add_argument('--k', type=int, default=k, help='Degree k.')
  parser.add_argument('--a', type=float_list, default=None,
                      help='Coefficients a_1..a_m, comma separated.')
  parser.add_argument('--y', type=float_list, default=None,
                      help='Roots y_1..y_m, comma separated (a is derived).')


def _add_sampling_args(parser: argparse.ArgumentParser,
                       samples: int = 1000) -> None:
  parser.add_argument('--samples', type=int, default=samples,
                      help='Number of seeded random samples.')


class LabArgumentParser(argparse.ArgumentParser):
  """Usage errors raise InvalidConfig instead of exiting."""

  def error(self, message):
    raise InvalidConfig(f'{self.prog}: {message}')


def _add_global_args(parser: argparse.ArgumentParser,
                     defaults: bool = True) -> None:
  """Flags accepted before or after the subcommand. Without defaults they
  only land in the namespace when given."""

  def default(key: str) -> Dict[str, Any]:
    if not defaults:
      return {}
    value = config[key]
    return {'default': list(value) if isinstance(value, list) else value}

  parser.add_argument('-d', '--debug', action='store_true',
                      help='Print to the log file in debug level.',
                      **default('debug'))
  parser.add_argument('--seed', type=int, **default('seed'),
                      help='64-bit seed recorded in every report.')
  parser.add_argument('--output-dir', **default('output-dir'),
                      help=f'Report directory (default ${ENV_OUTPUT_DIR} or '
                      f'./{DEFAULT_OUTPUT_DIR}).')
  parser.add_argument('--config', **({'default': None} if defaults else {}),
                      help='JSON file whose keys override the flags.')
  parser.add_argument('--emit', type=lambda s: s.split(','),
                      **default('emit'), help='Report formats: json,csv.')
  parser.add_argument('--workers', type=int, **default('workers'),
                      help='Threads used by sweeps.')
  for key in ('rel-tol', 'abs-floor', 'tol-psd', 'eps-cone',
              'solver-eps-cone', 'fd-step', 'tol-res'):
    parser.add_argument(f'--{key}', type=float, **default(key))
  for key in ('max-iters', 'max-halvings'):
    parser.add_argument(f'--{key}', type=int, **default(key))
  parser.add_argument('--alphas', type=float_list, **default('alphas'),
                      help='Pogorelov exponents, comma separated.')


def process_args() -> argparse.ArgumentParser:
  """ Print usage options. """
  parser = LabArgumentParser(
    prog='sum-hessian-lab',
    description=f'Sum Hessian Lab v{VERSION} - sum-type Hessian operator '
    'calculus, concavity checks and Dirichlet solves.')
  _add_global_args(parser)
  shared = LabArgumentParser(add_help=False,
                             argument_default=argparse.SUPPRESS)
  _add_global_args(shared, defaults=False)

  def command(group, name: str, **kwargs) -> argparse.ArgumentParser:
    return group.add_parser(name, parents=[shared], **kwargs)

  commands = parser.add_subparsers(dest='command', required=True)

  symcheck = command(
    commands, 'symcheck',
    help='Symmetric-function identities against brute force.')
  symcheck.add_argument('--x', type=float_list, default=None,
                        help='Single vector to check instead of sampling.')
  symcheck.add_argument('--k', type=int, default=None)
  symcheck.add_argument('--n-max', type=int, default=8)
  _add_sampling_args(symcheck, samples=10000)

  cone = command(commands, 'cone', help='Garding cone membership checks.')
  cone.add_argument('--lam', type=float_list, default=None)
  _add_operator_args(cone)
  _add_sampling_args(cone, samples=10000)

  rr = command(commands, 'rr', help='Hypothesis (RR) root check.')
  rr.add_argument('--a', type=float_list, default=None)
  rr.add_argument('--y', type=float_list, default=None)

  operator_check = command(
    commands, 'operator-check',
    help='Lifting identity and derivative checks.')
  _add_operator_args(operator_check)
  _add_sampling_args(operator_check, samples=1000)

  concavity = command(commands, 'concavity',
                      help='Concavity quadratic forms.')
  concavity_cmds = concavity.add_subparsers(dest='subcommand', required=True)
  for name in ('verify', 'sweep'):
    sub = command(concavity_cmds, name)
    _add_operator_args(sub, n=4, k=2)
    sub.add_argument('--variant', default='sigma-k',
                     choices=['sigma-k', 'sum-f', 'n-minus-one'])
    sub.add_argument('--gamma', type=float, default=None)
    sub.add_argument('--rhs-reading', default='first',
                     choices=['first', 'trace'])
    if name == 'verify':
      sub.add_argument('--lam', type=float_list, default=None,
                       help='Eigenvalues to verify at (required).')
      sub.add_argument('--delta', type=float, default=0.01)
    else:
      sub.add_argument('--delta', type=float_list, default=[0.005])
      sub.add_argument('--level', type=float_list, default=[1e-4])
      sub.add_argument('--m', type=int, default=0,
                       help='Random roots per sample (sum-f, n-minus-one).')
      sub.add_argument('--y-max', type=float, default=2.0)
      sub.add_argument('--lambda1', type=float_list, default=[100.0, 1000.0],
                       help='Raw lambda_1 values (n-minus-one).')
      _add_sampling_args(sub, samples=10000)

  andrews = command(commands, 'andrews', help='Andrews-type inequality.')
  _add_operator_args(andrews)
  andrews.add_argument('--min-gap', type=float, default=1e-3)
  _add_sampling_args(andrews, samples=1000)

  trace = command(commands, 'trace-bounds', help='Trace identities.')
  _add_operator_args(trace, n=2, k=2)
  trace.add_argument('--lam', type=float_list, default=None)
  trace.add_argument('--condition', type=int, default=1, choices=[1, 2])
  _add_sampling_args(trace, samples=1000)

  solve = command(commands, 'solve', help='Dirichlet problem F(D2u)=psi.')
  solve.add_argument('--problem', default=None,
                     help='JSON problem file (overrides the flags below).')
  _add_operator_args(solve, n=2, k=2)
  solve.add_argument('--psi', type=float, default=1.0)
  solve.add_argument('--radius', type=float, default=1.0)
  solve.add_argument('--h', type=float, default=1.0 / 32)
  solve.add_argument('--condition', type=int, default=1, choices=[1, 2])

  rigidity = command(commands, 'rigidity',
                     help='Expanding-ball rigidity experiment.')
  _add_operator_args(rigidity, n=2, k=2)
  rigidity.add_argument('--radii', type=float_list, default=[2.0, 4.0, 8.0])
  rigidity.add_argument('--amplitude', type=float, default=0.1)
  rigidity.add_argument('--mode', type=int, default=3)
  rigidity.add_argument('--h', type=float, default=0.25)
  return parser


def load_config_file(path: str) -> Dict[str, Any]:
  """Read a JSON object of overrides."""
  try:
    with open(path, encoding='utf-8') as fd:
      data = json.load(fd)
  except (OSError, ValueError) as exc:
    raise InvalidConfig(f'Unable to read config file {path}: {exc}') from exc
  if not isinstance(data, dict):
    raise InvalidConfig(f'Config file {path} must hold a JSON object.')
  # Keys starting with an underscore annotate witness files.
  return {key: value for key, value in data.items()
          if not key.startswith('_')}


def apply_overrides(user_args: argparse.Namespace,
                    overrides: Dict[str, Any]) -> argparse.Namespace:
  """Overlay config-file keys on parsed flags. Unknown keys are errors."""
  for key, value in overrides.items():
    dest = key.replace('-', '_')
    if dest in ('config', 'command', 'subcommand') or not hasattr(
        user_args, dest):
      raise InvalidConfig(f'Unknown config key "{key}".')
    listed = isinstance(getattr(user_args, dest), list) or dest in (
      'a', 'y', 'lam', 'x')
    if value is not None and listed:
      try:
        value = float_list(value) if dest != 'emit' else list(value)
      except (argparse.ArgumentTypeError, TypeError, ValueError) as exc:
        raise InvalidConfig(f'Config key "{key}": {exc}') from exc
    setattr(user_args, dest, value)
  return user_args


def set_configs(user_args: argparse.Namespace) -> None:
  for key in _GLOBAL_KEYS:
    dest = key.replace('-', '_')
    if hasattr(user_args, dest):
      config[key] = getattr(user_args, dest)
