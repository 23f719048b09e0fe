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

""" Validations run on the parsed command line before any task starts.
    Checks fail with InvalidConfig so the run exits with status 2. """

import argparse
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

from sum_hessian.errors import InvalidConfig

EMIT_FORMATS = ('json', 'csv')
_NONNEGATIVE = ('rel_tol', 'abs_floor', 'tol_psd', 'eps_cone',
                'solver_eps_cone', 'tol_res')
_POSITIVE_INTS = ('workers', 'max_iters', 'samples', 'n_max')


@dataclass
class RunConfig:
  """A validated run.

  Attributes:
    command: top-level subcommand.
    subcommand: nested subcommand (concavity only).
    seed: 64-bit seed, echoed in every artifact.
    output_dir: report directory.
    emit: report formats.
    args: every parsed flag, for the report echo.
  """
  command: str
  seed: int
  output_dir: str
  subcommand: Optional[str] = None
  emit: List[str] = field(default_factory=lambda: list(EMIT_FORMATS))
  args: Dict[str, Any] = field(default_factory=dict)

  def __post_init__(self):
    if not -2**63 <= self.seed < 2**64:
      raise InvalidConfig(f'Seed {self.seed} does not fit in 64 bits.')
    unknown = set(self.emit) - set(EMIT_FORMATS)
    if unknown:
      raise InvalidConfig(f'Unknown report formats: {sorted(unknown)}')
    for key in _NONNEGATIVE:
      value = self.args.get(key)
      if value is not None and not value >= 0:
        raise InvalidConfig(f'--{key.replace("_", "-")} must be >= 0, '
                            f'got {value}.')
    for key in _POSITIVE_INTS:
      value = self.args.get(key)
      if value is not None and not value >= 1:
        raise InvalidConfig(f'--{key.replace("_", "-")} must be >= 1, '
                            f'got {value}.')
    if self.args.get('fd_step') is not None and not self.args['fd_step'] > 0:
      raise InvalidConfig('--fd-step must be positive.')

  @property
  def name(self) -> str:
    """Report stem, e.g. 'concavity-sweep'."""
    if self.subcommand:
      return f'{self.command}-{self.subcommand}'
    return self.command

  @property
  def argv(self) -> List[str]:
    return [self.command] + ([self.subcommand] if self.subcommand else [])

  def echo(self) -> Dict[str, Any]:
    """Flag values as given, keyed by their command-line spelling."""
    return {key.replace('_', '-'): value for key, value in
            sorted(self.args.items()) if key not in ('command', 'subcommand',
                                                     'config', 'output_dir')}

  @classmethod
  def from_args(cls, user_args: argparse.Namespace,
                output_dir: str) -> 'RunConfig':
    args = vars(user_args).copy()
    return cls(command=user_args.command,
               subcommand=getattr(user_args, 'subcommand', None),
               seed=int(user_args.seed), output_dir=output_dir,
               emit=list(user_args.emit), args=args)
