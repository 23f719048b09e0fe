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

""" Archive failed checks as standalone, replayable config files. """

import json
import logging
import os
from typing import Any, Dict, List, Optional, Sequence

from sum_hessian.errors import InvalidInput
from sum_hessian.tasks.reports import dumps

_logger = logging.getLogger(__name__)

WITNESS_DIR = 'witnesses'


def witness_name(command: str, seed: int, tag: Any) -> str:
  """Deterministic file stem: <command>-s<seed>-<tag>."""
  slug = command.replace(' ', '-')
  return f'{slug}-s{seed}-{tag}'


def archive_witness(output_dir: str, argv: Sequence[str],
                    overrides: Dict[str, Any], seed: int, tag: Any,
                    details: Optional[Dict[str, Any]] = None) -> str:
  """Write one witness under <output_dir>/witnesses/.

  The file is a config file: `overrides` are flag values, and the
  underscore keys (skipped on load) record how to replay it, i.e.
  `sum-hessian-lab --config <file> <argv...>`.
  Returns:
    path: str
  """
  directory = os.path.join(output_dir, WITNESS_DIR)
  os.makedirs(directory, exist_ok=True)
  command = ' '.join(argv)
  path = os.path.join(directory, f'{witness_name(command, seed, tag)}.json')
  record = dict(overrides)
  record['seed'] = seed
  record['_argv'] = list(argv)
  record['_details'] = details or {}
  with open(path, 'w', encoding='utf-8') as fd:
    fd.write(dumps(record))
  _logger.info('Witness for "%s" archived to %s', command, path)
  return path


def load_witness(path: str) -> Dict[str, Any]:
  """Full witness record, underscore keys included."""
  try:
    with open(path, encoding='utf-8') as fd:
      record = json.load(fd)
  except (OSError, ValueError) as exc:
    raise InvalidInput(f'Unable to read witness {path}: {exc}') from exc
  if not isinstance(record, dict) or '_argv' not in record:
    raise InvalidInput(f'{path} is not a witness file.')
  return record


def replay_argv(path: str) -> List[str]:
  """Command line that re-runs the witness."""
  record = load_witness(path)
  return ['--config', path] + list(record['_argv'])
