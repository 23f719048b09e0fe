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

""" Report writers: canonical JSON with a timestamp sidecar, CSV
projections and the SHLB1 binary field format. """

import csv
import enum
import json
import logging
import os
import struct
import time
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from sum_hessian.config import VERSION, get_config
from sum_hessian.errors import InvalidInput

_logger = logging.getLogger(__name__)

SHLB_MAGIC = b'SHLB1'


def to_plain(value: Any) -> Any:
  """Convert numpy scalars and arrays, tuples and enums to JSON values.
  Non-finite floats become None."""
  if isinstance(value, dict):
    return {str(k): to_plain(v) for k, v in value.items()}
  if isinstance(value, (list, tuple)):
    return [to_plain(v) for v in value]
  if isinstance(value, np.ndarray):
    return to_plain(value.tolist())
  if isinstance(value, enum.Enum):
    return value.value
  if isinstance(value, (bool, np.bool_)):
    return bool(value)
  if isinstance(value, (int, np.integer)):
    return int(value)
  if isinstance(value, (float, np.floating)):
    value = float(value)
    return value if np.isfinite(value) else None
  return value


def dumps(record: Dict[str, Any]) -> str:
  return json.dumps(to_plain(record), sort_keys=True, indent=2) + '\n'


def envelope(command: str, seed: int, config_echo: Dict[str, Any],
             provenance: Sequence[str], passed: bool,
             results: Dict[str, Any]) -> Dict[str, Any]:
  """The fields every report carries."""
  return {'tool': 'sum-hessian-lab', 'version': VERSION, 'command': command,
          'seed': seed, 'config': config_echo,
          'provenance': list(provenance), 'passed': passed,
          'results': results}


def write_json(output_dir: str, name: str, record: Dict[str, Any],
               started: Optional[float] = None) -> str:
  """Write <name>.json and its <name>.meta.json sidecar; returns the
  report path. The report itself holds no wall-clock data."""
  os.makedirs(output_dir, exist_ok=True)
  path = os.path.join(output_dir, f'{name}.json')
  with open(path, 'w', encoding='utf-8') as fd:
    fd.write(dumps(record))
  now = time.time()
  meta = {'report': os.path.basename(path), 'timestamp': now,
          'duration': None if started is None else now - started}
  with open(os.path.join(output_dir, f'{name}.meta.json'), 'w',
            encoding='utf-8') as fd:
    fd.write(dumps(meta))
  _logger.info('Report written to %s', path)
  return path


def _cell(value: Any) -> Any:
  value = to_plain(value)
  if isinstance(value, list):
    return ' '.join('' if v is None else repr(v) for v in value)
  return '' if value is None else value


def write_csv(output_dir: str, name: str,
              rows: Iterable[Dict[str, Any]]) -> Optional[str]:
  """Rows of dicts sharing the first row's keys. Nothing is written for
  an empty table."""
  rows = list(rows)
  if not rows:
    return None
  os.makedirs(output_dir, exist_ok=True)
  path = os.path.join(output_dir, f'{name}.csv')
  fieldnames = list(rows[0].keys())
  with open(path, 'w', newline='', encoding='utf-8') as fd:
    writer = csv.DictWriter(fd, fieldnames=fieldnames)
    writer.writeheader()
    for row in rows:
      writer.writerow({key: _cell(row.get(key)) for key in fieldnames})
  _logger.info('Table written to %s', path)
  return path


def emit(output_dir: str, name: str, record: Dict[str, Any],
         rows: Optional[List[Dict[str, Any]]] = None,
         started: Optional[float] = None) -> List[str]:
  """JSON always; CSV when requested and the command is tabular."""
  paths = [write_json(output_dir, name, record, started)]
  if rows and 'csv' in (get_config('emit') or ()):
    csv_path = write_csv(output_dir, name, rows)
    if csv_path:
      paths.append(csv_path)
  return paths


def write_field_csv(path: str, nodes: np.ndarray, values: np.ndarray,
                    extra: Optional[Dict[str, np.ndarray]] = None) -> str:
  """One row per node: coordinates x0..x{n-1}, u and any extra columns."""
  nodes = np.atleast_2d(nodes)
  extra = extra or {}
  header = [f'x{i}' for i in range(nodes.shape[1])] + ['u'] + list(extra)
  os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
  with open(path, 'w', newline='', encoding='utf-8') as fd:
    writer = csv.writer(fd)
    writer.writerow(header)
    for row in range(nodes.shape[0]):
      writer.writerow([repr(float(v)) for v in nodes[row]]
                      + [repr(float(values[row]))]
                      + [repr(float(col[row])) for col in extra.values()])
  return path


def write_shlb(path: str, field: np.ndarray, h: float) -> str:
  """Magic, uint32 ndim, uint32 per axis, float64 h, then little-endian
  float64 values in row-major order. NaN marks nodes outside the
  domain."""
  field = np.asarray(field, dtype='<f8')
  os.makedirs(os.path.dirname(path) or '.', exist_ok=True)
  with open(path, 'wb') as fd:
    fd.write(SHLB_MAGIC)
    fd.write(struct.pack('<I', field.ndim))
    fd.write(struct.pack(f'<{field.ndim}I', *field.shape))
    fd.write(struct.pack('<d', float(h)))
    fd.write(np.ascontiguousarray(field).tobytes(order='C'))
  return path


def read_shlb(path: str) -> Tuple[np.ndarray, float]:
  with open(path, 'rb') as fd:
    data = fd.read()
  if not data.startswith(SHLB_MAGIC):
    raise InvalidInput(f'{path} is not an SHLB1 file.')
  offset = len(SHLB_MAGIC)
  try:
    (ndim,) = struct.unpack_from('<I', data, offset)
    offset += 4
    shape = struct.unpack_from(f'<{ndim}I', data, offset)
    offset += 4 * ndim
    (h,) = struct.unpack_from('<d', data, offset)
    offset += 8
  except struct.error as exc:
    raise InvalidInput(f'{path} has a truncated header.') from exc
  count = int(np.prod(shape))
  if len(data) - offset != 8 * count:
    raise InvalidInput(f'{path} holds {len(data) - offset} value bytes, '
                       f'expected {8 * count}.')
  values = np.frombuffer(data, dtype='<f8', offset=offset).reshape(shape)
  return values.copy(), h
