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

""" Helpers shared across the lab: progress, threads, logging, tolerances. """

from time import sleep
import logging
import multiprocessing
import os
from threading import Thread
import sys
from typing import Any, Callable, Iterable, List, Optional, Sequence

import numpy as np

from sum_hessian.config import get_config


_logger = logging.getLogger(__name__)

LOG_FORMAT = ('%(asctime)s,%(msecs)03d %(levelname)-8s '
              '[%(filename)s:%(lineno)d] %(message)s')
LOG_DATEFMT = '%Y-%m-%d:%H:%M:%S'


class Tracker():
  """ Count finished samples in a side process and draw a bar on stderr. """

  def __init__(self, target: int, label: str = 'Sampling'):
    self.target = max(int(target), 1)
    self.label = label
    self._done = multiprocessing.Value('i', 0)
    self._proc = None

  def start(self) -> None:
    self._proc = multiprocessing.Process(target=self._run, daemon=True)
    self._proc.start()
    print(f'┌── {self.label}...', file=sys.stderr)

  def advance(self, step: int = 1) -> None:
    with self._done.get_lock():
      self._done.value += step

  def finish(self) -> None:
    with self._done.get_lock():
      self._done.value = self.target
    if self._proc is not None:
      self._proc.join()
    print(f'├── {self.label} finished.', file=sys.stderr)

  def _run(self) -> None:
    while self._done.value < self.target:
      sleep(0.05)
      self._print()
    self._print()
    print('', file=sys.stderr)

  def _print(self) -> None:
    size = 50
    count = min(self._done.value, self.target)
    filled = int(size * count / self.target)
    print(f'\r│   └── {count}/{self.target} '
          f'[{"█" * filled}{"." * (size - filled)}]',
          end='', file=sys.stderr, flush=True)


class ThreadHandler(Thread):
  """Thread whose target's return value is kept for `result()`."""

  def __init__(self, target: Callable[..., Any], args: Sequence[Any] = (),
               kwargs: Optional[dict] = None, name: Optional[str] = None):
    Thread.__init__(self, target=target, name=name, args=tuple(args),
                    kwargs=kwargs or {})
    self._result = None
    self._error = None

  def run(self):
    try:
      self._result = self._target(*self._args, **self._kwargs)
    except BaseException as exc:  # pylint: disable=broad-exception-caught
      self._error = exc

  def result(self, timeout: Optional[float] = None) -> Any:
    Thread.join(self, timeout)
    if self._error is not None:
      raise self._error
    return self._result


def run_threaded(target: Callable[[Sequence[int]], List[Any]],
                 indices: Sequence[int], workers: int) -> List[Any]:
  """Split indices into contiguous chunks, one thread per chunk.

  Results are concatenated in index order, so the output does not depend
  on `workers`.
  """
  indices = list(indices)
  workers = max(1, min(int(workers), len(indices) or 1))
  if workers == 1:
    return list(target(indices))
  chunks = [list(c) for c in np.array_split(indices, workers) if len(c)]
  threads = [ThreadHandler(target=target, args=(chunk,)) for chunk in chunks]
  for thread in threads:
    thread.start()
  results = []
  for thread in threads:
    results.extend(thread.result())
  return results


def set_logging(run_name: str, output_dir: str) -> str:
  """ Set logfile and verbosity. Returns the log file path. """

  level = logging.DEBUG if get_config('debug') else logging.INFO
  os.makedirs(output_dir, exist_ok=True)
  file_name = os.path.join(output_dir, f'{run_name}.log')
  logging.basicConfig(
    filename=file_name,
    filemode='a',
    format=LOG_FORMAT,
    datefmt=LOG_DATEFMT,
    level=level)
  return file_name


def rel_discrepancy(lhs: float, rhs: float) -> float:
  """|lhs - rhs| / max(1, |lhs|, |rhs|)."""
  return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


def agree(lhs: float, rhs: float, rel_tol: Optional[float] = None,
          abs_floor: Optional[float] = None) -> bool:
  if rel_tol is None:
    rel_tol = get_config('rel-tol')
  if abs_floor is None:
    abs_floor = get_config('abs-floor')
  if abs(lhs - rhs) <= abs_floor:
    return True
  return rel_discrepancy(lhs, rhs) <= rel_tol


def max_discrepancy(pairs: Iterable[Sequence[float]]) -> float:
  worst = 0.0
  for lhs, rhs in pairs:
    worst = max(worst, rel_discrepancy(lhs, rhs))
  return worst
