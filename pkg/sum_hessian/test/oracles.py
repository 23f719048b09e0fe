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

"""Independent oracles and fixtures for tests."""

import json
import os
import pathlib
from typing import Any, Callable

import numpy as np

TESTDATA_PATH = 'test-data'


def fd_grad(f: Callable[[np.ndarray], float], x, h: float = 1e-5):
  x = np.asarray(x, dtype=float)
  grad = np.zeros(x.size)
  for i in range(x.size):
    step = np.zeros(x.size)
    step[i] = h
    grad[i] = (f(x + step) - f(x - step)) / (2 * h)
  return grad


def fd_jacobian(g: Callable[[np.ndarray], np.ndarray], x, h: float = 1e-5):
  """Columns are central differences of the vector map g."""
  x = np.asarray(x, dtype=float)
  cols = []
  for i in range(x.size):
    step = np.zeros(x.size)
    step[i] = h
    cols.append((np.asarray(g(x + step)) - np.asarray(g(x - step))) / (2 * h))
  return np.column_stack(cols)


def fd_second_directional(f: Callable[[np.ndarray], float], s, t,
                          h: float = 1e-4) -> float:
  """d^2/dh^2 f(S + hT) at 0 by the 3-point rule."""
  s = np.asarray(s, dtype=float)
  t = np.asarray(t, dtype=float)
  return (f(s + h * t) - 2.0 * f(s) + f(s - h * t)) / h**2


def load_fixture(name: str) -> Any:
  file_name = os.path.join(os.path.dirname(__file__), TESTDATA_PATH, name)
  if not pathlib.Path(file_name).is_file():
    raise FileNotFoundError(file_name)
  with open(file_name, encoding='utf-8') as fd:
    return json.load(fd)
