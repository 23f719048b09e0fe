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

""" Spectrum: the eigenvalue vector every symmetric-function routine takes. """

from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from sum_hessian.errors import InvalidInput


@dataclass(frozen=True)
class Spectrum:
  """Eigenvalue vector lambda in R^n.
  Attributes:
    values: tuple of n finite floats.
    sorted_desc: True when values[i] >= values[i+1] for all i.
  """
  values: Tuple[float, ...]
  sorted_desc: bool = False

  def __post_init__(self):
    values = tuple(float(v) for v in np.ravel(np.asarray(self.values,
                                                          dtype=float)))
    if not values:
      raise InvalidInput('Spectrum needs at least one entry.')
    if not all(np.isfinite(values)):
      raise InvalidInput(f'Spectrum entries must be finite: {values}')
    if self.sorted_desc and any(a < b for a, b in zip(values, values[1:])):
      raise InvalidInput(f'Spectrum flagged as sorted but is not: {values}')
    object.__setattr__(self, 'values', values)

  @classmethod
  def descending(cls, values: Sequence[float]) -> 'Spectrum':
    """Decreasing rearrangement. Ties keep their input order."""
    arr = np.asarray(values, dtype=float).ravel()
    order = np.argsort(-arr, kind='stable')
    return cls(tuple(arr[order]), sorted_desc=True)

  @property
  def n(self) -> int:
    return len(self.values)

  @property
  def array(self) -> np.ndarray:
    return np.array(self.values, dtype=float)

  def sorted(self) -> 'Spectrum':
    if self.sorted_desc:
      return self
    return Spectrum.descending(self.values)

  def is_descending(self) -> bool:
    return all(a >= b for a, b in zip(self.values, self.values[1:]))

  def scaled(self, t: float) -> 'Spectrum':
    return Spectrum(tuple(t * v for v in self.values),
                    sorted_desc=self.sorted_desc and t >= 0)


SpectrumLike = Union[Spectrum, Sequence[float], np.ndarray]


def to_array(x: SpectrumLike) -> np.ndarray:
  """Float64 copy of x as a 1-D array."""
  if isinstance(x, Spectrum):
    return x.array
  arr = np.array(x, dtype=float).ravel()
  if not np.all(np.isfinite(arr)):
    raise InvalidInput(f'Non-finite entries in {arr}')
  return arr


def as_spectrum(x: SpectrumLike) -> Spectrum:
  if isinstance(x, Spectrum):
    return x
  return Spectrum(tuple(to_array(x)))
