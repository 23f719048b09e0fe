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

""" Exceptions raised across the lab. The CLI maps each family to an exit code. """


class LabError(Exception):
  """Base class. `exit_code` is what bin/lab.py returns for it."""
  exit_code = 3


class InvalidInput(LabError, ValueError):
  exit_code = 2


class InvalidConfig(InvalidInput):
  pass


class NotInCone(InvalidInput):
  pass


class ConditionViolated(InvalidInput):
  pass


class NonpositiveOperatorValue(InvalidInput):
  pass


class DegenerateSpectrum(InvalidInput):
  pass


class IndexOutOfRange(InvalidInput, IndexError):
  pass


class StencilOutOfDomain(InvalidInput, IndexError):
  pass


class InadmissibleExact(InvalidInput):
  pass


class DivisionByZero(InvalidInput, ZeroDivisionError):
  pass


class MathCheckFailed(LabError):
  exit_code = 1


class NoRealRoots(MathCheckFailed):
  """P(t) has a root off the real axis: Hypothesis (RR) fails."""


class NumericalFailure(LabError):
  exit_code = 3


class DegenerateEigenbasis(NumericalFailure):
  pass


class NoAdmissibleStart(NumericalFailure):
  pass


class StalledLineSearch(NumericalFailure):
  pass


class LinearSolveFailure(NumericalFailure):
  pass
