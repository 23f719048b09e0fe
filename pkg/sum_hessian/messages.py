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

""" One-line summaries printed after each command. """

from typing import Any, Dict, Optional


def _verdict(passed: bool) -> str:
  return 'PASSED' if passed else 'FAILED'


def _fmt(value: Optional[float]) -> str:
  return 'n/a' if value is None else f'{value:.3g}'


def tip_report(path: str, witnesses: int = 0) -> str:
  tail = f', {witnesses} witness(es) archived' if witnesses else ''
  return f'   Report: {path}{tail}'


def symcheck(passed: bool, results: Dict[str, Any]) -> str:
  return (f'└── symcheck {_verdict(passed)}: {results["samples"]} vectors, '
          f'max discrepancy {_fmt(results["max_discrepancy"])}')


def cone(passed: bool, results: Dict[str, Any]) -> str:
  if 'verdicts' in results:
    lifted = results['verdicts']['lifted']
    member = 'member' if lifted['member'] else 'not a member'
    return f'└── cone {_verdict(passed)}: point is {member} of the lifted cone'
  return (f'└── cone {_verdict(passed)}: {results["samples"]} samples, '
          f'{results["members"]} in the cone, '
          f'{len(results["failures"])} property failure(s)')


def rr(passed: bool, results: Dict[str, Any]) -> str:
  if 'error' in results:
    return f'└── rr FAILED: {results["error"]}: {results["message"]}'
  roots = ', '.join(f'{y:.6g}' for y in results['y'])
  return f'└── rr {_verdict(passed)}: roots {roots}'


def operator_check(passed: bool, results: Dict[str, Any]) -> str:
  worst = max(results['max_discrepancy'].values(), default=None)
  return (f'└── operator-check {_verdict(passed)}: {results["samples"]} '
          f'samples, worst discrepancy {_fmt(worst)}')


def concavity_verify(passed: bool, results: Dict[str, Any]) -> str:
  return (f'└── concavity verify {_verdict(passed)}: margin '
          f'{_fmt(results["report"]["margin"])}, max gamma '
          f'{_fmt(results["max_gamma"])}')


def concavity_sweep(passed: bool, results: Dict[str, Any]) -> str:
  cells = results['cells']
  sampled = sum(c['samples'] for c in cells)
  ok = sum(c['passed'] for c in cells)
  return (f'└── concavity sweep {_verdict(passed)}: {ok}/{sampled} samples '
          f'passed over {len(cells)} cell(s)')


def andrews(passed: bool, results: Dict[str, Any]) -> str:
  return (f'└── andrews {_verdict(passed)}: {results["checked"]} samples, '
          f'min relative gap {_fmt(results["min_gap"])}')


def trace_bounds(passed: bool, results: Dict[str, Any]) -> str:
  if 'report' in results:
    return (f'└── trace-bounds {_verdict(passed)}: slack '
            f'{_fmt(results["report"]["slack"])}')
  return (f'└── trace-bounds {_verdict(passed)}: {results["checked"]} '
          f'samples, min ratio {_fmt(results["min_ratio"])}')


def solve(passed: bool, results: Dict[str, Any]) -> str:
  return (f'└── solve {_verdict(passed)}: residual '
          f'{_fmt(results["residual_inf"])} after {results["newton_iters"]} '
          f'Newton iteration(s), min cone margin '
          f'{_fmt(results["min_cone_margin"])}')


def rigidity(passed: bool, results: Dict[str, Any]) -> str:
  devs = ', '.join(_fmt(row['deviation']) for row in results['rows'])
  return (f'└── rigidity {_verdict(passed)}: c*={results["c_star"]:.6g}, '
          f'deviations [{devs}]')


SUMMARIES = {
  'symcheck': symcheck,
  'cone': cone,
  'rr': rr,
  'operator-check': operator_check,
  'concavity-verify': concavity_verify,
  'concavity-sweep': concavity_sweep,
  'andrews': andrews,
  'trace-bounds': trace_bounds,
  'solve': solve,
  'rigidity': rigidity,
}


def summary(name: str, passed: bool, results: Dict[str, Any]) -> str:
  return SUMMARIES[name](passed, results)
