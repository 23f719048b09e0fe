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

""" Main script: parse flags, validate the run, dispatch the command and
map failures to exit codes. """

import logging
import sys
from typing import List, Optional

from sum_hessian.config import apply_overrides, load_config_file
from sum_hessian.config import output_dir, process_args, set_configs
from sum_hessian.errors import LabError
from sum_hessian.tasks.actions import call_tasks
from sum_hessian.tasks.pre_validations import RunConfig
from sum_hessian.utils import set_logging


def main(argv: Optional[List[str]] = None) -> int:
  """ Main script function. Returns the exit code:
  0 all checks passed, 1 a check failed, 2 invalid input, 3 numerical
  failure. """
  args = None
  try:
    args = process_args().parse_args(argv)
    if args.config:
      apply_overrides(args, load_config_file(args.config))
    set_configs(args)
    run = RunConfig.from_args(args, output_dir())
    set_logging(run_name=run.name, output_dir=run.output_dir)
    # the full flag set goes to the log so a run can be rebuilt from it.
    logging.info('RUN#%s\n', run.echo())
    return call_tasks(run, args)
  except LabError as exc:
    logging.exception('%s failed', getattr(args, 'command', 'parsing'))
    print(f'└── {type(exc).__name__}: {exc}', file=sys.stderr)
    return exc.exit_code


if __name__ == '__main__':
  sys.exit(main())
