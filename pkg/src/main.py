#!/usr/bin/env python3
import cProfile
import logging
import sys
import traceback
from typing import List, Optional

import color
import exceptions
import input_handler
import render_functions
import setup_run
from commands import COMMANDS
from message_log import MessageLog

logger = logging.getLogger("spinlab")

LOG_LEVELS = [logging.WARNING, logging.INFO, logging.DEBUG]


def run(args, message_log: MessageLog) -> int:
    """Perform one command and write its result; returns the exit code."""
    config = setup_run.new_run(args)
    command = COMMANDS[config.command](config, message_log)
    result = command.perform()
    render_functions.write_result(result, config.fmt, config.config_hash, config.out)
    logger.info("%s finished in %.2fs", config.command, command.engine.wall_time)

    if result.failed and (config.check or command.always_checked):
        raise exceptions.ValidationFailure(f"{len(result.failed)} law(s) outside tolerance")
    if result.solver_errors:
        message_log.add_message(f"{result.solver_errors} rows did not converge", color.warning)
        return exceptions.SolverError.exit_code
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = input_handler.parse_args(argv)
    logging.basicConfig(
        level=LOG_LEVELS[min(args.verbose, len(LOG_LEVELS) - 1)],
        format="%(levelname)s %(name)s: %(message)s",
    )
    message_log = MessageLog()
    try:
        if args.profile:
            profiler = cProfile.Profile()
            try:
                code = profiler.runcall(run, args, message_log)
            finally:
                profiler.dump_stats(args.profile)
                message_log.add_message(f"profile written, view it with: snakeviz {args.profile}")
        else:
            code = run(args, message_log)
    except exceptions.SpinLabError as exc:
        if logger.isEnabledFor(logging.DEBUG):
            message_log.add_message(traceback.format_exc(), color.error)
        message_log.add_message(f"{type(exc).__name__}: {exc}", color.error)
        code = exc.exit_code
    except OSError as exc:
        message_log.add_message(f"I/O error: {exc}", color.error)
        code = exceptions.OutputError.exit_code
    message_log.render(sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
