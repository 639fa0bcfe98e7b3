from __future__ import annotations

import numpy as np  # type: ignore

import exceptions
import numerics
import render_functions
from commands.base_command import Command
from engine import ChartSpec, ScanResult


class FitCommand(Command):
    """Least-squares line of one column of a result file against another."""

    name = "fit"

    def perform(self) -> ScanResult:
        path = self.config.get("input")
        if not path:
            raise exceptions.ConfigError("fit needs an --input file")
        x_name = self.config.get("x", "L")
        y_name = self.config.get("y", "entropy")
        log_x = bool(self.config.get("log_x", False))

        table = render_functions.read_csv_columns(path)
        for name in (x_name, y_name):
            if name not in (table.dtype.names or ()):
                raise exceptions.ConfigError(f"{path} has no column {name!r}")
        xs = np.asarray(table[x_name], dtype=float)
        ys = np.asarray(table[y_name], dtype=float)
        keep = np.isfinite(xs) & np.isfinite(ys)
        if log_x:
            keep &= xs > 0.0
        xs, ys = xs[keep], ys[keep]
        law_x = np.log2(xs) if log_x else xs
        try:
            fit = numerics.linear_fit(law_x, ys)
        except exceptions.ContractViolation as exc:
            raise exceptions.ConfigError(f"cannot fit {y_name} against {x_name}: {exc}") from exc

        fit_name = f"{y_name}_vs_{'log2' if log_x else ''}{x_name}"
        self.message_log.add_message(f"{fit_name}: {fit}")
        return ScanResult.from_records(
            [(x_name, "", "f8"), (y_name, "", "f8"), ("fitted", "", "f8"), ("residual", "", "f8")],
            zip(xs, ys, fit.predict(law_x), ys - fit.predict(law_x)),
            fits={fit_name: fit},
            metadata=self.metadata(input=path, dropped_rows=int(np.count_nonzero(~keep))),
            chart=ChartSpec("line", x=x_name, y=y_name, log_x=log_x, fit=fit_name, title=fit_name),
        )


def cmd_fit(config, message_log=None) -> ScanResult:
    return FitCommand(config, message_log).perform()
