from __future__ import annotations

import consts
import entanglement
import exceptions
from commands.base_command import Command
from engine import ChartSpec, ScanResult
from grids import GridSpec

COLUMNS = [
    ("lambda_from", "", "f8"),
    ("lambda_to", "", "f8"),
    ("entropy_from", "bits", "f8"),
    ("entropy_to", "bits", "f8"),
    ("majorized", "", "?"),
    ("strict", "", "?"),
    ("reconstruction_error", "", "f8"),
]


class RGFlowCommand(Command):
    """Majorization audit of the truncated Ising spectra along a field path.

    Any violated step fails the run, with or without --check.
    """

    name = "rgflow"
    always_checked = True

    def perform(self) -> ScanResult:
        path = self.config.grid("lambda", GridSpec.linspace(*consts.DEFAULT_RG_PATH))
        M = int(self.config.get("M", consts.DEFAULT_MODES))
        if len(path) < 2:
            raise exceptions.ConfigError("the lambda path needs at least two points")
        try:
            audit = entanglement.flow_majorization_audit(list(path), M)
        except exceptions.DomainError as exc:
            raise exceptions.ConfigError(f"bad lambda path: {exc}") from exc

        records = []
        for step in audit.steps:
            records.append((
                step.lam_from, step.lam_to, step.entropy_from, step.entropy_to,
                step.majorized, step.strict, step.reconstruction_error,
            ))
            self.check(
                f"step {step.lam_from:g} -> {step.lam_to:g}", step.passed,
                f"entropy {step.entropy_from:.6g} -> {step.entropy_to:.6g}, "
                f"{'strictly ' if step.strict else ''}{'majorized' if step.majorized else 'not majorized'}",
            )
        worst = max(step.reconstruction_error for step in audit.steps)
        self.check("doubly stochastic reconstruction", worst <= 1e-12, f"worst error {worst:.3g}")

        return ScanResult.from_records(
            COLUMNS,
            records,
            verdicts=self.verdicts,
            metadata=self.metadata(
                modes=M,
                weights=[[None if pair is None else list(pair) for pair in step.weights] for step in audit.steps],
            ),
            chart=ChartSpec("line", x="lambda_to", y="entropy_to", title=f"truncated spectrum entropy, {M} modes"),
        )


def cmd_rgflow(config, message_log=None) -> ScanResult:
    return RGFlowCommand(config, message_log).perform()
