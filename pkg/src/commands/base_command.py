from __future__ import annotations

import logging
from typing import Any, List, Optional

import color
import engine
from engine import ScanEngine, ScanResult, Verdict
from message_log import MessageLog
from setup_run import RunConfig

logger = logging.getLogger(__name__)


class Command:
    name = ""
    always_checked = False  # violations fail the run even without --check

    def __init__(self, config: RunConfig, message_log: Optional[MessageLog] = None):
        self.config = config
        self.engine = ScanEngine(config.jobs)
        self.message_log = message_log or MessageLog()
        self.verdicts: List[Verdict] = []

    def perform(self) -> ScanResult:
        raise NotImplementedError()

    def check(self, name: str, passed: bool, detail: str) -> Verdict:
        """Record a law verdict; it only fails the run under --check."""
        verdict = Verdict(name, bool(passed), detail)
        self.verdicts.append(verdict)
        self.message_log.add_message(verdict.text, color.passed if verdict.passed else color.failed)
        return verdict

    def check_close(self, name: str, value: float, expected: float, tol: float) -> Verdict:
        return self.check(
            name,
            abs(value - expected) <= tol,
            f"{value:.6g} vs {expected:.6g} (tolerance {tol:g})",
        )

    def metadata(self, **extra: Any) -> dict:
        return engine.metadata(self.config.config_hash, wall_time=self.engine.wall_time, **extra)
