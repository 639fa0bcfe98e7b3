from __future__ import annotations

from typing import List

import numpy as np  # type: ignore

import consts
import freefermion
from commands.base_command import Command
from engine import STATUS_OK, ChartSpec, ScanResult
from freefermion import XYParams
from grids import GridSpec

COLUMNS = [
    ("gamma", "", "f8"),
    ("lambda", "", "f8"),
    ("L", "sites", "i8"),
    ("entropy", "bits", "f8"),
    ("status", "", "U16"),
]


def entropy_point(gamma: float, lam: float, L: int) -> float:
    return freefermion.block_entropy(XYParams(gamma, lam), L)


class XYScanCommand(Command):
    """Block entropy of the infinite XY chain over the (gamma, lambda) plane."""

    name = "xy-scan"

    def perform(self) -> ScanResult:
        gammas = self.config.grid("gamma", GridSpec.linspace(*consts.DEFAULT_XY_GRID["gamma"]))
        lambdas = self.config.grid("lambda", GridSpec.linspace(*consts.DEFAULT_XY_GRID["lambda"]))
        L = self.config.get("L", [consts.DEFAULT_BLOCK])[0]
        points = [(g, lam, L) for g in gammas for lam in lambdas]
        results = self.engine.map(entropy_point, points)
        records = [
            (g, lam, L, value if status == STATUS_OK else np.nan, status)
            for (g, lam, _), (status, value) in zip(points, results)
        ]
        result = ScanResult.from_records(
            COLUMNS,
            records,
            metadata=self.metadata(),
            chart=ChartSpec("heatmap", x="lambda", y="gamma", z="entropy", title=f"S(L={L})"),
        )
        self._check_bound(result, L)
        self._check_ridges(result, lambdas.values)
        result.verdicts = self.verdicts
        return result

    def _check_bound(self, result: ScanResult, L: int) -> None:
        worst = float(np.nanmax(result.column("entropy")))
        self.check("block bound", worst <= L + 1e-9, f"max entropy {worst:.6g} for L={L}")

    def _check_ridges(self, result: ScanResult, lambdas: np.ndarray) -> None:
        # away from the XX line the entropy peaks on the Ising line lambda = 1
        if lambdas.min() > 1.0 or lambdas.max() < 1.0 or lambdas.size < 3:
            return
        step = float(np.max(np.diff(np.sort(lambdas))))
        misplaced: List[float] = []
        for gamma in np.unique(result.column("gamma")):
            if gamma < 0.3:
                continue
            rows = result.rows[result.column("gamma") == gamma]
            peak = rows["lambda"][np.nanargmax(rows["entropy"])]
            if abs(peak - 1.0) > 2 * step:
                misplaced.append(float(gamma))
        self.check("critical ridge", not misplaced, f"peaks away from lambda=1 at gamma={misplaced}")


def cmd_xy_scan(config, message_log=None) -> ScanResult:
    return XYScanCommand(config, message_log).perform()
