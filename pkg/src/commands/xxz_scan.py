from __future__ import annotations

from typing import List, Tuple

import numpy as np  # type: ignore

import bethe
import consts
from bethe import XXZParams
from commands.base_command import Command
from engine import STATUS_OK, ChartSpec, ScanResult
from grids import GridSpec

COLUMNS = [
    ("gamma", "", "f8"),
    ("lambda", "", "f8"),
    ("N", "sites", "i8"),
    ("L", "sites", "i8"),
    ("r", "down spins", "i8"),
    ("entropy", "bits", "f8"),
    ("bethe_energy", "", "f8"),
    ("oracle_energy", "", "f8"),
    ("residual", "", "f8"),
    ("status", "", "U16"),
]


def ground_point(gamma: float, lam: float, N: int, seed: int) -> Tuple[int, List[float], float, float]:
    """Ground sector, entropies S_1 .. S_{N-1}, Bethe energy and dense energy."""
    p = XXZParams(gamma, lam, N)
    r_star, solution, wavefunction = bethe.ground_state_scan(p, "bethe", seed)
    entropies = [bethe.xxz_block_entropy(wavefunction, L) for L in range(1, N)]
    oracle_energy, _ = bethe.xxz_dense_oracle(p)
    return r_star, entropies, solution.energy, oracle_energy


class XXZCommand(Command):
    """Bethe ground states of the XXZ chain with their block entropies."""

    name = "xxz"

    def perform(self) -> ScanResult:
        gammas = self.config.grid("gamma", GridSpec([1.0]))
        lambdas = self.config.grid("lambda", GridSpec([0.0]))
        N_list = self.config.grid("N", GridSpec([consts.DEFAULT_XXZ_N])).as_ints()
        points = [(g, lam, N, self.config.seed) for g in gammas for lam in lambdas for N in N_list]
        results = self.engine.map(ground_point, points)

        records = []
        for (g, lam, N, _), (status, value) in zip(points, results):
            if status != STATUS_OK:
                records.extend((g, lam, N, L, -1, np.nan, np.nan, np.nan, np.nan, status) for L in range(1, N))
                continue
            r_star, entropies, e_bethe, e_oracle = value
            residual = abs(e_bethe - e_oracle)
            records.extend(
                (g, lam, N, L, r_star, s, e_bethe, e_oracle, residual, status)
                for L, s in enumerate(entropies, start=1)
            )
            self._check_curve(g, lam, N, np.array(entropies), residual)

        return ScanResult.from_records(
            COLUMNS,
            records,
            verdicts=self.verdicts,
            metadata=self.metadata(),
            chart=ChartSpec("line", x="L", y="entropy", group="lambda", title="XXZ block entropy"),
        )

    def _check_curve(self, gamma: float, lam: float, N: int, entropies: np.ndarray, residual: float) -> None:
        label = f"gamma={gamma:g} lambda={lam:g} N={N}"
        self.check(
            f"bethe energy {label}", residual <= consts.ENERGY_RESIDUAL_TOL,
            f"|E_bethe - E_dense| = {residual:.3g}",
        )
        asymmetry = float(np.max(np.abs(entropies - entropies[::-1])))
        self.check(f"S_L = S_N-L {label}", asymmetry <= consts.SYMMETRY_TOL, f"max deviation {asymmetry:.3g}")
        padded = np.concatenate([[0.0], entropies, [0.0]])
        excess = float(np.max(0.5 * (padded[:-2] + padded[2:]) - padded[1:-1], initial=0.0))
        self.check(f"concavity {label}", excess <= consts.SYMMETRY_TOL, f"largest violation {excess:.3g}")


def cmd_xxz(config, message_log=None) -> ScanResult:
    return XXZCommand(config, message_log).perform()
