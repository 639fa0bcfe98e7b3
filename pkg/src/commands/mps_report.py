from __future__ import annotations

import math
from typing import List, Optional

import numpy as np  # type: ignore

import consts
import exceptions
import mpsrg
import state_factories
from commands.base_command import Command
from engine import ChartSpec, ScanResult
from mpsrg import UniformMPS

COLUMNS = [
    ("mu", "", "f8"),
    ("step", "", "i8"),
    ("d", "", "i8"),
    ("D", "", "i8"),
    ("index", "", "i8"),
    ("eig_re", "", "f8"),
    ("eig_im", "", "f8"),
    ("xi", "sites", "f8"),
]


class MPSCommand(Command):
    """Transfer spectrum, RG trajectory and fixed-point label of a uniform MPS."""

    name = "mps"

    def perform(self) -> ScanResult:
        steps = int(self.config.get("steps", consts.DEFAULT_RG_STEPS))
        if steps < 0:
            raise exceptions.ConfigError("steps must be non-negative")
        N = self.config.get("N", [consts.DEFAULT_MPS_N])[0]
        name = self.config.get("state", "aklt")

        records = []
        reports = []
        for mu, state in self._states(name):
            trajectory = mpsrg.rg_trajectory(state, steps)
            for step, (m, _) in enumerate(trajectory):
                t = mpsrg.transfer_matrix(m)
                xi = np.concatenate([[np.nan], mpsrg.correlation_lengths(t)])
                records.extend(
                    (mu, step, m.d, m.D, i, value.real, value.imag, xi[i])
                    for i, value in enumerate(t.eigenvalues)
                )
            reports.append(self._report(name, mu, state, trajectory, N))

        return ScanResult.from_records(
            COLUMNS,
            records,
            verdicts=self.verdicts,
            metadata=self.metadata(state=name, N=N, reports=reports),
            chart=ChartSpec("line", x="step", y="eig_re", group="index", title=f"transfer spectrum of {name}"),
        )

    def _states(self, name: str):
        path = self.config.get("input")
        if path:
            return [(np.nan, mpsrg.read_tensor_file(path))]
        parameters = {key: self.config.get(key) for key in ("theta", "D") if self.config.get(key) is not None}
        if "mu" not in self.config.grids and self.config.get("mu") is None:
            return [(np.nan, state_factories.make_state(name, **parameters))]
        mus = self.config.grid("mu")
        if name != "aklt":
            raise exceptions.ConfigError(f"mu only parametrizes the aklt family, not {name!r}")
        try:
            return [(mu, state_factories.make_state(name, mu=mu, **parameters)) for mu in mus]
        except exceptions.DomainError as exc:
            raise exceptions.ConfigError(str(exc)) from exc

    def _report(self, name: str, mu: float, state: UniformMPS, trajectory, N: int) -> dict:
        t = mpsrg.transfer_matrix(state)
        lengths = mpsrg.correlation_lengths(t)
        labels = [mpsrg.classify_fixed_point(m) for m, _ in trajectory]
        self._check_squaring(trajectory)
        if name == "aklt" and math.isnan(mu):
            self.check_close("aklt correlation length", float(lengths[0]), 1.0 / math.log(3.0), 1e-12)
        if name == "aklt":
            self._check_aklt_flow(trajectory)
        if name == "symmetric-D2":
            self.check_close(
                "symmetric fixed point entropy", mpsrg.block_entropy(state, 1), 2.0 * math.log2(state.D), 1e-9,
            )
            self.check("symmetric fixed point E^2 = E", t.is_idempotent(), "transfer matrix idempotent")
        return {
            "mu": None if math.isnan(mu) else mu,
            "d": state.d,
            "D": state.D,
            "canonical": state.canonical,
            "infinite_correlation_length": bool(np.any(np.isinf(lengths))),
            f"norm_N{N}": mpsrg.mps_norm(state, N),
            "block_entropy": self._block_entropies(state),
            "labels": [
                {"kind": label.kind.value, **{key: float(v) for key, v in label.parameters.items()}}
                for label in labels
            ],
        }

    def _block_entropies(self, state: UniformMPS) -> Optional[dict]:
        try:
            return {str(n): mpsrg.block_entropy(state, n) for n in consts.DEFAULT_MPS_BLOCKS}
        except exceptions.DomainError as exc:
            self.message_log.add_message(f"no block entropies: {exc}")
            return None

    def _check_squaring(self, trajectory) -> None:
        worst = 0.0
        for (before, _), (after, _) in zip(trajectory, trajectory[1:]):
            E = mpsrg.transfer_matrix(before).matrix
            worst = max(worst, float(np.max(np.abs(mpsrg.transfer_matrix(after).matrix - E @ E))))
        self.check("rg step squares the transfer matrix", worst <= 1e-9, f"worst deviation {worst:.3g}")

    def _check_aklt_flow(self, trajectory) -> None:
        mus: List[Optional[float]] = [mpsrg.aklt_parameter(m) for m, _ in trajectory]
        worst = max(
            (abs((1.0 - 4.0 * a * a) ** 2 - (1.0 - 4.0 * b * b)) for a, b in zip(mus, mus[1:])),
            default=0.0,
        )
        self.check("aklt flow", worst <= 1e-10, f"worst deviation {worst:.3g}")


def cmd_mps(config, message_log=None) -> ScanResult:
    return MPSCommand(config, message_log).perform()
