from __future__ import annotations

import math

import numpy as np  # type: ignore

import consts
import exceptions
import freefermion
import numerics
from commands.base_command import Command
from commands.xy_scan import entropy_point
from engine import STATUS_OK, ChartSpec, ScanResult
from freefermion import XYParams
from grids import GridSpec

COLUMNS = [
    ("L", "sites", "i8"),
    ("entropy", "bits", "f8"),
    ("fitted", "bits", "f8"),
    ("status", "", "U16"),
]

# model -> (gamma, lambda) defaults
MODELS = {
    "xx": (0.0, 0.0),
    "ising": (1.0, 1.0),
    "xy-critical": (0.5, 1.0),
}
REFERENCE_BLOCK = 100


class ScalingCommand(Command):
    """Entropy against log2 L with the central-charge fit of the chosen model."""

    name = "scaling"

    def perform(self) -> ScanResult:
        model = self.config.get("model", "xx")
        if model not in MODELS:
            raise exceptions.ConfigError(f"unknown model {model!r}, expected one of {', '.join(MODELS)}")
        gamma = self.config.get("gamma", MODELS[model][0])
        lam = self.config.get("lambda", MODELS[model][1])
        if model == "xx" and gamma != 0.0:
            raise exceptions.ConfigError("the xx model has gamma = 0")
        L_list = self.config.grid("L", GridSpec(consts.DEFAULT_SCALING_L)).as_ints()
        if len(L_list) < 2:
            raise exceptions.ConfigError("a scaling run needs at least two block sizes")

        results = self.engine.map(entropy_point, [(gamma, lam, L) for L in L_list])
        entropies = np.array([value if status == STATUS_OK else np.nan for status, value in results])
        log_L = np.log2(np.asarray(L_list, dtype=float))
        finite = np.isfinite(entropies)
        if np.count_nonzero(finite) < 2:
            raise exceptions.NumericError(
                f"only {np.count_nonzero(finite)} of {len(L_list)} block sizes produced an entropy, cannot fit"
            )
        fit = numerics.linear_fit(log_L[finite], entropies[finite])
        fermi = freefermion.fermi_analysis(XYParams(gamma, lam))

        if fermi.is_critical:
            expected = 1.0 / 3.0 if fermi.phase_label.name == "CRITICAL_XX" else 1.0 / 6.0
            self.check_close("central charge slope", fit.slope, expected, consts.SLOPE_TOL)
        else:
            self._check_saturation(np.asarray(L_list)[finite], log_L[finite], entropies[finite])
        if model == "xx" and lam != 0.0 and abs(lam) < 1.0:
            self._check_offset(
                "field offset", XYParams(0.0, lam), XYParams(0.0, 0.0),
                math.log2(1.0 - lam * lam) / 6.0, consts.XX_OFFSET_TOL,
            )
        if model == "xy-critical" and gamma not in (0.0, 1.0):
            self._check_offset(
                "anisotropy offset", XYParams(gamma, 1.0), XYParams(1.0, 1.0),
                math.log2(gamma) / 6.0, consts.XY_OFFSET_TOL,
            )

        records = [
            (L, s, fit.predict(x), status)
            for L, s, x, (status, _) in zip(L_list, entropies, log_L, results)
        ]
        return ScanResult.from_records(
            COLUMNS,
            records,
            fits={"entropy_vs_log2L": fit},
            verdicts=self.verdicts,
            metadata=self.metadata(
                model=model, gamma=gamma, **{"lambda": lam},
                phase=fermi.phase_label.value,
                central_charge=freefermion.central_charge_from_slope(max(fit.slope, 0.0)),
            ),
            chart=ChartSpec(
                "line", x="L", y="entropy", log_x=True, fit="entropy_vs_log2L",
                title=f"{model} gamma={gamma:g} lambda={lam:g}",
            ),
        )

    def _check_saturation(self, L_list, log_L, entropies) -> None:
        top = np.asarray(L_list) >= max(L_list) / 10.0
        if np.count_nonzero(top) < 2:
            return
        tail = numerics.linear_fit(log_L[top], entropies[top])
        self.check(
            "saturation", abs(tail.slope) < consts.SATURATION_SLOPE,
            f"slope {tail.slope:.3g} over the top decade",
        )

    def _check_offset(self, name, p, reference, expected, tol) -> None:
        shift = (
            freefermion.block_entropy(p, REFERENCE_BLOCK)
            - freefermion.block_entropy(reference, REFERENCE_BLOCK)
        )
        self.check_close(name, shift, expected, tol)


def cmd_scaling(config, message_log=None) -> ScanResult:
    return ScalingCommand(config, message_log).perform()
