from __future__ import annotations

import logging
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np  # type: ignore

import consts
import exceptions
from numerics import FitResult

logger = logging.getLogger(__name__)

STATUS_OK = "ok"
STATUS_SOLVER_ERROR = "solver-error"

Column = Tuple[str, str, str]  # name, unit, numpy dtype


class Verdict:
    def __init__(self, name: str, passed: bool, detail: str):
        self.name = name
        self.passed = passed
        self.detail = detail

    @property
    def text(self) -> str:
        return f"{'PASS' if self.passed else 'FAIL'} {self.name}: {self.detail}"

    def as_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


class ChartSpec:
    """How render_functions draws a result: a line chart or a heatmap."""

    def __init__(
        self,
        kind: str,
        x: str,
        y: str,
        z: Optional[str] = None,
        group: Optional[str] = None,
        log_x: bool = False,
        title: str = "",
        fit: Optional[str] = None,
    ):
        self.kind = kind
        self.x = x
        self.y = y
        self.z = z
        self.group = group
        self.log_x = log_x
        self.title = title
        self.fit = fit  # fit drawn over the line chart, against log2 x when log_x


class ScanResult:
    def __init__(
        self,
        columns: Sequence[Column],
        rows: np.ndarray,
        fits: Optional[Dict[str, FitResult]] = None,
        verdicts: Optional[List[Verdict]] = None,
        metadata: Optional[Dict[str, Any]] = None,
        chart: Optional[ChartSpec] = None,
    ):
        self.columns = list(columns)
        self.rows = rows
        self.fits = fits or {}
        self.verdicts = verdicts or []
        self.metadata = metadata or {}
        self.chart = chart

    @classmethod
    def from_records(cls, columns: Sequence[Column], records: Iterable[Sequence[Any]], **kwargs) -> ScanResult:
        dtype = [(name, kind) for name, _, kind in columns]
        rows = np.array([tuple(record) for record in records], dtype=dtype)
        return cls(columns, rows, **kwargs)

    @property
    def names(self) -> List[str]:
        return [name for name, _, _ in self.columns]

    @property
    def units(self) -> List[str]:
        return [unit for _, unit, _ in self.columns]

    @property
    def failed(self) -> List[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    @property
    def solver_errors(self) -> int:
        if "status" not in self.names:
            return 0
        return int(np.count_nonzero(self.rows["status"] == STATUS_SOLVER_ERROR))

    def column(self, name: str) -> np.ndarray:
        return self.rows[name]


def _guarded_call(task: Tuple[Callable, Tuple]) -> Tuple[str, Any]:
    fn, point = task
    try:
        return STATUS_OK, fn(*point)
    except exceptions.SolverError as exc:
        logger.warning("solver error at %s: %s (best residual %.3g)", point, exc, exc.best_residual)
        return STATUS_SOLVER_ERROR, str(exc)


class ScanEngine:
    """Evaluates independent grid points, concurrently when jobs > 1.

    Results come back in the order of the points regardless of the job count,
    and a SolverError at one point becomes a status instead of aborting the scan.
    """

    def __init__(self, jobs: int = 1):
        self.jobs = jobs
        self.wall_time = 0.0

    def map(self, fn: Callable, points: Sequence[Tuple]) -> List[Tuple[str, Any]]:
        start = time.perf_counter()
        tasks = [(fn, tuple(point)) for point in points]
        if self.jobs > 1 and len(tasks) > 1:
            with ProcessPoolExecutor(max_workers=self.jobs) as pool:
                results = list(pool.map(_guarded_call, tasks))
        else:
            results = [_guarded_call(task) for task in tasks]
        self.wall_time += time.perf_counter() - start
        logger.info("%d points in %.2fs with %d jobs", len(tasks), self.wall_time, self.jobs)
        return results


def metadata(config_hash: str, **extra: Any) -> Dict[str, Any]:
    return {"version": consts.VERSION, "config_hash": config_hash, **extra}
