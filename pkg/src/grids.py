from __future__ import annotations

from typing import List, Sequence

import numpy as np  # type: ignore

import exceptions


class GridSpec:
    """Evenly spaced values `start:stop:count`, or an explicit value list."""

    def __init__(self, values: Sequence[float]):
        if len(values) == 0:
            raise exceptions.ConfigError("a grid needs at least one value")
        self.values = np.asarray(values, dtype=float)

    @classmethod
    def linspace(cls, start: float, stop: float, count: int) -> GridSpec:
        if count < 1:
            raise exceptions.ConfigError(f"grid count must be positive, got {count}")
        return cls(np.linspace(start, stop, count))

    @classmethod
    def parse(cls, text: str) -> GridSpec:
        """Accepts `a:b:n`, a comma list `x,y,z`, or a single value."""
        text = text.strip()
        try:
            if ":" in text:
                start, stop, count = text.split(":")
                return cls.linspace(float(start), float(stop), int(count))
            return cls([float(part) for part in text.split(",") if part.strip()])
        except ValueError as exc:
            raise exceptions.ConfigError(f"malformed grid {text!r}: {exc}") from exc

    def as_ints(self) -> List[int]:
        return [int(round(v)) for v in self.values]

    def to_text(self) -> str:
        return ",".join(repr(float(v)) for v in self.values)

    def __len__(self) -> int:
        return self.values.size

    def __iter__(self):
        return iter(self.values.tolist())

    def __repr__(self) -> str:
        return f"GridSpec({self.to_text()})"
