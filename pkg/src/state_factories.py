from __future__ import annotations

import math
from typing import Callable, Dict

import numpy as np  # type: ignore

import exceptions
from mpsrg import PAULI, UniformMPS, aklt_family, symmetric_fixed_point

product = UniformMPS([[[0.0]], [[1.0]]])
ghz = UniformMPS([(PAULI[0] + PAULI[3]) / 2, (PAULI[0] - PAULI[3]) / 2])
cluster = aklt_family(0.5)
aklt = UniformMPS([sigma / math.sqrt(3.0) for sigma in PAULI[1:]])


def w_state(theta: float = 0.0) -> UniformMPS:
    return UniformMPS([
        np.diag([1.0, np.exp(1j * theta)]),
        np.array([[0.0, 1.0], [0.0, 0.0]]),
    ])


def domain_wall(theta: float = 0.0) -> UniformMPS:
    return UniformMPS([
        np.exp(1j * theta) * np.diag([1.0, 0.0]),
        np.array([[0.0, 1.0], [0.0, 0.0]]),
        np.diag([0.0, 1.0]),
    ])


BUILTIN_STATES: Dict[str, Callable[..., UniformMPS]] = {
    "product": lambda **_: product,
    "ghz": lambda **_: ghz,
    "cluster": lambda **_: cluster,
    "aklt": lambda mu=None, **_: aklt if mu is None else aklt_family(mu),
    "w": lambda theta=0.0, **_: w_state(theta),
    "domain-wall": lambda theta=0.0, **_: domain_wall(theta),
    "symmetric-D2": lambda D=2, **_: symmetric_fixed_point(D),
}


def make_state(name: str, **parameters) -> UniformMPS:
    try:
        factory = BUILTIN_STATES[name]
    except KeyError:
        raise exceptions.ConfigError(
            f"unknown state {name!r}, expected one of {', '.join(BUILTIN_STATES)}"
        ) from None
    return factory(**parameters)
