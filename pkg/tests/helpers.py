"""Shared generators for the test suite (independent of ``trifocal.param``)."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np

from trifocal.scalars import as_array, to_float
from trifocal.tensor import Camera, TrifocalTensor, tensor_from_cameras


def rand_q(rng: random.Random, n: int = 20, d: int = 20) -> Fraction:
    return Fraction(rng.randint(-n, n), rng.randint(1, d))


def rand_vec(rng: random.Random, size: int = 3) -> np.ndarray:
    while True:
        v = as_array([rand_q(rng) for _ in range(size)])
        if any(v):
            return v


def rand_mat(rng: random.Random, rows: int = 3, cols: int = 3) -> np.ndarray:
    return as_array([[rand_q(rng) for _ in range(cols)] for _ in range(rows)])


def rand_rank2(rng: random.Random) -> np.ndarray:
    """Generic rank-2 3x3 rational matrix."""
    a, b, c, d = (rand_vec(rng) for _ in range(4))
    return np.outer(a, b) + np.outer(c, d)


def rand_camera(rng: random.Random, finite: bool = True) -> Camera:
    while True:
        M = rand_mat(rng, 3, 4)
        if finite and M[2, 3] == 0:
            continue
        if not any(M[:, 3]):
            continue
        try:
            return Camera(M)
        except ValueError:
            continue


def camera_pair(seed: int, finite: bool = True) -> tuple[Camera, Camera]:
    rng = random.Random(10_000 + seed)
    return rand_camera(rng, finite), rand_camera(rng, finite)


def camera_tensor(seed: int, finite: bool = True) -> TrifocalTensor:
    return tensor_from_cameras(*camera_pair(seed, finite))


def as_float(T: TrifocalTensor) -> TrifocalTensor:
    return TrifocalTensor(to_float(T.array))


#: pass/fail lines recorded by test_acceptance and echoed in the pytest summary
ACCEPTANCE_LINES: list[str] = []
