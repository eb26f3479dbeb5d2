"""Phase-invariant distance and success classification.

Measurements are blind to a global phase (a sign in the real case), so all
recovery errors are measured modulo that ambiguity.
"""

from __future__ import annotations

import numpy as np

SUCCESS_THRESHOLD = 1e-5


def dist(z: np.ndarray, x: np.ndarray) -> float:
    """Distance modulo global phase.

    Real: min(||z - x||, ||z + x||).  Complex: ||z - c x|| with the unit
    phase c = <x, z>/|<x, z>| that best aligns x with z (c = 1 when the
    inner product vanishes).
    """
    if z.shape != x.shape:
        raise ValueError(f"shape mismatch: {z.shape} vs {x.shape}")
    if np.iscomplexobj(z) or np.iscomplexobj(x):
        ip = np.vdot(x, z)
        c = ip / abs(ip) if abs(ip) > 0 else 1.0
        return float(np.linalg.norm(z - c * x))
    return float(min(np.linalg.norm(z - x), np.linalg.norm(z + x)))


def success(z: np.ndarray, x: np.ndarray, threshold: float = SUCCESS_THRESHOLD) -> bool:
    """True when dist(z, x)/||x|| <= threshold."""
    nx = np.linalg.norm(x)
    if nx == 0:
        raise ValueError("ground truth must be nonzero")
    return dist(z, x) / nx <= threshold
