"""Phase diagram of the complex-field plane and ridge detection on scan grids.

The critical set is the unit circle ``r = 1`` together with the two rays
``eta = 0, |xi| > 1``.  Inside the circle the chain is a ferromagnet (II);
outside, the rays split the paramagnet into I (``eta > 0``) and III
(``eta < 0``).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .model import FieldPoint


class PhaseLabel(enum.Enum):
    PARAMAGNET_I = "ParamagnetI"
    FERROMAGNET_II = "FerromagnetII"
    PARAMAGNET_III = "ParamagnetIII"
    BOUNDARY = "Boundary"


def classify(p: FieldPoint, tol: float = 1e-9) -> PhaseLabel:
    if not tol > 0:
        raise ValueError("tol must be positive")
    r = p.r
    if abs(r - 1.0) < tol or (abs(p.eta) < tol and r > 1.0):
        return PhaseLabel.BOUNDARY
    if r < 1.0:
        return PhaseLabel.FERROMAGNET_II
    return PhaseLabel.PARAMAGNET_I if p.eta > 0 else PhaseLabel.PARAMAGNET_III


def boundary_distance_xy(eta, xi):
    """Euclidean distance to the critical set, vectorised."""
    eta = np.asarray(eta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    ring = np.abs(np.hypot(eta, xi) - 1.0)
    ax = np.abs(xi)
    ray = np.where(ax >= 1.0, np.abs(eta), np.hypot(eta, ax - 1.0))
    out = np.minimum(ring, ray)
    return out[()] if out.ndim == 0 else out


def boundary_distance(p: FieldPoint) -> float:
    return float(boundary_distance_xy(p.eta, p.xi))


def ferromagnet_interval(xi: float) -> tuple[float, float] | None:
    """The ``eta`` interval of phase II on a horizontal cut, or ``None`` if empty."""
    if abs(xi) >= 1.0:
        return None
    half = math.sqrt(1.0 - xi * xi)
    return -half, half


@dataclass(frozen=True)
class RidgePoint:
    i: int
    j: int
    eta: float
    xi: float
    value: float
    distance: float


def ridge_mask(values, threshold: float = 2.0, signal: str = "re") -> np.ndarray:
    """Boolean mask of ridge points on a rectangular grid.

    A point is on a ridge when its signal is a local maximum along either grid
    axis and exceeds ``threshold`` times the grid median.  ``signal`` chooses
    ``|Re v|`` (``"re"``) or ``|v|`` (``"abs"``); non-finite entries never
    qualify and are left out of the median.
    """
    v = np.asarray(values)
    if v.ndim != 2 or v.size == 0:
        raise ValueError("need a non-empty two-dimensional grid")
    a = np.abs(v.real) if signal == "re" else np.abs(v)
    finite = np.isfinite(a)
    if not finite.any():
        return np.zeros(a.shape, dtype=bool)
    med = np.median(a[finite])
    a = np.where(finite, a, -np.inf)
    pad = np.pad(a, 1, mode="constant", constant_values=-np.inf)
    c = pad[1:-1, 1:-1]
    along_eta = (c >= pad[:-2, 1:-1]) & (c >= pad[2:, 1:-1])
    along_xi = (c >= pad[1:-1, :-2]) & (c >= pad[1:-1, 2:])
    return (along_eta | along_xi) & (c > threshold * med) & finite


def detect_boundary(eta, xi, values, threshold: float = 2.0, signal: str = "re") -> list[RidgePoint]:
    """Ridge points of a scan, each with its distance to the analytic boundary.

    ``values[i, j]`` belongs to ``(eta[i], xi[j])``.
    """
    eta = np.asarray(eta, dtype=float)
    xi = np.asarray(xi, dtype=float)
    v = np.asarray(values)
    if v.size == 0 or eta.size == 0 or xi.size == 0:
        raise ValueError("empty grid")
    if v.shape != (eta.size, xi.size):
        raise ValueError(f"values shape {v.shape} does not match grid {(eta.size, xi.size)}")
    mask = ridge_mask(v, threshold, signal)
    sig = np.abs(v.real) if signal == "re" else np.abs(v)
    out = []
    for i, j in zip(*np.nonzero(mask)):
        out.append(RidgePoint(int(i), int(j), float(eta[i]), float(xi[j]), float(sig[i, j]),
                              float(boundary_distance_xy(eta[i], xi[j]))))
    return out
