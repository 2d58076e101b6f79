"""Parameter-plane sweeps of the energy density, Laplacian, curvature and phase.

Rows of constant ``eta`` are the unit of work.  Each row is evaluated by the
vectorised derivative kernel, so its numbers do not depend on which process
computed it, and rows are re-assembled in grid order before anything is
written.  Output is therefore byte-identical for any worker count.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import json
import logging
import math
import sys
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .errors import CriticalPointError, GaplessPointError
from .model import FieldPoint
from .phase import classify
from .response import CRITICAL_TOL, GAP_TOL, derivative_table
from .spectrum import FiniteN, Thermodynamic

log = logging.getLogger(__name__)

QUANTITIES = ("energy", "laplacian", "berry_sum", "berry_diff", "magnetization", "phase")
COLUMNS = ("eta", "xi", "r", "phi", "re_eps_g", "im_eps_g", "re_lap", "im_lap",
           "re_c_sum", "im_c_sum", "re_c_diff", "im_c_diff", "re_m_a", "im_m_a",
           "phase", "error")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class ScanConfig:
    eta_range: tuple[float, float, int]
    xi_range: tuple[float, float, int]
    two_n: int | None = None  # None means thermodynamic
    quantities: tuple[str, ...] = QUANTITIES
    output_format: str = "csv"
    parallelism: int = 1
    quad_points: int = 512
    phase_tol: float = 1e-9
    J: float = 1.0

    def __post_init__(self):
        for name in ("eta_range", "xi_range"):
            lo, hi, n = getattr(self, name)
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise ValueError(f"{name} bounds must be finite")
            if int(n) != n or n < 2:
                raise ValueError(f"{name} needs at least 2 points")
            object.__setattr__(self, name, (float(lo), float(hi), int(n)))
        q = tuple(dict.fromkeys(self.quantities))
        if not q:
            raise ValueError("select at least one quantity")
        unknown = set(q) - set(QUANTITIES)
        if unknown:
            raise ValueError(f"unknown quantities {sorted(unknown)}")
        object.__setattr__(self, "quantities", tuple(x for x in QUANTITIES if x in q))
        if self.output_format not in FORMATS:
            raise ValueError(f"output_format must be one of {FORMATS}")
        if self.two_n is not None:
            FiniteN(int(self.two_n)).rule()  # validates the site count
        if int(self.parallelism) < 1:
            raise ValueError("parallelism must be >= 1")
        if not self.J > 0:
            raise ValueError("J must be positive")

    @property
    def mode(self):
        return FiniteN(int(self.two_n)) if self.two_n is not None else Thermodynamic(self.quad_points)

    def axes(self):
        return (np.linspace(*self.eta_range), np.linspace(*self.xi_range))

    def to_dict(self) -> dict:
        return {
            "eta": list(self.eta_range),
            "xi": list(self.xi_range),
            "two_n": self.two_n if self.two_n is not None else "thermodynamic",
            "quantities": list(self.quantities),
            "format": self.output_format,
            "jobs": self.parallelism,
            "quad_points": self.quad_points,
            "phase_tol": self.phase_tol,
            "J": self.J,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ScanConfig":
        known = {"eta", "xi", "two_n", "quantities", "format", "jobs", "quad_points", "phase_tol", "J"}
        extra = set(d) - known
        if extra:
            raise ValueError(f"unknown config keys {sorted(extra)}")
        two_n = d.get("two_n", "thermodynamic")
        return cls(
            eta_range=tuple(d["eta"]),
            xi_range=tuple(d["xi"]),
            two_n=None if two_n in (None, "thermodynamic") else int(two_n),
            quantities=tuple(d.get("quantities", QUANTITIES)),
            output_format=d.get("format", "csv"),
            parallelism=int(d.get("jobs", 1)),
            quad_points=int(d.get("quad_points", 512)),
            phase_tol=float(d.get("phase_tol", 1e-9)),
            J=float(d.get("J", 1.0)),
        )

    @classmethod
    def from_json(cls, text: str) -> "ScanConfig":
        return cls.from_dict(json.loads(text))


@dataclass
class ScanTable:
    config: ScanConfig
    eta: np.ndarray
    xi: np.ndarray
    # complex arrays of shape (n_eta, n_xi); NaN marks undefined values
    eps_g: np.ndarray
    laplacian: np.ndarray
    c_sum: np.ndarray
    c_diff: np.ndarray
    m_a: np.ndarray
    phase: list = field(default_factory=list)  # n_eta lists of labels (or None)
    error: list = field(default_factory=list)  # n_eta lists of codes (or "")

    def __len__(self):
        return self.eta.size * self.xi.size

    def rows(self):
        """Dicts keyed by ``COLUMNS`` in row-major order (eta outer)."""
        for i, e in enumerate(self.eta):
            for j, x in enumerate(self.xi):
                r = math.hypot(e, x)
                phi = math.atan2(x, e) % (2 * math.pi) if r > 0 else 0.0
                yield {
                    "eta": float(e), "xi": float(x), "r": r, "phi": phi,
                    "re_eps_g": self.eps_g[i, j].real, "im_eps_g": self.eps_g[i, j].imag,
                    "re_lap": self.laplacian[i, j].real, "im_lap": self.laplacian[i, j].imag,
                    "re_c_sum": self.c_sum[i, j].real, "im_c_sum": self.c_sum[i, j].imag,
                    "re_c_diff": self.c_diff[i, j].real, "im_c_diff": self.c_diff[i, j].imag,
                    "re_m_a": self.m_a[i, j].real, "im_m_a": self.m_a[i, j].imag,
                    "phase": self.phase[i][j], "error": self.error[i][j],
                }


def _row(args):
    """Evaluate one row of constant eta; returns plain arrays and lists."""
    cfg, eta = args
    _, xi = cfg.axes()
    mode = cfg.mode
    q = set(cfg.quantities)
    order = 2 if q & {"laplacian", "berry_sum", "berry_diff"} else (1 if "magnetization" in q else 0)
    d = derivative_table(np.full(xi.size, eta), xi, mode, cfg.J, order)
    nan = complex(math.nan, math.nan)
    n = xi.size
    out = {key: np.full(n, nan) for key in ("eps_g", "laplacian", "c_sum", "c_diff", "m_a")}
    errors = [""] * n
    gapless = np.zeros(n, dtype=bool)
    critical = np.zeros(n, dtype=bool)
    if isinstance(mode, Thermodynamic):
        s = eta * eta + xi * xi
        gapless = (abs(eta) < GAP_TOL) & (s >= 1.0 - CRITICAL_TOL)
        critical = np.abs(s - 1.0) <= CRITICAL_TOL
    if "energy" in q:
        out["eps_g"] = d[:, 0].astype(complex)
    first_ok = ~gapless
    second_ok = ~(gapless | critical)
    if "magnetization" in q:
        m = 2 * d[:, 1] + 2j * d[:, 2]
        out["m_a"] = np.where(first_ok, m, nan)
        for j in np.flatnonzero(~first_ok):
            errors[j] = GaplessPointError.code
    if order >= 2:
        d2e, d2x, d2m = d[:, 3], d[:, 4], d[:, 5]
        if "laplacian" in q:
            out["laplacian"] = np.where(second_ok, (d2e + d2x).astype(complex), nan)
        if "berry_sum" in q:
            out["c_sum"] = np.where(second_ok, 2j * (d2m - d2e), nan)
        if "berry_diff" in q:
            out["c_diff"] = np.where(second_ok, (2 * (d2m - d2x)).astype(complex), nan)
        for j in np.flatnonzero(~second_ok):
            errors[j] = GaplessPointError.code if gapless[j] else CriticalPointError.code
    labels = [None] * n
    if "phase" in q:
        labels = [classify(FieldPoint(float(eta), float(x), cfg.J), cfg.phase_tol).value for x in xi]
    return out, labels, errors


def run_scan(cfg: ScanConfig, progress: bool = False) -> ScanTable:
    eta, xi = cfg.axes()
    jobs = [(cfg, float(e)) for e in eta]
    results = [None] * eta.size
    if cfg.parallelism == 1:
        for i, job in enumerate(jobs):
            results[i] = _row(job)
            if progress:
                print(f"\rrow {i + 1}/{eta.size}", end="", file=sys.stderr)
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=cfg.parallelism) as pool:
            futures = {pool.submit(_row, job): i for i, job in enumerate(jobs)}
            done = 0
            for fut in concurrent.futures.as_completed(futures):
                results[futures[fut]] = fut.result()
                done += 1
                if progress:
                    print(f"\rrow {done}/{eta.size}", end="", file=sys.stderr)
    if progress:
        print(file=sys.stderr)
    stack = {key: np.array([r[0][key] for r in results]) for key in results[0][0]}
    return ScanTable(cfg, eta, xi, stack["eps_g"], stack["laplacian"], stack["c_sum"],
                     stack["c_diff"], stack["m_a"], [r[1] for r in results], [r[2] for r in results])


def _fmt(v):
    if isinstance(v, str):
        return v
    if v is None or (isinstance(v, float) and math.isnan(v)):
        return ""
    return "%.17g" % v


def _json_value(v):
    # phase is None when not requested; NaN marks an undefined number
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


def serialize(table: ScanTable, fmt: str | None = None) -> bytes:
    """CSV (header plus one line per point) or JSON (metadata plus records)."""
    fmt = fmt or table.config.output_format
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for row in table.rows():
            w.writerow([_fmt(row[c]) for c in COLUMNS])
        return buf.getvalue().encode()
    if fmt == "json":
        doc = {
            "metadata": {"artifact": "ptising", "version": __version__, "columns": list(COLUMNS),
                         "config": table.config.to_dict()},
            "records": [{c: _json_value(row[c]) for c in COLUMNS} for row in table.rows()],
        }
        return (json.dumps(doc, indent=1, allow_nan=False) + "\n").encode()
    raise ValueError(f"unknown format {fmt!r}")


def parse_csv(data: bytes) -> list[dict]:
    """Inverse of the CSV writer: floats back to ``float``, empty fields to NaN."""
    rows = []
    for rec in csv.DictReader(io.StringIO(data.decode())):
        row = {}
        for c in COLUMNS:
            v = rec[c]
            if c in ("phase", "error"):
                row[c] = v
            else:
                row[c] = float(v) if v != "" else math.nan
        rows.append(row)
    return rows
