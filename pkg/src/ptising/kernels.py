"""Backend selection for the hot kernels.

The compiled extension ``_ckernels`` is used when it imports; otherwise the
numpy twin ``_pykernels`` takes over.  ``use_backend`` switches explicitly,
which the benchmark and the backend-agreement tests rely on.
"""

from __future__ import annotations

import contextlib
import logging

import numpy as np

from . import _pykernels

log = logging.getLogger(__name__)

try:
    from . import _ckernels
except ImportError:  # extension not built (editable install without a compiler)
    _ckernels = None
    log.debug("compiled kernels unavailable; using numpy fallback")

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["compiled"] = _ckernels

_active = _ckernels if _ckernels is not None else _pykernels


def available_backends() -> list[str]:
    return sorted(_BACKENDS)


def backend_name() -> str:
    return "compiled" if _active is _ckernels and _ckernels is not None else "python"


def set_backend(name: str) -> None:
    global _active
    try:
        _active = _BACKENDS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {available_backends()}") from None


@contextlib.contextmanager
def use_backend(name: str):
    previous = backend_name()
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def eps1_sums(eta, xi, k, w, order=2):
    return _active.eps1_sums(eta, xi, k, w, order)


def hessenberg_reduce(a):
    return _active.hessenberg_reduce(a)


def hqr_eigenvalues(h, max_iter):
    return _active.hqr_eigenvalues(h, max_iter)


def start_vector(n, seed=0):
    """Deterministic unit start vector for inverse iteration.

    A flat vector can be exactly orthogonal to an eigenvector of a symmetric
    matrix (the swap matrix is the smallest example), so the entries are
    pseudo-random instead.
    """
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v / np.linalg.norm(v)


def hessenberg_inverse_residual(h, lam, start=None):
    if start is None:
        start = start_vector(h.shape[0])
    return _active.hessenberg_inverse_residual(h, complex(lam), start)
