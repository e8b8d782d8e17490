"""Selects the compiled kernel backend, falling back to pure Python.

Set SEMIFIELDS_BACKEND=python to force the pure backend, or
SEMIFIELDS_BACKEND=cython to insist on the compiled one (import error
if it was not built).
"""

from __future__ import annotations

import os

import numpy as np

from . import _core_py
from .gf import FieldSpec, poly_to_int, primitive_polys


def _select():
    requested = os.environ.get("SEMIFIELDS_BACKEND", "").lower()
    if requested in ("python", "pure"):
        return _core_py
    try:
        from . import _core

        return _core
    except ImportError:
        if requested in ("cython", "compiled", "c"):
            raise ImportError("compiled kernel backend requested but not built")
        return _core_py


_backend = _select()
BACKEND = _backend.BACKEND_NAME

_contexts: dict[tuple[str, int, int], object] = {}


def primitive_mask(spec: FieldSpec) -> np.ndarray:
    mask = np.zeros(spec.order, dtype=np.uint8)
    for f in primitive_polys(spec):
        mask[poly_to_int(f)] = 1
    return mask


def get_context(spec: FieldSpec, backend=None):
    backend = backend or _backend
    key = (backend.BACKEND_NAME, spec.p, spec.d)
    ctx = _contexts.get(key)
    if ctx is None:
        ctx = backend.make_context(spec.p, spec.d, primitive_mask(spec))
        _contexts[key] = ctx
    return ctx


def available_backends():
    """(name, module) pairs for every importable backend."""
    out = [(_core_py.BACKEND_NAME, _core_py)]
    try:
        from . import _core

        out.insert(0, (_core.BACKEND_NAME, _core))
    except ImportError:
        pass
    return out


def search_completions(spec: FieldSpec, a2_entries, unit: int = -1, backend=None):
    backend = backend or _backend
    ctx = get_context(spec, backend)
    return backend.search_completions(ctx, np.asarray(a2_entries, dtype=np.int64), unit)


def canonical_key_codes(spec: FieldSpec, mats, backend=None):
    backend = backend or _backend
    return backend.canonical_key(get_context(spec, backend), mats)


def cyclic_rep_codes(spec: FieldSpec, mats, backend=None):
    backend = backend or _backend
    return backend.cyclic_reps(get_context(spec, backend), mats)


def aut_order_of(spec: FieldSpec, mats, backend=None) -> int:
    backend = backend or _backend
    return backend.aut_order(get_context(spec, backend), mats)


def isotope_key_counts(spec: FieldSpec, mats, backend=None):
    backend = backend or _backend
    return backend.isotope_keys(get_context(spec, backend), mats)
