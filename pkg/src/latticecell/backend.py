"""Kernel backend selection.

Two interchangeable implementations of the hot kernels exist: the compiled
Cython extension (``latticecell._kernels``) and the pure-Python module
(``latticecell._kernels_py``). The compiled one is picked at import when it
built; ``LATTICECELL_PURE=1`` in the environment forces the pure kernels.
``set_backend`` switches at runtime, which the benchmark uses to compare
the two on identical inputs.
"""

import os

from . import _kernels_py

_BACKENDS = {"pure": _kernels_py}

try:
    from . import _kernels  # compiled extension, optional

    _BACKENDS["compiled"] = _kernels
except ImportError:
    _kernels = None

if os.environ.get("LATTICECELL_PURE"):
    _active_name = "pure"
else:
    _active_name = "compiled" if "compiled" in _BACKENDS else "pure"


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def active_backend() -> str:
    return _active_name


def set_backend(name: str) -> None:
    global _active_name
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available_backends()}")
    _active_name = name


def merge_concept_pairs(extents1, intents1, extents2, intents2):
    return _BACKENDS[_active_name].merge_concept_pairs(
        extents1, intents1, extents2, intents2)


def lower_covers(extents):
    return _BACKENDS[_active_name].lower_covers(extents)
