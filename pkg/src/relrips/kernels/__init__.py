"""Hot numeric kernels with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``RELRIPS_DISABLE_JIT`` is unset (or ``0``).  Both paths return
identical integer arrays; ``tests/test_kernels.py`` cross-checks them.

Graphs are passed in CSR form (``indptr``, ``indices``).  Distance matrices
are ``int16`` with ``-1`` for unreachable pairs.
"""

from __future__ import annotations

import os

from . import _numpy

INF = int(_numpy.INF)


def _jit_requested() -> bool:
    return os.environ.get("RELRIPS_DISABLE_JIT", "").strip().lower() in ("", "0", "false", "no")


try:
    if not _jit_requested():
        raise ImportError("disabled by RELRIPS_DISABLE_JIT")
    from . import _numba
except ImportError:
    _numba = None

NUMBA_AVAILABLE = _numba is not None
BACKEND = "numba" if NUMBA_AVAILABLE else "numpy"
_impl = _numba if NUMBA_AVAILABLE else _numpy


def all_pairs_bfs(indptr, indices):
    """Unweighted all-pairs distances of a CSR graph."""
    return _impl.all_pairs_bfs(indptr, indices)


def coned_tables(nk_indptr, nk_indices, coset_of, coset_ptr, coset_members,
                 pos_in_coset, dk_offset, dk_flat):
    """Coned-off distances and the least r admitting a constrained geodesic.

    Returns ``(D, RN)``.  ``D[x, y]`` is the distance in the coned-off graph.
    ``RN[x, y]`` is the least integer r such that some geodesic from x to y
    travels less than 3r in the cosets of its first and last steps and less
    than 2r in every other coset it crosses (``INF`` if y is unreachable).
    Coset travel is read from the per-coset d_K blocks in ``dk_flat``.
    """
    return _impl.coned_tables(nk_indptr, nk_indices, coset_of, coset_ptr,
                              coset_members, pos_in_coset, dk_offset, dk_flat)


def four_point_max(D, idx):
    """Twice the four-point delta of the vertex subset ``idx`` (exhaustive)."""
    return int(_impl.four_point_max(D, idx))


def four_point_quads(D, quads):
    """Largest doubled four-point defect over the given quadruple rows."""
    return int(_impl.four_point_quads(D, quads))
