"""Kernel selection for the rotation-system genus search.

The compiled extension is preferred when the install built it; the
pure-Python fallback has identical semantics and enumeration order.
``benchmarks/bench_genus.py`` compares the two.
"""

from __future__ import annotations

from ._genus_py import min_genus_search as min_genus_search_py

try:
    from ._genus_c import min_genus_search as _impl

    KERNEL = "c"
except ImportError:  # extension not built
    _impl = min_genus_search_py
    KERNEL = "python"

min_genus_search = _impl
