"""Kernel selection: compiled extension when available, pure Python otherwise.

Set LINSCAT_FORCE_PURE=1 to skip the extension (useful for benchmarking
and for verifying that both implementations agree).
"""

import os

from . import _pykernels

if os.environ.get("LINSCAT_FORCE_PURE"):
    _impl = _pykernels
    USING_COMPILED = False
else:
    try:
        from . import _speedups as _impl
        USING_COMPILED = True
    except ImportError:
        _impl = _pykernels
        USING_COMPILED = False

enum_p1 = _impl.enum_p1
enum_p2 = _impl.enum_p2
count_p1 = _impl.count_p1
count_p2 = _impl.count_p2
prefilter_p1 = _impl.prefilter_p1
prefilter_p2 = _impl.prefilter_p2

PURE = _pykernels
