"""Hot kernels for rule matching: compiled extension with numpy fallback.

``BACKEND`` reports which implementation was selected at import time.
``backends()`` returns every importable implementation (used by the
benchmark and the parity tests).
"""

from . import _pyfallback

try:
    from . import _match as _impl

    BACKEND = "compiled"
except ImportError:  # extension not built
    _impl = _pyfallback
    BACKEND = "python"

match_one = _impl.match_one
match_block = _impl.match_block


def backends():
    """Name -> module for every available kernel implementation."""
    out = {"python": _pyfallback}
    if _impl is not _pyfallback:
        out["compiled"] = _impl
    return out
