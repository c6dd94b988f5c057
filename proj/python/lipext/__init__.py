"""Lipschitz extension operators on finite metric spaces.

Thin re-export of the compiled module; see the project README for the
operations and the experiment harness.
"""

try:
    from ._lipext import *  # noqa: F401,F403  (installed layout)
    from ._lipext import __doc__ as _core_doc
except ImportError:  # pragma: no cover - build-tree layout
    from _lipext import *  # noqa: F401,F403
    from _lipext import __doc__ as _core_doc

__all__ = [name for name in dir() if not name.startswith("_")]
