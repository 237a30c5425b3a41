"""Multi-period two-dimensional cutting planner with usable leftovers."""

try:
    from ._cutplan import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # pragma: no cover - build-tree layout
    from _cutplan import *  # noqa: F401,F403
