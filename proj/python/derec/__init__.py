"""Decoupled tabular synthesis toolkit."""

try:
    from ._derec import *  # noqa: F401,F403  installed package layout
    from ._derec import __doc__  # noqa: F401
except ImportError:  # build-tree layout: _derec.so sits on PYTHONPATH
    from _derec import *  # noqa: F401,F403
    from _derec import __doc__  # noqa: F401
