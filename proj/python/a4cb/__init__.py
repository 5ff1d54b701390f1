"""Exact canonical-basis workbench for type A4.

Thin wrapper over the C++ core: q-binomial identities, PBW expansion
through the quantum shuffle realization, table-entry verification,
quadratic-form positivity searches, and region-coverage censuses.
"""

try:
    from ._a4cb import *  # noqa: F401,F403  (installed package layout)
except ImportError:  # build-tree layout: the module sits next to the package
    from _a4cb import *  # noqa: F401,F403

from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("a4cb")
except PackageNotFoundError:
    __version__ = "0.0.0"
