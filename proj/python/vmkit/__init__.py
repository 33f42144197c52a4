"""Virus machine simulation and analysis toolkit.

Thin python facade over the C++ core: machine model and validation, exact
nondeterministic transition semantics, bounded exhaustive enumeration of
generated number sets, graph/resource analysis, the construction suite and
the machine document format.
"""

from vmkit._core import *  # noqa: F401,F403
from vmkit._core import __doc__ as _core_doc

__doc__ = _core_doc if _core_doc else __doc__
__version__ = "0.1.0"
