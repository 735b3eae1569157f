"""Low-rank matrix recovery and matrix concentration experiments.

Thin python layer over the compiled extension; everything public lives in
``lrr._core`` and is re-exported here.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
