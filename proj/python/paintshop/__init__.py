"""Paint shop resequencing with flexible multi-lane FIFO buffers."""

from ._paintshop import *  # noqa: F401,F403
from ._paintshop import __doc__  # noqa: F401

__version__ = "0.1.0"
