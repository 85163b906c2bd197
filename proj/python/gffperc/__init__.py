from ._gffperc import *  # noqa: F401,F403
from ._gffperc import __doc__  # noqa: F401

__version__ = "0.1.0"
