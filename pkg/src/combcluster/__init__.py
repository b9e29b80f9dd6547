"""Exact construction, verification, simulation and pump compilation of
frequency-comb continuous-variable cluster states."""

from .builders import *  # noqa: F401,F403
from .dyadic import Dyadic, DyadicMatrix, NotDyadicError
from .gaussian import *  # noqa: F401,F403
from .hankel import *  # noqa: F401,F403
from .io import GraphFile, GraphFileError, format_shorthand, parse_shorthand, to_dot
from .pump import *  # noqa: F401,F403
from .reduce import *  # noqa: F401,F403

__version__ = "0.1.0"
