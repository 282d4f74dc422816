"""Local-field arithmetic, invariant random matrix measures and orbital integrals."""

from ._core import *  # noqa: F401,F403
from ._core import LfrmError, Field, Element, CharValue  # noqa: F401
