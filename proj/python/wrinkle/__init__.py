"""Python interface to the wrinkle library."""

from ._wrinkle import *  # noqa: F401,F403
from ._wrinkle import __version__, WrinkleError  # noqa: F401
