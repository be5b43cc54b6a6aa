"""Comparative utility and security evaluation for agent skills."""

from skilleval._core import *  # noqa: F401,F403
from skilleval._core import __version__  # noqa: F401
