"""Soft-label prototype kNN: classifier, constructions and decision landscapes."""

from ._slapknn import *  # noqa: F401,F403
from ._slapknn import __version__  # noqa: F401
