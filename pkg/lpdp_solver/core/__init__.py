"""
Core module for the LPDP solver
"""

from .exceptions import *  # noqa: F401,F403
