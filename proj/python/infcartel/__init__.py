"""Influencer cartel model: analytics, simulation, pod protocol and empirics."""

from ._core import *  # noqa: F401,F403

__version__ = "0.1.0"
