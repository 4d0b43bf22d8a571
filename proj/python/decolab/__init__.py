"""Decoherence toolkit: exact dephasing, Lindblad dynamics, quantum jumps,
collisional localization and pointer states. All functions use natural
units (hbar = k_B = 1, SI metre and second); see ``decolab.units``."""

from ._decolab import *  # noqa: F401,F403
from ._decolab import units, __doc__  # noqa: F401

__version__ = "0.1.0"
