"""Frequency-domain compressive sampling with non-uniform sample allocation.

Thin wrapper around the C++ extension: DFT machinery, projection operators,
sample-allocation planning (URS/NRS/VD/HD/HU), the L1 solver, and the staged
slicing reconstruction.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
