"""Thermal entanglement and entanglement teleportation in a two-qubit
Heisenberg chain with a Dzyaloshinskii-Moriya interaction along z."""

from . import concurrence, linalg, model, sweep, teleport
from .concurrence import *
from .linalg import *
from .model import *
from .sweep import *
from .teleport import *

__all__ = (linalg.__all__ + model.__all__ + concurrence.__all__
           + teleport.__all__ + sweep.__all__)

__version__ = "0.1.0"
