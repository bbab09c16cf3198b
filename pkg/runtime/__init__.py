from .frame import Frame
from .runner import SimulationRunner

__all__ = ["Frame", "SimulationRunner"]
