"""spinchaos: coupled kicked spins, quantum vs classical Liouville dynamics."""

__version__ = "0.1.0"
