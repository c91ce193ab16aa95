"""Random series-parallel networks grown by edge duplication."""

__version__ = "0.1.0"

from .network import Model, ModelConfig, SPNetwork, grow  # noqa: F401
