"""Capacity bounds and dirty-paper-coding regime analysis for three
state-dependent Gaussian channel models: the MAC with a state-informed
helper, the Z-interference channel, and the regular interference channel
with correlated receiver states."""

from . import channels, gauss_core, ic, mac_helper, mc_oracle, region, search, z_ic
from ._kernels import backend_name

__version__ = "0.1.0"

__all__ = [
    "channels",
    "gauss_core",
    "ic",
    "mac_helper",
    "mc_oracle",
    "region",
    "search",
    "z_ic",
    "backend_name",
    "__version__",
]
