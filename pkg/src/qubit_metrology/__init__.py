"""Precision limits for estimating a qubit coupling under decoherence.

Modules: ``qcore`` (Fisher information), ``channel`` (phase-covariant qubit
channel), ``probes`` (product and cat probes), ``bounds`` (closed-form error
bounds), ``allocator`` (optimal use of a qubit supply), ``montecarlo``
(simulated readout) and ``cli``.
"""

from .allocator import Resources, optimize
from .bounds import BoundQuery, bound
from .channel import ChannelParams
from .probes import ProbeSpec

__version__ = "0.1.0"

__all__ = ["BoundQuery", "ChannelParams", "ProbeSpec", "Resources", "bound", "optimize"]
