"""Classical numerics for linear-combination-of-Hamiltonian-simulation kernels,
error bounds, quadrature plans, block encodings and bounded polynomial fits."""

from .kernels import KernelSpec, GENERALIZED, STRETCHED, INF

__all__ = ["KernelSpec", "GENERALIZED", "STRETCHED", "INF"]
__version__ = "0.1.0"
