from .friction import (FrictionDiffMatrix, FrictionPropagator, GalerkinFrictionMatrices,
                       apply_friction, build_friction_diffmatrix, build_friction_propagator,
                       build_galerkin_friction_matrices, build_galerkin_propagator, build_propagator,
                       collocation_generator, galerkin_generator, step_friction_collocation,
                       step_friction_galerkin)
from .poisson import PotentialField, build_delta_v_selfconsistent, density, solve_poisson
from .potential import (DeltaVTable, ExternalPotential, PotentialSpec, SelfConsistentPotential,
                        build_delta_v_external, make_potential)
from .transport import diffusion_factors, nonlocal_generator, step_convection, step_diffusion, step_nonlocal

__all__ = [
    # potential
    "DeltaVTable",
    "ExternalPotential",
    "PotentialSpec",
    "SelfConsistentPotential",
    "build_delta_v_external",
    "make_potential",
    # transport
    "diffusion_factors",
    "nonlocal_generator",
    "step_convection",
    "step_diffusion",
    "step_nonlocal",
    # poisson
    "PotentialField",
    "build_delta_v_selfconsistent",
    "density",
    "solve_poisson",
    # friction
    "FrictionDiffMatrix",
    "FrictionPropagator",
    "GalerkinFrictionMatrices",
    "apply_friction",
    "build_friction_diffmatrix",
    "build_friction_propagator",
    "build_galerkin_friction_matrices",
    "build_galerkin_propagator",
    "build_propagator",
    "collocation_generator",
    "galerkin_generator",
    "step_friction_collocation",
    "step_friction_galerkin",
]
