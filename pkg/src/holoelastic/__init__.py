"""Holomorphic-network energy solver for plane elasticity and crack problems.

Two complex-valued networks represent the Kolosov-Muskhelishvili potentials,
so every predicted field satisfies equilibrium and compatibility exactly; the
networks are trained by minimizing the total potential energy.
"""
from .cases import CaseSpec, builtin_cases, get_case
from .crack import CrackSpec, crack_potentials, traction_free_residual, zeta
from .elasticity import FieldSample, Material, PlaneMode, km_fields, von_mises
from .energy import TrainConfig, assemble_energy, boundary_residual_loss, build_samples, train
from .errors import HoloElasticError
from .fracture import (interaction_integral, j_integral, mouth_opening, sif_from_interaction,
                       sif_near_field, williams_aux)
from .geometry import DomainSpec, SamplingPlan, mc_area, sample_boundary, sample_interior
from .jets import HoloJet2
from .network import NetworkSpec, PotentialModel, init_exp_aware, load_model, save_model

__version__ = "0.1.0"

__all__ = [
    "CaseSpec", "builtin_cases", "get_case", "CrackSpec", "crack_potentials",
    "traction_free_residual", "zeta", "FieldSample", "Material", "PlaneMode", "km_fields",
    "von_mises", "TrainConfig", "assemble_energy", "boundary_residual_loss", "build_samples",
    "train", "HoloElasticError", "interaction_integral", "j_integral", "mouth_opening",
    "sif_from_interaction", "sif_near_field", "williams_aux", "DomainSpec", "SamplingPlan",
    "mc_area", "sample_boundary", "sample_interior", "HoloJet2", "NetworkSpec",
    "PotentialModel", "init_exp_aware", "load_model", "save_model",
]
