"""Perfect crystals, energy functions and multi-grounded partitions for
level-one affine characters, with exact truncated series."""
from .series import TruncatedSeries, even_extract, poch_expand, series_add, series_mul, specialize
from .crystal import PerfectCrystal, build_family, load_crystal, tensor_e, tensor_f
from .energy import EnergyFunction, NormalizedEnergy, GroundIntegers, ground_integers, normalize, solve_energy
from .paths import GroundStatePath, LambdaPath, enumerate_paths, ground_state_path, path_weight
from .mgp import (ColouredInteger, Ground, MultiGroundedPartition, enumerate_mgp, phi_d_forward,
                  phi_d_inverse, phi_forward, phi_inverse, relation_check, validate)
from .character import (ModuleDescriptor, VerificationReport, build_module, character_enumerative,
                        character_flexible, character_product, path_character_oracle, verify_theorem)

__all__ = [
    "TruncatedSeries", "even_extract", "poch_expand", "series_add", "series_mul", "specialize",
    "PerfectCrystal", "build_family", "load_crystal", "tensor_e", "tensor_f",
    "EnergyFunction", "NormalizedEnergy", "GroundIntegers", "ground_integers", "normalize",
    "solve_energy", "GroundStatePath", "LambdaPath", "enumerate_paths", "ground_state_path",
    "path_weight", "ColouredInteger", "Ground", "MultiGroundedPartition", "enumerate_mgp",
    "phi_d_forward", "phi_d_inverse", "phi_forward", "phi_inverse", "relation_check", "validate",
    "ModuleDescriptor", "VerificationReport", "build_module", "character_enumerative",
    "character_flexible", "character_product", "path_character_oracle", "verify_theorem",
]

__version__ = "0.1.0"
