from .config import ExperimentConfig, SweepSpec
from .errors import (
    AccuracyError,
    ConfigError,
    DomainError,
    OptimizationError,
    ShapeError
)
from .fading import LinkStats, MobilityParams
from .gammasum import GammaMixture
from .mcsim import OutageEstimate, SimConfig, simulate_outage
from .network import DecodeSet, NetworkConfig, PowerSplit
from .outage import asymptotic_outage, diversity_order, per_block_outage
from .power import ObjectiveConstants, k_constants, optimize_power
from .specfun import Accuracy


__all__ = [
    "Accuracy",
    "AccuracyError",
    "ConfigError",
    "DecodeSet",
    "DomainError",
    "ExperimentConfig",
    "GammaMixture",
    "LinkStats",
    "MobilityParams",
    "NetworkConfig",
    "ObjectiveConstants",
    "OptimizationError",
    "OutageEstimate",
    "PowerSplit",
    "ShapeError",
    "SimConfig",
    "SweepSpec",
    "asymptotic_outage",
    "diversity_order",
    "k_constants",
    "optimize_power",
    "per_block_outage",
    "simulate_outage"
]
