"""Fairness, efficiency and incentive verifiers."""

from src.properties.checks import (
    EfReport,
    EnvyPair,
    NonWastefulReport,
    PoReport,
    PropertyReport,
    SiReport,
    check_ef,
    check_feasible,
    check_nonwasteful,
    check_po,
    check_si,
    envy_matrix,
    verify_allocation,
)
from src.properties.strategyproof import (
    DEFAULT_GRID_POINTS,
    ManipulationFinding,
    demand_grid,
    probe_all_agents,
    sp_probe,
)

__all__ = [
    "DEFAULT_GRID_POINTS",
    "EfReport",
    "EnvyPair",
    "ManipulationFinding",
    "NonWastefulReport",
    "PoReport",
    "PropertyReport",
    "SiReport",
    "check_ef",
    "check_feasible",
    "check_nonwasteful",
    "check_po",
    "check_si",
    "demand_grid",
    "envy_matrix",
    "probe_all_agents",
    "sp_probe",
    "verify_allocation",
]
