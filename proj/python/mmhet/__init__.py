# SPDX-License-Identifier: Apache-2.0
"""Coverage and rate of Poisson UHF/mmWave heterogeneous networks."""

from ._mmhet import (
    ConfigError,
    DomainError,
    NonConvergence,
    Scenario,
    analysis_assoc,
    analysis_coverage,
    analysis_rate,
    best_assoc_cdf,
    classic_scenario,
    mc_assoc,
    mc_coverage,
    mc_rate,
    scenario_from_config,
    table2_scenario,
    unified_coverage,
)

__all__ = [
    "ConfigError",
    "DomainError",
    "NonConvergence",
    "Scenario",
    "analysis_assoc",
    "analysis_coverage",
    "analysis_rate",
    "best_assoc_cdf",
    "classic_scenario",
    "mc_assoc",
    "mc_coverage",
    "mc_rate",
    "scenario_from_config",
    "table2_scenario",
    "unified_coverage",
]
