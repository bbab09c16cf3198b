"""
Numeric-study preset: the 20-state relay MDP used for convergence, ω, β,
ρ and area sweeps on a static 6×6 network.
"""

from env.scenario import ExperimentConfig

# =============================================================================
# CONFIGURATION (Easy to modify)
# =============================================================================

REGION_SIDE = 6.0
DENSITY = 0.8

NUM_STATES = 20
NUM_ACTIONS = 5
ACTION_STEP = 0.4
EPSILON = 0.01
RHO = 0.5
OMEGA = 0.55

# Throughput saturates toward the single-hop ceiling
GAMMA = "saturating"
GAMMA_SCALE = 8.0
GAMMA_CAP = 4.0

SWEEP_OMEGA = [0.45, 0.5, 0.55, 0.6, 0.65]
SWEEP_BETA = [0.0, 0.1, 0.2, 0.3]
SWEEP_RHO = [0.3, 0.5, 0.7, 0.9]
SWEEP_AREA = [36.0, 64.0, 100.0]


def get_numeric_study_config(**overrides) -> ExperimentConfig:
    """The numeric-study config, with optional key overrides."""
    base = ExperimentConfig(
        name="numeric-study",
        width=REGION_SIDE,
        height=REGION_SIDE,
        lam=DENSITY,
        num_sources=2,
        num_terminals=2,
        num_states=NUM_STATES,
        num_actions=NUM_ACTIONS,
        action_step=ACTION_STEP,
        epsilon=EPSILON,
        rho=RHO,
        omega=OMEGA,
        gamma=GAMMA,
        gamma_scale=GAMMA_SCALE,
        gamma_cap=GAMMA_CAP,
        beta=0.0,
        dynamic=False,
        strategies=["proposed", "myopic", "fixed"],
        seeds=list(range(5)),
        horizon=200,
        sweep_omega=SWEEP_OMEGA,
        sweep_beta=SWEEP_BETA,
        sweep_rho=SWEEP_RHO,
        sweep_area=SWEEP_AREA,
    )
    return base.clone(**overrides) if overrides else base
