"""
Wi-Fi Direct application preset: a mobile 60 m × 60 m network with churn
and drifting link failures, comparing the proposed, myopic and fixed-range
strategies over 20 seeds.
"""

from env.scenario import ExperimentConfig

from .numeric_study import GAMMA, GAMMA_CAP, GAMMA_SCALE

# =============================================================================
# CONFIGURATION (Easy to modify)
# =============================================================================

REGION_SIDE = 6.0
UNIT_LENGTH_M = 10.0
DENSITY = 0.8

NUM_STATES = 18
NUM_ACTIONS = 7
ACTION_STEP = 0.4
EPSILON = 0.01
RHO = 0.5
OMEGA = 0.53
UTILITY_OFFSET = 0.2

# Path loss P = η·d^α
ETA = 1.0
ALPHA = 2.0

# Dynamics: relays move every step; population and β change every 5 steps
MOBILITY_SIGMA = 0.1
MEMBERSHIP_INTERVAL = 5
BETA_INTERVAL = 5
BETA_RANGE = (0.0, 0.3)
BETA_BANDS = [0.0, 0.1, 0.2, 0.3]

# 910 Mb per generation caps a single hop at 910 Mbps with 1 ms steps
DATA_BITS = 910_000
TTL = 16
PAYLOAD_SYMBOLS = 32

HORIZON = 1000
SEEDS = list(range(20))


def get_wifi_direct_app_config(**overrides) -> ExperimentConfig:
    """The application config, with optional key overrides."""
    base = ExperimentConfig(
        name="wifi-direct-app",
        width=REGION_SIDE,
        height=REGION_SIDE,
        unit_length_m=UNIT_LENGTH_M,
        lam=DENSITY,
        num_sources=2,
        num_terminals=2,
        num_states=NUM_STATES,
        num_actions=NUM_ACTIONS,
        action_step=ACTION_STEP,
        epsilon=EPSILON,
        rho=RHO,
        omega=OMEGA,
        u=UTILITY_OFFSET,
        gamma=GAMMA,
        gamma_scale=GAMMA_SCALE,
        gamma_cap=GAMMA_CAP,
        beta=0.0,
        dynamic=True,
        mobility_sigma=MOBILITY_SIGMA,
        membership_interval=MEMBERSHIP_INTERVAL,
        beta_interval=BETA_INTERVAL,
        beta_range=BETA_RANGE,
        beta_bands=BETA_BANDS,
        ttl=TTL,
        payload_symbols=PAYLOAD_SYMBOLS,
        data_bits=DATA_BITS,
        unit_time_ms=1.0,
        eta=ETA,
        alpha=ALPHA,
        strategies=["proposed", "myopic", "fixed"],
        seeds=SEEDS,
        horizon=HORIZON,
        sweep_omega=[0.45, 0.5, 0.55, 0.6, 0.65],
        sweep_beta=[0.0, 0.1, 0.2, 0.3],
        sweep_rho=[0.3, 0.5, 0.7, 0.9],
        sweep_area=[36.0, 64.0, 100.0],
    )
    return base.clone(**overrides) if overrides else base
