"""Risk-sensitive distributional RL for battery energy arbitrage.

A 1-minute battery dispatch MDP settled on 15-minute imbalance prices,
four discrete-action learners (DQN, categorical DDQN, discrete SAC, and a
risk-sensitive distributional SAC with a value-at-risk weighted actor
objective), an offline fitted-Q baseline, a perfect-foresight dynamic
programming oracle, and the training/evaluation harness that ties them
together. Pure numpy; no deep-learning framework.
"""

from .agents import (
    ALGOS,
    AgentBundle,
    AgentConfig,
    epsilon_at,
    fqi_train,
    greedy_actions,
    make_agent,
    select_action,
    train_step,
)
from .checkpoint import Checkpoint, load_checkpoint, save_checkpoint
from .config import (
    DataConfig,
    RunConfig,
    SyntheticConfig,
    as_dict,
    config_digest,
    config_from_dict,
    default_config,
    load_config,
    make_datasets,
)
from .dist import dist_mean, make_support, project_onto_support, value_at_risk
from .env import (
    BatteryConfig,
    EnvState,
    StepOutcome,
    action_values,
    backup_filter,
    encode_features,
    reset,
    step,
)
from .harness import (
    EvalReport,
    HeatmapGrid,
    TrainingAborted,
    TrainResult,
    compare,
    evaluate,
    heatmap,
    train,
    write_heatmap,
)
from .nets import DenseNet, GradCheckReport, build_net, forward, grad_check
from .oracle import OracleResult, dp_oracle, minimum_soc_points
from .prices import (
    PriceDay,
    PriceSeries,
    SplitSpec,
    SynthSpec,
    load_prices,
    sample_episode,
    split,
    synthesize_prices,
)
from .replay import Batch, ReplayBuffer, Transition

__version__ = "0.1.0"

__all__ = [
    "ALGOS",
    "AgentBundle",
    "AgentConfig",
    "Batch",
    "BatteryConfig",
    "Checkpoint",
    "DataConfig",
    "DenseNet",
    "EnvState",
    "EvalReport",
    "GradCheckReport",
    "HeatmapGrid",
    "OracleResult",
    "PriceDay",
    "PriceSeries",
    "ReplayBuffer",
    "RunConfig",
    "SplitSpec",
    "StepOutcome",
    "SynthSpec",
    "SyntheticConfig",
    "TrainResult",
    "TrainingAborted",
    "Transition",
    "action_values",
    "as_dict",
    "backup_filter",
    "build_net",
    "compare",
    "config_digest",
    "config_from_dict",
    "default_config",
    "dist_mean",
    "dp_oracle",
    "encode_features",
    "epsilon_at",
    "evaluate",
    "forward",
    "fqi_train",
    "grad_check",
    "greedy_actions",
    "heatmap",
    "load_checkpoint",
    "load_config",
    "load_prices",
    "make_agent",
    "make_datasets",
    "make_support",
    "minimum_soc_points",
    "project_onto_support",
    "reset",
    "sample_episode",
    "save_checkpoint",
    "select_action",
    "split",
    "step",
    "synthesize_prices",
    "train",
    "train_step",
    "value_at_risk",
    "write_heatmap",
]
