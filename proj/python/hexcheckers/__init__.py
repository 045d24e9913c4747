from ._core import (
    Board,
    Checkpoint,
    Env,
    EvalReport,
    GameState,
    HeadToHeadReport,
    HeatmapGrid,
    Hex,
    IterationMetrics,
    PolicySet,
    PpoConfig,
    RewardScheme,
    Rng,
    RunOptions,
    Sharing,
    Status,
    StepResult,
    Submove,
    SubmoveKind,
    Trainer,
    TrainerOptions,
    action_mask,
    action_space_size,
    canonicalize,
    collect_heatmaps,
    decode_action,
    default_turn_limit,
    derive_seed,
    encode_action,
    encode_end_turn,
    encode_observation,
    evaluate_vs_random,
    format_log_line,
    greedy_action,
    head_to_head,
    hex_distance,
    load_checkpoint,
    mass_in_target,
    observation_size,
    parse_sharing,
    policy_forward,
    random_action,
    render_board,
    rotate60cw,
    run_training,
    save_checkpoint,
    sharing_name,
)

__all__ = [name for name in dir() if not name.startswith("_")]
