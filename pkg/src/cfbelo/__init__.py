"""Head-to-head Elo ratings for college football: season replay, selection-day
snapshots, committee comparison analyses, and predictive backtesting."""

from .analysis import (
    AggregateSummary,
    AgreementEntry,
    ComparisonReport,
    ConferenceStat,
    SelectionStats,
    TeamStat,
    compare,
    compare_all,
    reference_agreement,
    render_report,
    selection_stats,
)
from .elo import EloConfig, MatchExpectation, Rating, Winner, expected_score, update_pair
from .engine import (
    CarryoverPolicy,
    Game,
    InvalidGameError,
    OutOfOrderError,
    RatingState,
    Snapshot,
    SnapshotEntry,
    TiedScoreError,
    apply_game,
    default_cut_date,
    rank_teams,
    replay,
    snapshot_at,
)
from .evaluation import (
    EvalSummary,
    PredictionRecord,
    SyntheticLeague,
    backtest,
    kendall_tau,
    simulate_league,
    summarize,
    sweep_k,
)
from .ingest import (
    ParsedGames,
    RejectedRow,
    SelectionRecord,
    SelectionsError,
    games_to_csv,
    load_aliases,
    normalize_team,
    parse_games,
    parse_selections,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateSummary",
    "AgreementEntry",
    "CarryoverPolicy",
    "ComparisonReport",
    "ConferenceStat",
    "EloConfig",
    "EvalSummary",
    "Game",
    "InvalidGameError",
    "MatchExpectation",
    "OutOfOrderError",
    "ParsedGames",
    "PredictionRecord",
    "Rating",
    "RatingState",
    "RejectedRow",
    "SelectionRecord",
    "SelectionStats",
    "SelectionsError",
    "Snapshot",
    "SnapshotEntry",
    "SyntheticLeague",
    "TeamStat",
    "TiedScoreError",
    "Winner",
    "apply_game",
    "backtest",
    "compare",
    "compare_all",
    "default_cut_date",
    "expected_score",
    "games_to_csv",
    "kendall_tau",
    "load_aliases",
    "normalize_team",
    "parse_games",
    "parse_selections",
    "rank_teams",
    "reference_agreement",
    "render_report",
    "replay",
    "selection_stats",
    "simulate_league",
    "snapshot_at",
    "summarize",
    "sweep_k",
    "update_pair",
]
