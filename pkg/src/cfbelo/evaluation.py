"""Backtesting of predictive quality, K sweeps, and a synthetic league
generator with known ground-truth strengths for recovery checks."""

from __future__ import annotations

import datetime as dt
import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from .elo import EloConfig, expected_score
from .engine import CarryoverPolicy, Game, OutOfOrderError, RatingState, apply_game, ordered

LOG_CLAMP = 1e-12


@dataclass(frozen=True)
class PredictionRecord:
    """Pre-game win probability assigned to the team that went on to win."""

    game: Game
    p_winner_pregame: float


@dataclass(frozen=True)
class EvalSummary:
    n_games: int
    brier: float
    log_loss: float
    accuracy: float


@dataclass(frozen=True)
class SyntheticLeague:
    games: list[Game]
    strengths: dict[str, float]


def prediction_records(
    games: Sequence[Game],
    cfg: EloConfig = EloConfig(),
    policy: CarryoverPolicy = CarryoverPolicy.full(),
    eval_window: tuple[int, int] | None = None,
) -> list[PredictionRecord]:
    """Replay every game, recording the winner's pre-update win probability
    for games whose season falls inside the inclusive eval window.

    Predictions are always made before the game's outcome touches the
    ratings, so truncating later seasons cannot change earlier records.
    """
    state = RatingState()
    current_season: int | None = None
    records: list[PredictionRecord] = []
    for game in ordered(games):
        if current_season is not None and game.season != current_season:
            if game.season < current_season:
                raise OutOfOrderError(
                    f"season {game.season} follows season {current_season}"
                )
            state = replace(state, ratings=policy.apply(state.ratings, cfg.initial_rating))
        current_season = game.season
        in_window = eval_window is None or (eval_window[0] <= game.season <= eval_window[1])
        if in_window:
            expectation = expected_score(
                state.rating_of(game.winner, cfg), state.rating_of(game.loser, cfg), cfg
            )
            records.append(PredictionRecord(game=game, p_winner_pregame=expectation.p_a))
        state = apply_game(state, game, cfg)
    return records


def summarize(records: Sequence[PredictionRecord]) -> EvalSummary:
    """Brier score, log loss, and accuracy over prediction records.

    Each record's realized outcome is "the winner won", so per game the Brier
    term is (1 - p)^2 and the log-loss term is -ln(p) with p clamped away
    from 0 and 1. A coin-flip p of exactly 0.5 earns half an accuracy point.
    """
    if not records:
        raise ValueError("no predictions to summarize")
    n = len(records)
    brier = sum((1.0 - r.p_winner_pregame) ** 2 for r in records) / n
    log_loss = (
        sum(-math.log(min(max(r.p_winner_pregame, LOG_CLAMP), 1.0 - LOG_CLAMP)) for r in records)
        / n
    )
    hits = 0.0
    for r in records:
        if r.p_winner_pregame > 0.5:
            hits += 1.0
        elif r.p_winner_pregame == 0.5:
            hits += 0.5
    return EvalSummary(n_games=n, brier=brier, log_loss=log_loss, accuracy=hits / n)


def backtest(
    games: Sequence[Game],
    cfg: EloConfig = EloConfig(),
    policy: CarryoverPolicy = CarryoverPolicy.full(),
    eval_window: tuple[int, int] | None = None,
) -> EvalSummary:
    """Replay the stream and score predictions inside the eval window."""
    if eval_window is not None:
        seasons = {g.season for g in games}
        if not any(eval_window[0] <= s <= eval_window[1] for s in seasons):
            raise ValueError(
                f"eval window {eval_window[0]}..{eval_window[1]} matches no season in the data"
            )
    return summarize(prediction_records(games, cfg, policy, eval_window))


def sweep_k(
    games: Sequence[Game],
    k_values: Sequence[float],
    policy: CarryoverPolicy = CarryoverPolicy.full(),
    eval_window: tuple[int, int] | None = None,
    base_cfg: EloConfig = EloConfig(),
    workers: int = 1,
) -> list[tuple[float, EvalSummary]]:
    """Independent backtests over the same game stream, one per K value.

    Results come back in the order the K values were given, no matter how
    many workers run the arms.
    """
    if any(k <= 0 for k in k_values):
        raise ValueError("all K values must be positive")

    def run(k: float) -> EvalSummary:
        cfg = replace(base_cfg, k_factor=k)
        return backtest(games, cfg, policy, eval_window)

    if workers <= 1 or len(k_values) <= 1:
        summaries = [run(k) for k in k_values]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            summaries = list(pool.map(run, k_values))
    return list(zip(list(k_values), summaries))


def simulate_league(
    n_teams: int,
    n_rounds: int,
    strength_spread: float,
    seed: int,
    season: int = 2000,
    cfg: EloConfig = EloConfig(),
) -> SyntheticLeague:
    """Round-robin league with hidden strengths and logistic outcomes.

    Strengths are evenly spaced across the spread, centered on the initial
    rating. Each round plays every pairing once in a shuffled order, and each
    winner is drawn with the same logistic win probability the rating model
    uses, applied to the true strengths. Same seed, same league.
    """
    if n_teams < 2:
        raise ValueError("need at least 2 teams")
    if n_rounds < 1:
        raise ValueError("need at least 1 round")
    rng = random.Random(seed)
    teams = [f"Team {i + 1:02d}" for i in range(n_teams)]
    lo = cfg.initial_rating - strength_spread / 2.0
    step = strength_spread / (n_teams - 1)
    strengths = {team: lo + i * step for i, team in enumerate(teams)}

    pairings = [(a, b) for i, a in enumerate(teams) for b in teams[i + 1 :]]
    start = dt.date(season, 9, 1)
    # Rounds spread across September..December so dates stay inside a
    # plausible season window however many rounds are asked for.
    last_offset = 120
    games: list[Game] = []
    for round_no in range(n_rounds):
        offset = (round_no * last_offset) // max(n_rounds - 1, 1)
        date = start + dt.timedelta(days=offset)
        round_pairs = pairings[:]
        rng.shuffle(round_pairs)
        for team_a, team_b in round_pairs:
            p_a = expected_score(strengths[team_a], strengths[team_b], cfg).p_a
            a_wins = rng.random() < p_a
            loser_points = rng.randrange(0, 31)
            winner_points = loser_points + rng.randrange(1, 22)
            games.append(
                Game(
                    season=season,
                    date=date,
                    team_a=team_a,
                    team_b=team_b,
                    score_a=winner_points if a_wins else loser_points,
                    score_b=loser_points if a_wins else winner_points,
                )
            )
    return SyntheticLeague(games=games, strengths=strengths)


def kendall_tau(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Kendall tau-a between two paired value sequences.

    Counts concordant minus discordant pairs over all pairs; tied pairs on
    either side contribute zero.
    """
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two sequences of equal length >= 2")
    n = len(xs)
    concordant = discordant = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = xs[i] - xs[j]
            dy = ys[i] - ys[j]
            product = dx * dy
            if product > 0:
                concordant += 1
            elif product < 0:
                discordant += 1
    return (concordant - discordant) / (n * (n - 1) / 2)
