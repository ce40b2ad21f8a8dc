"""Independent naive Elo oracle for cross-checking the engine.

Deliberately written in a different algebraic form (per-team strength
weights q = base**(r/scale)) and as a plain dict fold, so it shares no code
path with the package under test.
"""

from __future__ import annotations


def naive_expected(r_winner: float, r_loser: float, base: float = 10.0, scale: float = 400.0) -> float:
    q_w = base ** (r_winner / scale)
    q_l = base ** (r_loser / scale)
    return q_w / (q_w + q_l)


def naive_replay(
    results: list[tuple[str, str]],
    k: float = 25.0,
    initial: float = 1500.0,
    base: float = 10.0,
    scale: float = 400.0,
) -> dict[str, float]:
    """Fold (winner, loser) pairs in order; every new name starts at initial."""
    ratings: dict[str, float] = {}
    for winner, loser in results:
        r_w = ratings.get(winner, initial)
        r_l = ratings.get(loser, initial)
        p_w = naive_expected(r_w, r_l, base, scale)
        ratings[winner] = r_w + k * (1.0 - p_w)
        ratings[loser] = r_l - k * (1.0 - p_w)
    return ratings


def naive_replay_with_boundaries(
    seasons: list[list[tuple[str, str]]],
    mode: str = "full",
    rho: float = 1.0,
    k: float = 25.0,
    initial: float = 1500.0,
) -> dict[str, float]:
    """Same fold with an explicit carryover step between season blocks."""
    ratings: dict[str, float] = {}
    for i, block in enumerate(seasons):
        if i > 0:
            if mode == "reset":
                ratings = {t: initial for t in ratings}
            elif mode == "regress":
                ratings = {t: initial + rho * (r - initial) for t, r in ratings.items()}
        for winner, loser in block:
            r_w = ratings.get(winner, initial)
            r_l = ratings.get(loser, initial)
            p_w = naive_expected(r_w, r_l)
            ratings[winner] = r_w + k * (1.0 - p_w)
            ratings[loser] = r_l - k * (1.0 - p_w)
    return ratings
