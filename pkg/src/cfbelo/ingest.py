"""Parsing and validation of game-result files and committee-selection files.

Game parsing is total: bad rows are rejected with a reason code, never raised.
Selection files are reference data and are held to a stricter standard; any
violation raises SelectionsError.
"""

from __future__ import annotations

import csv
import datetime as dt
import io
import json
import re
from dataclasses import dataclass, field

from .engine import Game

GAMES_HEADER = [
    "season",
    "date",
    "week",
    "home_team",
    "away_team",
    "home_points",
    "away_points",
    "neutral_site",
]
SELECTIONS_HEADER = ["season", "committee_rank", "team", "conference", "won_championship"]

# Rejection reason codes, one per failure mode.
REASON_BAD_HEADER = "bad_header"
REASON_FIELD_COUNT = "field_count"
REASON_BAD_SEASON = "bad_season"
REASON_BAD_DATE = "bad_date"
REASON_BAD_WEEK = "bad_week"
REASON_BAD_POINTS = "bad_points"
REASON_BAD_NEUTRAL = "bad_neutral"
REASON_EMPTY_TEAM = "empty_team"
REASON_SELF_PLAY = "self_play"
REASON_TIE = "tie"
REASON_DUPLICATE = "duplicate"
REASON_DATE_OUT_OF_SEASON = "date_out_of_season"


class SelectionsError(ValueError):
    """A committee-selections file violated its schema or per-season rules."""


@dataclass(frozen=True)
class SelectionRecord:
    """One committee pick: season, rank 1-4, team, conference, champion flag."""

    season: int
    committee_rank: int
    team: str
    conference: str
    won_championship: bool


@dataclass(frozen=True)
class RejectedRow:
    line_number: int
    reason: str
    raw: str


@dataclass
class ParsedGames:
    """Outcome of parsing a games file: accepted games plus a reject report."""

    games: list[Game] = field(default_factory=list)
    rejected: list[RejectedRow] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def load_aliases(text: str) -> dict[str, str]:
    """Parse an alias directory: a JSON object of alias -> canonical name."""
    data = json.loads(text)
    if not isinstance(data, dict) or not all(
        isinstance(k, str) and isinstance(v, str) for k, v in data.items()
    ):
        raise ValueError("alias directory must be a JSON object mapping names to names")
    return data


def _clean(name: str) -> str:
    return re.sub(r"\s+", " ", name.strip())


def _lookup_table(directory: dict[str, str] | None) -> dict[str, str]:
    # Canonical names map to themselves so case/spacing variants of a
    # canonical name resolve without an explicit alias entry.
    table: dict[str, str] = {}
    for alias, canonical in (directory or {}).items():
        table[_clean(alias).casefold()] = canonical
        table.setdefault(_clean(canonical).casefold(), canonical)
    return table


class _ResolvedDirectory(dict):
    """Alias map with a precomputed casefolded lookup table."""

    def __init__(self, directory: dict[str, str] | None):
        super().__init__(directory or {})
        self._table = _lookup_table(directory)

    def lookup(self, cleaned: str) -> str | None:
        return self._table.get(cleaned.casefold())


def normalize_team(
    name: str,
    directory: dict[str, str] | None = None,
    warnings: list[str] | None = None,
) -> str:
    """Canonical team name for a raw spelling.

    Known aliases map to their canonical form; unknown names pass through
    cleaned (trimmed, inner whitespace collapsed) with a warning recorded.
    """
    cleaned = _clean(name)
    if not cleaned:
        raise ValueError("team name is empty")
    table = directory if isinstance(directory, _ResolvedDirectory) else _ResolvedDirectory(directory)
    hit = table.lookup(cleaned)
    if hit is not None:
        return hit
    if warnings is not None:
        warnings.append(f"unknown team name {cleaned!r} passed through verbatim")
    return cleaned


def _season_window(season: int) -> tuple[dt.date, dt.date]:
    # College seasons run August through the following January.
    return dt.date(season, 8, 1), dt.date(season + 1, 1, 31)


def parse_games(
    text: str,
    aliases: dict[str, str] | None = None,
    allow_duplicates: bool = False,
) -> ParsedGames:
    """Parse a games CSV into validated, canonicalized, date-ordered games.

    Every invalid row lands in the reject report with its line number and a
    machine-readable reason code. A duplicate is a second game between the
    same pair (in either orientation) on the same date.
    """
    result = ParsedGames()
    directory = _ResolvedDirectory(aliases)
    reader = csv.reader(io.StringIO(text.lstrip("﻿"), newline=""))
    try:
        header = next(reader)
    except StopIteration:
        return result
    if [h.strip() for h in header] != GAMES_HEADER:
        result.rejected.append(
            RejectedRow(reader.line_num, REASON_BAD_HEADER, ",".join(header))
        )
        return result

    seen_pairs: set[tuple[dt.date, frozenset[str]]] = set()
    for row in reader:
        line = reader.line_num
        raw = ",".join(row)
        if not row or all(not cell.strip() for cell in row):
            continue
        reject = _validate_game_row(row, directory, result.warnings)
        if isinstance(reject, str):
            result.rejected.append(RejectedRow(line, reject, raw))
            continue
        game = reject
        key = (game.date, frozenset((game.team_a, game.team_b)))
        if not allow_duplicates and key in seen_pairs:
            result.rejected.append(RejectedRow(line, REASON_DUPLICATE, raw))
            continue
        seen_pairs.add(key)
        result.games.append(game)

    result.games.sort(key=lambda g: g.date)  # stable: same-day keeps file order
    return result


def _validate_game_row(
    row: list[str],
    directory: "_ResolvedDirectory",
    warnings: list[str],
) -> Game | str:
    """Build a Game from one CSV row, or return a rejection reason code."""
    if len(row) != len(GAMES_HEADER):
        return REASON_FIELD_COUNT
    season_s, date_s, week_s, home_s, away_s, hp_s, ap_s, neutral_s = (c.strip() for c in row)
    try:
        season = int(season_s)
    except ValueError:
        return REASON_BAD_SEASON
    try:
        date = dt.date.fromisoformat(date_s)
    except ValueError:
        return REASON_BAD_DATE
    try:
        int(week_s)
    except ValueError:
        return REASON_BAD_WEEK
    try:
        home_points, away_points = int(hp_s), int(ap_s)
    except ValueError:
        return REASON_BAD_POINTS
    if home_points < 0 or away_points < 0:
        return REASON_BAD_POINTS
    if neutral_s.lower() not in ("true", "false"):
        return REASON_BAD_NEUTRAL
    if not home_s or not away_s:
        return REASON_EMPTY_TEAM
    home = normalize_team(home_s, directory, warnings)
    away = normalize_team(away_s, directory, warnings)
    if home == away:
        return REASON_SELF_PLAY
    if home_points == away_points:
        return REASON_TIE
    window_start, window_end = _season_window(season)
    if not (window_start <= date <= window_end):
        return REASON_DATE_OUT_OF_SEASON
    return Game(
        season=season,
        date=date,
        team_a=home,
        team_b=away,
        score_a=home_points,
        score_b=away_points,
        neutral_site=neutral_s.lower() == "true",
    )


def games_to_csv(games: list[Game]) -> str:
    """Serialize games back to the canonical CSV schema.

    Weeks are not tracked by the engine, so the week column is derived from
    the position of each game's date within its season (7-day buckets from
    the season's first game).
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(GAMES_HEADER)
    season_starts: dict[int, dt.date] = {}
    for game in games:
        first = season_starts.get(game.season)
        if first is None or game.date < first:
            season_starts[game.season] = game.date
    for game in games:
        week = (game.date - season_starts[game.season]).days // 7 + 1
        writer.writerow(
            [
                game.season,
                game.date.isoformat(),
                week,
                game.team_a,
                game.team_b,
                game.score_a,
                game.score_b,
                "true" if game.neutral_site else "false",
            ]
        )
    return out.getvalue()


def rejects_to_csv(rejected: list[RejectedRow]) -> str:
    """One line per rejection: line_number,reason_code,raw_row.

    The raw row is echoed verbatim after the second comma, so consumers
    should split each line at most twice.
    """
    return "".join(f"{r.line_number},{r.reason},{r.raw}\n" for r in rejected)


def parse_selections(text: str, aliases: dict[str, str] | None = None) -> list[SelectionRecord]:
    """Parse and validate a committee-selections CSV.

    Each season must contribute exactly four records with committee ranks
    1 through 4 and at most one champion. Violations raise SelectionsError
    naming the season.
    """
    directory = _ResolvedDirectory(aliases)
    reader = csv.reader(io.StringIO(text.lstrip("﻿"), newline=""))
    try:
        header = next(reader)
    except StopIteration:
        return []
    if [h.strip() for h in header] != SELECTIONS_HEADER:
        raise SelectionsError(f"bad selections header: {','.join(header)!r}")

    records: list[SelectionRecord] = []
    for row in reader:
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(SELECTIONS_HEADER):
            raise SelectionsError(f"line {reader.line_num}: expected 5 fields, got {len(row)}")
        season_s, rank_s, team_s, conference_s, champ_s = (c.strip() for c in row)
        try:
            season = int(season_s)
            rank = int(rank_s)
        except ValueError:
            raise SelectionsError(f"line {reader.line_num}: bad season or rank") from None
        if champ_s.lower() not in ("true", "false"):
            raise SelectionsError(f"line {reader.line_num}: won_championship must be true/false")
        if not team_s or not conference_s:
            raise SelectionsError(f"line {reader.line_num}: empty team or conference")
        records.append(
            SelectionRecord(
                season=season,
                committee_rank=rank,
                team=normalize_team(team_s, directory),
                conference=conference_s,
                won_championship=champ_s.lower() == "true",
            )
        )

    _check_selection_invariants(records)
    records.sort(key=lambda r: (r.season, r.committee_rank))
    return records


def _check_selection_invariants(records: list[SelectionRecord]) -> None:
    by_season: dict[int, list[SelectionRecord]] = {}
    for record in records:
        by_season.setdefault(record.season, []).append(record)
    for season, group in sorted(by_season.items()):
        if len(group) != 4:
            raise SelectionsError(f"season {season}: expected 4 selections, got {len(group)}")
        ranks = sorted(r.committee_rank for r in group)
        if ranks != [1, 2, 3, 4]:
            raise SelectionsError(f"season {season}: committee ranks must be 1-4, got {ranks}")
        teams = {r.team for r in group}
        if len(teams) != 4:
            raise SelectionsError(f"season {season}: duplicate team in selections")
        champions = [r.team for r in group if r.won_championship]
        if len(champions) > 1:
            raise SelectionsError(f"season {season}: more than one champion: {champions}")
