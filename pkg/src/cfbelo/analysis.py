"""Reconciliation of Elo snapshots with committee selections, plus the
descriptive selection statistics and deterministic report rendering."""

from __future__ import annotations

import csv
import io
import json
import re
from dataclasses import dataclass
from typing import Mapping, Sequence

from .engine import Snapshot, SnapshotEntry
from .evaluation import EvalSummary, kendall_tau
from .ingest import SelectionRecord

FORMATS = ("table", "csv", "json")


class SeasonMismatchError(ValueError):
    """Snapshot label names one season, the selection records another."""


@dataclass(frozen=True)
class ComparisonReport:
    """Per-season reconciliation of the Elo board against committee picks.

    committee_elo_ranks maps each selected team to its Elo rank, None when the
    team is absent from the snapshot. max_committee_elo_rank is None in that
    absent case (treated as unbounded). elo_top is truncated at the deepest
    committee pick (never above rank 4), so entries below it cannot change
    the report.
    """

    season: int
    elo_top: tuple[SnapshotEntry, ...]
    committee: tuple[SelectionRecord, ...]
    overlap_top4: int
    committee_elo_ranks: dict[str, int | None]
    max_committee_elo_rank: int | None
    top4_exact_match: bool
    committee_within_top5: bool
    spearman_committee: float | None


@dataclass(frozen=True)
class AggregateSummary:
    """Cross-season tallies of the comparison reports."""

    n_seasons: int
    n_top4_exact: int
    seasons_within_top5: tuple[int, ...]
    outside_top_ten: tuple[tuple[int, str, int], ...]
    elo_one_not_selected: tuple[tuple[int, str], ...]
    mean_spearman: float | None


@dataclass(frozen=True)
class TeamStat:
    selections: int
    championships: int


@dataclass(frozen=True)
class ConferenceStat:
    selections: int
    distinct_teams: int


@dataclass(frozen=True)
class SelectionStats:
    per_team: dict[str, TeamStat]
    per_conference: dict[str, ConferenceStat]


@dataclass(frozen=True)
class AgreementEntry:
    """Rank agreement between a replayed board and a reference board.

    Informational only: absolute published ratings depend on dataset and
    carryover choices that are not recoverable, so agreement is reported,
    never asserted.
    """

    season: int
    n_reference: int
    n_common: int
    kendall_tau: float | None
    top4_overlap: int


def spearman_rho(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Spearman rank correlation of two untied sequences."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two sequences of equal length >= 2")
    n = len(xs)
    rank_x = _dense_ranks(xs)
    rank_y = _dense_ranks(ys)
    d2 = sum((rx - ry) ** 2 for rx, ry in zip(rank_x, rank_y))
    return 1.0 - 6.0 * d2 / (n * (n * n - 1))


def _dense_ranks(values: Sequence[float]) -> list[int]:
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0] * len(values)
    for rank, idx in enumerate(order, start=1):
        ranks[idx] = rank
    return ranks


def _season_from_label(label: str) -> int | None:
    match = re.search(r"\b(\d{4})\b", label)
    return int(match.group(1)) if match else None


def compare(snapshot: Snapshot, selections: Sequence[SelectionRecord]) -> ComparisonReport:
    """Reconcile one season's snapshot with that season's four committee picks."""
    if not snapshot.entries:
        raise ValueError("cannot compare against an empty snapshot")
    seasons = {r.season for r in selections}
    if len(selections) != 4 or len(seasons) != 1:
        raise ValueError("expected exactly four selection records from one season")
    season = seasons.pop()
    label_season = _season_from_label(snapshot.label)
    if label_season is not None and label_season != season:
        raise SeasonMismatchError(
            f"snapshot is labeled {label_season} but selections are for {season}"
        )

    committee = tuple(sorted(selections, key=lambda r: r.committee_rank))
    ranks = {r.team: snapshot.rank_of(r.team) for r in committee}
    known = [rank for rank in ranks.values() if rank is not None]
    all_present = len(known) == len(committee)
    max_rank = max(known) if all_present else None

    elo_top4 = {entry.team for entry in snapshot.top(4)}
    committee_teams = {r.team for r in committee}
    overlap = len(elo_top4 & committee_teams)

    spearman = None
    if all_present:
        spearman = spearman_rho(
            [r.committee_rank for r in committee],
            [float(ranks[r.team]) for r in committee],
        )

    cutoff = max(4, max_rank) if max_rank is not None else len(snapshot.entries)
    return ComparisonReport(
        season=season,
        elo_top=snapshot.top(cutoff),
        committee=committee,
        overlap_top4=overlap,
        committee_elo_ranks=ranks,
        max_committee_elo_rank=max_rank,
        top4_exact_match=overlap == 4,
        committee_within_top5=all_present and max_rank <= 5,
        spearman_committee=spearman,
    )


def compare_all(
    snapshots: Mapping[int, Snapshot],
    selections: Sequence[SelectionRecord],
) -> tuple[list[ComparisonReport], AggregateSummary]:
    """Per-season reports for every season with selections, plus aggregates."""
    by_season: dict[int, list[SelectionRecord]] = {}
    for record in selections:
        by_season.setdefault(record.season, []).append(record)

    missing = sorted(set(by_season) - set(snapshots))
    if missing:
        raise ValueError(f"no snapshot for season(s) with selections: {missing}")

    reports = [compare(snapshots[season], by_season[season]) for season in sorted(by_season)]

    outside_top_ten = tuple(
        (report.season, record.team, report.committee_elo_ranks[record.team])
        for report in reports
        for record in report.committee
        if report.committee_elo_ranks[record.team] is not None
        and report.committee_elo_ranks[record.team] > 10
    )
    elo_one_not_selected = tuple(
        (report.season, report.elo_top[0].team)
        for report in reports
        if report.elo_top[0].team not in {r.team for r in report.committee}
    )
    spearmans = [r.spearman_committee for r in reports if r.spearman_committee is not None]
    summary = AggregateSummary(
        n_seasons=len(reports),
        n_top4_exact=sum(r.top4_exact_match for r in reports),
        seasons_within_top5=tuple(r.season for r in reports if r.committee_within_top5),
        outside_top_ten=outside_top_ten,
        elo_one_not_selected=elo_one_not_selected,
        mean_spearman=sum(spearmans) / len(spearmans) if spearmans else None,
    )
    return reports, summary


def selection_stats(records: Sequence[SelectionRecord]) -> SelectionStats:
    """Selection and championship counts by team, and by conference.

    A team contributes to each conference it was selected under, so a team
    that changed conference between selections counts toward both.
    """
    team_selections: dict[str, int] = {}
    team_championships: dict[str, int] = {}
    conf_selections: dict[str, int] = {}
    conf_teams: dict[str, set[str]] = {}
    for record in records:
        team_selections[record.team] = team_selections.get(record.team, 0) + 1
        team_championships[record.team] = team_championships.get(record.team, 0) + int(
            record.won_championship
        )
        conf_selections[record.conference] = conf_selections.get(record.conference, 0) + 1
        conf_teams.setdefault(record.conference, set()).add(record.team)
    return SelectionStats(
        per_team={
            team: TeamStat(team_selections[team], team_championships[team])
            for team in team_selections
        },
        per_conference={
            conf: ConferenceStat(conf_selections[conf], len(conf_teams[conf]))
            for conf in conf_selections
        },
    )


def reference_agreement(
    replayed: Mapping[int, Snapshot],
    reference: Mapping[int, Snapshot],
) -> list[AgreementEntry]:
    """Per-season rank agreement of replayed boards against reference boards.

    Kendall tau is computed over the teams the two boards share (None when
    fewer than two are shared); top4_overlap counts shared top-4 teams.
    """
    entries: list[AgreementEntry] = []
    for season in sorted(set(replayed) & set(reference)):
        ours, published = replayed[season], reference[season]
        common = [e for e in published.entries if ours.rank_of(e.team) is not None]
        tau = None
        if len(common) >= 2:
            tau = kendall_tau(
                [float(e.elo_rank) for e in common],
                [float(ours.rank_of(e.team)) for e in common],
            )
        overlap = len(
            {e.team for e in published.top(4)} & {e.team for e in ours.top(4)}
        )
        entries.append(
            AgreementEntry(
                season=season,
                n_reference=len(published.entries),
                n_common=len(common),
                kendall_tau=tau,
                top4_overlap=overlap,
            )
        )
    return entries


# --------------------------------------------------------------------------
# Rendering


def render_report(
    report: "Snapshot | ComparisonReport | SelectionStats | EvalSummary",
    fmt: str,
    selections: Sequence[SelectionRecord] | None = None,
) -> str:
    """Deterministic text rendering of a report object.

    Snapshot tables use the column order Elo ranking, Team, Conference,
    Elo rating, CFP ranking, with ratings rounded to integers in table
    format and kept at full precision in csv/json. Passing the season's
    selection records fills the CFP column of a snapshot.
    """
    fmt = _canonical_format(fmt)
    if isinstance(report, Snapshot):
        return _render_snapshot(report, fmt, selections)
    if isinstance(report, ComparisonReport):
        return _render_comparison(report, fmt)
    if isinstance(report, SelectionStats):
        return _render_stats(report, fmt)
    if isinstance(report, EvalSummary):
        return _render_eval(report, fmt)
    raise TypeError(f"cannot render object of type {type(report).__name__}")


def _canonical_format(fmt: str) -> str:
    name = fmt.strip().lower()
    if name == "plain-table":
        name = "table"
    if name not in FORMATS:
        raise ValueError(f"unknown format {fmt!r} (choose from table, csv, json)")
    return name


def format_table(header: list[str], rows: list[list[str]]) -> str:
    """Fixed-width plain table with a header separator line."""
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)).rstrip(),
        "  ".join("-" * w for w in widths),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
    return "\n".join(lines) + "\n"


def _committee_rank_map(selections: Sequence[SelectionRecord] | None) -> dict[str, int]:
    return {r.team: r.committee_rank for r in selections or ()}


def _render_snapshot(
    snapshot: Snapshot, fmt: str, selections: Sequence[SelectionRecord] | None
) -> str:
    cfp = _committee_rank_map(selections)
    if fmt == "table":
        rows = [
            [
                str(e.elo_rank),
                e.team,
                e.conference,
                str(round(e.rating)),
                str(cfp.get(e.team, "")),
            ]
            for e in snapshot.entries
        ]
        header = ["Elo ranking", "Team", "Conference", "Elo rating", "CFP ranking"]
        return f"{snapshot.label}\n" + format_table(header, rows)
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["elo_rank", "team", "conference", "rating", "cfp_rank"])
        for e in snapshot.entries:
            writer.writerow([e.elo_rank, e.team, e.conference, repr(e.rating), cfp.get(e.team, "")])
        return out.getvalue()
    payload = {
        "label": snapshot.label,
        "as_of": snapshot.as_of.isoformat(),
        "entries": [
            {
                "elo_rank": e.elo_rank,
                "team": e.team,
                "conference": e.conference,
                "rating": e.rating,
                "cfp_rank": cfp.get(e.team),
            }
            for e in snapshot.entries
        ],
    }
    return json.dumps(payload, indent=2) + "\n"


def _comparison_payload(report: ComparisonReport) -> dict:
    return {
        "season": report.season,
        "overlap_top4": report.overlap_top4,
        "top4_exact_match": report.top4_exact_match,
        "committee_within_top5": report.committee_within_top5,
        "max_committee_elo_rank": report.max_committee_elo_rank,
        "spearman_committee": report.spearman_committee,
        "committee": [
            {
                "committee_rank": r.committee_rank,
                "team": r.team,
                "conference": r.conference,
                "elo_rank": report.committee_elo_ranks[r.team],
                "won_championship": r.won_championship,
            }
            for r in report.committee
        ],
        "elo_top": [
            {
                "elo_rank": e.elo_rank,
                "team": e.team,
                "conference": e.conference,
                "rating": e.rating,
            }
            for e in report.elo_top
        ],
    }


def _render_comparison(report: ComparisonReport, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(_comparison_payload(report), indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(
            [
                "season",
                "committee_rank",
                "team",
                "conference",
                "elo_rank",
                "overlap_top4",
                "top4_exact_match",
                "committee_within_top5",
                "max_committee_elo_rank",
            ]
        )
        for r in report.committee:
            rank = report.committee_elo_ranks[r.team]
            writer.writerow(
                [
                    report.season,
                    r.committee_rank,
                    r.team,
                    r.conference,
                    "" if rank is None else rank,
                    report.overlap_top4,
                    str(report.top4_exact_match).lower(),
                    str(report.committee_within_top5).lower(),
                    "" if report.max_committee_elo_rank is None else report.max_committee_elo_rank,
                ]
            )
        return out.getvalue()

    lines = [f"season {report.season}"]
    rows = []
    for r in report.committee:
        rank = report.committee_elo_ranks[r.team]
        rows.append(
            [str(r.committee_rank), r.team, r.conference, "absent" if rank is None else str(rank)]
        )
    lines.append(format_table(["CFP ranking", "Team", "Conference", "Elo ranking"], rows).rstrip())
    lines.append(f"top-4 overlap: {report.overlap_top4} of 4")
    lines.append(f"top-4 exact match: {'yes' if report.top4_exact_match else 'no'}")
    lines.append(f"all picks in Elo top 5: {'yes' if report.committee_within_top5 else 'no'}")
    max_rank = report.max_committee_elo_rank
    lines.append(f"deepest pick by Elo: {'absent from board' if max_rank is None else max_rank}")
    if report.spearman_committee is not None:
        lines.append(f"Spearman (committee vs Elo order): {report.spearman_committee:+.3f}")
    return "\n".join(lines) + "\n"


def render_aggregate(summary: AggregateSummary, fmt: str) -> str:
    fmt = _canonical_format(fmt)
    if fmt == "json":
        payload = {
            "n_seasons": summary.n_seasons,
            "n_top4_exact": summary.n_top4_exact,
            "seasons_within_top5": list(summary.seasons_within_top5),
            "outside_top_ten": [
                {"season": s, "team": t, "elo_rank": r} for s, t, r in summary.outside_top_ten
            ],
            "elo_one_not_selected": [
                {"season": s, "team": t} for s, t in summary.elo_one_not_selected
            ],
            "mean_spearman": summary.mean_spearman,
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["metric", "value"])
        writer.writerow(["n_seasons", summary.n_seasons])
        writer.writerow(["n_top4_exact", summary.n_top4_exact])
        writer.writerow(
            ["seasons_within_top5", ";".join(str(s) for s in summary.seasons_within_top5)]
        )
        writer.writerow(
            [
                "outside_top_ten",
                ";".join(f"{s}:{t}:{r}" for s, t, r in summary.outside_top_ten),
            ]
        )
        writer.writerow(
            ["elo_one_not_selected", ";".join(f"{s}:{t}" for s, t in summary.elo_one_not_selected)]
        )
        writer.writerow(
            [
                "mean_spearman",
                "" if summary.mean_spearman is None else repr(summary.mean_spearman),
            ]
        )
        return out.getvalue()

    lines = [
        "aggregate",
        f"seasons analyzed: {summary.n_seasons}",
        f"seasons where committee matched the Elo top 4 exactly: {summary.n_top4_exact}",
        "seasons with all picks in the Elo top 5: "
        + (", ".join(str(s) for s in summary.seasons_within_top5) or "none"),
        "picks outside the Elo top 10: "
        + (", ".join(f"{s} {t} (Elo {r})" for s, t, r in summary.outside_top_ten) or "none"),
        "Elo #1 left out: "
        + (", ".join(f"{s} {t}" for s, t in summary.elo_one_not_selected) or "never"),
    ]
    if summary.mean_spearman is not None:
        lines.append(f"mean Spearman across seasons: {summary.mean_spearman:+.3f}")
    return "\n".join(lines) + "\n"


def render_comparisons(
    reports: Sequence[ComparisonReport], summary: AggregateSummary, fmt: str
) -> str:
    """Render a full compare_all result as one document."""
    fmt = _canonical_format(fmt)
    if fmt == "json":
        payload = {
            "seasons": [_comparison_payload(r) for r in reports],
            "aggregate": json.loads(render_aggregate(summary, "json")),
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        header, *_ = _render_comparison(reports[0], "csv").splitlines() if reports else ("",)
        body_lines = []
        for report in reports:
            body_lines.extend(_render_comparison(report, "csv").splitlines()[1:])
        return "\n".join([header] + body_lines) + "\n"
    blocks = [_render_comparison(report, "table") for report in reports]
    blocks.append(render_aggregate(summary, "table"))
    return "\n".join(blocks)


def _render_stats(stats: SelectionStats, fmt: str) -> str:
    teams = sorted(
        stats.per_team.items(),
        key=lambda kv: (-kv[1].selections, -kv[1].championships, kv[0]),
    )
    conferences = sorted(
        stats.per_conference.items(),
        key=lambda kv: (-kv[1].selections, kv[0]),
    )
    if fmt == "json":
        payload = {
            "per_team": [
                {"team": team, "selections": s.selections, "championships": s.championships}
                for team, s in teams
            ],
            "per_conference": [
                {
                    "conference": conf,
                    "selections": s.selections,
                    "distinct_teams": s.distinct_teams,
                }
                for conf, s in conferences
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["section", "name", "selections", "championships", "distinct_teams"])
        for team, s in teams:
            writer.writerow(["team", team, s.selections, s.championships, ""])
        for conf, s in conferences:
            writer.writerow(["conference", conf, s.selections, "", s.distinct_teams])
        return out.getvalue()

    team_table = format_table(
        ["Team", "Selections", "Championships Won"],
        [[team, str(s.selections), str(s.championships)] for team, s in teams],
    )
    conf_table = format_table(
        ["Conference", "Selections", "No. of teams"],
        [[conf, str(s.selections), str(s.distinct_teams)] for conf, s in conferences],
    )
    return team_table + "\n" + conf_table


def _render_eval(summary: EvalSummary, fmt: str) -> str:
    if fmt == "json":
        payload = {
            "n_games": summary.n_games,
            "brier": summary.brier,
            "log_loss": summary.log_loss,
            "accuracy": summary.accuracy,
        }
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["n_games", "brier", "log_loss", "accuracy"])
        writer.writerow(
            [summary.n_games, repr(summary.brier), repr(summary.log_loss), repr(summary.accuracy)]
        )
        return out.getvalue()
    lines = [
        f"games scored: {summary.n_games}",
        f"brier score:  {summary.brier:.6f}",
        f"log loss:     {summary.log_loss:.6f}",
        f"accuracy:     {summary.accuracy:.6f}",
    ]
    return "\n".join(lines) + "\n"


def render_sweep(results: Sequence[tuple[float, EvalSummary]], fmt: str) -> str:
    """Render a K sweep as one row per K value."""
    fmt = _canonical_format(fmt)
    if fmt == "json":
        payload = [
            {
                "k": k,
                "n_games": s.n_games,
                "brier": s.brier,
                "log_loss": s.log_loss,
                "accuracy": s.accuracy,
            }
            for k, s in results
        ]
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["k", "n_games", "brier", "log_loss", "accuracy"])
        for k, s in results:
            writer.writerow([f"{k:g}", s.n_games, repr(s.brier), repr(s.log_loss), repr(s.accuracy)])
        return out.getvalue()
    rows = [
        [f"{k:g}", str(s.n_games), f"{s.brier:.6f}", f"{s.log_loss:.6f}", f"{s.accuracy:.6f}"]
        for k, s in results
    ]
    return format_table(["K", "Games", "Brier", "Log loss", "Accuracy"], rows)


def render_agreement(entries: Sequence[AgreementEntry], fmt: str) -> str:
    """Render reference-board agreement, flagged as informational."""
    fmt = _canonical_format(fmt)
    if fmt == "json":
        payload = [
            {
                "season": e.season,
                "n_reference": e.n_reference,
                "n_common": e.n_common,
                "kendall_tau": e.kendall_tau,
                "top4_overlap": e.top4_overlap,
            }
            for e in entries
        ]
        return json.dumps(payload, indent=2) + "\n"
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["season", "n_reference", "n_common", "kendall_tau", "top4_overlap"])
        for e in entries:
            writer.writerow(
                [
                    e.season,
                    e.n_reference,
                    e.n_common,
                    "" if e.kendall_tau is None else repr(e.kendall_tau),
                    e.top4_overlap,
                ]
            )
        return out.getvalue()
    rows = [
        [
            str(e.season),
            str(e.n_reference),
            str(e.n_common),
            "n/a" if e.kendall_tau is None else f"{e.kendall_tau:+.3f}",
            str(e.top4_overlap),
        ]
        for e in entries
    ]
    table = format_table(
        ["Season", "Board teams", "In replay", "Kendall tau", "Top-4 overlap"], rows
    )
    note = (
        "agreement vs published boards is informational: absolute published\n"
        "ratings depend on an unspecified dataset, start year, and carryover\n"
    )
    return table + note
