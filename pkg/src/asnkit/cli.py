"""Command-line interface for the aggregated-syntactic-network toolkit.

Subcommands cover the whole pipeline: ``validate`` audits treebank files,
``build``/``export`` construct and serialize per-century networks,
``stats``/``hierarchy``/``powerlaw`` compute per-century reports,
``diachrony`` compares centuries, and ``analyze`` runs everything into one
output bundle with a manifest.  All outputs are deterministic: rerunning a
command with the same inputs, configuration, and seed writes byte-identical
files.

Exit codes: 0 success, 1 domain failure (invalid trees, empty corpus),
2 usage or I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import __version__
from .corpus import (
    CorpusFormatError,
    CorpusSlice,
    GrammaticalRole,
    MissingPolicy,
    TreeValidationError,
    audit_corpus,
    filter_slice,
    load_corpus,
)
from .diachrony import (
    CenturyRecord,
    DiachronicSeries,
    detect_emergent_heads,
    phase_space,
    track,
)
from .hierarchy import HierarchyLevels, hierarchy_levels, hierarchy_stats, level_csv
from .network import Asn, NodeKey, aggregate, edge_csv, to_dot, to_graphml
from .powerlaw import (
    DegenerateDataError,
    bootstrap_pvalue,
    ccdf_rows,
    fit_power_law,
    lrt,
)
from .stats import degree_sequences, depth_vs_diameter, summarize

__all__ = ["RunConfig", "UsageError", "build_parser", "main"]

#: Conventions stamped into every artifact so numbers are interpretable
#: without reading the source.
_CONVENTIONS = {
    "paths": "undirected,unweighted,lcc",
    "levels": "forward,min0,heads_at_0",
    "level_axis": "inverted",
    "degree_zeros": "dropped_before_fit",
}

_FORMATS = ("csv", "dot", "graphml")


class UsageError(Exception):
    """Bad invocation or configuration; maps to exit code 2."""


@dataclass(frozen=True)
class RunConfig:
    """Fully resolved run configuration (defaults < config file < flags)."""

    inputs: tuple[str, ...]
    out: str = "out"
    missing: str = MissingPolicy.DROP_ADJACENT_TO_TARGET.value
    seed: int = 0
    unweighted: bool = False
    degree: str = "total"
    replicates: int = 1000
    strict: bool = False
    band: int = 10
    min_gain: int = 5
    formats: tuple[str, ...] = _FORMATS
    track: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        MissingPolicy.from_name(self.missing)
        if self.degree not in ("in", "out", "total"):
            raise UsageError(f"degree must be in/out/total, got {self.degree!r}")
        if self.replicates < 100:
            raise UsageError(f"replicates must be >= 100, got {self.replicates}")
        if self.band < 1 or self.min_gain < 0:
            raise UsageError("band must be >= 1 and min-gain >= 0")
        for fmt in self.formats:
            if fmt not in _FORMATS:
                raise UsageError(
                    f"unknown format {fmt!r} (choose from {', '.join(_FORMATS)})"
                )

    @property
    def policy(self) -> MissingPolicy:
        return MissingPolicy.from_name(self.missing)

    @property
    def p_threshold(self) -> float:
        return 0.1 if self.strict else 0.01


_CONFIG_COERCERS = {
    "out": str,
    "missing": str,
    "seed": int,
    "unweighted": None,  # boolean
    "degree": str,
    "replicates": int,
    "strict": None,  # boolean
    "band": int,
    "min_gain": int,
    "formats": None,  # comma list
    "track": None,  # comma list
}


def _parse_bool(value: str) -> bool:
    lowered = value.lower()
    if lowered in ("true", "yes", "1", "on"):
        return True
    if lowered in ("false", "no", "0", "off"):
        return False
    raise UsageError(f"expected a boolean, got {value!r}")


def _parse_config_file(path: str) -> dict:
    """Parse ``key = value`` configuration text; unknown keys are rejected."""
    values: dict = {}
    text = Path(path).read_text(encoding="utf-8")
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{line_no}: expected 'key = value'")
        key, _, value = line.partition("=")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in _CONFIG_COERCERS:
            allowed = ", ".join(sorted(_CONFIG_COERCERS))
            raise UsageError(
                f"{path}:{line_no}: unknown config key {key!r} "
                f"(allowed: {allowed})"
            )
        coercer = _CONFIG_COERCERS[key]
        try:
            if key in ("unweighted", "strict"):
                values[key] = _parse_bool(value)
            elif key in ("formats", "track"):
                values[key] = tuple(
                    part.strip() for part in value.split(",") if part.strip()
                )
            else:
                values[key] = coercer(value)
        except ValueError as exc:
            raise UsageError(f"{path}:{line_no}: {exc}") from None
    return values


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = _parse_config_file(args.config) if args.config else {}
    merged: dict = dict(file_values)
    for key in _CONFIG_COERCERS:
        cli_value = getattr(args, key, None)
        if cli_value is not None:
            merged[key] = cli_value
    merged["inputs"] = tuple(args.inputs)
    try:
        return RunConfig(**merged)
    except TypeError as exc:  # pragma: no cover - guarded by coercer table
        raise UsageError(str(exc)) from None


def _parse_node_key(text: str) -> NodeKey:
    """Parse a 'ROLE lemma' pair as printed in exports ('_' = missing role)."""
    parts = text.split(" ", 1)
    if len(parts) != 2 or not parts[1]:
        raise UsageError(
            f"node keys are written 'ROLE lemma', got {text!r}"
        )
    role_code, lemma = parts
    if role_code == "_":
        return NodeKey(lemma=lemma, role=None)
    try:
        return NodeKey(lemma=lemma, role=GrammaticalRole.from_code(role_code))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8", newline="")


def _json_text(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _float_cell(value) -> str:
    return "" if value is None else repr(float(value))


def _meta_comment(cfg: RunConfig, **extra) -> str:
    fields = {"seed": cfg.seed, "tool": f"asnkit-{__version__}"}
    fields.update(extra)
    body = " ".join(f"{k}={fields[k]}" for k in sorted(fields))
    return f"# {body}\n"


def _load_filtered(cfg: RunConfig) -> tuple[list[CorpusSlice], list[str]]:
    """Load all inputs, apply the missing policy, and demand a usable corpus."""
    if not cfg.inputs:
        raise UsageError("no input files given")
    slices = load_corpus(cfg.inputs)
    if not slices:
        raise ValueError("empty corpus: no sentences found")
    kept: list[CorpusSlice] = []
    drop_lines: list[str] = []
    for corpus_slice in slices:
        filtered, dropped = filter_slice(corpus_slice, cfg.policy)
        for tree, decision in dropped:
            drop_lines.append(
                f"century {corpus_slice.century} sentence "
                f"{tree.sentence_id!r}: {decision.reason}"
            )
        if not filtered.trees:
            raise ValueError(
                f"empty corpus: century {corpus_slice.century} has no "
                f"sentences left under policy {cfg.missing!r}"
            )
        kept.append(filtered)
    return kept, drop_lines


def _networks(slices: Sequence[CorpusSlice]) -> list[tuple[CorpusSlice, Asn]]:
    return [(s, aggregate(s.trees)) for s in slices]


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_validate(cfg: RunConfig) -> int:
    if not cfg.inputs:
        raise UsageError("no input files given")
    issue_count = 0
    for path in cfg.inputs:
        text = Path(path).read_text(encoding="utf-8")
        issues = audit_corpus(text, provenance=str(path))
        for issue in issues:
            print(str(issue))
        issue_count += len(issues)
    if issue_count:
        print(f"FAIL: {issue_count} issue(s) found")
        return 1
    print(f"OK: {len(cfg.inputs)} file(s) valid")
    return 0


def cmd_build(cfg: RunConfig) -> int:
    slices, drop_lines = _load_filtered(cfg)
    out = Path(cfg.out)
    for corpus_slice, asn in _networks(slices):
        century = corpus_slice.century
        meta = {"seed": cfg.seed, "century": century, "tool": f"asnkit-{__version__}"}
        path = out / f"asn_{century}.csv"
        _write(path, edge_csv(asn, metadata=meta))
        print(f"wrote {path} ({asn.node_count} nodes, {asn.edge_count} edges)")
    for line in drop_lines:
        print(f"dropped {line}")
    return 0


def cmd_export(cfg: RunConfig) -> int:
    slices, _ = _load_filtered(cfg)
    out = Path(cfg.out)
    writers = {"csv": edge_csv, "dot": to_dot, "graphml": to_graphml}
    for corpus_slice, asn in _networks(slices):
        century = corpus_slice.century
        meta = {"seed": cfg.seed, "century": century, "tool": f"asnkit-{__version__}"}
        for fmt in cfg.formats:
            path = out / f"asn_{century}.{fmt}"
            _write(path, writers[fmt](asn, metadata=meta))
            print(f"wrote {path}")
    return 0


def _summary_payload(cfg: RunConfig, century: int, asn: Asn) -> dict:
    summary = summarize(asn)
    return {
        "century": century,
        "seed": cfg.seed,
        "conventions": _CONVENTIONS,
        "directed_edge_count": asn.edge_count,
        "total_edge_weight": asn.total_weight(),
        "summary": dataclasses.asdict(summary),
    }


def cmd_stats(cfg: RunConfig) -> int:
    slices, _ = _load_filtered(cfg)
    out = Path(cfg.out)
    pairs = _networks(slices)
    for corpus_slice, asn in pairs:
        path = out / f"summary_{corpus_slice.century}.json"
        _write(path, _json_text(_summary_payload(cfg, corpus_slice.century, asn)))
        print(f"wrote {path}")
    rows = depth_vs_diameter(pairs)
    lines = [_meta_comment(cfg)]
    lines.append("century,max_tree_depth,diameter,average_path_length\n")
    for row in rows:
        lines.append(
            f"{row['century']},{row['max_tree_depth']},{row['diameter']},"
            f"{_float_cell(row['average_path_length'])}\n"
        )
    path = out / "depth_vs_diameter.csv"
    _write(path, "".join(lines))
    print(f"wrote {path}")
    return 0


def _hierarchy_outputs(
    cfg: RunConfig, century: int, asn: Asn, levels: HierarchyLevels
) -> tuple[str, str]:
    table = level_csv(
        asn,
        levels,
        metadata={"seed": cfg.seed, "century": century,
                  "weighted": not cfg.unweighted},
    )
    try:
        stats = hierarchy_stats(asn, levels, weighted=not cfg.unweighted)
        stats_payload = {
            "century": century,
            "seed": cfg.seed,
            "conventions": _CONVENTIONS,
            "weighted": not cfg.unweighted,
            "democracy": stats.democracy,
            "incoherence": stats.incoherence,
            "residual": levels.residual,
        }
    except ValueError as exc:
        stats_payload = {
            "century": century,
            "seed": cfg.seed,
            "conventions": _CONVENTIONS,
            "weighted": not cfg.unweighted,
            "error": str(exc),
        }
    return table, _json_text(stats_payload)


def cmd_hierarchy(cfg: RunConfig) -> int:
    slices, _ = _load_filtered(cfg)
    out = Path(cfg.out)
    for corpus_slice, asn in _networks(slices):
        century = corpus_slice.century
        levels = hierarchy_levels(asn, weighted=not cfg.unweighted)
        table, stats_json = _hierarchy_outputs(cfg, century, asn, levels)
        table_path = out / f"hierarchy_{century}.csv"
        stats_path = out / f"hierarchy_stats_{century}.json"
        _write(table_path, table)
        _write(stats_path, stats_json)
        print(f"wrote {table_path}")
        print(f"wrote {stats_path}")
    return 0


def _powerlaw_payload(cfg: RunConfig, century: int, asn: Asn):
    """Fit the chosen degree sequence; returns (payload, fit or None, data)."""
    degrees = degree_sequences(asn)[cfg.degree]
    data = [d for d in degrees if d > 0]
    payload: dict = {
        "century": century,
        "seed": cfg.seed,
        "conventions": _CONVENTIONS,
        "variable": f"{cfg.degree}_degree",
        "n": len(data),
        "zeros_dropped": len(degrees) - len(data),
        "threshold": cfg.p_threshold,
    }
    try:
        fit = fit_power_law(data)
    except (ValueError, DegenerateDataError) as exc:
        payload["error"] = str(exc)
        return payload, None, data
    fit = bootstrap_pvalue(fit, data, replicates=cfg.replicates, seed=cfg.seed)
    payload.update(
        {
            "alpha": fit.alpha,
            "xmin": fit.xmin,
            "ks": fit.ks,
            "n_tail": fit.n_tail,
            "p_value": fit.p_value,
            "replicates": fit.replicates,
            "consistent_with_power_law": fit.p_value > cfg.p_threshold,
            "lrt": [],
        }
    )
    for alternative in ("exponential", "lognormal"):
        try:
            result = lrt(data, fit, alternative)
            payload["lrt"].append(dataclasses.asdict(result))
        except ValueError as exc:
            payload["lrt"].append({"alternative": alternative, "error": str(exc)})
    return payload, fit, data


def _ccdf_csv(cfg: RunConfig, century: int, data, fit) -> str:
    lines = [_meta_comment(cfg, century=century)]
    lines.append("x,empirical_ccdf,fitted_ccdf\n")
    for row in ccdf_rows(data, fit):
        lines.append(
            f"{row['x']},{_float_cell(row['empirical_ccdf'])},"
            f"{_float_cell(row['fitted_ccdf'])}\n"
        )
    return "".join(lines)


def cmd_powerlaw(cfg: RunConfig) -> int:
    slices, _ = _load_filtered(cfg)
    out = Path(cfg.out)
    for corpus_slice, asn in _networks(slices):
        century = corpus_slice.century
        payload, fit, data = _powerlaw_payload(cfg, century, asn)
        json_path = out / f"powerlaw_{century}.json"
        _write(json_path, _json_text(payload))
        print(f"wrote {json_path}")
        if data:
            ccdf_path = out / f"ccdf_{century}.csv"
            _write(ccdf_path, _ccdf_csv(cfg, century, data, fit))
            print(f"wrote {ccdf_path}")
    return 0


def _diachrony_outputs(cfg: RunConfig, pairs) -> dict[str, str]:
    """All cross-century artifacts as filename -> text."""
    levels = [
        (asn, hierarchy_levels(asn, weighted=not cfg.unweighted))
        for _s, asn in pairs
    ]
    records = []
    for (corpus_slice, asn), (_, lv) in zip(pairs, levels):
        summary = summarize(asn)
        try:
            stats = hierarchy_stats(asn, lv, weighted=not cfg.unweighted)
        except ValueError:
            stats = None
        records.append(
            CenturyRecord(
                century=corpus_slice.century, summary=summary, hierarchy=stats
            )
        )
    series = DiachronicSeries(records=tuple(records))

    outputs: dict[str, str] = {}

    lines = [_meta_comment(cfg)]
    lines.append("century,democracy,incoherence\n")
    for century, democracy, incoherence in phase_space(series):
        lines.append(
            f"{century},{_float_cell(democracy)},{_float_cell(incoherence)}\n"
        )
    outputs["phase_space.csv"] = "".join(lines)

    events = detect_emergent_heads(levels, band=cfg.band, min_gain=cfg.min_gain)
    outputs["emergent_heads.json"] = _json_text(
        {
            "seed": cfg.seed,
            "band": cfg.band,
            "min_gain": cfg.min_gain,
            "conventions": _CONVENTIONS,
            "events": [
                {
                    "role": e.key.role_code,
                    "lemma": e.key.lemma,
                    "century": e.century,
                    "prior_rank": e.prior_rank,
                    "new_rank": e.new_rank,
                }
                for e in events
            ],
        }
    )

    keys = [_parse_node_key(text) for text in cfg.track]
    lines = [_meta_comment(cfg)]
    lines.append(
        "role,lemma,century,present,forward_level,level_rank,frequency,is_head\n"
    )
    for trajectory in track(keys, levels):
        for p in trajectory.points:
            rank = "" if p.level_rank is None else str(p.level_rank)
            lines.append(
                f"{trajectory.key.role_code},{trajectory.key.lemma},"
                f"{p.century},{int(p.present)},{_float_cell(p.level)},"
                f"{rank},{p.frequency},{int(p.is_head)}\n"
            )
    outputs["trajectories.csv"] = "".join(lines)
    return outputs


def cmd_diachrony(cfg: RunConfig) -> int:
    slices, _ = _load_filtered(cfg)
    out = Path(cfg.out)
    for name, text in _diachrony_outputs(cfg, _networks(slices)).items():
        path = out / name
        _write(path, text)
        print(f"wrote {path}")
    return 0


def cmd_analyze(cfg: RunConfig) -> int:
    slices, drop_lines = _load_filtered(cfg)
    out = Path(cfg.out)
    pairs = _networks(slices)
    written: list[str] = []

    writers = {"csv": edge_csv, "dot": to_dot, "graphml": to_graphml}
    for corpus_slice, asn in pairs:
        century = corpus_slice.century
        meta = {"seed": cfg.seed, "century": century, "tool": f"asnkit-{__version__}"}
        for fmt in cfg.formats:
            name = f"asn_{century}.{fmt}"
            _write(out / name, writers[fmt](asn, metadata=meta))
            written.append(name)

        name = f"summary_{century}.json"
        _write(out / name, _json_text(_summary_payload(cfg, century, asn)))
        written.append(name)

        levels = hierarchy_levels(asn, weighted=not cfg.unweighted)
        table, stats_json = _hierarchy_outputs(cfg, century, asn, levels)
        _write(out / f"hierarchy_{century}.csv", table)
        _write(out / f"hierarchy_stats_{century}.json", stats_json)
        written += [f"hierarchy_{century}.csv", f"hierarchy_stats_{century}.json"]

        payload, fit, data = _powerlaw_payload(cfg, century, asn)
        _write(out / f"powerlaw_{century}.json", _json_text(payload))
        written.append(f"powerlaw_{century}.json")
        if data:
            _write(out / f"ccdf_{century}.csv", _ccdf_csv(cfg, century, data, fit))
            written.append(f"ccdf_{century}.csv")

    rows = depth_vs_diameter(pairs)
    lines = [_meta_comment(cfg)]
    lines.append("century,max_tree_depth,diameter,average_path_length\n")
    for row in rows:
        lines.append(
            f"{row['century']},{row['max_tree_depth']},{row['diameter']},"
            f"{_float_cell(row['average_path_length'])}\n"
        )
    _write(out / "depth_vs_diameter.csv", "".join(lines))
    written.append("depth_vs_diameter.csv")

    for name, text in _diachrony_outputs(cfg, pairs).items():
        _write(out / name, text)
        written.append(name)

    # The output directory is wherever the manifest sits; recording it would
    # make otherwise-identical bundles differ byte-wise.
    config = {k: v for k, v in dataclasses.asdict(cfg).items() if k != "out"}
    manifest = {
        "tool": "asnkit",
        "version": __version__,
        "command": "analyze",
        "config": config,
        "conventions": _CONVENTIONS,
        "centuries": [s.century for s, _ in pairs],
        "dropped_sentences": drop_lines,
        "files": sorted(written),
    }
    _write(out / "manifest.json", _json_text(manifest))
    print(f"wrote {out / 'manifest.json'} and {len(written)} artifact(s)")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asnkit",
        description="Aggregated syntactic networks from dependency treebanks.",
    )
    parser.add_argument("--version", action="version", version=__version__)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("inputs", nargs="+", metavar="TREEBANK",
                        help="treebank file(s)")
    common.add_argument("--config", help="key = value configuration file")
    common.add_argument("--out", default=None, help="output directory")
    common.add_argument(
        "--missing", default=None,
        choices=[p.value for p in MissingPolicy],
        help="missing-annotation policy",
    )
    common.add_argument("--seed", type=int, default=None, help="random seed")
    common.add_argument(
        "--unweighted", action="store_true", default=None,
        help="solve hierarchy levels on unweighted edges",
    )
    common.add_argument(
        "--degree", default=None, choices=("in", "out", "total"),
        help="degree variable for power-law fitting",
    )
    common.add_argument(
        "--replicates", type=int, default=None,
        help="bootstrap replicates (>= 100)",
    )
    common.add_argument(
        "--strict", action="store_true", default=None,
        help="use the strict 0.1 p-value threshold instead of 0.01",
    )
    common.add_argument("--band", type=int, default=None,
                        help="top band size for emergence detection")
    common.add_argument("--min-gain", dest="min_gain", type=int, default=None,
                        help="rank gain required to call a head emergent")
    common.add_argument(
        "--formats", default=None,
        type=lambda s: tuple(p.strip() for p in s.split(",") if p.strip()),
        help="comma-separated export formats (csv,dot,graphml)",
    )
    common.add_argument(
        "--track", action="append", default=None, metavar="'ROLE lemma'",
        help="node key to follow in diachrony (repeatable)",
    )

    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, help_text in (
        ("validate", cmd_validate, "audit treebank files for format and tree errors"),
        ("build", cmd_build, "aggregate per-century networks to CSV edge lists"),
        ("export", cmd_export, "serialize per-century networks (csv/dot/graphml)"),
        ("stats", cmd_stats, "topology summaries and depth-vs-diameter table"),
        ("hierarchy", cmd_hierarchy, "hierarchical levels and hierarchy statistics"),
        ("powerlaw", cmd_powerlaw, "degree power-law fits with bootstrap p-values"),
        ("diachrony", cmd_diachrony, "trajectories, emergent heads, phase space"),
        ("analyze", cmd_analyze, "full pipeline into one output bundle"),
    ):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.set_defaults(func=func)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _resolve_config(args)
        return args.func(cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CorpusFormatError, TreeValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
