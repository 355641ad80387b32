"""Command line entry point: ``taxorelax {align,eval,compare,convert,synth}``.

Exit codes: 0 ok, 1 runtime error, 2 usage/config error, 3 bad input file.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from pathlib import Path

from . import __version__
from .candidates import generate_candidates, load_candidates, write_candidates
from .constraints import expand_pack
from .errors import ConfigError, InputError, TaxorelaxError
from .evaluation import (
    agreement,
    coverage,
    fmt_fraction,
    format_gold,
    load_gold,
    load_groups,
    load_variant_index,
    load_variant_mapping,
    precision_recall,
    render_table,
    sense_to_synset,
)
from .extraction import (
    ambiguity_stats,
    extract_mapping,
    grouped_ambiguity,
    load_mapping,
    write_mapping,
)
from .relaxation import RelaxationConfig, format_trace, run
from .synth import generate_pair
from .taxonomy import format_taxonomy, load_taxonomy

logger = logging.getLogger("taxorelax")

MANIFEST_VERSION = 1


def _sha256(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _parse_deltas(text: str) -> list[float]:
    try:
        deltas = [float(d) for d in text.split(",") if d.strip()]
    except ValueError:
        raise ConfigError(f"bad --delta list {text!r}") from None
    if not deltas:
        raise ConfigError("--delta needs at least one value")
    for d in deltas:
        if not 0.0 < d <= 1.0:
            raise ConfigError(f"delta must lie in (0, 1], got {d}")
    return sorted(set(deltas))


def _parse_strengths(items) -> dict[str, float]:
    out = {}
    for item in items or ():
        code, sep, value = item.partition("=")
        try:
            out[code.strip()] = float(value)
        except ValueError:
            raise ConfigError(f"bad --strength {item!r}, expected CODE=VALUE") from None
        if not sep:
            raise ConfigError(f"bad --strength {item!r}, expected CODE=VALUE")
    return out


def _table_from_args(args):
    if getattr(args, "candidates", None):
        return load_candidates(args.candidates)
    if getattr(args, "source", None) and getattr(args, "target", None):
        return generate_candidates(load_taxonomy(args.source, "source"),
                                   load_taxonomy(args.target, "target"))
    return None


def _parent_made(path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _write_or_print(text: str, output) -> None:
    if output:
        _parent_made(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# -- align -------------------------------------------------------------------


def cmd_align(args) -> int:
    pack = expand_pack(args.constraints, _parse_strengths(args.strength))
    deltas = _parse_deltas(args.delta)
    config = RelaxationConfig(pack=pack, max_iterations=args.max_iterations,
                              epsilon=args.epsilon, init=args.init, seed=args.seed)
    src = load_taxonomy(args.source, "source")
    tgt = load_taxonomy(args.target, "target")
    table = generate_candidates(src, tgt)
    stats = table.stats
    logger.info("candidates: %d variables, %d covered (%d monosemous, %d ambiguous), "
                "%d uncovered", stats.total, stats.covered, stats.monosemous,
                stats.ambiguous, stats.uncovered)
    if args.dump_candidates:
        write_candidates(table, _parent_made(args.dump_candidates))

    result = run(table, config, src, tgt)
    assignment = result.assignment
    if args.verbose:
        for r in result.trace:
            logger.info("iteration %d\tmax-delta %.6e\tmean support %.6e",
                        r.iteration, r.max_delta, r.mean_support)
    if args.trace:
        _parent_made(args.trace).write_text(format_trace(result.trace), encoding="utf-8")

    settings = {
        "constraints": pack.name,
        "strengths": {str(c): pack.strength(c) for c in pack.codes},
        "deltas": deltas,
        "epsilon": config.epsilon,
        "max_iterations": config.max_iterations,
        "init": config.init,
        "seed": config.seed,
    }
    config_hash = hashlib.sha256(
        json.dumps(settings, sort_keys=True).encode()).hexdigest()[:16]
    out_dir = Path(args.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs = []
    for delta in deltas:
        mapping = extract_mapping(assignment, delta, provenance={
            "pack": pack.name,
            "config": config_hash,
            "tool": f"taxorelax {__version__}",
        })
        path = out_dir / f"mapping_d{delta:g}.tsv"
        write_mapping(mapping, path)
        outputs.append(path.name)
        amb = ambiguity_stats(mapping, table)["total"]
        logger.info("delta %g: %d variables proposing, average ambiguity %s",
                    delta, amb.proposing, fmt_fraction(amb.average, 3))

    manifest = {
        "manifest_version": MANIFEST_VERSION,
        "tool_version": __version__,
        "config": settings,
        "config_hash": config_hash,
        "inputs": {
            "source": {"path": str(args.source), "sha256": _sha256(args.source)},
            "target": {"path": str(args.target), "sha256": _sha256(args.target)},
        },
        "formats": {"taxonomy": "tsv-1", "mapping": "tsv-1"},
        "candidates": {
            "variables": stats.total, "covered": stats.covered,
            "monosemous": stats.monosemous, "ambiguous": stats.ambiguous,
            "connections": len(table),
        },
        "relaxation": {
            "iterations": assignment.iteration,
            "converged": assignment.converged,
            "evidence_entries": result.evidence_count,
        },
        "outputs": outputs,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if not assignment.converged:
        logger.warning("stopped after %d iterations without converging",
                       assignment.iteration)
    return 0


# -- eval --------------------------------------------------------------------


def cmd_eval(args) -> int:
    mapping = load_mapping(args.mapping)
    gold = load_gold(args.gold)
    table = _table_from_args(args)
    fmt = args.report_format
    parts = []
    if table is not None:
        outside = sorted(set(mapping.variables) - set(table.variables))
        if outside:
            logger.warning("%d mapped variables are not covered by the candidate table",
                           len(outside))
        mapping = mapping.restricted_to(table.variables)
        cov = coverage(mapping, table)
        parts.append(render_table(
            ["coverage", "variables", "proposing", "disambiguated", "fraction"],
            [[name, str(r.variables), str(r.proposing), str(r.disambiguated),
              fmt_fraction(r.coverage)] for name, r in cov.items()], fmt))
    report = precision_recall(mapping, gold, table)
    parts.append(render_table(
        ["precision", "gold", "proposing", "links", "correct_links",
         "link_precision", "variable_precision", "recall"],
        [[name, str(r.gold_variables), str(r.proposing), str(r.proposed_links),
          str(r.correct_links), fmt_fraction(r.precision),
          fmt_fraction(r.variable_precision), fmt_fraction(r.recall)]
         for name, r in report.rows.items()], fmt))
    if report.excluded:
        parts.append(f"# excluded gold entries: {report.excluded}\n")
    _write_or_print("\n".join(parts), args.output)
    return 0


# -- compare -----------------------------------------------------------------


def cmd_compare(args) -> int:
    m1 = load_mapping(args.mapping)
    m2 = load_mapping(args.reference)
    table = _table_from_args(args)
    if table is not None:
        m1 = m1.restricted_to(table.variables)
        m2 = m2.restricted_to(table.variables)
    groups = load_groups(args.groups) if args.groups else None
    fmt = args.report_format

    agree = agreement(m1, m2, groups)
    parts = [render_table(
        ["group", "size", "hard", "soft"],
        [[g, str(r.size), fmt_fraction(r.hard), fmt_fraction(r.soft)]
         for g, r in agree.items()], fmt)]

    def amb(m):
        if groups is not None:
            return grouped_ambiguity(m, groups)
        return ambiguity_stats(m, table)

    a1, a2 = amb(m1), amb(m2)
    keys = list(dict.fromkeys([*a1, *a2]))
    parts.append(render_table(
        ["group", "proposing", "ambiguity", "reference_proposing", "reference_ambiguity"],
        [[g,
          str(a1[g].proposing) if g in a1 else "0",
          fmt_fraction(a1[g].average, 3) if g in a1 else "N/A",
          str(a2[g].proposing) if g in a2 else "0",
          fmt_fraction(a2[g].average, 3) if g in a2 else "N/A"]
         for g in keys], fmt))
    _write_or_print("\n".join(parts), args.output)
    return 0


# -- convert -----------------------------------------------------------------


def cmd_convert(args) -> int:
    pairs = load_variant_mapping(args.variant_mapping)
    mapping = sense_to_synset(pairs, load_variant_index(args.source_index),
                              load_variant_index(args.target_index))
    unresolved = int(mapping.provenance.get("unresolved", 0))
    if unresolved:
        logger.warning("%d of %d variant pairs unresolved", unresolved, len(pairs))
    write_mapping(mapping, _parent_made(args.output))
    return 0


# -- synth -------------------------------------------------------------------


def cmd_synth(args) -> int:
    pair = generate_pair(nodes=args.nodes, branching=args.branching,
                         ambiguity=args.ambiguity, group_size=args.group_size,
                         perturbation=args.perturbation, seed=args.seed)
    out = Path(args.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "source.tsv").write_text(format_taxonomy(pair.source), encoding="utf-8")
    (out / "target.tsv").write_text(format_taxonomy(pair.target), encoding="utf-8")
    (out / "gold.tsv").write_text(format_gold(pair.gold), encoding="utf-8")
    return 0


# -- argument parsing ----------------------------------------------------------


def _common_options(defaults: bool) -> argparse.ArgumentParser:
    # subcommands repeat the global flags without clobbering values given earlier
    def default(value):
        return value if defaults else argparse.SUPPRESS

    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--threads", type=int, default=default(1),
                   help="worker cap; computation is vectorized in-process")
    p.add_argument("--verbose", "-v", action="store_true", default=default(False))
    p.add_argument("--report-format", choices=("text", "tsv"), default=default("text"))
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="taxorelax", parents=[_common_options(True)],
        description="Align two taxonomies by relaxation labeling.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common_options(False)

    p = sub.add_parser("align", parents=[common], help="run the alignment pipeline")
    p.add_argument("--source", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--constraints", default="aa",
                   help="ii, ai, ia, aa or a comma-separated code list (default aa)")
    p.add_argument("--strength", action="append", metavar="CODE=VALUE",
                   help="per-code strength multiplier, repeatable")
    p.add_argument("--delta", default="0.5", help="threshold(s), e.g. 0.3,0.4,0.5")
    p.add_argument("--epsilon", type=float, default=1e-4)
    p.add_argument("--max-iterations", type=int, default=100)
    p.add_argument("--init", choices=("uniform", "random"), default="uniform")
    p.add_argument("--seed", type=int)
    p.add_argument("--output-dir", "-o", default=".")
    p.add_argument("--dump-candidates", metavar="PATH")
    p.add_argument("--trace", metavar="PATH")
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("eval", parents=[common], help="score a mapping against gold")
    p.add_argument("--mapping", required=True)
    p.add_argument("--gold", required=True)
    p.add_argument("--candidates", help="candidate dump from align --dump-candidates")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--output")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("compare", parents=[common], help="agreement between two mappings")
    p.add_argument("--mapping", required=True)
    p.add_argument("--reference", required=True)
    p.add_argument("--groups", help="'id TAB group' file or a gold file with groups")
    p.add_argument("--candidates")
    p.add_argument("--source")
    p.add_argument("--target")
    p.add_argument("--output")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("convert", parents=[common],
                       help="lift a variant mapping to a synset mapping")
    p.add_argument("--variant-mapping", required=True)
    p.add_argument("--source-index", required=True)
    p.add_argument("--target-index", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic pair")
    p.add_argument("--nodes", type=int, default=100)
    p.add_argument("--branching", type=int, default=4)
    p.add_argument("--ambiguity", type=float, default=1.0,
                   help="fraction of nodes given a shared homonym word")
    p.add_argument("--group-size", type=int, default=3)
    p.add_argument("--perturbation", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output-dir", "-o", default=".")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    if args.threads is not None and args.threads < 1:
        logger.error("--threads must be >= 1")
        return 2
    try:
        return args.func(args)
    except TaxorelaxError as exc:
        logger.error("%s", exc)
        return exc.exit_code
    except (FileNotFoundError, IsADirectoryError, UnicodeDecodeError) as exc:
        logger.error("%s", exc)
        return InputError.exit_code
    except Exception:
        logger.exception("unexpected failure")
        return 1


if __name__ == "__main__":
    sys.exit(main())
