"""Command-line entry point: gen-data, psa, tps, explain, report.

Exit codes: 0 success, 2 unusable configuration, 3 missing prerequisite,
1 anything that broke at runtime.  Stdout carries one-line summaries and
rendered tables; everything else goes to `<run_dir>/run.log`.
"""

from __future__ import annotations

import argparse
import sys
import traceback
from pathlib import Path

from ..imaging import PADDING_SCHEMES
from ..pathways import (
    PSA_CSV,
    PSA_REPORT,
    SETTINGS,
    TPS_REPORT,
    read_json,
    run_psa,
    run_tps,
    tps_csv_name,
)
from ..synthdata import LABELS, generate, load_dataset, save_dataset, split
from .config import ConfigError, RunConfig, load_config
from .rundir import (
    LockHeldError,
    read_manifest,
    run_logger,
    update_manifest,
    writer_lock,
)

__all__ = ["PrerequisiteError", "main"]

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_CONFIG = 2
EXIT_PREREQUISITE = 3

_GRADCAM_PER_LABEL = 2


class PrerequisiteError(RuntimeError):
    """An input the command needs is not on disk yet."""


def _relative_artifact(path: Path, run_dir: Path) -> str:
    try:
        return str(path.relative_to(run_dir))
    except ValueError:
        return str(path.resolve())


def _load_splits(cfg: RunConfig) -> tuple[dict, dict, Path]:
    """Locate the datasets and cut their temporal splits."""
    run_dir = cfg.run_dir
    if cfg.data_root is not None:
        root = cfg.data_root
    else:
        root = run_dir / "data"
        try:
            manifest = read_manifest(run_dir)
            data = manifest.get("artifacts", {}).get("data")
            if isinstance(data, dict) and "A" in data:
                recorded = Path(data["A"]).parent
                root = recorded if recorded.is_absolute() else run_dir / recorded
        except FileNotFoundError:
            pass
    try:
        ds_a = load_dataset(root, "A")
        ds_b = load_dataset(root, "B")
    except FileNotFoundError as exc:
        raise PrerequisiteError(
            f"datasets not found under {root}; run gen-data first "
            "(or point data.root at existing manifests)"
        ) from exc
    spec = cfg.split_spec
    return split(ds_a, spec), split(ds_b, spec), root


def _label_counts(items) -> dict[str, int]:
    return {label: sum(1 for it in items if it.label == label) for label in LABELS}


def cmd_gen_data(args) -> int:
    cfg = load_config(args.config, paper_scale=args.paper_scale)
    gen = cfg.generate
    if gen is None:
        raise ConfigError(
            "data.root points at existing datasets; there is nothing to generate"
        )
    run_dir = cfg.run_dir
    with writer_lock(run_dir):
        log = run_logger(run_dir)
        data_root = Path(args.out) if args.out else run_dir / "data"
        log.info("gen-data: run %s, writing datasets under %s", cfg.run_id, data_root)
        ds_a, ds_b = generate(gen)
        dir_a = save_dataset(ds_a, data_root)
        dir_b = save_dataset(ds_b, data_root)
        update_manifest(
            run_dir,
            cfg.run_id,
            cfg.document,
            data={
                "A": _relative_artifact(dir_a, run_dir),
                "B": _relative_artifact(dir_b, run_dir),
            },
        )
        counts = {"A": _label_counts(ds_a.items), "B": _label_counts(ds_b.items)}
        log.info("gen-data: done, counts %s", counts)
    print(
        f"run {cfg.run_id}: generated A ({len(ds_a)} items) and "
        f"B ({len(ds_b)} items) under {data_root}"
    )
    for name, per_label in counts.items():
        cells = " ".join(f"{label}={n}" for label, n in per_label.items())
        print(f"  {name}: {cells}")
    return EXIT_OK


def cmd_psa(args) -> int:
    cfg = load_config(args.config, paper_scale=args.paper_scale)
    if not cfg.psa["enabled"]:
        raise ConfigError("psa.enabled is false in this config")
    run_dir = cfg.run_dir
    with writer_lock(run_dir):
        log = run_logger(run_dir)
        splits_a, splits_b, root = _load_splits(cfg)
        log.info(
            "psa: run %s, datasets from %s, schemes %s",
            cfg.run_id,
            root,
            cfg.psa["schemes"],
        )
        try:
            result = run_psa(
                cfg.model,
                cfg.train,
                splits_a,
                splits_b,
                run_dir,
                base_seed=cfg.base_seed,
                schemes=tuple(cfg.psa["schemes"]),
                train_per_scheme=cfg.psa["train_per_scheme"],
                objective=cfg.psa["objective"],
            )
        finally:
            # a failed search still leaves a partial report worth indexing
            if (run_dir / PSA_REPORT).is_file():
                update_manifest(
                    run_dir,
                    cfg.run_id,
                    cfg.document,
                    psa_report=PSA_REPORT,
                    psa_csv=PSA_CSV,
                )
        log.info(
            "psa: chosen scheme %s (run %d, checkpoint %s)",
            result.chosen_scheme,
            result.chosen_run,
            result.chosen_checkpoint,
        )
    print(
        f"run {cfg.run_id}: chosen padding scheme: {result.chosen_scheme} "
        f"(run {result.chosen_run})"
    )
    return EXIT_OK


def _normalize_settings(values) -> tuple[str, ...]:
    out = []
    for raw in values:
        name = f"S{raw}" if raw.isdigit() else raw.upper()
        if name not in SETTINGS:
            raise ConfigError(f"unknown setting {raw!r}; expected 1-5 or S1-S5")
        if name not in out:
            out.append(name)
    return tuple(s for s in SETTINGS if s in out)


def _resolve_scheme(cfg: RunConfig, run_dir: Path) -> tuple[str, str]:
    """The padding scheme TPS trains with, and where it came from."""
    forced = cfg.tps.get("scheme")
    if forced is not None:
        return forced, "config tps.scheme"
    psa_path = run_dir / PSA_REPORT
    if psa_path.is_file():
        doc = read_json(psa_path)
        chosen = doc.get("chosen")
        if isinstance(chosen, dict) and chosen.get("scheme"):
            return chosen["scheme"], "PSA report"
        raise PrerequisiteError(
            f"PSA report {psa_path} has no chosen scheme (search failed?)"
        )
    raise PrerequisiteError(
        "no PSA report in the run directory and no tps.scheme in the config; "
        "run psa first or force a scheme"
    )


def cmd_tps(args) -> int:
    cfg = load_config(args.config, paper_scale=args.paper_scale)
    settings = (
        _normalize_settings(args.settings)
        if args.settings
        else tuple(cfg.tps["settings"])
    )
    for tuned, source in (("S2", "S1"), ("S5", "S4")):
        if tuned in settings and source not in settings:
            raise PrerequisiteError(
                f"{tuned} fine-tunes the {source} peak; include {source} "
                "in the settings"
            )
    run_dir = cfg.run_dir
    with writer_lock(run_dir):
        log = run_logger(run_dir)
        scheme, origin = _resolve_scheme(cfg, run_dir)
        splits_a, splits_b, root = _load_splits(cfg)
        architectures = cfg.architectures()
        log.info(
            "tps: run %s, scheme %s (%s), settings %s, architectures %s",
            cfg.run_id,
            scheme,
            origin,
            list(settings),
            list(architectures),
        )
        try:
            result = run_tps(
                architectures,
                cfg.train,
                splits_a,
                splits_b,
                scheme,
                run_dir,
                base_seed=cfg.base_seed,
                settings=settings,
                freeze_tail=cfg.tps["freeze_tail"],
                objective=cfg.tps["objective"],
                scheme_overrides=cfg.tps["scheme_overrides"] or None,
            )
        finally:
            if (run_dir / TPS_REPORT).is_file():
                update_manifest(
                    run_dir,
                    cfg.run_id,
                    cfg.document,
                    tps_report=TPS_REPORT,
                    tps_csv={name: tps_csv_name(name) for name in architectures},
                )
        for name, arch in result.architectures.items():
            log.info(
                "tps: %s chosen %s (run %s)",
                name,
                arch.chosen_setting,
                arch.chosen_run,
            )
    print(f"run {cfg.run_id}: trained with scheme: {scheme}")
    for name, arch in result.architectures.items():
        if arch.chosen_setting is None:
            print(f"  {name}: no chosen pathway (needs at least two settings)")
        else:
            print(
                f"  {name}: chosen pathway: {arch.chosen_setting} "
                f"(run {arch.chosen_run})"
            )
    return EXIT_OK


def _checkpoint_from_reports(cfg: RunConfig, run_dir: Path) -> tuple[Path, str]:
    """Best chosen checkpoint on disk: TPS first, PSA as fallback."""
    tps_path = run_dir / TPS_REPORT
    if tps_path.is_file():
        doc = read_json(tps_path)
        best = None
        for name, chosen in doc.get("chosen", {}).items():
            if not isinstance(chosen, dict) or chosen.get("checkpoint") is None:
                continue
            agg = doc["aggregates"][name][chosen["setting"]]
            score = agg["mean_A"] + agg["mean_B"]
            if best is None or score > best[0]:
                best = (score, name, chosen)
        if best is not None:
            _, name, chosen = best
            return run_dir / chosen["checkpoint"], f"TPS {name} {chosen['setting']}"
    psa_path = run_dir / PSA_REPORT
    if psa_path.is_file():
        doc = read_json(psa_path)
        chosen = doc.get("chosen")
        if isinstance(chosen, dict) and chosen.get("checkpoint"):
            return run_dir / chosen["checkpoint"], f"PSA {chosen['scheme']}"
    raise PrerequisiteError(
        "no checkpoint given and no report names a chosen one; "
        "run tps (or psa) first or pass --checkpoint"
    )


def _gradcam_samples(items):
    out = []
    for label in LABELS:
        out.extend([it for it in items if it.label == label][:_GRADCAM_PER_LABEL])
    return out


def cmd_explain(args) -> int:
    from ..explain import (
        gradcam_report,
        padding_profile,
        quant_table,
        write_profile_csv,
        write_quant_csv,
    )
    from ..nn import load_checkpoint

    cfg = load_config(args.config, paper_scale=args.paper_scale)
    run_dir = cfg.run_dir
    with writer_lock(run_dir):
        log = run_logger(run_dir)
        if args.checkpoint:
            ckpt_path = Path(args.checkpoint)
            if not ckpt_path.is_file() and (run_dir / ckpt_path).is_file():
                ckpt_path = run_dir / ckpt_path
            if not ckpt_path.is_file():
                raise PrerequisiteError(f"checkpoint not found: {args.checkpoint}")
            origin = "--checkpoint"
        else:
            ckpt_path, origin = _checkpoint_from_reports(cfg, run_dir)
            if not ckpt_path.is_file():
                raise PrerequisiteError(f"chosen checkpoint missing: {ckpt_path}")
        try:
            scheme, scheme_origin = _resolve_scheme(cfg, run_dir)
        except PrerequisiteError:
            tps_path = run_dir / TPS_REPORT
            if not tps_path.is_file():
                raise
            scheme = read_json(tps_path)["config"]["scheme"]
            scheme_origin = "TPS report"
        state = load_checkpoint(ckpt_path)
        splits_a, splits_b, _ = _load_splits(cfg)
        testsets = {"A": splits_a["test"], "B": splits_b["test"]}
        log.info(
            "explain: run %s, checkpoint %s (%s), scheme %s (%s)",
            cfg.run_id,
            ckpt_path,
            origin,
            scheme,
            scheme_origin,
        )
        out = run_dir / "explain"
        rows = quant_table(state, testsets, tuple(cfg.psa["schemes"]))
        write_quant_csv(out / "quant.csv", rows)
        artifacts = {"quant": "explain/quant.csv"}
        n_heatmaps = 0
        for name, items in testsets.items():
            profile = padding_profile(items, scheme)
            write_profile_csv(out / f"profile_{name}.csv", profile)
            artifacts[f"profile_{name}"] = f"explain/profile_{name}.csv"
            samples = _gradcam_samples(items)
            gradcam_report(state, samples, scheme, out / f"gradcam_{name}")
            artifacts[f"gradcam_{name}"] = f"explain/gradcam_{name}/index.json"
            n_heatmaps += len(samples)
        update_manifest(run_dir, cfg.run_id, cfg.document, explain=artifacts)
        log.info("explain: wrote %d quant rows, %d heatmaps", len(rows), n_heatmaps)
    print(
        f"run {cfg.run_id}: explained {origin} checkpoint with scheme {scheme}: "
        f"{len(rows)} quant rows, {n_heatmaps} heatmaps under {out}"
    )
    return EXIT_OK


def _render_psa(doc: dict, lines: list[str]) -> None:
    chosen = doc.get("chosen") or {}
    lines.append("padding scheme search")
    lines.append(f"  {'scheme':<12} {'A mean±std':>16} {'B mean±std':>16} peak")
    for scheme in doc["config"]["schemes"]:
        agg = doc["aggregates"].get(scheme)
        if agg is None:
            continue
        mark = " *" if scheme == chosen.get("scheme") else ""
        lines.append(
            f"  {scheme:<12} "
            f"{agg['mean_A']:>8.2f} ± {agg['std_A']:<5.2f} "
            f"{agg['mean_B']:>8.2f} ± {agg['std_B']:<5.2f} "
            f"{agg['peak_run']:>4d}{mark}"
        )
    if chosen:
        lines.append(
            f"  chosen scheme: {chosen['scheme']} (run {chosen['run']})"
        )
    if "failed" in doc:
        lines.append(f"  FAILED: {doc['failed']['error']}")


def _render_tps(doc: dict, lines: list[str]) -> None:
    lines.append(f"training pathway search (scheme {doc['config']['scheme']})")
    for name in doc["config"]["models"]:
        aggs = doc["aggregates"].get(name)
        if aggs is None:
            continue
        chosen = (doc.get("chosen") or {}).get(name) or {}
        lines.append(f"  {name}")
        lines.append(
            f"    {'setting':<8} {'A mean±std':>16} {'B mean±std':>16} peak"
        )
        for setting in doc["config"]["settings"]:
            agg = aggs.get(setting)
            if agg is None:
                continue
            mark = " *" if setting == chosen.get("setting") else ""
            lines.append(
                f"    {setting:<8} "
                f"{agg['mean_A']:>8.2f} ± {agg['std_A']:<5.2f} "
                f"{agg['mean_B']:>8.2f} ± {agg['std_B']:<5.2f} "
                f"{agg['peak_run']:>4d}{mark}"
            )
        if chosen:
            lines.append(
                f"    chosen pathway: {chosen['setting']} (run {chosen['run']})"
            )
        else:
            lines.append("    no chosen pathway (needs at least two settings)")
    if "failed" in doc:
        lines.append(f"  FAILED: {doc['failed']['error']}")


def cmd_report(args) -> int:
    run_dir = Path(args.run_dir)
    try:
        manifest = read_manifest(run_dir)
    except FileNotFoundError as exc:
        raise PrerequisiteError(str(exc)) from exc
    artifacts = manifest.get("artifacts", {})
    lines = [f"run {manifest['run_id']}"]
    rendered = 0
    for key, renderer in (("psa_report", _render_psa), ("tps_report", _render_tps)):
        rel = artifacts.get(key)
        if rel is None:
            continue
        path = run_dir / rel
        if not path.is_file():
            raise PrerequisiteError(f"manifest names {rel} but it is missing")
        renderer(read_json(path), lines)
        rendered += 1
    if rendered == 0:
        raise PrerequisiteError(
            f"run {manifest['run_id']} has no search reports yet; run psa or tps"
        )
    print("\n".join(lines))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dcf",
        description=(
            "Two-stage search for models that stay accurate across a "
            "temporal drift: pick a padding scheme, then a training pathway."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, config=True):
        p = sub.add_parser(name, help=help_text)
        if config:
            p.add_argument("--config", required=True, help="run config JSON")
            p.add_argument(
                "--paper-scale",
                action="store_true",
                help="use full-scale inputs instead of the desk-scale default",
            )
        p.set_defaults(func=func)
        return p

    p = add("gen-data", cmd_gen_data, "generate the two drifting datasets")
    p.add_argument("--out", help="dataset directory (default <run_dir>/data)")
    add("psa", cmd_psa, "search padding schemes on dataset A backbones")
    p = add("tps", cmd_tps, "search training pathways with the chosen scheme")
    p.add_argument(
        "--settings",
        nargs="+",
        metavar="S",
        help="subset of settings to run (e.g. --settings 1 4)",
    )
    p = add("explain", cmd_explain, "quant table, padding profiles, heatmaps")
    p.add_argument("--checkpoint", help="explain this checkpoint instead")
    p = sub.add_parser("report", help="render stored search reports as tables")
    p.add_argument("--run-dir", required=True, help="run directory to render")
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PrerequisiteError as exc:
        print(f"missing prerequisite: {exc}", file=sys.stderr)
        return EXIT_PREREQUISITE
    except LockHeldError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except Exception as exc:  # noqa: BLE001 - the boundary maps everything
        traceback.print_exc(file=sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
