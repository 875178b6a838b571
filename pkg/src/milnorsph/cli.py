"""Command-line entry point: ``milnorsph verify | demo | report``.

Exit codes: 0 when every check passes, 1 when any check fails, 2 for
configuration errors (unknown suite or demo, bad config file, unwritable
output path).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import DEMOS, SUITES, ConfigError, RunConfig, build_config, load_config_file

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="milnorsph", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--seed", type=int, help=f"RNG seed (default {RunConfig.seed})")
        sp.add_argument("--config", help="key = value file; command-line flags override it")
        sp.add_argument("--out", help="output path (verify: report file; demo: directory)")
        sp.add_argument("--N", type=int, dest="N", help=f"circle grid size (default {RunConfig.N})")
        sp.add_argument("--segments", type=int, help=f"geodesic segments (default {RunConfig.segments})")

    v = sub.add_parser("verify", help="run a verification suite and write a JSON report")
    v.add_argument("suite", help="one of: " + ", ".join(SUITES))
    v.add_argument("--grid", type=int, help=f"Laplacian grid, step h = 1/grid (default {RunConfig.grid})")
    v.add_argument("--tol", type=float, help="factor applied to every tolerance (default 1)")
    v.add_argument("--h-curvature", type=float, dest="h_curvature",
                   help=f"curvature finite-difference step (default {RunConfig.h_curvature})")
    common(v)

    d = sub.add_parser("demo", help="run a named demo and write CSV + JSON")
    d.add_argument("name", help="one of: " + ", ".join(DEMOS))
    d.add_argument("--grid", type=int, help=argparse.SUPPRESS)
    common(d)

    r = sub.add_parser("report", help="summarize a JSON report; exit status reflects its verdict")
    r.add_argument("path")
    return p


def _config(args) -> RunConfig:
    file_values = load_config_file(args.config) if args.config else {}
    target = args.suite if args.command == "verify" else args.name
    keys = ("seed", "grid", "tol", "N", "segments", "h_curvature", "out")
    overrides = {k: getattr(args, k, None) for k in keys}
    return build_config(args.command, target, file_values, overrides)


def _write(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {path}: {exc}") from exc


def cmd_verify(cfg: RunConfig) -> int:
    from .suites import run_verify

    path = Path(cfg.out) if cfg.out else cfg.out_dir() / f"verify-{cfg.target}.json"
    # fail before computing if the destination cannot be written
    _write(path, "")
    rep = run_verify(cfg)
    _write(path, rep.to_json())
    _write(path.with_suffix(".timings.json"), rep.timings_json())
    for line in rep.summary_lines():
        print(line)
    n_fail = sum(not c.passed for c in rep.checks)
    print(f"{len(rep.checks) - n_fail}/{len(rep.checks)} checks passed; report written to {path}")
    return EXIT_OK if rep.passed else EXIT_FAIL


def cmd_demo(cfg: RunConfig) -> int:
    from .demos import run_demo

    out = Path(cfg.out) if cfg.out else cfg.out_dir() / f"demo-{cfg.target}"
    try:
        summary = run_demo(cfg, out)
    except OSError as exc:
        raise ConfigError(f"cannot write demo output under {out}: {exc}") from exc
    print(json.dumps(summary, indent=2, sort_keys=True))
    ok = summary.get("pass", True)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_report(path: str) -> int:
    try:
        data = json.loads(Path(path).read_text())
        entries = data["entries"]
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: cannot read report {path}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for e in entries:
        print(f"{'PASS' if e['pass'] else 'FAIL'}  {e['name']}: {e['value']} {e['relation']} {e['tolerance']}"
              f"  [{e['anchor']}]")
    return EXIT_OK if all(e["pass"] for e in entries) else EXIT_FAIL


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    if args.command == "report":
        return cmd_report(args.path)
    try:
        cfg = _config(args)
        return cmd_verify(cfg) if cfg.command == "verify" else cmd_demo(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
