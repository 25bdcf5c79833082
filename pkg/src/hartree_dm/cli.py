"""``hartree-dm`` command line: ``run``, ``campaign`` and ``validate``."""

from __future__ import annotations

import argparse
import json
import sys

from . import runner


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hartree-dm", description="Mean-field density-matrix dynamics experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("run", "run the experiment described by a JSON config"),
        ("campaign", "run an inequality-campaign config"),
        ("validate", "check a config against the schema and build its scene"),
    ):
        p = sub.add_parser(name, help=text)
        p.add_argument("config", help="path to the JSON config")
        p.add_argument("--output-dir", default=None, help="where artifacts are written")
        p.add_argument("--seed-override", type=int, default=None, help="replace perturbation and campaign seeds")
        p.add_argument("--quiet", action="store_true", help="suppress the status line")
    return parser


def _config_failure(exc) -> int:
    print(json.dumps({"status": runner.EXIT_CONFIG, "reason": "config-error", "error": str(exc)}), file=sys.stderr)
    return runner.EXIT_CONFIG


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "validate":
            cfg = runner.prepare(args.config, args.seed_override)
            runner.build_scene(cfg)
            if not args.quiet:
                print(f"{args.config}: valid {cfg['experiment']} config")
            return runner.EXIT_OK
        expect = "inequality-campaign" if args.command == "campaign" else None
        result = runner.run(args.config, args.output_dir, args.seed_override, expect=expect)
    except runner.ConfigError as exc:
        return _config_failure(exc)
    if not args.quiet:
        stream = sys.stdout if result.status == runner.EXIT_OK else sys.stderr
        print(f"{result.summary['reason']}: artifacts in {result.output_dir}", file=stream)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
