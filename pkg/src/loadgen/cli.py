"""Command-line client for the pipeline.

Subcommands mirror the service endpoints (simulate, prep, train,
generate, evaluate) plus ``serve`` to start the HTTP service. By default
stages run in-process; pass --server to send them to a running service
instead. Failures print one machine-readable JSON line to stderr and
exit nonzero.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from loadgen.client import HttpRunner, LocalRunner
from loadgen.config import RunConfig, load_run_config
from loadgen.errors import ConfigError, LoadgenError


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loadgen", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--config", type=Path, help="JSON run-config file")
        p.add_argument("--seed", type=int, help="override the master seed")
        p.add_argument("--out", type=Path, help="override the working directory")
        p.add_argument("--server", help="base URL of a running service (default: in-process)")

    for name in ("simulate", "prep", "train", "evaluate"):
        add_common(sub.add_parser(name))

    gen = sub.add_parser("generate")
    add_common(gen)
    gen.add_argument(
        "--mode", default="match-training",
        help="match-training | class-sample:<small|medium|large>",
    )
    gen.add_argument("--noise", choices=["on", "off"], default="on")

    serve = sub.add_parser("serve")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    config = load_run_config(args.config) if args.config else RunConfig()
    updates = {}
    if args.seed is not None:
        if args.seed < 0:
            raise ConfigError("--seed must be a non-negative integer")
        updates["master_seed"] = args.seed
    if args.out is not None:
        updates["workdir"] = args.out
    return config.model_copy(update=updates) if updates else config


def _run(args: argparse.Namespace) -> int:
    runner = HttpRunner(args.server) if args.server else LocalRunner()
    config = resolve_config(args)
    if args.command == "simulate":
        r = runner.simulate(config)
        print(f"simulated {r.rows} rows for {r.users} users -> {r.path}")
        print(f"sha256 {r.sha256}")
    elif args.command == "prep":
        r = runner.prep(config)
        print(
            f"{r.users_retained} users remained "
            f"({r.users_dropped_over_limit} over the intensity limit, "
            f"{r.users_excluded_all_zero} all-zero); "
            f"{r.train_profiles} train / {r.test_profiles} test profiles -> {r.path}"
        )
        if r.days_dropped or r.malformed_rows:
            print(f"dropped {r.days_dropped} incomplete days, {r.malformed_rows} malformed rows")
    elif args.command == "train":
        r = runner.train(config)
        print(f"trained {r.epochs} epochs -> {r.checkpoint_path}")
        if r.final_train_total is not None:
            print(
                f"final total loss: train {r.final_train_total:.5f} / "
                f"test {r.final_test_total:.5f} (history: {r.history_path})"
            )
    elif args.command == "generate":
        r = runner.generate(config, mode=args.mode, noise=args.noise == "on")
        print(f"generated {r.count} profiles ({r.label}, mode={r.mode}) -> {r.path}")
    elif args.command == "evaluate":
        r = runner.evaluate(config)
        print(f"evaluation reports in {r.report_dir}:")
        for path in r.files:
            print(f"  {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        uvicorn.run("loadgen.service.app:app", host=args.host, port=args.port)
        return 0
    try:
        return _run(args)
    except LoadgenError as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
