"""Command-line client for the experiment harness.

Subcommands run in-process by default; ``--server URL`` proxies the
request to a running service instead, keeping this module a thin layer
over the package either way.

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from epimoo.errors import ConfigError, EpimooError
from epimoo.harness.config import build_config, load_config_file
from epimoo.harness.report import (
    format_summary_table,
    interval_grid,
    load_experiment,
    summarize_experiment,
    write_grid_csv,
    write_summary_csv,
)
from epimoo.harness.runner import protocol_summary, run_experiment
from epimoo.problems import suite_catalog

POLL_SECONDS = 1.0


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse usage errors are config errors (exit 1)
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="epimoo", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment (or --dry-run its protocol)")
    run.add_argument("--config", help="flat key=value config file")
    run.add_argument("--preset", choices=["desk", "paper"], help="scale preset")
    run.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    run.add_argument("--out", help="output directory (default experiments/<fingerprint>)")
    run.add_argument("--problems", help="comma-separated problem names")
    run.add_argument("--variants", help="comma-separated variants (baseline,e,eib,eip)")
    run.add_argument("--base-seed", type=int, dest="base_seed")
    run.add_argument("--common-seeds", action="store_true", default=None,
                     help="share run seeds across variants (paired-sample sensitivity)")
    run.add_argument("--dry-run", action="store_true", help="print protocol accounting and exit")
    run.add_argument("--server", help="submit to a running service instead of executing locally")

    report = sub.add_parser("report", help="summarize a finished experiment directory")
    report.add_argument("--in", dest="in_dir", help="experiment output directory")
    report.add_argument("--problem", help="emit the per-interval grid for this problem")
    report.add_argument("--server", help="fetch the report from a running service")
    report.add_argument("--experiment", help="experiment id (server mode)")

    lp = sub.add_parser("list-problems", help="print the benchmark catalog")
    lp.add_argument("--server", help="query a running service")

    serve = sub.add_parser("serve", help="start the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _csv_list(raw: str | None) -> tuple[str, ...] | None:
    if raw is None:
        return None
    return tuple(item.strip().lower() for item in raw.split(",") if item.strip())


def _config_from_args(args) -> "ExperimentConfig":
    file_values = load_config_file(args.config) if args.config else None
    overrides = {
        "problems": _csv_list(args.problems),
        "variants": _csv_list(args.variants),
        "base_seed": args.base_seed,
        "common_seeds": args.common_seeds,
    }
    return build_config(file_values=file_values, preset=args.preset, overrides=overrides)


def _print_summary(out_dir: Path) -> None:
    cfg, traces = load_experiment(out_dir)
    rows, tally = summarize_experiment(cfg, traces)
    write_summary_csv(rows, out_dir / "summary.csv")
    print(format_summary_table(rows, tally))


def _cmd_run(args) -> int:
    cfg = _config_from_args(args)
    if args.dry_run:
        print(json.dumps(protocol_summary(cfg), indent=2))
        return 0
    if args.server:
        return _cmd_run_remote(args, cfg)
    out_dir = Path(args.out) if args.out else Path("experiments") / cfg.fingerprint()

    def progress(record, done, total):
        print(
            f"[{done}/{total}] {record.cell} ({record.wall_seconds:.1f}s)",
            file=sys.stderr,
            flush=True,
        )

    run_experiment(cfg, out_dir, jobs=args.jobs, progress=progress)
    if "baseline" in cfg.variants and len(cfg.variants) > 1:
        _print_summary(out_dir)
    print(f"results in {out_dir}", file=sys.stderr)
    return 0


def _client(server: str):
    import httpx

    return httpx.Client(base_url=server, timeout=30.0)


def _request_body(cfg) -> dict:
    body = cfg.to_dict()
    body["problems"] = list(body["problems"])
    body["variants"] = list(body["variants"])
    return body


def _cmd_run_remote(args, cfg) -> int:
    with _client(args.server) as client:
        body = _request_body(cfg)
        if args.out:
            body["out_dir"] = args.out
        body["jobs"] = args.jobs
        accepted = _raise_for_status(client.post("/experiments", json=body)).json()
        experiment_id = accepted["experiment_id"]
        print(f"experiment {experiment_id} -> {accepted['out_dir']}", file=sys.stderr)
        while True:
            status = _raise_for_status(client.get(f"/experiments/{experiment_id}")).json()
            if status["status"] != "running":
                break
            print(
                f"  {status['completed_cells']}/{status['total_cells']} cells",
                file=sys.stderr,
                flush=True,
            )
            time.sleep(POLL_SECONDS)
        if status["status"] == "failed":
            raise EpimooError(f"experiment failed remotely: {status['error']}")
        summary = _raise_for_status(client.get(f"/experiments/{experiment_id}/summary")).json()
        _print_remote_summary(summary)
    return 0


def _raise_for_status(response):
    if response.status_code == 422:
        raise ConfigError(response.json().get("detail", response.text))
    if response.status_code >= 400:
        raise EpimooError(f"server error {response.status_code}: {response.text}")
    return response


def _print_remote_summary(summary: dict) -> None:
    rows = summary["rows"]
    tally = summary["tally"]
    print(format_summary_table(rows, tally))


def _cmd_report(args) -> int:
    if args.server:
        if not args.experiment:
            raise ConfigError("server mode needs --experiment <id>")
        with _client(args.server) as client:
            if args.problem:
                grid = _raise_for_status(
                    client.get(f"/experiments/{args.experiment}/grid/{args.problem}")
                ).json()
                _print_grid(grid["cells"])
            else:
                summary = _raise_for_status(
                    client.get(f"/experiments/{args.experiment}/summary")
                ).json()
                _print_remote_summary(summary)
        return 0
    if not args.in_dir:
        raise ConfigError("report needs --in <dir> (or --server)")
    out_dir = Path(args.in_dir)
    if args.problem:
        cfg, traces = load_experiment(out_dir)
        cells = interval_grid(cfg, traces, args.problem.lower())
        write_grid_csv(cells, out_dir / f"grid_{args.problem.lower()}.csv")
        _print_grid(cells)
        return 0
    _print_summary(out_dir)
    return 0


def _print_grid(cells: list[dict]) -> None:
    print("problem,category,variant,interval,gen_start,gen_end,pct_diff")
    for c in cells:
        print(
            f"{c['problem']},{c['category']},{c['variant']},{c['interval']},"
            f"{c['gen_start']},{c['gen_end']},{c['pct_diff']!r}"
        )


def _cmd_list_problems(args) -> int:
    if args.server:
        with _client(args.server) as client:
            infos = _raise_for_status(client.get("/problems")).json()
        print(f"{'name':<8} {'dim':>4} {'m':>3} {'category':>9}")
        for info in infos:
            print(f"{info['name']:<8} {info['dimension']:>4} {info['objectives']:>3} {info['category']:>9}")
        return 0
    print(f"{'name':<8} {'dim':>4} {'m':>3} {'category':>9}  bounds")
    for p in suite_catalog():
        bounds = (
            f"x1 in [{p.bounds_lower[0]:g}, {p.bounds_upper[0]:g}], "
            f"rest in [{p.bounds_lower[-1]:g}, {p.bounds_upper[-1]:g}]"
        )
        print(f"{p.name:<8} {p.dimension:>4} {p.n_objectives:>3} {p.category:>9}  {bounds}")
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from epimoo.service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


_COMMANDS = {
    "run": _cmd_run,
    "report": _cmd_report,
    "list-problems": _cmd_list_problems,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except EpimooError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except KeyboardInterrupt:
        return 2
    except Exception as exc:  # unexpected runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
