"""Command-line entry point.

The CLI is a thin client over the service layer: every subcommand builds the
corresponding request model and dispatches it, in-process by default or to a
remote `qnfl serve` instance when --server is given.  Either way the bytes
written to disk are identical.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys
from pathlib import Path

from .service import models
from .service.app import HANDLERS
from .sweep import load_sweep_config

_RESPONSES = {
    "/bound": models.BoundResponse,
    "/trial": models.TrialResponse,
    "/sweep": models.CsvResponse,
    "/aggregate": models.CsvResponse,
    "/verify": models.VerifyResponse,
}


class LocalBackend:
    def post(self, path: str, request):
        _, handler = HANDLERS[path]
        return handler(request)


class HttpBackend:
    def __init__(self, base_url: str):
        self.base_url = base_url.rstrip("/")

    def post(self, path: str, request):
        import httpx

        resp = httpx.post(self.base_url + path, json=request.model_dump(mode="json"), timeout=None)
        if resp.status_code != 200:
            raise SystemExit(f"server error {resp.status_code}: {resp.text}")
        return _RESPONSES[path].model_validate(resp.json())


def _backend(args) -> LocalBackend | HttpBackend:
    return HttpBackend(args.server) if getattr(args, "server", None) else LocalBackend()


def _parse_m_arg(value: str):
    if value.strip().lower() in ("inf", "infinity"):
        return math.inf
    return int(value)


def _cmd_sweep(args) -> int:
    config = load_sweep_config(args.config)
    req = models.SweepRequest(
        n=config.n,
        r_list=list(config.r_list),
        m_list=list(config.m_list),
        N_list=list(config.N_list),
        ortho=config.ortho,
        trials_unitary=config.trials_unitary,
        trials_data=config.trials_data,
        candidate_shots_mode=config.candidate_shots_mode,
        master_seed=config.master_seed if args.seed is None else args.seed,
        jobs=config.jobs if args.jobs is None else args.jobs,
    )
    resp = _backend(args).post("/sweep", req)
    Path(args.out).write_text(resp.csv, encoding="utf-8")
    print(f"wrote {resp.rows} trial rows to {args.out}")
    return 0


def _cmd_aggregate(args) -> int:
    text = Path(args.infile).read_text(encoding="utf-8")
    resp = _backend(args).post("/aggregate", models.AggregateRequest(results_csv=text))
    Path(args.out).write_text(resp.csv, encoding="utf-8")
    print(f"wrote {resp.rows} summary rows to {args.out}")
    return 0


def _cmd_bound(args) -> int:
    req = models.BoundRequest(
        n=args.n,
        d=args.d,
        N=args.N,
        m=_parse_m_arg(args.m),
        r=args.r,
        eps_tilde=args.eps_tilde,
        gamma=args.gamma,
        log_multiplier=args.log_multiplier,
    )
    resp = _backend(args).post("/bound", req)
    print(f"d={resp.d} r={req.r} m={args.m} N={req.N} eps_tilde={req.eps_tilde}")
    print(f"formal lower bound    {resp.formal:.12g}")
    if resp.informal is not None:
        print(f"informal lower bound  {resp.informal:.12g}")
    print(f"ideal lower bound     {resp.ideal:.12g}")
    print(f"branch switch at m    {resp.branch_switch_m:.12g}")
    return 0


def _cmd_verify(args) -> int:
    req = models.VerifyRequest(suite=args.suite, samples=args.samples, seed=args.seed)
    resp = _backend(args).post("/verify", req)
    for check in resp.checks:
        print(
            f"[{'PASS' if check.passed else 'FAIL'}] {check.name}: "
            f"observed={check.observed:.6g} expected={check.expected:.6g} band={check.band:.3g}"
            + (f"  ({check.detail})" if check.detail else "")
        )
    n_fail = sum(not c.passed for c in resp.checks)
    print(f"{len(resp.checks) - n_fail}/{len(resp.checks)} checks passed")
    return 0 if resp.all_pass else 1


def _cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("qnfl.service.app:app", host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qnfl", description="no-free-lunch simulator and theory engine")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a trial sweep from a YAML config")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="results.csv")
    p.add_argument("--jobs", type=int, default=None, help="override the config's worker count")
    p.add_argument("--seed", type=int, default=None, help="override the config's master seed")
    p.add_argument("--server", default=None, help="dispatch to a running qnfl service instead of in-process")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("aggregate", help="summarize a results CSV per grid point")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", default="summary.csv")
    p.add_argument("--server", default=None)
    p.set_defaults(func=_cmd_aggregate)

    p = sub.add_parser("bound", help="evaluate the lower bounds at one parameter point")
    p.add_argument("--n", type=int, default=None, help="qubit count (d = 2^n)")
    p.add_argument("--d", type=int, default=None, help="dimension, if not a power of two")
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--m", default="inf")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--eps-tilde", type=float, default=0.15)
    p.add_argument("--gamma", type=float, default=4.0)
    p.add_argument("--log-multiplier", type=int, default=1, choices=(1, 16))
    p.add_argument("--server", default=None)
    p.set_defaults(func=_cmd_bound)

    p = sub.add_parser("verify", help="run Monte-Carlo verification suites")
    p.add_argument("--suite", default="all",
                   choices=("haar", "dataset", "risk", "variance", "meangap", "packing", "concentration", "all"))
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--server", default=None)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
