"""FastAPI wrapper around the core engine.

Handlers are plain functions over the pydantic models; the FastAPI routes and
the CLI's in-process backend both call them, so the two dispatch paths cannot
drift apart.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException

from .. import __version__
from ..learner import run_trial
from ..rng import Rng
from ..sweep import (
    SweepConfig,
    aggregate_csv,
    records_to_csv,
    run_sweep,
)
from ..theory import (
    BoundInput,
    formal_branch_switch_m,
    ideal_nfl_bound,
    nfl_bound_formal,
    nfl_bound_informal,
)
from ..verify import run_suite
from . import models


def handle_bound(req: models.BoundRequest) -> models.BoundResponse:
    inp = BoundInput(
        d=req.d,
        N=req.N,
        m=req.m,
        r=req.r,
        eps_tilde=req.eps_tilde,
        gamma=req.gamma,
        log_multiplier=req.log_multiplier,
    )
    informal = None
    if req.n is not None and req.gamma == 4.0:
        informal = nfl_bound_informal(req.n, req.N, req.m, req.r, req.eps_tilde)
    return models.BoundResponse(
        d=req.d,
        n=req.n,
        formal=nfl_bound_formal(inp),
        informal=informal,
        ideal=ideal_nfl_bound(req.d, req.r, req.N),
        branch_switch_m=formal_branch_switch_m(inp),
    )


def handle_trial(req: models.TrialRequest) -> models.TrialResponse:
    from ..learner import TrialConfig
    from ..sweep import _m_label

    candidate_shots = math.inf if req.candidate_shots_mode == "exact" else None
    config = TrialConfig(n=req.n, r=req.r, m=req.m, N=req.N, ortho=req.ortho, candidate_shots=candidate_shots)
    master = Rng(req.master_seed)
    label_m = _m_label(config.m)
    target_rng = master.child("target", req.r, label_m, req.N, req.ortho, req.trial_u)
    data_rng = master.child("trial", req.r, label_m, req.N, req.ortho, req.trial_u, req.trial_d)
    rec = run_trial(config, data_rng, target_rng=target_rng, trial_u=req.trial_u, trial_d=req.trial_d)
    return models.TrialResponse(
        n=rec.n, d=rec.d, r=rec.r, m=label_m, N=rec.N, ortho=rec.ortho,
        trial_u=rec.trial_u, trial_d=rec.trial_d, k_star=rec.k_star, k_hat=rec.k_hat,
        error_indicator=rec.error_indicator, risk=rec.risk,
        normalized_error=rec.normalized_error, seed_hash=rec.seed_hash,
    )


def handle_sweep(req: models.SweepRequest) -> models.CsvResponse:
    config = SweepConfig(
        n=req.n,
        r_list=tuple(req.r_list),
        m_list=tuple(req.m_list),
        N_list=tuple(req.N_list),
        ortho=req.ortho,
        trials_unitary=req.trials_unitary,
        trials_data=req.trials_data,
        candidate_shots_mode=req.candidate_shots_mode,
        master_seed=req.master_seed,
        jobs=req.jobs,
    )
    records = run_sweep(config)
    return models.CsvResponse(csv=records_to_csv(records), rows=len(records))


def handle_aggregate(req: models.AggregateRequest) -> models.CsvResponse:
    text = aggregate_csv(req.results_csv)
    return models.CsvResponse(csv=text, rows=max(0, text.count("\n") - 1))


def handle_verify(req: models.VerifyRequest) -> models.VerifyResponse:
    checks = run_suite(req.suite, req.samples, req.seed)
    return models.VerifyResponse(
        suite=req.suite,
        samples=req.samples,
        seed=req.seed,
        all_pass=all(c.passed for c in checks),
        checks=[
            models.CheckModel(
                name=c.name, passed=c.passed, observed=c.observed,
                expected=c.expected, band=c.band, detail=c.detail,
            )
            for c in checks
        ],
    )


HANDLERS = {
    "/bound": (models.BoundRequest, handle_bound),
    "/trial": (models.TrialRequest, handle_trial),
    "/sweep": (models.SweepRequest, handle_sweep),
    "/aggregate": (models.AggregateRequest, handle_aggregate),
    "/verify": (models.VerifyRequest, handle_verify),
}

app = FastAPI(title="qnfl", version=__version__)


def _wrap(handler, req):
    try:
        return handler(req)
    except ValueError as exc:
        raise HTTPException(status_code=400, detail=str(exc)) from exc


@app.get("/health", response_model=models.HealthResponse)
def health() -> models.HealthResponse:
    return models.HealthResponse(status="ok", version=__version__)


@app.post("/bound", response_model=models.BoundResponse)
def bound(req: models.BoundRequest) -> models.BoundResponse:
    return _wrap(handle_bound, req)


@app.post("/trial", response_model=models.TrialResponse)
def trial(req: models.TrialRequest) -> models.TrialResponse:
    return _wrap(handle_trial, req)


@app.post("/sweep", response_model=models.CsvResponse)
def sweep(req: models.SweepRequest) -> models.CsvResponse:
    return _wrap(handle_sweep, req)


@app.post("/aggregate", response_model=models.CsvResponse)
def aggregate(req: models.AggregateRequest) -> models.CsvResponse:
    return _wrap(handle_aggregate, req)


@app.post("/verify", response_model=models.VerifyResponse)
def verify(req: models.VerifyRequest) -> models.VerifyResponse:
    return _wrap(handle_verify, req)
