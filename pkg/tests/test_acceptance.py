"""End-to-end acceptance checks, one test per criterion.

Every test prints a [PASS]/[FAIL] line through the ``criteria`` fixture; the
lines are repeated in the terminal summary.  Statistical checks use 3
standard-error bands; runtime-limited checks assert wall-clock budgets.

Two criteria (the variance formula and the mean-gap formula) assert the
published closed forms for r >= 2.  Those forms do not match the sampling
construction they describe — see expected_shot_variance / expected_mean_gap_sq
for the derivation notes and shot_variance_exact / mean_gap_sq_exact for the
first-principles values the sampler does reproduce — so the two tests fail,
deliberately: the discrepancy is real and is reported, not patched over.
"""

import math
import time

import numpy as np
from scipy import optimize

from qnfl.haar import (
    analytic_moment,
    haar_probability_vector,
    haar_state,
    haar_unitary,
    orthonormal_haar_family,
)
from qnfl.learner import rho_metric, risk_closed_form, risk_monte_carlo
from qnfl.rng import Rng
from qnfl.sweep import SweepConfig, aggregate_csv, records_to_csv, run_sweep
from qnfl.theory import (
    BoundInput,
    admissible_eps_interval,
    expected_mean_gap_sq,
    expected_shot_variance,
    formal_branch_switch_m,
    ideal_nfl_bound,
    nfl_bound_formal,
    nfl_bound_informal,
    projector_overlap_tail,
)

JOBS = 8


def _hermitian(gen, d, traceless=False):
    g = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    h = (g + g.conj().T) / 2
    if traceless:
        h -= np.trace(h) / d * np.eye(d)
    return h


def _within(mean, se, expected):
    return bool(abs(mean - expected) <= 3 * se)


def _mean_se(values):
    return float(values.mean()), float(values.std(ddof=1) / math.sqrt(values.size))


def test_haar_moment_suite(criteria):
    start = time.monotonic()
    samples = 100_000
    failures = []
    for d in (2, 4, 8):
        ops = Rng(100, d).generator()
        a, b, c, e = (_hermitian(ops, d) for _ in range(4))
        a0 = _hermitian(ops, d, traceless=True)
        gen = Rng(101, d).generator()

        w = haar_unitary(d, gen, size=samples)
        wc = w.conj().swapaxes(1, 2)
        t_ab = np.einsum("kij,ji->k", w @ a @ wc, b).real
        t_ce = np.einsum("kij,ji->k", w @ c @ wc, e).real
        phi = haar_state(d, gen, size=samples)
        va = np.einsum("ki,ij,kj->k", phi.conj(), a, phi).real
        vb = np.einsum("ki,ij,kj->k", phi.conj(), b, phi).real
        fam = orthonormal_haar_family(d, 2, gen, size=samples)
        g1 = np.einsum("ki,ij,kj->k", fam[:, 0].conj(), a0, fam[:, 0]).real
        g2 = np.einsum("ki,ij,kj->k", fam[:, 1].conj(), a0, fam[:, 1]).real

        cases = [
            ("conj1", t_ab, analytic_moment("conj1", [a, b], d)),
            ("conj2", t_ab * t_ce, analytic_moment("conj2", [a, b, c, e], d)),
            ("state1", va, analytic_moment("state1", [a], d)),
            ("state2", va * vb, analytic_moment("state2", [a, b], d)),
            ("orth_pair", g1 * g2, analytic_moment("orth_pair", [a0], d)),
        ]
        for kind, values, expected in cases:
            mean, se = _mean_se(values)
            if not _within(mean, se, expected.real):
                failures.append(f"{kind}@d={d}")
    elapsed = time.monotonic() - start
    ok = not failures and elapsed < 120
    assert criteria.record(
        "haar-moment suite",
        ok,
        f"15 moment checks at d in {{2,4,8}}, {samples} samples, 3 SE bands; "
        f"failures={failures or 'none'}; elapsed {elapsed:.1f}s < 120s",
    )


def test_risk_equivalence(criteria):
    start = time.monotonic()
    samples = 1_000_000
    worst = 0.0
    failures = 0
    for d in (2, 4, 8):
        gen = Rng(102, d).generator()
        o = np.zeros(d, dtype=complex)
        o[0] = 1.0
        for _ in range(20):
            mu = haar_unitary(d, gen).conj().T @ o
            nu = haar_unitary(d, gen).conj().T @ o
            est, se = risk_monte_carlo(mu, nu, samples, gen)
            dev = abs(est - risk_closed_form(mu, nu)) / se
            worst = max(worst, dev)
            failures += dev > 3
    elapsed = time.monotonic() - start
    ok = failures == 0 and elapsed < 300
    assert criteria.record(
        "risk equivalence",
        ok,
        f"60 (U,V) pairs, {samples} samples each, worst deviation {worst:.2f} SE; "
        f"elapsed {elapsed:.1f}s < 300s",
    )


def _response_samples(d, r, samples, seed, targets):
    """Responses of fixed targets on rank-r Haar training states, batched."""
    gen = Rng(seed).child(d, r).generator()
    out = [np.empty(samples) for _ in targets]
    done = 0
    while done < samples:
        k = min(20_000, samples - done)
        weights = haar_probability_vector(r, gen, size=k)
        xi = orthonormal_haar_family(d, r, gen, size=k)
        for t, buf in zip(targets, out):
            overlaps = np.abs(np.einsum("bkd,d->bk", xi, np.conj(t))) ** 2
            buf[done : done + k] = (weights * overlaps).sum(axis=1)
        done += k
    return out


def test_variance_formula(criteria):
    samples = 200_000
    lines = []
    ok = True
    for d, r in ((4, 1), (4, 2), (8, 4)):
        target = haar_state(d, Rng(103).child(d, r))
        (u,) = _response_samples(d, r, samples, 104, [target])
        mean, se = _mean_se(u * (1 - u))
        expected = expected_shot_variance(d, r, 1)
        good = _within(mean, se, expected)
        ok &= good
        lines.append(f"(d={d},r={r}) off by {abs(mean - expected) / se:.1f} SE")
    assert criteria.record(
        "variance formula",
        ok,
        f"E[u(1-u)] vs (dr-1)/(rd(d+1)) at {samples} samples: " + "; ".join(lines),
    )


def test_mean_gap_formula(criteria):
    samples = 200_000
    lines = []
    ok = True
    for d, r in ((4, 2), (8, 4)):
        mu, nu = np.eye(d)[0], np.eye(d)[1]
        rho = rho_metric(mu, nu)
        u_mu, u_nu = _response_samples(d, r, samples, 105, [mu, nu])
        mean, se = _mean_se((u_mu - u_nu) ** 2)
        expected = expected_mean_gap_sq(rho, d, r)
        good = _within(mean, se, expected)
        ok &= good
        lines.append(f"(d={d},r={r}) off by {abs(mean - expected) / se:.1f} SE")
    assert criteria.record(
        "mean-gap formula",
        ok,
        f"E[(u_mu-u_nu)^2] vs 2rho^2/(r+1)-(r-1)/((r+1)d(d^2-1)) at {samples} samples: "
        + "; ".join(lines),
    )


def _summary_table(config):
    text = aggregate_csv(records_to_csv(run_sweep(config, jobs=JOBS)))
    rows = {}
    for line in text.splitlines()[1:]:
        f = line.split(",")
        key = (int(f[2]), math.inf if f[3] == "inf" else int(f[3]), int(f[4]))
        rows[key] = (float(f[9]), float(f[10]))  # mean, stderr of normalized error
    return rows


def test_transition_phenomenon(criteria):
    start = time.monotonic()
    trials = 2000
    config = SweepConfig(
        n=4,
        r_list=tuple(range(1, 17)),
        m_list=(10, 20000),
        N_list=(8,),
        trials_unitary=50,
        trials_data=40,
        master_seed=0,
    )
    rows = _summary_table(config)
    elapsed = time.monotonic() - start

    # (i) plentiful shots: full entanglement beats rank 1 decisively
    lo_r1, se_r1 = rows[(1, 20000, 8)]
    lo_r16, se_r16 = rows[(16, 20000, 8)]
    sep_large_m = (lo_r1 - lo_r16) / math.sqrt(se_r1**2 + se_r16**2)
    cond_large_m = lo_r16 <= lo_r1 - 3 * math.sqrt(se_r1**2 + se_r16**2)

    # (ii) scarce shots: the error dips at small r > 1 and rises again at r = 16
    profile = {r: rows[(r, 10, 8)] for r in range(1, 17)}
    r_star = min(profile, key=lambda r: profile[r][0])
    best, se_best = profile[r_star]
    hi_r16, se_hi16 = profile[16]
    rise = (hi_r16 - best) / math.sqrt(se_best**2 + se_hi16**2)
    cond_small_m = 2 <= r_star <= 6 and hi_r16 >= best + 3 * math.sqrt(se_best**2 + se_hi16**2)

    ok = cond_large_m and cond_small_m and elapsed < 600
    assert criteria.record(
        "transition phenomenon",
        ok,
        f"{trials} trials/point, n=4, N=8; m=20000: err(r=16)={lo_r16:.3f} vs err(r=1)={lo_r1:.3f} "
        f"({sep_large_m:.0f} SE); m=10: minimizer r*={r_star}, err(r=16)-err(r*)={hi_r16 - best:.3f} "
        f"({rise:.0f} SE); elapsed {elapsed:.0f}s < 600s",
    )


def test_orthogonal_family_exactness(criteria):
    total = errors = 0
    for r, N in ((1, 16), (2, 8), (4, 4), (8, 2), (16, 1)):
        config = SweepConfig(
            n=4, r_list=(r,), m_list=(math.inf,), N_list=(N,),
            ortho=True, trials_unitary=40, trials_data=50, master_seed=1,
        )
        records = run_sweep(config, jobs=1)
        total += len(records)
        errors += sum(rec.error_indicator for rec in records)
    ok = total == 10_000 and errors == 0
    assert criteria.record(
        "orthogonal-family exactness",
        ok,
        f"rN=16, infinite shots: {total - errors}/{total} trials exact",
    )


def test_n_monotonicity(criteria):
    config = SweepConfig(
        n=4, r_list=(1,), m_list=(math.inf,), N_list=(1, 2, 4, 8, 16),
        trials_unitary=100, trials_data=100, master_seed=2,
    )
    rows = _summary_table(config)
    means = [rows[(1, math.inf, N)][0] for N in (1, 2, 4, 8, 16)]
    ok = all(a >= b for a, b in zip(means, means[1:]))
    assert criteria.record(
        "N-monotonicity",
        ok,
        "mean error over N in {1,2,4,8,16} at 10^4 trials each: "
        + " >= ".join(f"{v:.3f}" for v in means),
    )


def test_bound_evaluators(criteria):
    exact_ok = ideal_nfl_bound(16, 16, 1) == 0.0 and ideal_nfl_bound(16, 1, 1) == 0.9375

    switch_ok = True
    for d, r, L in ((128, 1, 1), (16, 3, 1), (64, 2, 16)):
        inp = BoundInput(d=d, N=1, m=0, r=r, log_multiplier=L)
        e, g = inp.eps_tilde, inp.gamma
        root = optimize.brentq(
            lambda m: 8 * g * g * m * e * e / ((d + 1) * r) - L * r * math.log2(d),
            0.0, 1e12, xtol=1e-12, rtol=1e-15,
        )
        switch = formal_branch_switch_m(inp)
        switch_ok &= abs(switch - root) <= 1e-10 * abs(root)

    gen = Rng(106).generator()
    lo, hi = admissible_eps_interval(4.0)
    negatives = 0
    for _ in range(10_000):
        n = int(gen.integers(1, 9))
        d = 2**n
        r = int(gen.integers(1, d + 1))
        N = int(gen.integers(0, 21))
        m = math.inf if gen.random() < 0.2 else int(gen.integers(0, 10**6))
        eps = float(gen.uniform(lo + 1e-9, hi - 1e-9))
        L = 16 if gen.random() < 0.5 else 1
        inp = BoundInput(d=d, N=N, m=m, r=r, eps_tilde=eps, log_multiplier=L)
        values = (
            nfl_bound_formal(inp),
            nfl_bound_informal(n, N, m, r, eps),
            ideal_nfl_bound(d, r, N),
        )
        negatives += any(v < 0 or not math.isfinite(v) for v in values)

    ok = exact_ok and switch_ok and negatives == 0
    assert criteria.record(
        "bound evaluators",
        ok,
        f"ideal values exact: {exact_ok}; branch switch matches root-finding to 10 digits: "
        f"{switch_ok}; negatives on 10^4-point random grid: {negatives}",
    )


def test_concentration_tails(criteria):
    samples = 20_000
    worst = ""
    ok = True
    for r in (1, 2, 3, 4):
        for t in (0.3, 0.5):
            est = projector_overlap_tail(32, r, r, t, samples, Rng(107).child(r, int(10 * t)))
            good = (
                est.lower <= est.lower_bound + 3 * est.lower_se
                and est.upper <= est.upper_bound + 3 * est.upper_se
            )
            if not good:
                ok = False
                worst += f" (r={r},t={t})"
    assert criteria.record(
        "concentration tails",
        ok,
        f"d=32, r1=r2 in 1..4, t in {{0.3,0.5}}, {samples} samples: "
        + ("all tails within exponential bounds" if ok else f"violations at{worst}"),
    )


def test_determinism(criteria):
    config = SweepConfig(
        n=3, r_list=(2, 4), m_list=(20,), N_list=(2,),
        trials_unitary=5, trials_data=5, master_seed=3,
    )
    serial = records_to_csv(run_sweep(config, jobs=1))
    parallel = records_to_csv(run_sweep(config, jobs=8))
    ok = serial == parallel
    assert criteria.record(
        "determinism",
        ok,
        f"2-grid-point sweep, jobs in {{1,8}}: CSVs byte-identical={ok} "
        f"({len(serial)} bytes)",
    )
