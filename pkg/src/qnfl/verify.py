"""Monte-Carlo verification suites behind `qnfl verify`.

Each suite is a list of named checks comparing a sampled estimate against a
closed form (3 standard-error bands) or a distributional hypothesis (KS tests
at the 1 percent level).  Checks are deterministic given (samples, seed).

The variance and meangap suites deliberately report the published closed
forms next to the first-principles ones: the published forms fail for
r >= 2 and the suite says so rather than papering over it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats

from .haar import (
    analytic_moment,
    haar_probability_vector,
    haar_state,
    haar_unitary,
    orthonormal_haar_family,
)
from .learner import rho_metric, risk_closed_form, risk_monte_carlo, risk_trace_norm_form
from .rng import Rng
from .theory import (
    expected_mean_gap_sq,
    expected_shot_variance,
    mean_gap_sq_exact,
    packing_sample,
    projector_overlap_tail,
    shot_variance_exact,
    validate_packing,
)

SUITE_NAMES = ("haar", "dataset", "risk", "variance", "meangap", "packing", "concentration")


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    observed: float
    expected: float
    band: float
    detail: str = ""

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return (
            f"[{verdict}] {self.name}: observed={self.observed:.6g} "
            f"expected={self.expected:.6g} band={self.band:.3g}{extra}"
        )


class _Accumulator:
    """Streaming mean and standard error over value batches."""

    def __init__(self):
        self.n = 0
        self.total = 0.0
        self.total_sq = 0.0

    def add(self, values: np.ndarray) -> None:
        self.n += values.size
        self.total += float(values.sum())
        self.total_sq += float((values.astype(float) ** 2).sum())

    @property
    def mean(self) -> float:
        return self.total / self.n

    @property
    def se(self) -> float:
        var = max(0.0, self.total_sq / self.n - self.mean**2) * self.n / max(1, self.n - 1)
        return math.sqrt(var / self.n)


def _band_check(name: str, acc: _Accumulator, expected: float, detail: str = "") -> CheckResult:
    band = 3.0 * acc.se
    return CheckResult(
        name=name,
        passed=abs(acc.mean - expected) <= band,
        observed=acc.mean,
        expected=expected,
        band=band,
        detail=detail,
    )


def _hermitian(gen: np.random.Generator, d: int, traceless: bool = False) -> np.ndarray:
    g = gen.standard_normal((d, d)) + 1j * gen.standard_normal((d, d))
    h = (g + g.conj().T) / 2.0
    if traceless:
        h -= np.trace(h) / d * np.eye(d)
    return h


_BATCH = 20_000


def _batches(samples: int):
    done = 0
    while done < samples:
        k = min(_BATCH, samples - done)
        done += k
        yield k


def haar_suite(samples: int, seed: int) -> list[CheckResult]:
    results = []
    for d in (2, 4, 8):
        op_gen = Rng(seed).child("haar-operands", d).generator()
        a, b, c, e = (_hermitian(op_gen, d) for _ in range(4))
        a0 = _hermitian(op_gen, d, traceless=True)

        gen = Rng(seed).child("haar-mc", d).generator()
        acc1, acc2 = _Accumulator(), _Accumulator()
        for k in _batches(samples):
            w = haar_unitary(d, gen, size=k)
            wc = w.conj().swapaxes(1, 2)
            conj_a = w @ a @ wc
            conj_c = w @ c @ wc
            t_ab = np.einsum("kij,ji->k", conj_a, b).real
            t_cd = np.einsum("kij,ji->k", conj_c, e).real
            acc1.add(t_ab)
            acc2.add(t_ab * t_cd)
        results.append(_band_check(f"haar conj1 d={d}", acc1, analytic_moment("conj1", [a, b], d).real))
        results.append(_band_check(f"haar conj2 d={d}", acc2, analytic_moment("conj2", [a, b, c, e], d).real))

        acc3, acc4 = _Accumulator(), _Accumulator()
        for k in _batches(samples):
            phi = haar_state(d, gen, size=k)
            va = np.einsum("ki,ij,kj->k", phi.conj(), a, phi).real
            vb = np.einsum("ki,ij,kj->k", phi.conj(), b, phi).real
            acc3.add(va)
            acc4.add(va * vb)
        results.append(_band_check(f"haar state1 d={d}", acc3, analytic_moment("state1", [a], d).real))
        results.append(_band_check(f"haar state2 d={d}", acc4, analytic_moment("state2", [a, b], d).real))

        acc5 = _Accumulator()
        for k in _batches(samples):
            fam = orthonormal_haar_family(d, 2, gen, size=k)
            g1 = np.einsum("ki,ij,kj->k", fam[:, 0].conj(), a0, fam[:, 0]).real
            g2 = np.einsum("ki,ij,kj->k", fam[:, 1].conj(), a0, fam[:, 1]).real
            acc5.add(g1 * g2)
        results.append(_band_check(f"haar orth_pair d={d}", acc5, analytic_moment("orth_pair", [a0], d).real))

    # translation invariance: Tr(F W) and Tr(F G W) must be indistinguishable
    d = 4
    inv_gen = Rng(seed).child("haar-invariance").generator()
    f = inv_gen.standard_normal((d, d)) + 1j * inv_gen.standard_normal((d, d))
    g_fixed = haar_unitary(d, inv_gen)
    w1 = haar_unitary(d, inv_gen, size=min(samples, 100_000))
    w2 = haar_unitary(d, inv_gen, size=min(samples, 100_000))
    t1 = np.einsum("ij,kji->k", f, w1)
    t2 = np.einsum("ij,kji->k", f @ g_fixed, w2)
    for part, label in ((np.real, "re"), (np.imag, "im")):
        p = stats.ks_2samp(part(t1), part(t2)).pvalue
        results.append(
            CheckResult(
                name=f"haar invariance ks-{label} d={d}",
                passed=p > 0.01,
                observed=p,
                expected=1.0,
                band=0.01,
                detail="two-sample KS p-value, reject below 0.01",
            )
        )
    return results


def dataset_suite(samples: int, seed: int) -> list[CheckResult]:
    results = []
    gen = Rng(seed).child("dataset-support").generator()
    d, r = 8, 3
    hits = 0
    for k in _batches(samples):
        rows = np.tile(np.arange(d), (k, 1))
        gen.permuted(rows, axis=1, out=rows)
        hits += int((rows[:, :r] == 0).any(axis=1).sum())
    p_hat = hits / samples
    se = math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / samples)
    results.append(
        CheckResult(
            name=f"dataset support-inclusion d={d} r={r}",
            passed=abs(p_hat - r / d) <= 3 * se,
            observed=p_hat,
            expected=r / d,
            band=3 * se,
        )
    )

    gen = Rng(seed).child("dataset-weights").generator()
    r = 4
    w = haar_probability_vector(r, gen, size=samples)
    acc = _Accumulator()
    acc.add(w[:, 0] ** 2)
    results.append(_band_check(f"dataset weight second moment r={r}", acc, 2.0 / (r * (r + 1))))
    p = stats.kstest(w[:, 1], stats.beta(1, r - 1).cdf).pvalue
    results.append(
        CheckResult(
            name=f"dataset weight marginal beta(1,{r - 1}) ks",
            passed=p > 0.01,
            observed=p,
            expected=1.0,
            band=0.01,
            detail="one-sample KS p-value, reject below 0.01",
        )
    )

    # mean response of a fixed target over the entangled ensemble is 1/d
    gen = Rng(seed).child("dataset-response").generator()
    d, r = 4, 2
    acc = _Accumulator()
    for k in _batches(samples):
        weights = haar_probability_vector(r, gen, size=k)
        fam = orthonormal_haar_family(d, r, gen, size=k)
        u = (weights * np.abs(fam[:, :, 0]) ** 2).sum(axis=1)
        acc.add(u)
    results.append(_band_check(f"dataset mean response d={d} r={r}", acc, 1.0 / d))
    return results


def risk_suite(samples: int, seed: int) -> list[CheckResult]:
    results = []
    for i, d in enumerate((2, 4, 8)):
        pair_rng = Rng(seed).child("risk-pair", d, i)
        mu, nu = haar_state(d, pair_rng.generator(), size=2)
        closed = risk_closed_form(mu, nu)
        trace_route = risk_trace_norm_form(mu, nu)
        results.append(
            CheckResult(
                name=f"risk closed-form vs trace-norm d={d}",
                passed=abs(closed - trace_route) <= 1e-10,
                observed=trace_route,
                expected=closed,
                band=1e-10,
            )
        )
        est, se = risk_monte_carlo(mu, nu, samples, pair_rng.child("mc"))
        results.append(
            CheckResult(
                name=f"risk monte-carlo d={d}",
                passed=abs(est - closed) <= 3 * se,
                observed=est,
                expected=closed,
                band=3 * se,
            )
        )
    return results


def _response_moment_mc(d: int, r: int, samples: int, rng: Rng) -> tuple[_Accumulator, _Accumulator]:
    """Accumulators of u(1-u) and (u_mu - u_nu)^2 over the rank-r ensemble."""
    gen = rng.generator()
    var_acc, gap_acc = _Accumulator(), _Accumulator()
    for k in _batches(samples):
        weights = haar_probability_vector(r, gen, size=k)
        fam = orthonormal_haar_family(d, r, gen, size=k)
        u0 = (weights * np.abs(fam[:, :, 0]) ** 2).sum(axis=1)
        u1 = (weights * np.abs(fam[:, :, 1]) ** 2).sum(axis=1)
        var_acc.add(u0 * (1.0 - u0))
        gap_acc.add((u0 - u1) ** 2)
    return var_acc, gap_acc


def variance_suite(samples: int, seed: int) -> list[CheckResult]:
    results = []
    for d in (2, 4, 8):
        for r in sorted({1, 2, d}):
            acc, _ = _response_moment_mc(d, r, samples, Rng(seed).child("variance", d, r))
            results.append(
                _band_check(
                    f"variance published d={d} r={r}",
                    acc,
                    expected_shot_variance(d, r, 1),
                    detail="published closed form; wrong for r >= 2",
                )
            )
            results.append(
                _band_check(f"variance exact d={d} r={r}", acc, shot_variance_exact(d, r, 1))
            )
    return results


def meangap_suite(samples: int, seed: int) -> list[CheckResult]:
    results = []
    for d, r in ((4, 2), (8, 4)):
        mu = np.zeros(d, dtype=complex)
        nu = np.zeros(d, dtype=complex)
        mu[0] = 1.0
        nu[1] = 1.0
        rho = rho_metric(mu, nu)
        _, acc = _response_moment_mc(d, r, samples, Rng(seed).child("meangap", d, r))
        results.append(
            _band_check(
                f"meangap published d={d} r={r}",
                acc,
                expected_mean_gap_sq(rho, d, r),
                detail="published closed form; wrong for r >= 2",
            )
        )
        results.append(_band_check(f"meangap exact d={d} r={r}", acc, mean_gap_sq_exact(rho, d, r)))
    return results


def packing_suite(samples: int, seed: int) -> list[CheckResult]:
    results = []
    d, L, eps, gamma = 16, 10, 0.8, 2.5
    rng = Rng(seed).child("packing")
    runs = 100
    ok = 0
    replay_clean = True
    for i in range(runs):
        res = packing_sample(d, L, eps, gamma, rng.child(i), max_attempts=1)
        if res.success:
            ok += 1
            replay_clean &= not validate_packing(res.states, eps, gamma)
    rate = ok / runs
    results.append(
        CheckResult(
            name=f"packing success rate d={d} L={L}",
            passed=rate >= 0.9,
            observed=rate,
            expected=0.9,
            band=0.0,
            detail=f"window [{2 * eps}, {gamma * eps}] brackets the typical distance",
        )
    )
    results.append(
        CheckResult(
            name="packing postcondition replay",
            passed=replay_clean,
            observed=float(replay_clean),
            expected=1.0,
            band=0.0,
        )
    )
    impossible = packing_sample(8, 3, 1.2, 2.5, rng.child("impossible"))
    results.append(
        CheckResult(
            name="packing impossible window fails fast",
            passed=(not impossible.success) and impossible.attempts == 0,
            observed=float(impossible.attempts),
            expected=0.0,
            band=0.0,
            detail="lower edge above the trace-distance maximum",
        )
    )
    return results


def concentration_suite(samples: int, seed: int) -> list[CheckResult]:
    results = []
    d = 32
    for r in (1, 2, 3, 4):
        for t in (0.3, 0.5):
            est = projector_overlap_tail(d, r, r, t, samples, Rng(seed).child("tail", r, t))
            results.append(
                CheckResult(
                    name=f"concentration lower d={d} r1=r2={r} t={t}",
                    passed=est.lower <= est.lower_bound + 3 * est.lower_se,
                    observed=est.lower,
                    expected=est.lower_bound,
                    band=3 * est.lower_se,
                    detail="empirical tail must not exceed the bound",
                )
            )
            results.append(
                CheckResult(
                    name=f"concentration upper d={d} r1=r2={r} t={t}",
                    passed=est.upper <= est.upper_bound + 3 * est.upper_se,
                    observed=est.upper,
                    expected=est.upper_bound,
                    band=3 * est.upper_se,
                    detail="empirical tail must not exceed the bound",
                )
            )
    return results


_SUITES = {
    "haar": haar_suite,
    "dataset": dataset_suite,
    "risk": risk_suite,
    "variance": variance_suite,
    "meangap": meangap_suite,
    "packing": packing_suite,
    "concentration": concentration_suite,
}


def run_suite(suite: str, samples: int, seed: int) -> list[CheckResult]:
    """Run one named verification suite, or all of them."""
    if suite == "all":
        out = []
        for name in SUITE_NAMES:
            out.extend(_SUITES[name](samples, seed))
        return out
    if suite not in _SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {SUITE_NAMES + ('all',)}")
    return _SUITES[suite](samples, seed)
