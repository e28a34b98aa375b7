"""Experiment orchestration: the determinant comparison and the identity checks."""

from __future__ import annotations

import itertools
import random
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import combinatorics as comb
from ..asymptotics import (
    DEFAULT_BASIS,
    epsilon_C,
    fit_expansion,
    predicted_cor4,
    residues_fit,
)
from ..fourier import TrigPoly, szego_pairing, trig_exp, trig_product, trig_quotient
from ..matfunc import central_log_block, logdet_lu
from ..operator import build_psdo, nonzero_blocks, pi_traces, trace_identity_sides, truncate, verify_commutation
from .config import ExperimentConfig
from .expr import parse_symbol_expr

VERIFY_KINDS = ("hd", "ghd", "bst", "rw", "trace-identity", "commutation")
TRACE_IDENTITY_RTOL = 1e-12


@dataclass
class Report:
    """Measured and predicted coefficients of ``log det P_n B P_n``.

    ``points`` holds one row per ``n`` (the CSV rows); ``coefficients`` maps each
    basis label to ``{"measured", "predicted", "delta"}``, with ``measured`` and
    ``delta`` set to ``None`` for labels the fit does not cover.
    """

    config: dict
    points: list[dict]
    coefficients: dict[str, dict]
    diagnostics: dict

    def measured(self, label: str) -> float:
        return self.coefficients[label]["measured"]

    def predicted(self, label: str) -> float:
        return self.coefficients[label]["predicted"]

    def delta(self, label: str) -> float:
        return self.coefficients[label]["delta"]


@dataclass
class VerifyReport:
    kind: str
    seed: int
    checked: int
    counterexamples: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.counterexamples


def materialize_symbols(cfg: ExperimentConfig) -> tuple[TrigPoly, TrigPoly, TrigPoly]:
    """``(log b0, b0, bsub)`` from the configured expressions."""
    log_b0 = parse_symbol_expr(cfg.log_b0)
    b0 = trig_exp(log_b0)
    bsub = parse_symbol_expr(cfg.bsub)
    if cfg.bsub_form == "ratio":
        bsub = trig_product(bsub, b0)
    return log_b0, b0, bsub


def _residue_k_min(cfg: ExperimentConfig, k_max: int) -> int:
    if cfg.residue_k_min is not None:
        return cfg.residue_k_min
    need = 2 * (cfg.residue_L + 1)
    return max(1, min(k_max // 8, k_max - 4 * need + 1))


def run_szego_experiment(cfg: ExperimentConfig) -> Report:
    """Compare measured ``log det P_n B P_n`` with its predicted four-term expansion.

    ``log B`` is formed once at ``N = max(n) + buffer`` and its central block
    supplies both the diagonal sums ``Tr P_n log(B) P_n`` and the samples
    ``Tr(pi_k log B)`` from which the residues and ``C(log B)`` are taken.
    """
    log_b0, b0, bsub = materialize_symbols(cfg)
    ns = np.asarray(cfg.n_grid)
    n_max = int(ns[-1])

    B = build_psdo(b0, bsub, n_max)
    logdets = []
    min_pivot, max_cond = np.inf, 0.0
    for n in ns:
        res = logdet_lu(truncate(B, int(n)))
        logdets.append(res.value.real)
        min_pivot = min(min_pivot, res.min_pivot)
        max_cond = max(max_cond, res.condition)
    logdets = np.array(logdets)

    block = central_log_block(b0, bsub, n_max, cfg.buffer, cfg.series_tol, cfg.drift_check)
    traces = pi_traces(block.block).real
    cumulative = np.cumsum(traces)
    trace_log = cumulative[ns]

    ks = np.arange(1, n_max + 1)
    k_min = _residue_k_min(cfg, n_max)
    sel = ks >= k_min
    residues = residues_fit(ks[sel], traces[1:][sel], 1, cfg.residue_L)
    eps = epsilon_C(ks, traces[1:], residues, float(traces[0]))
    predicted = predicted_cor4(log_b0, bsub, eps.C, residues, b0=b0)

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fit = fit_expansion(ns, logdets, DEFAULT_BASIS)
    predicted_total = predicted.evaluate(ns)
    residual = logdets - predicted_total

    # the one-dimensional theorem: log det - Tr P_n log(B) P_n - pairing terms = O(1/n^2)
    q = trig_quotient(bsub, b0)
    pairing = szego_pairing(log_b0, log_b0).real
    pairing_sub = szego_pairing(log_b0, q).real
    theorem_residual = logdets - trace_log - pairing - pairing_sub / ns

    points = [
        {
            "n": int(n),
            "logdet_measured": float(ld),
            "trace_log_measured": float(tl),
            "predicted_total": float(pt),
            "residual": float(r),
            "theorem_residual": float(tr),
        }
        for n, ld, tl, pt, r, tr in zip(ns, logdets, trace_log, predicted_total, residual, theorem_residual)
    ]
    coefficients = {}
    for label in predicted.labels():
        m = fit.coefficients.get(label)
        p = predicted[label]
        coefficients[label] = {
            "measured": m,
            "predicted": float(p),
            "delta": None if m is None else float(m - p),
        }
    diagnostics = {
        "fit_condition": fit.condition,
        "fit_max_residual_n2": fit.max_residual_n2,
        "prediction_max_residual_n2": float(np.max(np.abs(residual) * ns**2)),
        "theorem_max_residual_n2": float(np.max(np.abs(theorem_residual) * ns**2)),
        "residues": list(residues.values),
        "residue_fit_residual": residues.residual,
        "residue_condition": residues.condition,
        "residue_k_min": k_min,
        "C_logB": eps.C,
        "C_tail_bound": eps.tail_bound,
        "eps_decade_ratio": eps.decade_ratio,
        "zeta_tail": predicted.zeta_tail,
        "log_series_terms": block.terms,
        "log_series_tail": block.tail,
        "log_block_buffer": block.buffer,
        "log_block_drift": block.drift,
        "logdet_min_pivot": float(min_pivot),
        "logdet_max_condition": float(max_cond),
        "symbol_tail": b0.tail,
        "residue_alternatives": dict(predicted.notes),
        "warnings": sorted({str(w.message) for w in caught}),
    }
    return Report(cfg.as_dict(), points, coefficients, diagnostics)


# ---------------------------------------------------------------- verification


def _random_rationals(rng: random.Random, m: int, num: int = 6, den: int = 4) -> list[Fraction]:
    return [Fraction(rng.randint(-num, num), rng.randint(1, den)) for _ in range(m)]


def _fmt_vec(a) -> str:
    return "[" + ", ".join(str(x) for x in a) + "]"


def _verify_hd(rng, caps, report):
    for m in range(1, caps.get("m_max", 8) + 1):
        trials = caps.get("trials", 20) if m <= 6 else caps.get("large_trials", 3)
        for _ in range(trials):
            a = _random_rationals(rng, m)
            lhs, rhs = comb.hd_sides(a, cap=caps.get("cap", comb.DEFAULT_CAP))
            report.checked += 1
            if lhs != rhs:
                report.counterexamples.append(f"hd a={_fmt_vec(a)}: {lhs} != {rhs}")


def _verify_ghd(rng, caps, report):
    radius = caps.get("radius", 3)
    for m in range(1, caps.get("exhaustive_m", 3) + 1):
        for a in itertools.product(range(-radius, radius + 1), repeat=m):
            for n in range(1, caps.get("exhaustive_n", 3) + 1):
                report.checked += 1
                lhs, rhs = comb.ghd_lhs(a, n), comb.ghd_rhs(a, n)
                if lhs != rhs:
                    report.counterexamples.append(f"ghd a={_fmt_vec(a)} n={n}: {lhs} != {rhs}")
    for _ in range(caps.get("trials", 100)):
        m = rng.randint(1, caps.get("m_max", 6))
        n = rng.randint(1, caps.get("n_max", 3))
        a = _random_rationals(rng, m)
        report.checked += 1
        lhs, rhs = comb.ghd_lhs(a, n), comb.ghd_rhs(a, n)
        if lhs != rhs:
            report.counterexamples.append(f"ghd a={_fmt_vec(a)} n={n}: {lhs} != {rhs}")


def _verify_bst(rng, caps, report):
    for _ in range(caps.get("trials", 50)):
        a = _random_rationals(rng, rng.randint(1, caps.get("m_max", 7)))
        left, right = comb.bst_multisets(a)
        report.checked += 1
        if left != right:
            report.counterexamples.append(f"bst a={_fmt_vec(a)}")


def walk_law_grid(count: int = 20, seed: int = 0) -> list[comb.StepDistribution]:
    """``count`` step laws on ``{-1, 0, 1}`` with small-denominator rational weights.

    The symmetric ``+-1`` law comes first; the rest are distinct laws drawn from
    weights ``w_i / W`` with ``W <= 12``.
    """
    rng = random.Random(seed)
    laws = [(Fraction(1, 2), Fraction(0), Fraction(1, 2))]
    seen = set(laws)
    while len(laws) < count:
        W = rng.randint(2, 12)
        lo = rng.randint(0, W)
        mid = rng.randint(0, W - lo)
        probs = (Fraction(lo, W), Fraction(mid, W), Fraction(W - lo - mid, W))
        if probs not in seen:
            seen.add(probs)
            laws.append(probs)
    support = (Fraction(-1), Fraction(0), Fraction(1))
    return [comb.StepDistribution(support, p) for p in laws]


def _verify_rw(rng, caps, report):
    laws = walk_law_grid(caps.get("laws", 20), seed=rng.randint(0, 2**31))
    for dist in laws:
        for m in range(1, caps.get("m_max", 6) + 1):
            for n in range(1, caps.get("n_max", 3) + 1):
                report.checked += 1
                got = comb.rw_max_moment(dist, m, n)
                want = comb.rw_max_moment_oracle(dist, m, n)
                if got != want:
                    report.counterexamples.append(f"rw probs={_fmt_vec(dist.probs)} m={m} n={n}: {got} != {want}")


def banded_fixtures(count: int, seed: int, degree: int = 2) -> list[tuple[TrigPoly, TrigPoly]]:
    """Random real ``(b0, bsub)`` pairs of degree ``<= degree`` with ``b0`` near 1."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        pair = []
        for scale, centre in ((0.15, 1.0), (0.1, 0.0)):
            d = int(rng.integers(0, degree + 1))
            table = {0: centre + scale * rng.standard_normal()}
            for k in range(1, d + 1):
                c = scale * complex(rng.standard_normal(), rng.standard_normal()) / k
                table[k] = c
                table[-k] = c.conjugate()
            pair.append(TrigPoly.from_dict(table))
        out.append(tuple(pair))
    return out


def _verify_trace_identity(rng, caps, report):
    for b0, bsub in banded_fixtures(caps.get("fixtures", 5), rng.randint(0, 2**31)):
        for m in (1, 2, 3):
            for n in (8, 12, 16):
                N = n + 3 * m
                lhs, rhs = trace_identity_sides(b0, bsub, m, n, N)
                report.checked += 1
                err = abs(lhs - rhs)
                if err > TRACE_IDENTITY_RTOL * max(abs(lhs), abs(rhs), 1.0):
                    report.counterexamples.append(f"trace identity m={m} n={n}: {lhs} vs {rhs}")


def _verify_commutation(rng, caps, report):
    for b0, bsub in banded_fixtures(caps.get("fixtures", 5), rng.randint(0, 2**31)):
        for m in (1, 2, 3):
            for n in (8, 12, 16):
                N = n + 3 * m
                G = build_psdo(b0, bsub, N)
                for j in nonzero_blocks(G):
                    if n + abs(j) > N:
                        continue
                    report.checked += 1
                    if not verify_commutation(G, j, n):
                        report.counterexamples.append(f"commutation j={j} n={n} N={N}")


_VERIFIERS = {
    "hd": _verify_hd,
    "ghd": _verify_ghd,
    "bst": _verify_bst,
    "rw": _verify_rw,
    "trace-identity": _verify_trace_identity,
    "commutation": _verify_commutation,
}


def run_verify_suite(kind: str, seed: int = 0, caps: dict | None = None) -> VerifyReport:
    """Randomized plus small exhaustive checks of one identity.

    ``caps`` overrides the per-kind sizes (``m_max``, ``n_max``, ``trials``,
    ``exhaustive_m``, ``fixtures``, ...).  Counterexamples are listed in the report.
    """
    if kind not in _VERIFIERS:
        raise ValueError(f"unknown verification kind {kind!r}; choose from {', '.join(VERIFY_KINDS)}")
    report = VerifyReport(kind, seed, 0)
    caps = dict(caps or {})
    report.details["caps"] = caps
    _VERIFIERS[kind](random.Random(seed), caps, report)
    return report
