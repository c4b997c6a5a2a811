"""RUC/RUD ratios, extremal-constant search, type/cotype witnesses, and
growth experiments pitting sqrt(N) against Dirichlet-kernel L1 growth.

Ratio reports certify lower bounds only: the true constants are suprema
over all lengths and coefficient choices, and the derivative-free search
merely reports the best instance it found.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bohr import PrimeAP, factorize, prime_ap_search
from .dirichlet import DirichletPolynomial, dirichlet_kernel_l1, hp_norm
from .errors import DomainError, UndefinedRatioError
from .randomized import hprad_norm, rademacher_average
from .sampling import (
    MODE_EXACT,
    MODE_MC,
    STREAM_SEARCH,
    STREAM_SUMMING,
    Estimate,
    SamplerConfig,
    character_values,
    torus_fractions,
    uniform_bits,
)
from .spaces import (
    Element,
    SpaceSpec,
    as_element,
    element_is_zero,
    norm as space_norm,
    scale_element,
)


@dataclass(frozen=True)
class RatioReport:
    numerator: Estimate
    denominator: Estimate
    ratio: float
    instance: str

    def __post_init__(self):
        if not self.denominator.value > 0:
            raise UndefinedRatioError("denominator estimate is not positive")


@dataclass(frozen=True)
class SearchConfig:
    """Compass-search budget: random restarts, sweeps per restart, and a
    geometrically decaying step on magnitudes/phases (sup-normalized)."""

    restarts: int = 3
    iterations: int = 40
    initial_step: float = 0.5
    step_decay: float = 0.5
    min_step: float = 1e-3

    def __post_init__(self):
        if self.restarts < 1 or self.iterations < 1:
            raise DomainError("restarts and iterations must be >= 1")


def ruc_ratio(
    D: DirichletPolynomial, p: float, cfg: SamplerConfig | None = None
) -> RatioReport:
    """||D||_rad / ||D||: > 1 means sign-averaging exceeds the plain norm."""
    cfg = cfg if cfg is not None else SamplerConfig()
    if D.is_zero():
        raise UndefinedRatioError("zero polynomial")
    numerator = hprad_norm(D, p, cfg)
    denominator = hp_norm(D, p, cfg)
    return RatioReport(
        numerator=numerator,
        denominator=denominator,
        ratio=numerator.value / denominator.value,
        instance=describe_instance(D, p),
    )


def rud_ratio(
    D: DirichletPolynomial, p: float, cfg: SamplerConfig | None = None
) -> RatioReport:
    """||D|| / ||D||_rad: the reciprocal orientation of ruc_ratio."""
    report = ruc_ratio(D, p, cfg)
    return RatioReport(
        numerator=report.denominator,
        denominator=report.numerator,
        ratio=report.denominator.value / report.numerator.value,
        instance=report.instance,
    )


def describe_instance(D: DirichletPolynomial, p: float) -> str:
    space = D.space
    name = type(space).__name__
    size = getattr(space, "d", getattr(space, "k", "?"))
    return f"{name}({size}), {len(D.support())} terms, p={p}"


@dataclass(frozen=True)
class SearchResult:
    coefficients: np.ndarray
    report: RatioReport


def _coefficient_polynomial(
    space: SpaceSpec, vectors: Sequence[Element], a: np.ndarray
) -> DirichletPolynomial:
    terms = {
        n + 1: scale_element(x, a[n]) for n, x in enumerate(vectors) if a[n] != 0
    }
    return DirichletPolynomial(space, terms)


def _sup_normalize(a: np.ndarray) -> np.ndarray:
    top = np.abs(a).max()
    return a if top == 0 else a / top


def ruc_constant_search(
    space: SpaceSpec,
    vectors: Sequence[Element],
    p: float,
    search_cfg: SearchConfig | None = None,
    cfg: SamplerConfig | None = None,
) -> SearchResult:
    """Maximize ruc_ratio over coefficient vectors a (terms a_n * x_n).

    Random restarts + coordinate-wise compass moves on magnitude and phase,
    all evaluated with the same sampler seed (common random numbers).  The
    best ratio found is a lower bound on the true constant; ties keep the
    incumbent, and the all-ones start is always evaluated first.
    """
    search_cfg = search_cfg if search_cfg is not None else SearchConfig()
    cfg = cfg if cfg is not None else SamplerConfig()
    elements = [as_element(space, x) for x in vectors]
    if not elements or all(element_is_zero(x) for x in elements):
        raise DomainError("need at least one nonzero vector")
    n = len(elements)

    def evaluate(a: np.ndarray) -> RatioReport | None:
        a = _sup_normalize(a)
        D = _coefficient_polynomial(space, elements, a)
        if D.is_zero():
            return None
        return ruc_ratio(D, p, cfg)

    def restart_point(index: int) -> np.ndarray:
        if index == 0:
            return np.ones(n, dtype=np.complex128)
        bits = uniform_bits(cfg.seed, STREAM_SEARCH, 2, n, start=2 * index * n)
        mags = 0.2 + 0.8 * bits[0].astype(np.float64) * 2.0**-64
        phases = bits[1].astype(np.float64) * (2 * math.pi * 2.0**-64)
        return mags * np.exp(1j * phases)

    best_a: np.ndarray | None = None
    best: RatioReport | None = None
    for restart in range(search_cfg.restarts):
        a = _sup_normalize(restart_point(restart))
        incumbent = evaluate(a)
        if incumbent is None:
            continue
        step = search_cfg.initial_step
        for _ in range(search_cfg.iterations):
            improved = False
            for i in range(n):
                mag = abs(a[i])
                phase = math.atan2(a[i].imag, a[i].real)
                moves = [
                    (min(mag + step, 1.0), phase),
                    (max(mag - step, 0.0), phase),
                    (mag, phase + step),
                    (mag, phase - step),
                ]
                for new_mag, new_phase in moves:
                    candidate = a.copy()
                    candidate[i] = new_mag * complex(math.cos(new_phase), math.sin(new_phase))
                    report = evaluate(candidate)
                    if report is not None and report.ratio > incumbent.ratio:
                        a = _sup_normalize(candidate)
                        incumbent = report
                        improved = True
            if not improved:
                step *= search_cfg.step_decay
                if step < search_cfg.min_step:
                    break
        if best is None or incumbent.ratio > best.ratio:
            best = incumbent
            best_a = a
    assert best is not None and best_a is not None
    return SearchResult(coefficients=best_a, report=best)


def type_constant_witness(
    space: SpaceSpec, xs: Sequence, cfg: SamplerConfig | None = None
) -> float:
    """(E ||sum eps_n x_n||^2)^(1/2) / (sum ||x_n||^2)^(1/2).

    Equals 1 in Hilbert space; grows like sqrt(n) for the l_1 basis. The
    returned defect is exact whenever sign enumeration is.
    """
    cfg = cfg if cfg is not None else SamplerConfig()
    elements = [as_element(space, x) for x in xs]
    if not elements or all(element_is_zero(x) for x in elements):
        raise DomainError("need at least one nonzero element")
    numerator = rademacher_average(elements, space, 2.0, cfg).value
    denominator = math.sqrt(sum(space_norm(space, x).value ** 2 for x in elements))
    return numerator / denominator


def cotype_constant_witness(
    space: SpaceSpec, xs: Sequence, cfg: SamplerConfig | None = None
) -> float:
    """(sum ||x_n||^2)^(1/2) / (E ||sum eps_n x_n||^2)^(1/2): mirror of the
    type witness; grows like sqrt(n) for the sup-norm basis."""
    return 1.0 / type_constant_witness(space, xs, cfg)


@dataclass(frozen=True)
class PrimeApRow:
    length: int
    ap: PrimeAP | None
    lhs: Estimate | None
    rhs: Estimate | None
    ratio: float | None
    note: str = ""


def experiment_prime_ap(
    lengths: Sequence[int], bound: int, cfg: SamplerConfig | None = None
) -> list[PrimeApRow]:
    """For each length N: find a prime AP, compare sqrt(N) (the randomized
    side, exact for unimodular coefficients on distinct frequencies) with
    the kernel L1 norm (the plain norm after the measure-preserving
    substitution w -> w^step)."""
    rows: list[PrimeApRow] = []
    for length in lengths:
        length = int(length)
        if length == 1:
            one = Estimate.exact(1.0)
            rows.append(PrimeApRow(1, PrimeAP(2, 1, 1), one, one, 1.0))
            continue
        ap = prime_ap_search(length, bound)
        if ap is None:
            rows.append(
                PrimeApRow(length, None, None, None, None, note=f"no AP within {bound}")
            )
            continue
        lhs = Estimate.exact(math.sqrt(length))
        rhs = dirichlet_kernel_l1(length)
        rows.append(PrimeApRow(length, ap, lhs, rhs, lhs.value / rhs.value))
    return rows


@dataclass(frozen=True)
class LacunaryRow:
    n: int
    lhs: Estimate
    rhs: Estimate
    ratio: float


def experiment_lacunary_power(N: int, cfg: SamplerConfig | None = None) -> list[LacunaryRow]:
    """Compare sqrt(n) = L2 norm against the L1 norm of sum_{j<=n} w^j along
    the doubling ladder 1, 2, 4, ..., N (log vs sqrt growth)."""
    N = int(N)
    if N < 1:
        raise DomainError("N must be >= 1")
    ladder = []
    n = 1
    while n <= N:
        ladder.append(n)
        n *= 2
    if ladder[-1] != N:
        ladder.append(N)
    rows = []
    for n in ladder:
        lhs = Estimate.exact(math.sqrt(n))
        rhs = dirichlet_kernel_l1(n)
        rows.append(LacunaryRow(n=n, lhs=lhs, rhs=rhs, ratio=lhs.value / rhs.value))
    return rows


@dataclass(frozen=True)
class SummingReport:
    coefficients: np.ndarray
    sup_tail_norm: Estimate
    l2_lower_bound: float
    carleson_hunt_ratio: float
    lower_bound_ok: bool


def experiment_summing_basis(
    a: Sequence[complex], cfg: SamplerConfig | None = None
) -> SummingReport:
    """Estimate M = || sup_k |sum_{n>=k} a_n n^{-s}| ||_{H_2} by sampling the
    lifted tails on the polytorus.

    Reports M, the l2 lower bound (which M must dominate), and the
    empirical ratio M / l2 (bounded by an unspecified constant; reported,
    never asserted).
    """
    cfg = cfg if cfg is not None else SamplerConfig()
    a = np.asarray(list(a), dtype=np.complex128)
    if a.size == 0:
        raise DomainError("coefficient vector must be nonempty")
    m = a.size
    l2 = float(np.linalg.norm(a))
    if m == 1:
        est = Estimate(value=float(abs(a[0])), mode=MODE_EXACT)
        ratio = est.value / l2 if l2 > 0 else math.inf
        return SummingReport(a, est, l2, ratio, est.value >= l2)

    alphas = [factorize(n) for n in range(1, m + 1)]
    variables = max(len(al) for al in alphas)
    exps = np.zeros((m, variables), dtype=np.int64)
    for i, al in enumerate(alphas):
        for slot, e in al.pairs:
            exps[i, slot] = e

    samples = cfg.samples
    chunk = max(64, (1 << 20) // max(m, 1))
    acc = 0.0
    acc_sq = 0.0
    for lo in range(0, samples, chunk):
        count = min(chunk, samples - lo)
        fractions = torus_fractions(cfg.seed, STREAM_SUMMING, count, variables, start=lo)
        mult = character_values(exps, fractions) * a[None, :]  # (count, m)
        tails = np.cumsum(mult[:, ::-1], axis=1)[:, ::-1]
        sup = np.abs(tails).max(axis=1)
        g2 = sup**2
        acc += float(g2.sum())
        acc_sq += float((g2**2).sum())
    mean = acc / samples
    value = math.sqrt(mean)
    var = max(acc_sq / samples - mean**2, 0.0) * samples / max(samples - 1, 1)
    stderr = math.sqrt(var / samples) / (2 * value) if value > 0 else 0.0
    est = Estimate(value=value, stderr=stderr, samples_used=samples, mode=MODE_MC)
    ok = value + 3 * stderr >= l2
    return SummingReport(a, est, l2, value / l2 if l2 > 0 else math.inf, ok)
