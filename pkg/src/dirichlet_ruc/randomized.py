"""Randomized norm averages: sign sums, rotations, Gaussians.

The workhorse is (E || sum_n c_n(omega) x_n ||^q)^(1/q) where c_n are
Rademacher signs, Steinhaus rotations, or Gaussians.  Sign averages are
exact (full enumeration of 2^m patterns) up to `exact_cutoff`, Monte Carlo
beyond; rotations and Gaussians are Monte Carlo with closed forms where
moments make them available.  All sampling is counter-based: identical
configs give identical Estimates.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from .dirichlet import DirichletPolynomial, hp_norm, lift_arrays
from .errors import DomainError, UndefinedRatioError
from .sampling import (
    MODE_EXACT,
    MODE_MC,
    MODE_QUADRATURE,
    STREAM_GAUSSIAN,
    STREAM_OUTER_SIGNS,
    STREAM_SIGNS,
    STREAM_STEINHAUS,
    STREAM_TORUS,
    Estimate,
    SamplerConfig,
    block_stderr,
    character_values,
    combined_stderr,
    gaussian_samples,
    sign_samples,
    steinhaus_samples,
    torus_fractions,
)
from .spaces import (
    CombinationEvaluator,
    Element,
    SpaceSpec,
    as_element,
    coordinate_norms,
    element_is_zero,
    hilbert_norm,
    is_coordinate,
    is_hilbertian,
    norm as space_norm,
)

_PATTERN_CHUNK = 1 << 13


def _family(space: SpaceSpec, xs: Sequence) -> list[Element]:
    if len(xs) == 0:
        raise DomainError("need at least one element")
    return [as_element(space, x) for x in xs]


def _sign_patterns(m: int, lo: int, hi: int) -> np.ndarray:
    """Columns of +-1 for pattern indices [lo, hi); bit j drives element j."""
    idx = np.arange(lo, hi, dtype=np.uint64)[None, :]
    bits = (idx >> np.arange(m, dtype=np.uint64)[:, None]) & np.uint64(1)
    return np.where(bits == 1, 1.0, -1.0)


def _evaluators(space: SpaceSpec, xs: Sequence[Element]):
    full = CombinationEvaluator(space, xs)
    half = None if is_coordinate(space) else CombinationEvaluator(space, xs, grid_scale=0.5)
    return full, half


def _multiplier_moments(
    space: SpaceSpec,
    xs: Sequence[Element],
    multiplier_chunks,
    total: int,
    powers: Sequence[float],
    mc: bool,
) -> list[Estimate]:
    """Estimates of (E g^q)^(1/q) for each q, sharing one pass of multipliers."""
    full, half = _evaluators(space, xs)
    acc = np.zeros(len(powers))
    acc_sq = np.zeros(len(powers))
    acc_half = np.zeros(len(powers))
    for chunk in multiplier_chunks:
        g = full.norms(chunk)
        g_half = half.norms(chunk) if half is not None else None
        for i, q in enumerate(powers):
            gq = g**q
            acc[i] += float(gq.sum())
            acc_sq[i] += float((gq**2).sum())
            if g_half is not None:
                acc_half[i] += float((g_half**q).sum())
    out = []
    for i, q in enumerate(powers):
        mean = float(acc[i]) / total
        value = mean ** (1.0 / q) if mean > 0 else 0.0
        quad_error = 0.0
        if half is not None:
            half_mean = acc_half[i] / total
            half_value = half_mean ** (1.0 / q) if half_mean > 0 else 0.0
            quad_error = abs(value - half_value)
        if mc:
            var = max(acc_sq[i] / total - mean**2, 0.0)
            var *= total / max(total - 1, 1)
            stderr = (
                math.sqrt(var / total) * value / (q * mean) if mean > 0 and total > 1 else 0.0
            )
            out.append(
                Estimate(value=value, stderr=stderr, samples_used=total, mode=MODE_MC,
                         quad_error=quad_error)
            )
        else:
            mode = MODE_EXACT if half is None else MODE_QUADRATURE
            out.append(
                Estimate(value=value, samples_used=total, mode=mode, quad_error=quad_error)
            )
    return out


def _sign_moments(
    space: SpaceSpec,
    xs: Sequence[Element],
    scale: np.ndarray | None,
    powers: Sequence[float],
    cfg: SamplerConfig,
) -> list[Estimate]:
    m = len(xs)
    scale_col = None if scale is None else np.asarray(scale, dtype=np.complex128)[:, None]

    if m <= cfg.exact_cutoff:
        total = 1 << m

        def chunks():
            for lo in range(0, total, _PATTERN_CHUNK):
                block = _sign_patterns(m, lo, min(lo + _PATTERN_CHUNK, total))
                yield block if scale_col is None else block * scale_col

        return _multiplier_moments(space, xs, chunks(), total, powers, mc=False)

    total = cfg.samples

    def chunks():
        for lo in range(0, total, _PATTERN_CHUNK):
            count = min(_PATTERN_CHUNK, total - lo)
            block = sign_samples(cfg.seed, STREAM_SIGNS, count, m, start=lo).T
            yield block if scale_col is None else block * scale_col

    return _multiplier_moments(space, xs, chunks(), total, powers, mc=True)


def rademacher_average(
    xs: Sequence, space: SpaceSpec, q: float, cfg: SamplerConfig | None = None
) -> Estimate:
    """(E || sum_n eps_n x_n ||^q)^(1/q) over independent random signs."""
    if q < 1:
        raise DomainError("q must be >= 1")
    cfg = cfg if cfg is not None else SamplerConfig()
    elements = _family(space, xs)
    if all(element_is_zero(x) for x in elements):
        return Estimate(value=0.0, mode=MODE_EXACT)
    if len(elements) == 1:
        return space_norm(space, elements[0])
    if q == 2 and is_hilbertian(space):
        value = math.sqrt(sum(hilbert_norm(space, x) ** 2 for x in elements))
        return Estimate(value=value, mode=MODE_EXACT)
    return _sign_moments(space, elements, None, [q], cfg)[0]


def steinhaus_average(
    xs: Sequence, space: SpaceSpec, q: float, cfg: SamplerConfig | None = None
) -> Estimate:
    """Like rademacher_average with uniform unimodular multipliers (no exact
    enumeration; Monte Carlo except for moment closed forms)."""
    if q < 1:
        raise DomainError("q must be >= 1")
    cfg = cfg if cfg is not None else SamplerConfig()
    elements = _family(space, xs)
    if all(element_is_zero(x) for x in elements):
        return Estimate(value=0.0, mode=MODE_EXACT)
    if len(elements) == 1:
        return space_norm(space, elements[0])
    if q == 2 and is_hilbertian(space):
        value = math.sqrt(sum(hilbert_norm(space, x) ** 2 for x in elements))
        return Estimate(value=value, mode=MODE_EXACT)
    m = len(elements)
    total = cfg.samples

    def chunks():
        for lo in range(0, total, _PATTERN_CHUNK):
            count = min(_PATTERN_CHUNK, total - lo)
            yield steinhaus_samples(cfg.seed, STREAM_STEINHAUS, count, m, start=lo).T

    return _multiplier_moments(space, elements, chunks(), total, [q], mc=True)[0]


def _gaussian_abs_moment(q: float, variant: str) -> float:
    """(E |g|^q)^(1/q) for a unit-variance Gaussian."""
    if variant == "complex":
        return math.gamma(1 + q / 2) ** (1.0 / q)
    return (2 ** (q / 2) * math.gamma((q + 1) / 2) / math.sqrt(math.pi)) ** (1.0 / q)


def gaussian_average(
    xs: Sequence,
    space: SpaceSpec,
    q: float,
    cfg: SamplerConfig | None = None,
    variant: str = "complex",
) -> Estimate:
    """Gaussian-multiplier average; `variant` picks complex (default) or real
    standard Gaussians (the latter exists for mean-absolute-value checks)."""
    if q < 1:
        raise DomainError("q must be >= 1")
    if variant not in ("complex", "real"):
        raise DomainError(f"unknown gaussian variant {variant!r}")
    cfg = cfg if cfg is not None else SamplerConfig()
    elements = _family(space, xs)
    if all(element_is_zero(x) for x in elements):
        return Estimate(value=0.0, mode=MODE_EXACT)
    if q == 2 and is_hilbertian(space):
        value = math.sqrt(sum(hilbert_norm(space, x) ** 2 for x in elements))
        return Estimate(value=value, mode=MODE_EXACT)
    if len(elements) == 1:
        return space_norm(space, elements[0]).scaled(_gaussian_abs_moment(q, variant))
    m = len(elements)
    total = cfg.samples

    def chunks():
        for lo in range(0, total, _PATTERN_CHUNK):
            count = min(_PATTERN_CHUNK, total - lo)
            yield gaussian_samples(cfg.seed, STREAM_GAUSSIAN, count, m, variant, start=lo).T

    return _multiplier_moments(space, elements, chunks(), total, [q], mc=True)[0]


def rad_norm(xs: Sequence, space: SpaceSpec, cfg: SamplerConfig | None = None) -> Estimate:
    """E || sum_n eps_n x_n ||: the q = 1 Rademacher average."""
    return rademacher_average(xs, space, 1.0, cfg)


def hprad_norm(
    D: DirichletPolynomial, p: float, cfg: SamplerConfig | None = None
) -> Estimate:
    """Expected H_p norm over random sign flips of the coefficients.

    Signs are enumerated exactly for supports up to exact_cutoff, sampled
    otherwise; inner H_p norms share one polytorus sample panel across all
    sign patterns (common random numbers).  The stderr combines 10-block
    panel resampling with pattern-sampling variance and is approximate.
    """
    if p < 1:
        raise DomainError("p must be >= 1")
    cfg = cfg if cfg is not None else SamplerConfig()
    xs, exps, _ = lift_arrays(D)
    m = len(xs)
    if m == 0:
        return Estimate(value=0.0, mode=MODE_EXACT)
    if m == 1 or (p == 2 and is_hilbertian(D.space)):
        return hp_norm(D, p, cfg)

    exact_outer = m <= cfg.exact_cutoff
    patterns = 1 << m if exact_outer else min(4096, cfg.samples)
    if exact_outer:
        signs = _sign_patterns(m, 0, patterns)
    else:
        signs = sign_samples(cfg.seed, STREAM_OUTER_SIGNS, patterns, m).T

    samples = cfg.samples
    variables = exps.shape[1]
    evaluator = CombinationEvaluator(D.space, xs)
    blocks = min(10, samples)
    block_of = (np.arange(samples) * blocks) // samples

    coordinate = is_coordinate(D.space)
    if coordinate:
        matrix = np.column_stack(evaluator.xs)  # (d, m)
        z_chunk = max(1, _PATTERN_CHUNK // max(patterns // 16, 1))
    else:
        grid = evaluator.matrix  # (grid_points, m)
        z_chunk = max(1, (1 << 22) // max(grid.shape[0] * patterns, 1))

    power_sums = np.zeros((blocks, patterns))
    counts = np.zeros(blocks, dtype=np.int64)
    for lo in range(0, samples, z_chunk):
        count = min(z_chunk, samples - lo)
        fractions = torus_fractions(cfg.seed, STREAM_TORUS, count, variables, start=lo)
        mult = character_values(exps, fractions)  # (count, m)
        if coordinate:
            scaled = mult[:, None, :] * matrix[None, :, :]  # (count, d, m)
            combos = scaled @ signs  # (count, d, patterns)
            g = coordinate_norms(
                D.space, np.moveaxis(combos, 1, 0).reshape(combos.shape[1], -1)
            ).reshape(count, patterns)
        else:
            coeff = mult[:, :, None] * signs[None, :, :]  # (count, m, patterns)
            values = np.tensordot(grid, coeff, axes=([1], [1]))  # (grid, count, patterns)
            r = D.space.r
            g = (np.abs(values) ** r).mean(axis=0) ** (1.0 / r)
        gp = g**p
        for b in range(blocks):
            mask = block_of[lo : lo + count] == b
            if mask.any():
                power_sums[b] += gp[mask].sum(axis=0)
                counts[b] += int(mask.sum())

    total_means = power_sums.sum(axis=0) / samples  # per-pattern E_z g^p
    inner = total_means ** (1.0 / p)
    value = float(inner.mean())

    block_values = []
    for b in range(blocks):
        if counts[b] > 0:
            block_values.append(float(((power_sums[b] / counts[b]) ** (1.0 / p)).mean()))
    stderr = block_stderr(np.array(block_values))
    if not exact_outer and patterns > 1:
        stderr = math.sqrt(stderr**2 + float(inner.var(ddof=1)) / patterns)
    return Estimate(value=value, stderr=stderr, samples_used=samples, mode=MODE_MC)


def kahane_ratio(
    xs: Sequence, space: SpaceSpec, p: float, cfg: SamplerConfig | None = None
) -> float:
    """(E ||S||^p)^(1/p) / E ||S|| for S = sum eps_n x_n; >= 1 by Jensen."""
    if p < 1:
        raise DomainError("p must be >= 1")
    cfg = cfg if cfg is not None else SamplerConfig()
    elements = _family(space, xs)
    if all(element_is_zero(x) for x in elements):
        raise UndefinedRatioError("all elements are zero")
    if len(elements) == 1:
        return 1.0
    est_p, est_1 = _sign_moments(space, elements, None, [p, 1.0], cfg)
    return est_p.value / est_1.value


class ContractionReport(NamedTuple):
    lhs: Estimate
    rhs: Estimate
    holds: bool


def contraction_check(
    xs: Sequence,
    a: Sequence[complex],
    space: SpaceSpec,
    cfg: SamplerConfig | None = None,
) -> ContractionReport:
    """Check E||sum eps_n a_n x_n|| <= (pi/2) E||sum eps_n x_n|| for |a_n| <= 1.

    Both sides share the same sign patterns (common random numbers); `holds`
    allows 3x the combined stderr of slack in sampled mode.
    """
    cfg = cfg if cfg is not None else SamplerConfig()
    elements = _family(space, xs)
    a = np.asarray(list(a), dtype=np.complex128)
    if a.shape != (len(elements),):
        raise DomainError("coefficient count must match element count")
    if np.abs(a).max() > 1 + 1e-12:
        raise DomainError("coefficients must satisfy max |a_n| <= 1")
    lhs = _sign_moments(space, elements, a, [1.0], cfg)[0]
    base = _sign_moments(space, elements, None, [1.0], cfg)[0]
    rhs = base.scaled(math.pi / 2)
    holds = lhs.value <= rhs.value + 3 * combined_stderr(lhs, rhs) + 1e-12
    return ContractionReport(lhs=lhs, rhs=rhs, holds=holds)
