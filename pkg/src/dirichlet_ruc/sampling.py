"""Estimates, sampler configuration, and counter-based random streams.

All Monte Carlo draws are pure functions of (seed, stream, counter): sample
i never depends on how many samples were drawn before it, so results are
identical no matter how work is partitioned.  The generator is a SplitMix64
finalizer applied to structured counters, vectorized over numpy uint64
(overflow wraps mod 2**64, which is exactly the arithmetic we want).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError

MODE_EXACT = "exact"
MODE_QUADRATURE = "quadrature"
MODE_MC = "mc"

# Stream tags keep independent uses of one seed from colliding.
STREAM_TORUS = 1
STREAM_SIGNS = 2
STREAM_STEINHAUS = 3
STREAM_GAUSSIAN = 4
STREAM_OUTER_SIGNS = 5
STREAM_SEARCH = 6
STREAM_SUMMING = 7


@dataclass(frozen=True)
class Estimate:
    """A numeric result with its provenance.

    stderr is Monte Carlo noise only (zero unless mode == "mc");
    quad_error is the grid-refinement error estimate of quadrature mode.
    """

    value: float
    stderr: float = 0.0
    samples_used: int = 0
    mode: str = MODE_EXACT
    quad_error: float = 0.0

    def __post_init__(self):
        if self.mode not in (MODE_EXACT, MODE_QUADRATURE, MODE_MC):
            raise DomainError(f"unknown estimate mode {self.mode!r}")
        if self.mode != MODE_MC and self.stderr != 0.0:
            raise DomainError("stderr must be 0 outside mc mode")

    @property
    def uncertainty(self) -> float:
        return self.stderr + self.quad_error

    def scaled(self, factor: float) -> "Estimate":
        factor = abs(factor)
        return Estimate(
            value=self.value * factor,
            stderr=self.stderr * factor,
            samples_used=self.samples_used,
            mode=self.mode,
            quad_error=self.quad_error * factor,
        )

    @classmethod
    def exact(cls, value: float) -> "Estimate":
        return cls(value=float(value))


def combined_stderr(*estimates: Estimate) -> float:
    return math.sqrt(sum(e.uncertainty**2 for e in estimates))


@dataclass(frozen=True)
class GridPolicy:
    """Per-variable quadrature grid sizing: factor * max|exponent|, floored.

    Sizes are rounded up to powers of two so grid angles embed exactly in
    the 64-bit fixed-point representation.
    """

    factor: int = 4
    min_size: int = 16
    max_points: int = 1 << 21

    def size_for(self, max_abs_exponent: int) -> int:
        raw = max(self.factor * int(max_abs_exponent), self.min_size)
        return 1 << (raw - 1).bit_length()


@dataclass(frozen=True)
class SamplerConfig:
    seed: int = 0
    samples: int = 100_000
    exact_cutoff: int = 20
    grid_policy: GridPolicy = field(default_factory=GridPolicy)

    def __post_init__(self):
        if self.samples < 1:
            raise DomainError("samples must be >= 1")
        if not 0 <= self.exact_cutoff <= 24:
            raise DomainError("exact_cutoff must lie in [0, 24]")


_U64 = np.uint64
_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = _U64(0xBF58476D1CE4E5B9)
_MIX2 = _U64(0x94D049BB133111EB)


def _mix64(x: np.ndarray) -> np.ndarray:
    x = (x ^ (x >> _U64(30))) * _MIX1
    x = (x ^ (x >> _U64(27))) * _MIX2
    return x ^ (x >> _U64(31))


def _stream_key(seed: int, stream: int) -> np.uint64:
    base = _U64((int(seed) * _GOLDEN) & _MASK) ^ _U64((int(stream) * 0xD1B54A32D192ED03) & _MASK)
    return _mix64(base)


def uniform_bits(seed: int, stream: int, count: int, width: int, start: int = 0) -> np.ndarray:
    """(count, width) array of uniform uint64 words, indexed by counter."""
    counters = (
        np.arange(start, start + count, dtype=np.uint64)[:, None] * _U64(width)
        + np.arange(width, dtype=np.uint64)[None, :]
    )
    with np.errstate(over="ignore"):
        return _mix64(_stream_key(seed, stream) + counters * _U64(_GOLDEN))


def torus_fractions(seed: int, stream: int, count: int, width: int, start: int = 0) -> np.ndarray:
    """Uniform torus angles as 64-bit fixed-point numerators (turns * 2**64)."""
    return uniform_bits(seed, stream, count, width, start)


def sign_samples(seed: int, stream: int, count: int, width: int, start: int = 0) -> np.ndarray:
    """Uniform +-1 floats of shape (count, width)."""
    bits = uniform_bits(seed, stream, count, width, start)
    return np.where(bits >> _U64(63), 1.0, -1.0)


def _open_unit(bits: np.ndarray) -> np.ndarray:
    # (0, 1]: avoids log(0) in Box-Muller.
    return (bits.astype(np.float64) + 1.0) * 2.0**-64


def gaussian_samples(
    seed: int, stream: int, count: int, width: int, variant: str = "complex", start: int = 0
) -> np.ndarray:
    """Unit-variance Gaussians: complex (E|g|^2 = 1) or real N(0, 1)."""
    bits = uniform_bits(seed, stream, count, 2 * width, start)
    u1 = _open_unit(bits[:, :width])
    theta = bits[:, width:].astype(np.float64) * (2 * math.pi * 2.0**-64)
    radius = np.sqrt(-2.0 * np.log(u1))
    if variant == "complex":
        return radius * np.exp(1j * theta) * math.sqrt(0.5)
    if variant == "real":
        return radius * np.cos(theta)
    raise DomainError(f"unknown gaussian variant {variant!r}")


def fixed_point_to_complex(numerators: np.ndarray) -> np.ndarray:
    angles = numerators.astype(np.float64) * (2 * math.pi * 2.0**-64)
    return np.exp(1j * angles)


def steinhaus_samples(seed: int, stream: int, count: int, width: int, start: int = 0) -> np.ndarray:
    return fixed_point_to_complex(torus_fractions(seed, stream, count, width, start))


def character_values(exponents: np.ndarray, fractions: np.ndarray) -> np.ndarray:
    """Evaluate monomials z^alpha at fixed-point torus samples.

    exponents: (terms, variables) integer matrix (any sign / magnitude).
    fractions: (samples, variables) uint64 fixed-point angle numerators.
    Returns (samples, terms) complex multipliers of modulus 1.  The angle
    accumulation is exact mod 1 thanks to uint64 wraparound.
    """
    samples = fractions.shape[0]
    terms, variables = exponents.shape
    exp_u64 = np.asarray(
        [[int(e) & _MASK for e in row] for row in exponents], dtype=np.uint64
    ).reshape(terms, variables)
    acc = np.zeros((samples, terms), dtype=np.uint64)
    with np.errstate(over="ignore"):
        for j in range(variables):
            acc += fractions[:, j : j + 1] * exp_u64[None, :, j]
    return fixed_point_to_complex(acc)


def block_stderr(block_values: np.ndarray) -> float:
    """Stderr of a mean from per-block recomputations (two-stage estimators)."""
    blocks = np.asarray(block_values, dtype=np.float64)
    b = blocks.size
    if b < 2:
        return 0.0
    return float(blocks.std(ddof=1)) / math.sqrt(b)
