"""Scalar Wiener-Hopf factorization on the unit circle.

Two engines.  The exact engine factors a rational symbol by sorting its
zeros and poles relative to the circle:

    s(t) = s_minus(t) * t**rho * s_plus(t)

with s_minus zero- and pole-free on {|t| >= 1} and normalized to 1 at
infinity, and s_plus zero- and pole-free on {|t| <= 1}.  The grid engine
works from samples alone: it reads rho off a cyclic phase sum, then
splits the logarithm of the deflated symbol by Fourier frequency sign.
The two engines agree wherever both apply, which is what makes either
one an independent oracle for the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotInvertibleOnCircleError, UndersampledError
from .symbols import (
    CIRCLE_TOL,
    PHASE_GUARD,
    CircleGrid,
    LaurentPoly,
    RationalSymbol,
    eval_on_grid,
    poly_roots,
    winding_index,
)
from .verify import Check, VerificationReport


@dataclass(frozen=True)
class ScalarFactorization:
    minus: RationalSymbol
    index: int
    plus: RationalSymbol


def _split_by_circle(poly: LaurentPoly) -> tuple[list[complex], list[complex]]:
    inside: list[complex] = []
    outside: list[complex] = []
    for root, mult in poly_roots(poly):
        if abs(abs(root) - 1.0) < CIRCLE_TOL:
            raise NotInvertibleOnCircleError(
                f"root {root:.8g} lies within {CIRCLE_TOL:g} of the unit circle"
            )
        (inside if abs(root) < 1.0 else outside).extend([root] * mult)
    return inside, outside


def factor_rational(s: RationalSymbol) -> ScalarFactorization:
    """Exact factorization of a rational symbol invertible on the circle.

    Zeros and poles inside the open disk go to the minus factor together
    with the power of t that pins minus(inf) = 1; everything outside,
    and the overall scale, goes to the plus factor.
    """
    if s.is_zero:
        raise NotInvertibleOnCircleError("cannot factor the zero symbol")
    idx = winding_index(s)
    zeros_in, zeros_out = _split_by_circle(s.num)
    poles_in, poles_out = _split_by_circle(s.den)

    minus_num = LaurentPoly.from_roots(zeros_in).shift(len(poles_in) - len(zeros_in))
    minus = RationalSymbol(minus_num, LaurentPoly.from_roots(poles_in))
    lead = s.num.coeffs[-1]  # den is monic by canonical form
    plus = RationalSymbol(
        LaurentPoly.from_roots(zeros_out, lead), LaurentPoly.from_roots(poles_out)
    )
    rho = s.num.min_deg + len(zeros_in) - len(poles_in)
    if rho != idx:
        raise NotInvertibleOnCircleError(
            f"index bookkeeping mismatch: root count gives {rho}, winding gives {idx}"
        )
    return ScalarFactorization(minus, rho, plus)


def factor_grid(samples) -> tuple[np.ndarray, int, np.ndarray]:
    """Grid factorization from samples on the N-th roots of unity.

    N must be a power of two >= 64.  Returns (minus samples, rho, plus
    samples) on the same grid.  The winding index comes from the cyclic
    sum of normalized phase steps; the factors from splitting the FFT of
    log(s * t**-rho) into negative and nonnegative frequencies.
    """
    v = np.asarray(samples, dtype=complex)
    if v.ndim != 1 or v.size < 64 or (v.size & (v.size - 1)) != 0:
        raise ValueError(f"need samples on a power-of-two grid of size >= 64, got {v.size}")
    if np.any(v == 0):
        raise NotInvertibleOnCircleError("zero sample in grid factorization input")
    n = v.size
    steps = np.angle(np.roll(v, -1) / v)
    # A cyclic sum of principal-value steps is an exact multiple of 2*pi
    # (the ratios multiply to 1), so a non-integral total can only come
    # from roundoff; undersampling shows up as individual steps near the
    # branch cut, where the phase between samples becomes ambiguous.
    worst = float(np.max(np.abs(steps)))
    if worst > 1.0:
        raise UndersampledError(
            f"phase step of {worst:.3f} rad between neighboring samples; "
            "the winding is ambiguous at this rate, refine the grid"
        )
    turns = float(np.sum(steps) / (2.0 * np.pi))
    if abs(turns - round(turns)) > PHASE_GUARD:
        raise UndersampledError(
            f"phase sum {turns:.4f} is not within {PHASE_GUARD} of an integer; "
            f"refine the grid"
        )
    rho = int(round(turns))

    pts = CircleGrid(n).points
    mu = v * pts ** (-rho)
    dphi = np.angle(mu[1:] / mu[:-1])
    theta = np.angle(mu[0]) + np.concatenate([[0.0], np.cumsum(dphi)])
    log_mu = np.log(np.abs(mu)) + 1j * theta

    spec = np.fft.fft(log_mu)
    neg = np.zeros(n, dtype=complex)
    neg[n // 2 + 1 :] = spec[n // 2 + 1 :]  # frequencies -n/2+1 .. -1
    minus = np.exp(np.fft.ifft(neg))
    plus = np.exp(np.fft.ifft(spec - neg))
    return minus, rho, plus


def verify_scalar(
    s: RationalSymbol,
    fac: ScalarFactorization,
    recon_tol: float = 1e-10,
    grid_n: int = 512,
) -> VerificationReport:
    """Certify a scalar factorization against its target symbol."""
    checks: list[Check] = []
    grid = CircleGrid(grid_n)
    target = eval_on_grid(s, grid)
    recon = (
        eval_on_grid(fac.minus, grid)
        * grid.points**fac.index
        * eval_on_grid(fac.plus, grid)
    )
    checks.append(Check("reconstruction", float(np.max(np.abs(recon - target))), recon_tol))

    v = 0.0
    if fac.minus.is_zero:
        v = float("inf")
    else:
        for poly in (fac.minus.num, fac.minus.den):
            for root, mult in poly_roots(poly):
                if abs(root) >= 1.0 - CIRCLE_TOL:
                    v = max(v, abs(root) - 1.0 + CIRCLE_TOL)
        balance = fac.minus.num.max_deg - fac.minus.den.max_deg
        if balance != 0:
            v = max(v, float(abs(balance)))
    checks.append(Check("minus_analytic_outside", v, 0.0))

    if not fac.minus.is_zero and fac.minus.num.max_deg == fac.minus.den.max_deg:
        at_inf = fac.minus.num.coeffs[-1] / fac.minus.den.coeffs[-1]
        checks.append(Check("minus_normalized_at_infinity", float(abs(at_inf - 1.0)), 1e-12))
    else:
        checks.append(Check("minus_normalized_at_infinity", float("inf"), 1e-12))

    v = 0.0
    if fac.plus.is_zero:
        v = float("inf")
    else:
        for poly in (fac.plus.num, fac.plus.den):
            for root, mult in poly_roots(poly):
                if abs(root) <= 1.0 + CIRCLE_TOL:
                    v = max(v, 1.0 + CIRCLE_TOL - abs(root))
        if fac.plus.num.min_deg != 0:
            v = max(v, float(abs(fac.plus.num.min_deg)))
    checks.append(Check("plus_analytic_inside", v, 0.0))

    try:
        checks.append(Check("index", float(abs(fac.index - winding_index(s))), 0.0))
    except NotInvertibleOnCircleError as exc:
        checks.append(Check("index", float("inf"), 0.0, str(exc)))

    return VerificationReport(tuple(checks), subject="scalar factorization")
