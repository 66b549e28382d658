"""Measurement back-ends on the qubus mode.

Quadrature convention: x = (a + a^dag)/2, p = (a - a^dag)/(2i), vacuum
variance 1/4, fixed by the quadrature density sqrt(2/pi) exp(-2 (q - c)^2)
with c = Re(beta) for x and Im(beta) for p.

Windowed homodyne discrimination is supported for d in {2, 3, 4}:

  d=2: x-quadrature, two half-line windows around +-sqrt(gamma) alpha.
  d=3: p-quadrature, symmetric interval around 0 plus two half-lines.
  d=4: x-quadrature, same two windows as d=2; the two +-i alpha ring
       states sit at x = 0 and are never assigned to a window.

Full complex wavefunctions (needed only for the off-diagonal bound) carry
the phase factor exp(-2i Re(beta) p) for p and exp(+2i Im(beta) x) for x,
plus a value-independent global phase fixed so that the whole-line
integral of psi_beta psi*_beta' equals the coherent overlap <beta'|beta>.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import erf

from .coherent import RingSpec, norm_constants, overlap
from .states import ChannelParams

__all__ = [
    "WindowSet",
    "DetectionReport",
    "quadrature_pdf",
    "quadrature_wavefunction",
    "window_mass",
    "window_geometry",
    "homodyne_report",
    "offdiag_weight",
    "usd_bound",
]

HOMODYNE_DIMS = (2, 3, 4)


@dataclass(frozen=True)
class WindowSet:
    """Quadrature choice plus acceptance-window geometry.

    `bounds[i]` is the closed acceptance interval for window i (infinite
    endpoints allowed); `dominant_ring[i]` is the ring state it projects
    onto.  `failure_bounds` are the discarded gaps; at delta = delta_max
    they degenerate to single points (zero measure, every result accepted).
    """

    quadrature: str
    delta: float
    delta_max: float
    centers: tuple[float, ...]
    bounds: tuple[tuple[float, float], ...]
    dominant_ring: tuple[int, ...]
    failure_bounds: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.delta > self.delta_max + 1e-15:
            raise ValueError("delta exceeds delta_max: acceptance windows would overlap")
        lows = sorted(self.bounds)
        for (a, b), (c, d) in zip(lows, lows[1:]):
            if b > c + 1e-15:
                raise ValueError("acceptance windows overlap")


@dataclass(frozen=True)
class DetectionReport:
    window_probs: tuple[float, ...]
    window_fidelities: tuple[float, ...]
    p_succ: float
    f_av: float
    offdiag_bound: float


def quadrature_pdf(beta: complex, quadrature: str, value: float) -> float:
    """sqrt(2/pi) exp(-2 (value - c)^2), c = Re(beta) for x, Im(beta) for p."""
    c = _mean(beta, quadrature)
    return float(np.sqrt(2.0 / np.pi) * np.exp(-2.0 * (value - c) ** 2))


def _mean(beta: complex, quadrature: str) -> float:
    if quadrature == "x":
        return float(np.real(beta))
    if quadrature == "p":
        return float(np.imag(beta))
    raise ValueError(f"unknown quadrature {quadrature!r}")


def quadrature_wavefunction(beta: complex, quadrature: str, value):
    """Full complex quadrature wavefunction of a coherent state."""
    value = np.asarray(value, dtype=float)
    a, b = float(np.real(beta)), float(np.imag(beta))
    if quadrature == "p":
        return (2 / np.pi) ** 0.25 * np.exp(1j * a * b) * np.exp(-(value - b) ** 2 - 2j * a * value)
    if quadrature == "x":
        return (2 / np.pi) ** 0.25 * np.exp(-1j * a * b) * np.exp(-(value - a) ** 2 + 2j * b * value)
    raise ValueError(f"unknown quadrature {quadrature!r}")


def window_mass(bounds: tuple[float, float], center: float) -> float:
    """Integral of the quadrature pdf with the given mean over [lo, hi]."""
    lo, hi = bounds
    f = lambda t: float(np.sign(t)) if np.isinf(t) else float(erf(np.sqrt(2.0) * (t - center)))
    return 0.5 * (f(hi) - f(lo))


def window_geometry(d: int, alpha: float, gamma: float, delta_frac: float) -> WindowSet:
    """Acceptance-window geometry for the supported dimensions."""
    if d not in HOMODYNE_DIMS:
        raise ValueError(f"windowed homodyne discrimination supports d in {HOMODYNE_DIMS}")
    if not 0.0 < delta_frac <= 1.0:
        raise ValueError("delta_frac must lie in (0, 1]")
    sa = float(np.sqrt(gamma) * alpha)
    if d in (2, 4):
        delta_max = sa
        delta = delta_frac * delta_max
        edge = sa - delta
        return WindowSet(
            quadrature="x",
            delta=delta,
            delta_max=delta_max,
            centers=(sa, -sa),
            bounds=((edge, np.inf), (-np.inf, -edge)),
            dominant_ring=(0, d // 2),
            failure_bounds=((-edge, edge),),
        )
    c1 = np.sqrt(3.0) / 2.0 * sa
    delta_max = 0.5 * c1
    delta = delta_frac * delta_max
    return WindowSet(
        quadrature="p",
        delta=delta,
        delta_max=delta_max,
        centers=(0.0, c1, -c1),
        bounds=((-delta, delta), (c1 - delta, np.inf), (-np.inf, -(c1 - delta))),
        dominant_ring=(0, 1, 2),
        failure_bounds=((delta, c1 - delta), (-(c1 - delta), -delta)),
    )


def homodyne_report(d: int, alpha: float, channel: ChannelParams, delta_frac: float,
                    include_offdiag: bool = True,
                    quadrature_tol: float = 1e-10) -> DetectionReport:
    """Window probabilities, fidelities, total success and average fidelity.

    p_{w_i} sums the quadrature masses of all d ring states over window i;
    the fidelity of window i keeps the leading mixture component
    N_{v_0}(sqrt(1-gamma) alpha)/d^2 and the window's own dominant-state
    mass.  Off-diagonalleakage (coherences between Bell components inside a
    window) does not enter these numbers at all; its magnitude is reported
    separately as `offdiag_bound`.
    """
    gamma = channel.gamma
    ws = window_geometry(d, alpha, gamma, delta_frac)
    ring = RingSpec(d, np.sqrt(gamma) * alpha).states()
    means = [_mean(b, ws.quadrature) for b in ring]
    lead = norm_constants(RingSpec(d, np.sqrt(max(1.0 - gamma, 0.0)) * alpha))[0] / d ** 2

    probs, fids = [], []
    for bounds, dom in zip(ws.bounds, ws.dominant_ring):
        p = sum(window_mass(bounds, c) for c in means) / d
        f = lead * (window_mass(bounds, means[dom]) / d) / p if p > 0 else 0.0
        probs.append(p)
        fids.append(f)
    p_succ = float(sum(probs))
    f_av = float(sum(p * f for p, f in zip(probs, fids)) / p_succ) if p_succ > 0 else 0.0

    bound = 0.0
    if include_offdiag:
        bound = max(offdiag_weight(d, alpha, channel, i, delta_frac, quadrature_tol)
                    for i in range(len(ws.bounds)))
    return DetectionReport(tuple(probs), tuple(fids), p_succ, f_av, float(bound))


def _window_cross_integral(beta_i: complex, beta_j: complex, quadrature: str,
                           bounds: tuple[float, float], tol: float) -> complex:
    """integral over the window of psi_{beta_i}(q) psi*_{beta_j}(q).

    Adaptive quadrature on a clipped interval: the Gaussian magnitudes make
    any contribution beyond |q| = 8 + |means| smaller than 1e-25.
    """
    cut = 8.0 + max(abs(_mean(beta_i, quadrature)), abs(_mean(beta_j, quadrature)))
    lo = max(bounds[0], -cut)
    hi = min(bounds[1], cut)
    if lo >= hi:
        return 0.0 + 0.0j

    def integrand(q, part):
        v = quadrature_wavefunction(beta_i, quadrature, q) * \
            np.conj(quadrature_wavefunction(beta_j, quadrature, q))
        return v.real if part == "re" else v.imag

    # anchor the subdivision at the two Gaussian peaks
    marks = sorted({m for m in (_mean(beta_i, quadrature), _mean(beta_j, quadrature))
                    if lo < m < hi})
    re, re_err = quad(integrand, lo, hi, args=("re",), epsabs=tol, limit=300,
                      points=marks or None)
    im, im_err = quad(integrand, lo, hi, args=("im",), epsabs=tol, limit=300,
                      points=marks or None)
    if max(re_err, im_err) > 100 * tol:
        raise ArithmeticError(
            f"window quadrature did not converge to {tol} (error {max(re_err, im_err)})")
    return complex(re, im)


def offdiag_weight(d: int, alpha: float, channel: ChannelParams, window: int,
                   delta_frac: float, quadrature_tol: float = 1e-10) -> float:
    """Largest cross term |integral psi_beta psi*_beta'| over one window.

    Bounds the coherences the diagonal-mixture approximation drops; taking
    the whole line as the window recovers |overlap(beta', beta)|.
    """
    ws = window_geometry(d, alpha, channel.gamma, delta_frac)
    if not 0 <= window < len(ws.bounds):
        raise ValueError(f"window index {window} out of range")
    ring = RingSpec(d, np.sqrt(channel.gamma) * alpha).states()
    best = 0.0
    for i in range(d):
        for j in range(d):
            if i == j:
                continue
            val = _window_cross_integral(ring[i], ring[j], ws.quadrature,
                                         ws.bounds[window], quadrature_tol)
            best = max(best, abs(val))
    return best


def usd_bound(d: int, alpha: float, gamma: float) -> float:
    """Optimal success probability for unambiguously discriminating the
    d symmetric coherent states at damped amplitude sqrt(gamma) alpha:

        min_r sum_j e^{-2 pi i j r / d} exp(gamma alpha^2 (e^{2 pi i j / d} - 1)),

    clamped to [0, 1].  Numerically identical to
    min_m norm_constants(d, sqrt(gamma) alpha) / d.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    j = np.arange(d)
    g = np.exp(gamma * alpha ** 2 * (np.exp(2j * np.pi * j / d) - 1.0))
    best = np.inf
    for r in range(d):
        val = (np.exp(-2j * np.pi * j * r / d) * g).sum()
        if abs(val.imag) > 1e-10:
            raise ArithmeticError("discrimination bound has a non-real residue")
        best = min(best, val.real)
    return float(min(max(best, 0.0), 1.0))
