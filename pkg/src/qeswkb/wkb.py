"""Semiclassical phase-integral tools for one-dimensional wells.

The central quantity is the classical action across the allowed region,

    S(E) = integral of sqrt(2 (E - V(x))) between the turning points,

evaluated with an endpoint-adapted Gauss-Legendre rule.  Comparing S(E_n)
at a numerically exact eigenvalue with the leading quantization value
pi (n + 1/2) yields the correction exponent

    gamma_n = S(E_n) / pi - n - 1/2,

which measures how far the level deviates from the lowest-order
quantization rule.  The inverse problem (find E such that the action
matches a prescribed phase) is solved by bracketing and root finding.
"""

from dataclasses import dataclass
from functools import lru_cache
import math

import numpy as np
from scipy.optimize import brentq

from .errors import (
    AboveAsymptoteError,
    AccuracyError,
    DomainError,
    MultiWellError,
    NoClassicalRegionError,
    SearchError,
    SpectrumExhaustedError,
)
from .potentials import (
    EvenPolynomial,
    Morse,
    SexticGeneral,
    SexticReduced,
    _as_int,
    evaluate,
    morse_asymptote,
    sextic_coefficients,
)

_NODE_CAP = 8000
_GROWTH = 1.45


@dataclass(frozen=True)
class WkbRecord:
    """One semiclassical evaluation: level, energy, turning points, action.

    ``well_depth_index`` is the quasi-solvability index of the underlying
    potential (NaN when the potential family does not carry one).
    """

    well_depth_index: float
    n: int
    energy: float
    x_left: float
    x_right: float
    action: float
    gamma: float


@lru_cache(maxsize=32)
def _leggauss(m):
    nodes, weights = np.polynomial.legendre.leggauss(m)
    return nodes, weights


def _sextic_turning(spec, energy):
    c6, c4, c2 = sextic_coefficients(spec)
    if c2 >= 0.0:
        v_min = 0.0
    else:
        # Stationary point of the even profile in u = x^2.
        u_min = (-c4 + math.sqrt(c4 * c4 - 3.0 * c6 * c2)) / (3.0 * c6)
        v_min = ((c6 * u_min + c4) * u_min + c2) * u_min
    if energy <= v_min:
        raise NoClassicalRegionError(
            "energy %.6g does not exceed the potential minimum %.6g" % (energy, v_min)
        )
    if c2 < 0.0 and energy <= 0.0:
        raise MultiWellError(
            "energy %.6g lies below the central barrier top; the allowed "
            "region splits into two symmetric wells" % energy
        )
    roots = np.roots([c6, c4, c2, -energy])
    real = roots.real[np.abs(roots.imag) <= 1e-9 * (1.0 + np.abs(roots.real))]
    positive = real[real > 0.0]
    if positive.size == 0:
        raise NoClassicalRegionError(
            "no positive turning point found at energy %.6g" % energy
        )
    x = math.sqrt(float(np.max(positive)))
    # Two Newton steps in x remove the squaring round-off.
    for _ in range(2):
        f = ((c6 * x * x + c4) * x * x + c2) * x * x - energy
        df = (6.0 * c6 * x * x * x * x + 4.0 * c4 * x * x + 2.0 * c2) * x
        if df != 0.0:
            x -= f / df
    return -x, x


def _even_poly_turning(spec, energy):
    coeffs = np.asarray(spec.coeffs, dtype=float)
    if energy <= coeffs[0]:
        raise NoClassicalRegionError(
            "energy %.6g does not exceed the potential value at the origin" % energy
        )
    poly = coeffs[::-1].copy()
    poly[-1] -= energy
    roots = np.roots(poly) if poly.size > 1 else np.array([])
    real = roots.real[np.abs(roots.imag) <= 1e-9 * (1.0 + np.abs(roots.real))]
    positive = np.sort(real[real > 0.0])
    if positive.size == 0:
        raise NoClassicalRegionError(
            "no positive turning point found at energy %.6g" % energy
        )
    distinct = [positive[0]]
    for u in positive[1:]:
        if u > distinct[-1] * (1.0 + 1e-9):
            distinct.append(u)
    if len(distinct) > 1:
        raise MultiWellError(
            "found %d distinct turning radii at energy %.6g; the allowed "
            "region is not a single interval" % (len(distinct), energy)
        )
    x = math.sqrt(float(distinct[0]))
    dcoeffs = coeffs[1:] * np.arange(1, coeffs.size)
    for _ in range(2):
        u = x * x
        f = float(np.polyval(coeffs[::-1], u)) - energy
        df = 2.0 * x * float(np.polyval(dcoeffs[::-1], u))
        if df != 0.0:
            x -= f / df
    return -x, x


def _morse_turning(spec, energy):
    beta = spec.N * spec.alpha + spec.b
    c1 = 2.0 * spec.b + spec.alpha * (2.0 * spec.N + 1.0)
    v_inf = morse_asymptote(spec)
    if energy >= v_inf:
        raise AboveAsymptoteError(
            "energy %.6g is not below the dissociation plateau %.6g"
            % (energy, v_inf)
        )
    v_min = 0.5 * (beta * beta - 0.25 * c1 * c1)
    if energy <= v_min:
        raise NoClassicalRegionError(
            "energy %.6g does not exceed the potential minimum %.6g" % (energy, v_min)
        )
    disc = c1 * c1 - 4.0 * (beta * beta - 2.0 * energy)
    sq = math.sqrt(disc)
    z_hi = (c1 + sq) / (2.0 * spec.a)
    z_lo = (beta * beta - 2.0 * energy) / (spec.a * spec.a * z_hi)
    return -math.log(z_hi) / spec.alpha, -math.log(z_lo) / spec.alpha


_TURNING = {
    SexticReduced: _sextic_turning,
    SexticGeneral: _sextic_turning,
    EvenPolynomial: _even_poly_turning,
    Morse: _morse_turning,
}


def turning_points(spec, energy):
    """Classical turning points (x_left, x_right) at the given energy.

    Raises NoClassicalRegionError when the energy does not open an allowed
    region, MultiWellError when it opens more than one, and
    AboveAsymptoteError when the energy reaches an asymptotic plateau.
    """
    energy = float(energy)
    if not math.isfinite(energy):
        raise DomainError("energy must be finite")
    handler = _TURNING.get(type(spec))
    if handler is None:
        raise DomainError(
            "no turning-point rule for potential family %r" % type(spec).__name__
        )
    return handler(spec, energy)


def action(spec, energy, tol=1e-10):
    """Classical action across the allowed region at the given energy.

    The integral picks up inverse-square-root behaviour at both turning
    points, so the interval is mapped through x = mid + half*sin(theta),
    which flattens both edges.  The Gauss-Legendre node count then grows
    geometrically until two consecutive refinements agree to ``tol``
    (relative for actions above one).  Failure to stabilise within the
    node budget raises AccuracyError carrying the best achieved delta.
    """
    x_left, x_right = turning_points(spec, energy)
    mid = 0.5 * (x_left + x_right)
    half = 0.5 * (x_right - x_left)
    previous = None
    delta = math.inf
    hits = 0
    m = 24
    while m <= _NODE_CAP:
        nodes, weights = _leggauss(m)
        phase = 0.5 * math.pi * nodes
        x = mid + half * np.sin(phase)
        local = 2.0 * (energy - evaluate(spec, x))
        integrand = np.sqrt(np.maximum(local, 0.0)) * np.cos(phase)
        value = 0.5 * math.pi * half * float(np.dot(weights, integrand))
        if previous is not None:
            delta = abs(value - previous)
            if delta < tol * max(1.0, abs(value)):
                hits += 1
                if hits >= 2:
                    return value
            else:
                hits = 0
        previous = value
        m = int(m * _GROWTH) + 1
    raise AccuracyError(
        "action quadrature did not stabilise to %g within %d nodes"
        % (tol, _NODE_CAP),
        achieved=delta,
    )


def morse_action_closed(a, b, alpha, energy):
    """Closed-form action for the exponential well ``(a e^{-alpha x} - b)^2 / 2``.

    Valid for energies from the bottom of the bound band up to (not
    including) the dissociation plateau b^2/2.  The well position
    parameter ``a`` shifts the allowed interval rigidly and drops out of
    the loop integral; it is validated but does not enter the value.
    """
    a = float(a)
    b = float(b)
    alpha = float(alpha)
    energy = float(energy)
    if a <= 0.0 or alpha <= 0.0 or b <= 0.0:
        raise DomainError("well parameters a, b, alpha must all be positive")
    if not math.isfinite(energy) or energy < 0.0:
        raise DomainError(
            "closed-form action is defined for energies in [0, b^2/2); got %.6g"
            % energy
        )
    if energy >= 0.5 * b * b:
        raise AboveAsymptoteError(
            "energy %.6g is not below the dissociation plateau %.6g"
            % (energy, 0.5 * b * b)
        )
    return math.pi * (alpha - 2.0 * math.sqrt(b * b - 2.0 * energy) + 2.0 * b) / (
        2.0 * alpha
    )


def gamma(spec, n, energy, tol=1e-11):
    """Quantization correction for level ``n`` at a known energy.

    Returns a WkbRecord with the action S(E) and
    gamma = S / pi - n - 1/2.
    """
    n = _as_int(n, "level index")
    if n < 0:
        raise DomainError("level index must be non-negative")
    energy = float(energy)
    x_left, x_right = turning_points(spec, energy)
    s = action(spec, energy, tol=tol)
    value = s / math.pi - n - 0.5
    return WkbRecord(
        well_depth_index=float(getattr(spec, "N", math.nan)),
        n=n,
        energy=energy,
        x_left=x_left,
        x_right=x_right,
        action=s,
        gamma=value,
    )


def _invert_single_well(spec, target, tol):
    base = float(evaluate(spec, 0.0))
    guess = (target / math.pi) ** 1.5
    if isinstance(spec, (SexticReduced, SexticGeneral)):
        guess *= 1.2
    d_hi = max(2.0, 2.0 * guess)
    for _ in range(200):
        if action(spec, base + d_hi, tol=tol) >= target:
            break
        d_hi *= 2.0
    else:
        raise SearchError("could not bracket the action target from above")
    d_lo = d_hi
    floor = 1e-8 * max(1.0, abs(base))
    while d_lo > floor:
        d_lo *= 0.5
        if action(spec, base + d_lo, tol=tol) < target:
            break
    else:
        raise SearchError(
            "action exceeds the target %.6g arbitrarily close to the well "
            "bottom; no bracket exists" % target
        )
    return base + d_lo, base + d_hi


def _invert_morse(spec, target, tol):
    beta = spec.N * spec.alpha + spec.b
    s_max = math.pi * (spec.alpha + 2.0 * beta) / (2.0 * spec.alpha)
    if target >= s_max:
        raise SpectrumExhaustedError(
            "action target %.6g reaches the dissociation limit %.6g; no "
            "bound level carries that much phase" % (target, s_max)
        )
    v_inf = morse_asymptote(spec)
    c1 = 2.0 * spec.b + spec.alpha * (2.0 * spec.N + 1.0)
    v_min = 0.5 * (beta * beta - 0.25 * c1 * c1)
    span = v_inf - v_min
    lo = v_min + 1e-12 * span
    hi = v_inf - 1e-12 * span
    if action(spec, hi, tol=tol) < target:
        raise SearchError("action target %.6g is not bracketed below the plateau" % target)
    return lo, hi


def bohr_sommerfeld_invert(spec, n, gamma0=0.0, tol=1e-12):
    """Energy whose action equals pi (n + 1/2 + gamma0).

    Setting ``gamma0`` to a modelled correction turns the lowest-order
    quantization rule into a corrected one; gamma0 = 0 recovers the plain
    rule.  The returned energy satisfies the phase condition to roughly
    the action tolerance.
    """
    n = _as_int(n, "level index")
    if n < 0:
        raise DomainError("level index must be non-negative")
    gamma0 = float(gamma0)
    target = math.pi * (n + 0.5 + gamma0)
    if target <= 0.0:
        raise DomainError(
            "requested phase %.6g is not positive; no classical orbit matches"
            % target
        )
    if isinstance(spec, Morse):
        lo, hi = _invert_morse(spec, target, tol)
    else:
        lo, hi = _invert_single_well(spec, target, tol)
    return float(
        brentq(
            lambda e: action(spec, e, tol=tol) - target,
            lo,
            hi,
            rtol=1e-13,
            maxiter=200,
        )
    )
