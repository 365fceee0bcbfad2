"""Potential families for the one-dimensional Schrodinger problem H = -1/2 d^2/dx^2 + V(x).

Provides immutable specifications of the supported potentials (reduced and
general sextic oscillators, the exponential Morse well, even polynomial
oracles, and first-order factorization partners built from analytic seed
functions), together with pointwise evaluation and the closed-form
log-derivative chains of the seeds.

Units are atomic throughout (hbar = m = 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import DomainError, SeedError, ShapeError, UnsupportedParameterError

__all__ = [
    "SexticReduced",
    "SexticGeneral",
    "Morse",
    "EvenPolynomial",
    "SusyPartner",
    "SexticGround",
    "MorseGround",
    "PotentialSpec",
    "SeedSpec",
    "evaluate",
    "sextic_coefficients",
    "seed_log_derivatives",
    "susy_partner_closed_form",
    "barrier_top",
    "morse_asymptote",
    "format_spec",
    "parse_spec",
]


def _as_int(value, what):
    """Coerce a value that must be a non-negative integer."""
    r = round(float(value))
    if abs(float(value) - r) > 1e-12 or r < 0:
        raise UnsupportedParameterError(f"{what} must be a non-negative integer, got {value!r}")
    return int(r)


# ---------------------------------------------------------------------------
# potential specifications
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SexticReduced:
    """Sextic oscillator V(x) = (x^6 + 2 x^4 - 2 (2N+1) x^2) / 2.

    The continuous parameter N controls the depth of the two symmetric
    wells; at non-negative integer N the lowest N+1 even states are
    polynomially solvable.
    """

    N: float

    def __post_init__(self):
        if not math.isfinite(self.N):
            raise DomainError("N must be finite")


@dataclass(frozen=True)
class SexticGeneral:
    """Two-parameter sextic oscillator V(x) = (nu^2 x^6 + 2 nu mu x^4 + (mu^2 - (4N+3) nu) x^2) / 2."""

    nu: float
    mu: float
    N: float

    def __post_init__(self):
        if not (self.nu > 0):
            raise DomainError(f"nu must be positive, got {self.nu}")
        if not (math.isfinite(self.mu) and math.isfinite(self.N)):
            raise DomainError("mu and N must be finite")


@dataclass(frozen=True)
class Morse:
    """Exponential well V(x) = (a^2 z^2 - a z (2b + alpha (2N+1)) + (N alpha + b)^2) / 2, z = exp(-alpha x).

    Tends to the finite asymptote (N alpha + b)^2 / 2 as x -> +inf and grows
    exponentially as x -> -inf, so only finitely many bound states exist.
    """

    a: float
    b: float
    alpha: float
    N: float

    def __post_init__(self):
        if not (self.a > 0 and self.alpha > 0):
            raise DomainError("a and alpha must be positive")
        if not (math.isfinite(self.b) and math.isfinite(self.N)):
            raise DomainError("b and N must be finite")


@dataclass(frozen=True)
class EvenPolynomial:
    """Even polynomial potential V(x) = sum_i coeffs[i] * x^(2i), confining (positive leading coefficient)."""

    coeffs: tuple

    def __init__(self, coeffs):
        coeffs = tuple(float(c) for c in coeffs)
        if not coeffs:
            raise DomainError("coeffs must be non-empty")
        if not all(math.isfinite(c) for c in coeffs):
            raise DomainError("coeffs must be finite")
        if coeffs[-1] <= 0:
            raise DomainError("leading coefficient must be positive (confining potential)")
        object.__setattr__(self, "coeffs", coeffs)


# ---------------------------------------------------------------------------
# factorization seeds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SexticGround:
    """Analytic sextic eigenstate used as a factorization seed.

    u(x) = exp(-nu x^4/4 - mu x^2/2) * p(x^2), with ``poly`` the ascending
    coefficients of the nodeless polynomial p.
    """

    N: int
    poly: tuple
    nu: float = 1.0
    mu: float = 1.0

    def __init__(self, N, poly=(1.0,), nu=1.0, mu=1.0):
        object.__setattr__(self, "N", _as_int(N, "seed N"))
        poly = tuple(float(c) for c in poly)
        if not poly or abs(poly[-1]) == 0.0:
            raise SeedError("seed polynomial must have a nonzero leading coefficient")
        object.__setattr__(self, "poly", poly)
        if not (nu > 0):
            raise DomainError("nu must be positive")
        object.__setattr__(self, "nu", float(nu))
        object.__setattr__(self, "mu", float(mu))


@dataclass(frozen=True)
class MorseGround:
    """Ground state of the Morse family, u(x) = exp(-(a/alpha) z) z^(N + b/alpha), z = exp(-alpha x)."""

    N: int
    a: float = 1.0
    b: float = 8.0
    alpha: float = math.sqrt(2.0)

    def __init__(self, N, a=1.0, b=8.0, alpha=math.sqrt(2.0)):
        object.__setattr__(self, "N", _as_int(N, "seed N"))
        if not (a > 0 and alpha > 0):
            raise DomainError("a and alpha must be positive")
        object.__setattr__(self, "a", float(a))
        object.__setattr__(self, "b", float(b))
        object.__setattr__(self, "alpha", float(alpha))


@dataclass(frozen=True)
class SusyPartner:
    """Partner potential V1(x) = V0(x) - (ln u)''(x) built from a nodeless seed u of V0."""

    base: "PotentialSpec"
    seed: "SeedSpec"


PotentialSpec = Union[SexticReduced, SexticGeneral, Morse, EvenPolynomial, SusyPartner]
SeedSpec = Union[SexticGround, MorseGround]


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def sextic_coefficients(spec):
    """Coefficients (c6, c4, c2) with V(x) = c6 x^6 + c4 x^4 + c2 x^2.

    The reduced variant delegates to the general one at nu = mu = 1, so the
    two families agree bit-for-bit there.
    """
    if isinstance(spec, SexticReduced):
        nu, mu, N = 1.0, 1.0, spec.N
    elif isinstance(spec, SexticGeneral):
        nu, mu, N = spec.nu, spec.mu, spec.N
    else:
        raise UnsupportedParameterError(f"not a sextic spec: {spec!r}")
    return 0.5 * nu * nu, nu * mu, 0.5 * (mu * mu - (4.0 * N + 3.0) * nu)


def _check_x(x):
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("x must be finite")
    return x


def _eval_sextic(spec, x):
    c6, c4, c2 = sextic_coefficients(spec)
    u = x * x
    return ((c6 * u + c4) * u + c2) * u


def _eval_morse(spec, x):
    z = np.exp(-spec.alpha * x)
    beta = spec.N * spec.alpha + spec.b
    c1 = spec.a * (2.0 * spec.b + spec.alpha * (2.0 * spec.N + 1.0))
    return 0.5 * (spec.a * spec.a * z * z - c1 * z + beta * beta)


def _eval_even_poly(spec, x):
    return npoly.polyval(x * x, spec.coeffs)


def _eval_partner(spec, x):
    base_v = evaluate(spec.base, x)
    _, w1, _ = seed_log_derivatives(spec.seed, x, check_positive=True)
    return base_v - w1


_EVALUATORS = {
    SexticReduced: _eval_sextic,
    SexticGeneral: _eval_sextic,
    Morse: _eval_morse,
    EvenPolynomial: _eval_even_poly,
    SusyPartner: _eval_partner,
}


def evaluate(spec, x):
    """Evaluate V(x) for any potential spec; accepts scalars or arrays."""
    try:
        fn = _EVALUATORS[type(spec)]
    except KeyError:
        raise UnsupportedParameterError(f"unknown potential spec {type(spec).__name__}") from None
    xa = _check_x(x)
    out = fn(spec, xa)
    if np.ndim(x) == 0:
        return float(out)
    return out


def morse_asymptote(spec):
    """The x -> +inf limit (N alpha + b)^2 / 2 of a Morse spec."""
    if not isinstance(spec, Morse):
        raise UnsupportedParameterError("morse_asymptote requires a Morse spec")
    beta = spec.N * spec.alpha + spec.b
    return 0.5 * beta * beta


# ---------------------------------------------------------------------------
# seed log-derivative chains
# ---------------------------------------------------------------------------

def _sextic_seed_polys(seed):
    """Ascending x-coefficients of u, u', u'', u''' divided by the gauge factor.

    With u = exp(g) Q, successive derivatives are exp(g) S_k where
    S_0 = Q and S_{k+1} = g' S_k + S_k'.
    """
    q = np.zeros(2 * len(seed.poly) - 1)
    q[::2] = seed.poly
    gprime = np.array([0.0, -seed.mu, 0.0, -seed.nu])
    polys = [q]
    for _ in range(3):
        polys.append(npoly.polyadd(npoly.polymul(gprime, polys[-1]), npoly.polyder(polys[-1])))
    return polys


def _morse_seed_polys(seed):
    """Ascending z-coefficients of the Morse derivative chain.

    With u = exp(G) S(z), G = -(a/alpha) z - b x and z = exp(-alpha x),
    d/dx (exp(G) S) = exp(G) ((a z - b) S - alpha z S'), so each derivative
    stays a polynomial in z.
    """
    s = np.zeros(seed.N + 1)
    s[seed.N] = 1.0
    gp = np.array([-seed.b, seed.a])
    polys = [s]
    for _ in range(3):
        cur = polys[-1]
        nxt = npoly.polyadd(
            npoly.polymul(gp, cur),
            npoly.polymul(np.array([0.0, -seed.alpha]), npoly.polyder(cur)),
        )
        polys.append(nxt)
    return polys


def seed_log_derivatives(seed, x, check_positive=False):
    """Closed-form chain W = (ln u)', W' and W'' of a seed at the points x.

    Computed from ratios of the derivative polynomials of u, which avoids
    evaluating the (rapidly decaying) gauge factor altogether:
    W = u'/u, W' = u''/u - W^2, W'' = u'''/u - 3 (u''/u) W + 2 W^3.
    """
    xa = _check_x(x)
    if isinstance(seed, SexticGround):
        polys = _sextic_seed_polys(seed)
        arg = xa
    elif isinstance(seed, MorseGround):
        polys = _morse_seed_polys(seed)
        arg = np.exp(-seed.alpha * xa)
    else:
        raise UnsupportedParameterError(f"unknown seed spec {type(seed).__name__}")
    s0 = npoly.polyval(arg, polys[0])
    if check_positive and np.any(s0 <= 0.0):
        raise SeedError("seed function is not positive at the requested points")
    if np.any(s0 == 0.0):
        raise SeedError("seed function vanishes at a requested point")
    r1 = npoly.polyval(arg, polys[1]) / s0
    r2 = npoly.polyval(arg, polys[2]) / s0
    r3 = npoly.polyval(arg, polys[3]) / s0
    w = r1
    w1 = r2 - w * w
    w2 = r3 - 3.0 * r2 * w + 2.0 * w**3
    if np.ndim(x) == 0:
        return float(w), float(w1), float(w2)
    return w, w1, w2


# ---------------------------------------------------------------------------
# closed-form partner and barrier top
# ---------------------------------------------------------------------------

def susy_partner_closed_form(spec, N=None):
    """Closed form of the Morse partner potential built from the ground-state seed.

    Factorizing out the ground state of the Morse spec with integer
    parameter N yields the same family one step down plus a constant:

        V0(x; N) - (ln u)''(x) = V0(x; N-1) + shift,
        shift = alpha (N alpha + b) - alpha^2 / 2,

    where the shift equals the first excitation energy of the original
    well, as required for the partner's ground level to sit there.
    Returns the pair (Morse spec with N-1, shift).
    """
    if not isinstance(spec, Morse):
        raise UnsupportedParameterError("susy_partner_closed_form requires a Morse spec")
    n_int = _as_int(spec.N if N is None else N, "Morse N")
    if N is not None and abs(float(N) - spec.N) > 1e-12:
        raise UnsupportedParameterError("explicit N disagrees with the potential's N")
    shift = spec.alpha * (n_int * spec.alpha + spec.b) - 0.5 * spec.alpha**2
    return Morse(spec.a, spec.b, spec.alpha, float(n_int - 1)), shift


def barrier_top(spec):
    """Location and height of the local maximum between the two sextic wells.

    For the sextic family the origin is always a stationary point with
    V(0) = 0; it is a local maximum only while the quadratic coefficient is
    negative (N > -1/2 in the reduced case).
    """
    try:
        _, _, c2 = sextic_coefficients(spec)
    except UnsupportedParameterError:
        raise ShapeError("barrier_top requires a sextic spec") from None
    if c2 >= 0:
        raise ShapeError("potential is a single well: no interior barrier")
    return 0.0, 0.0


# ---------------------------------------------------------------------------
# flat key-value serialization (used by the CLI config format)
# ---------------------------------------------------------------------------

_FAMILY_NAMES = {
    SexticReduced: "sextic_reduced",
    SexticGeneral: "sextic_general",
    Morse: "morse",
    EvenPolynomial: "even_polynomial",
}


def format_spec(spec):
    """Render a spec as a single flat key-value line, e.g. ``family=sextic_reduced N=0.25``."""
    if isinstance(spec, SexticReduced):
        return f"family=sextic_reduced N={spec.N:.17g}"
    if isinstance(spec, SexticGeneral):
        return f"family=sextic_general nu={spec.nu:.17g} mu={spec.mu:.17g} N={spec.N:.17g}"
    if isinstance(spec, Morse):
        return f"family=morse a={spec.a:.17g} b={spec.b:.17g} alpha={spec.alpha:.17g} N={spec.N:.17g}"
    if isinstance(spec, EvenPolynomial):
        return "family=even_polynomial coeffs=" + ",".join(f"{c:.17g}" for c in spec.coeffs)
    raise UnsupportedParameterError(f"cannot serialize {type(spec).__name__}")


def _parse_tokens(text):
    fields = {}
    for tok in text.split():
        if "=" not in tok:
            raise DomainError(f"malformed token {tok!r}: expected key=value")
        key, val = tok.split("=", 1)
        fields[key] = val
    return fields


_FAMILY_FIELDS = {
    "sextic_reduced": ("N",),
    "sextic_general": ("nu", "mu", "N"),
    "morse": ("a", "b", "alpha", "N"),
    "even_polynomial": ("coeffs",),
}


def parse_spec(text):
    """Parse the flat key-value format produced by :func:`format_spec`."""
    fields = _parse_tokens(text)
    family = fields.pop("family", None)
    if family is None:
        raise DomainError("missing family=... field")
    if family not in _FAMILY_FIELDS:
        raise DomainError(f"unknown potential family {family!r}")
    values = {}
    for key in _FAMILY_FIELDS[family]:
        if key not in fields:
            raise DomainError(f"missing required field {key!r} for family {family!r}")
        values[key] = fields.pop(key)
    if fields:
        raise DomainError(f"unexpected extra fields {sorted(fields)} for family {family!r}")
    try:
        if family == "sextic_reduced":
            return SexticReduced(N=float(values["N"]))
        if family == "sextic_general":
            return SexticGeneral(nu=float(values["nu"]), mu=float(values["mu"]), N=float(values["N"]))
        if family == "morse":
            return Morse(
                a=float(values["a"]),
                b=float(values["b"]),
                alpha=float(values["alpha"]),
                N=float(values["N"]),
            )
        return EvenPolynomial(tuple(float(c) for c in values["coeffs"].split(",")))
    except ValueError as exc:
        raise DomainError(f"bad numeric value in spec: {exc}") from None
