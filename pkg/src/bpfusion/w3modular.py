"""Modular S-matrix of the rational W-algebra factor, its identity suite,
and its fusion coefficients via the rank-2 affine factorisation.

The S-matrix is evaluated numerically (exact rational phases fed through
the complex exponential); every integer consumed downstream comes from
the affine fusion ring, so floats are verification-only here.
"""
from __future__ import annotations

import cmath
import math
from fractions import Fraction

import numpy as np

from .levels import (
    LabelError,
    LevelParams,
    OrbitClass,
    RSLabel,
    conjugate_orbit,
    enumerate_infwts,
    jtw_of,
    orbit_of,
    sigma,
    vacuum_orbit,
)
from .sl3 import (
    OMEGA,
    WEYL,
    _mat_apply,
    ip,
    kac_walton,
    triality,
    weight_multiplicities,
    weyl_character,
)

DEFAULT_TOL = 1e-9


class SingularInputError(ValueError):
    """An identity was evaluated at (or too near) a singular point."""


def cexp(x) -> complex:
    """e^{2 pi i x} for a rational x."""
    return cmath.exp(2j * math.pi * float(x))


def _proj(t) -> tuple[int, int]:
    return (t[1], t[2])


def _plus_rho(w) -> tuple[int, int]:
    return (w[0] + 1, w[1] + 1)


def _weyl_sum(scale: Fraction, a, b) -> complex:
    """sum over the Weyl group of det(w) e^{-2 pi i scale <w(a), b>}."""
    total = 0j
    for m, det in WEYL:
        total += det * cexp(-scale * ip(_mat_apply(m, a), b))
    return total


def w3_smatrix_entry(params: LevelParams, a: RSLabel, b: RSLabel) -> complex:
    """S-matrix entry between the modules labelled by two (r; s) pairs.

    Arbitrary integral triples are accepted; entries vanish when a label
    sits on a shifted alcove boundary.
    """
    u, v = params.u, params.v
    ra, sa = _plus_rho(_proj(a.r)), _plus_rho(_proj(a.s))
    rb, sb = _plus_rho(_proj(b.r)), _plus_rho(_proj(b.s))
    phase = cexp(ip(ra, sb) + ip(sa, rb))
    first = _weyl_sum(Fraction(v, u), ra, rb)
    second = _weyl_sum(Fraction(u, v), sa, sb)
    return phase * first * second / (math.sqrt(3) * u * v)


def xi_point(params: LevelParams, s_proj) -> tuple[complex, complex]:
    """The evaluation point attached to an s-label's projection."""
    scale = -2j * math.pi * params.u / params.v
    return (scale * (s_proj[0] + 1), scale * (s_proj[1] + 1))


class W3SMatrix:
    """The full S-matrix over interior orbits, with its defining checks."""

    def __init__(self, params: LevelParams):
        self.params = params
        self.orbits = enumerate_infwts(params)
        n = len(self.orbits)
        self.matrix = np.empty((n, n), dtype=complex)
        for i, a in enumerate(self.orbits):
            for jx, b in enumerate(self.orbits):
                self.matrix[i, jx] = w3_smatrix_entry(params, a.rep, b.rep)

    def index(self, orbit: OrbitClass) -> int:
        return self.orbits.index(orbit)

    def entry(self, a: OrbitClass, b: OrbitClass) -> complex:
        return self.matrix[self.index(a), self.index(b)]

    def conjugation_permutation(self) -> list[int]:
        return [self.orbits.index(conjugate_orbit(self.params, orb)) for orb in self.orbits]

    def is_symmetric(self, tol: float = DEFAULT_TOL) -> bool:
        return bool(np.max(np.abs(self.matrix - self.matrix.T)) <= tol)

    def is_unitary(self, tol: float = DEFAULT_TOL) -> bool:
        n = self.matrix.shape[0]
        return bool(np.max(np.abs(self.matrix @ self.matrix.conj().T - np.eye(n))) <= tol)

    def squares_to_conjugation(self, tol: float = DEFAULT_TOL) -> bool:
        n = self.matrix.shape[0]
        perm = np.zeros((n, n))
        for i, jx in enumerate(self.conjugation_permutation()):
            perm[i, jx] = 1.0
        return bool(np.max(np.abs(self.matrix @ self.matrix - perm)) <= tol)

    def to_json(self) -> dict:
        return {
            "orbits": [str(orb) for orb in self.orbits],
            "entries": [
                [{"re": z.real, "im": z.imag} for z in row] for row in self.matrix.tolist()
            ],
        }


# ---------------------------------------------------------------------------
# Identity suite


def sigma_phase_check(params: LevelParams, a: RSLabel, b: RSLabel, tol: float = DEFAULT_TOL) -> bool:
    """Cycling the r- or s-triple of the row label multiplies the entry by
    a pure phase fixed by the column label's twisted charge."""
    v = params.v
    base = w3_smatrix_entry(params, a, b)
    phase = (-1) ** v * cexp(v * jtw_of(params, b))
    r_cycled = RSLabel(sigma(a).r, a.s)
    s_cycled = RSLabel(a.r, sigma(a).s)
    ok_r = abs(w3_smatrix_entry(params, r_cycled, b) - phase * base) <= tol
    ok_s = abs(w3_smatrix_entry(params, s_cycled, b) - base / phase) <= tol
    ok_both = abs(w3_smatrix_entry(params, sigma(a), b) - base) <= tol
    return ok_r and ok_s and ok_both


def ratio_weyl_character_check(
    params: LevelParams, a: RSLabel, b: RSLabel, tol: float = DEFAULT_TOL
) -> bool:
    """Entry ratios against the s-vacuum row are exponential-weighted characters."""
    v = params.v
    zero_s = RSLabel(a.r, (v - 3, 0, 0))
    denom = w3_smatrix_entry(params, zero_s, b)
    if abs(denom) < 1e3 * tol:
        raise SingularInputError(f"reference entry too small ({abs(denom):.2e}) for a ratio")
    lhs = w3_smatrix_entry(params, a, b) / denom
    s_proj = _proj(a.s)
    rhs = cexp(ip(s_proj, _plus_rho(_proj(b.r)))) * weyl_character(s_proj, xi_point(params, _proj(b.s)))
    return abs(lhs - rhs) <= tol


def tensor_sum_check(
    params: LevelParams, a: RSLabel, t, b: RSLabel, tol: float = DEFAULT_TOL
) -> bool:
    """Summing the row's s-label over the weights of a finite module is a
    character multiple of the undisplaced entry."""
    total = 0j
    for mu, mult in weight_multiplicities(tuple(t)).items():
        s_new = (a.s[0] - mu[0] - mu[1], a.s[1] + mu[0], a.s[2] + mu[1])
        total += mult * w3_smatrix_entry(params, RSLabel(a.r, s_new), b)
    rhs = (
        cexp(ip(tuple(t), _plus_rho(_proj(b.r))))
        * weyl_character(tuple(t), xi_point(params, _proj(b.s)))
        * w3_smatrix_entry(params, a, b)
    )
    return abs(total - rhs) <= tol


def complete_symmetric_sum(x: complex, xs, m: int) -> complex:
    """h_m(x1, x2, x3) scaled by x^m, summed directly."""
    total = 0j
    for p in range(m + 1):
        for q in range(m + 1 - p):
            total += xs[0] ** p * xs[1] ** q * xs[2] ** (m - p - q)
    return x**m * total


def symmetric_sum_closed_form_check(x, xs, v: int, tol: float = DEFAULT_TOL) -> bool:
    """The truncated generating function of complete symmetric polynomials
    collapses when the three arguments share their v-th power."""
    if len({round(z.real, 9) + 1j * round(z.imag, 9) for z in xs}) != 3:
        raise SingularInputError("arguments must be distinct")
    for z in xs:
        if abs(1 - x * z) < 1e3 * tol:
            raise SingularInputError("x is too close to an inverse argument")
    powers = [z**v for z in xs]
    if max(abs(p - powers[0]) for p in powers) > tol:
        raise SingularInputError("arguments must share their v-th power")
    lhs = sum(complete_symmetric_sum(x, xs, m) for m in range(v - 2))
    rhs = (1 - x**v * powers[1]) / ((1 - x * xs[0]) * (1 - x * xs[1]) * (1 - x * xs[2]))
    return abs(lhs - rhs) <= tol


def _gap_sines(params: LevelParams, jp: Fraction, orbit: OrbitClass):
    """The offsets c_i whose sines control every denominator below."""
    kappa = params.kappa
    rep = orbit.rep
    out = []
    lab = rep
    for _ in range(3):
        out.append(Fraction(jp) - kappa - jtw_of(params, lab))
        lab = sigma(lab)
    return out


def sum_fund_modules_check(
    params: LevelParams, b: RSLabel, jp, tol: float = DEFAULT_TOL
) -> bool:
    """Closed form for the weighted character sum over the symmetric powers
    of the conjugate fundamental, evaluated at a regular charge."""
    v = params.v
    kappa = params.kappa
    jp = Fraction(jp)
    orbit = orbit_of(params, b)
    cs = _gap_sines(params, jp, orbit)
    if any(c.denominator == 1 for c in cs):
        raise SingularInputError(f"charge {jp} is singular for {orbit}")
    xi = xi_point(params, _proj(b.s))
    x = -cexp(ip(_plus_rho(_proj(b.r)), OMEGA[1]) - (jp - kappa))
    lhs = sum(x**m * weyl_character((0, m), xi) for m in range(v - 2))
    sines = 8 * math.prod(math.sin(math.pi * float(c)) for c in cs)
    rhs = (
        (1 - cexp(-v * (jp - kappa)) * cexp(v * jtw_of(params, b)))
        * cmath.exp(3j * math.pi * float(jp - kappa))
        / sines
    )
    return abs(lhs - rhs) <= tol


# ---------------------------------------------------------------------------
# Fusion coefficients


def _select_rep(params: LevelParams, orbit: OrbitClass, use_r: bool) -> RSLabel:
    want = 0
    for member in orbit.members:
        proj = _proj(member.r) if use_r else _proj(member.s)
        if triality(proj) == want:
            return member
    raise LabelError(f"no orbit member of {orbit} has a root-lattice projection")


def _use_r_condition(params: LevelParams) -> bool:
    # one of u, v is coprime to 3; prefer the r-side whenever it is available
    if params.u % 3 == 0:
        return False
    return True


def w3_fusion(params: LevelParams, a: OrbitClass, b: OrbitClass, c: OrbitClass) -> int:
    """Fusion multiplicity of three orbits, as a product of two affine
    fusion coefficients evaluated on root-lattice-aligned representatives."""
    use_r = _use_r_condition(params)
    ra, rb, rc = (_select_rep(params, orb, use_r) for orb in (a, b, c))
    n_r = kac_walton(params.u - 3, ra.r, rb.r, rc.r)
    if n_r == 0:
        return 0
    return n_r * kac_walton(params.v - 3, ra.s, rb.s, rc.s)


def w3_fusion_with_label(params: LevelParams, a: OrbitClass, b_label: RSLabel, c: OrbitClass) -> int:
    """Fusion against an explicit (r; s) label whose s-triple may sit on a
    shifted alcove boundary; boundary labels have vanishing S-rows and
    contribute nothing."""
    if any(x == -1 for x in b_label.s):
        return 0
    if any(x < -1 for x in b_label.s) or any(x < 0 for x in b_label.r):
        raise LabelError(f"{b_label} is outside the extended label range")
    return w3_fusion(params, a, orbit_of(params, b_label), c)


def w3_verlinde(params: LevelParams, a: OrbitClass, b: OrbitClass, c: OrbitClass) -> float:
    """Numeric Verlinde sum over orbits; the independent check of w3_fusion."""
    smat = _cached_smatrix(params)
    vac = vacuum_orbit(params)
    total = 0j
    for m in smat.orbits:
        total += (
            smat.entry(a, m) * smat.entry(b, m) * smat.entry(c, m).conjugate() / smat.entry(vac, m)
        )
    return total


_SMATRIX_CACHE: dict[tuple[int, int], W3SMatrix] = {}


def _cached_smatrix(params: LevelParams) -> W3SMatrix:
    key = (params.u, params.v)
    if key not in _SMATRIX_CACHE:
        _SMATRIX_CACHE[key] = W3SMatrix(params)
    return _SMATRIX_CACHE[key]
