"""S-kernels, closed-form Grothendieck fusion, the resolution algorithm,
an independent Fourier-extraction oracle, simple currents, and the
type-3 subring isomorphism check.

Charges and flow indices are exact rationals throughout; the only floats
are S-matrix values, which never feed the closed-form fusion path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .labels import (
    FormalSum,
    HalfInt,
    HWLabel,
    StandardLabel,
    _mod1,
    hw_label,
    is_nonsimple_standard,
    orbit_type,
    resolution,
    rewrite_gaps,
    standard_label,
)
from .levels import (
    LabelError,
    LevelParams,
    RSLabel,
    hw_data,
    j_of,
    jtw_of,
    orbit_of,
    sigma,
    vacuum_orbit,
)
from .sl3 import fusion_table, kac_walton
from .w3modular import _cached_smatrix, cexp, w3_fusion, w3_fusion_with_label

HALF = Fraction(1, 2)


class GapDivergenceError(ValueError):
    """Kernel evaluated against a nonsimple standard label."""


class NotStabilisedError(RuntimeError):
    """A depth-truncated fusion failed to settle; raise the depth."""


class OracleError(RuntimeError):
    """The Verlinde oracle did not land on an integer."""


# ---------------------------------------------------------------------------
# Kernels


@dataclass(frozen=True)
class SKernelEntry:
    value: complex
    w3_factor: complex
    phase_exponent: Fraction  # the value is w3_factor * e^{2 pi i phase} / denominator
    denominator: complex | None = None


def standard_kernel(params: LevelParams, a: StandardLabel, b: StandardLabel) -> SKernelEntry:
    """Kernel entry between two standard labels; symmetric in its arguments."""
    kappa = params.kappa
    la, lb = a.ell.as_fraction(), b.ell.as_fraction()
    phase = -(2 * kappa * la * lb + la * (b.j - kappa) + (a.j - kappa) * lb)
    w3 = _cached_smatrix(params).entry(a.orbit, b.orbit)
    return SKernelEntry(w3 * cexp(phase), w3, phase)


def _type3_middle_form(params: LevelParams, a: HWLabel) -> tuple[Fraction, RSLabel]:
    """Present a type-3 label through its middle orbit representative."""
    if orbit_type(params, a.lam) != 3:
        raise LabelError(f"{a} is not type-3")
    mid = RSLabel(sigma(a.lam).r, (params.v - 2, -1, 0))
    return a.ell.as_fraction() - 1, mid


def _denominator(params: LevelParams, b: StandardLabel) -> complex:
    kappa = params.kappa
    jk = float(b.j - kappa)
    total = 2 * math.cos(3 * math.pi * jk)
    for member in b.orbit.members:
        a_i = jk + 2 * float(jtw_of(params, member))
        total -= 2 * math.cos(math.pi * a_i)
    return total


def type3_kernel(params: LevelParams, a: HWLabel, b: StandardLabel) -> SKernelEntry:
    """Kernel entry between a type-3 highest-weight label and a standard one."""
    if is_nonsimple_standard(params, b):
        raise GapDivergenceError(f"kernel diverges: {b} is nonsimple")
    kappa = params.kappa
    ell, mid = _type3_middle_form(params, a)
    lb = b.ell.as_fraction()
    jlam = j_of(params, mid)
    phase = -(2 * kappa * (ell - HALF) * lb + (ell - HALF) * (b.j - kappa) + jlam * lb)
    under = orbit_of(params, RSLabel(mid.r, (params.v - 3, 0, 0)))
    w3 = _cached_smatrix(params).entry(under, b.orbit)
    den = _denominator(params, b)
    if abs(den) < 1e-12:
        raise GapDivergenceError(f"kernel denominator vanished at {b}")
    return SKernelEntry(w3 * cexp(phase) / den, w3, phase, den)


def vacuum_kernel(params: LevelParams, b: StandardLabel) -> SKernelEntry:
    """Kernel entry of the vacuum module against a simple standard label."""
    u, v = params.u, params.v
    vac = hw_label(params, RSLabel((u - 3, 0, 0), (v - 2, -1, 0)), 0)
    return type3_kernel(params, vac, b)


# ---------------------------------------------------------------------------
# Closed-form Grothendieck fusion


def _omega_shift(s, i: int, sign: int):
    out = list(s)
    out[i] += sign
    out[(i + 1) % 3] -= sign
    return tuple(out)


def fuse_standard(params: LevelParams, a: StandardLabel, b: StandardLabel) -> FormalSum:
    """Grothendieck fusion of two standard labels (closed form)."""
    kappa = params.kappa
    ell = a.ell + b.ell
    jj = a.j + b.j
    rep = b.orbit.rep
    out = FormalSum()
    for orb in _cached_smatrix(params).orbits:
        n = w3_fusion(params, a.orbit, b.orbit, orb)
        if n:
            out = out + n * FormalSum.lone(standard_label(jj - 4 * kappa, orb, ell + 2))
            out = out + n * FormalSum.lone(standard_label(jj + 2 * kappa, orb, ell - 1))
        for i in range(3):
            shifted = RSLabel(rep.r, _omega_shift(rep.s, i, -1))
            n_minus = w3_fusion_with_label(params, a.orbit, shifted, orb)
            if n_minus:
                out = out + n_minus * FormalSum.lone(standard_label(jj - 2 * kappa, orb, ell + 1))
            shifted = RSLabel(rep.r, _omega_shift(rep.s, i, +1))
            n_plus = w3_fusion_with_label(params, a.orbit, shifted, orb)
            if n_plus:
                out = out + n_plus * FormalSum.lone(standard_label(jj, orb, ell))
    return out


def fuse_type3_standard(params: LevelParams, a: HWLabel, b: StandardLabel) -> FormalSum:
    """Grothendieck fusion of a type-3 highest-weight label with a standard one."""
    ell, mid = _type3_middle_form(params, a)
    under = orbit_of(params, RSLabel(mid.r, (params.v - 3, 0, 0)))
    jj = j_of(params, mid) + b.j
    out = FormalSum()
    for orb in _cached_smatrix(params).orbits:
        n = w3_fusion(params, under, b.orbit, orb)
        if n:
            out = out + n * FormalSum.lone(standard_label(jj, orb, HalfInt.of(ell) + b.ell))
    return out


def fuse_type3_type3(params: LevelParams, a: HWLabel, b: HWLabel) -> FormalSum:
    """Grothendieck fusion of two type-3 highest-weight labels."""
    v = params.v
    ell_a, mid_a = _type3_middle_form(params, a)
    ell_b, mid_b = _type3_middle_form(params, b)
    ell = HalfInt.of(ell_a + ell_b)
    out = FormalSum()
    level = params.u - 3
    for rpp, n in fusion_table(level, mid_a.r, mid_b.r).items():
        target = hw_label(params, RSLabel(rpp, (v - 2, -1, 0)), ell)
        out = out + n * FormalSum.lone(target)
    return out


# ---------------------------------------------------------------------------
# General fusion via resolutions


def _exact_hw_standard_product(params: LevelParams, a: HWLabel, b: StandardLabel, top: int) -> FormalSum:
    """Distribute the resolution of `a` through standard fusion; exact for
    output flows <= top."""
    depth = top - b.ell.twice // 2 - a.ell.twice // 2 + 4
    res = resolution(params, a, max(depth, 1))
    out = FormalSum.combine((fuse_standard(params, term, b), coeff) for term, coeff in res)
    return out.restrict(lambda lab: lab.ell.twice <= 2 * top)


def _stable_zone(fs: FormalSum, top: int, width: int) -> bool:
    return not fs.restrict(lambda lab: 2 * (top - width) < lab.ell.twice <= 2 * top)


def fuse_general(params: LevelParams, a, b, depth: int | None = None) -> FormalSum:
    """Grothendieck fusion computed from resolutions and telescope collection.

    Accepts any mix of highest-weight and standard labels.  Nonsimple
    standard terms in the collected output are re-expressed through their
    exact sequences; the result must stabilise within the given depth.
    """
    v = params.v
    if depth is None:
        depth = 9 * v
    if isinstance(a, StandardLabel) and isinstance(b, StandardLabel):
        return fuse_standard(params, a, b)
    if isinstance(a, StandardLabel):
        a, b = b, a
    # resolutions live in the integral-flow sector; pull half units out front
    half = HalfInt.of(HALF)
    shift_back = HalfInt.of(0)
    if not a.ell.is_integer:
        a = HWLabel(a.ell - half, a.lam)
        shift_back = shift_back + half
    if isinstance(b, HWLabel) and not b.ell.is_integer:
        b = HWLabel(b.ell - half, b.lam)
        shift_back = shift_back + half
    if shift_back.twice:
        return fuse_general(params, a, b, depth).shifted(params, shift_back)

    base = (a.ell.twice + b.ell.twice) // 2 + 2
    period = 3 * v
    margin = 4

    def compute(top: int) -> FormalSum:
        if isinstance(b, StandardLabel):
            raw = _exact_hw_standard_product(params, a, b, top)
        else:
            res_b = resolution(params, b, top - (a.ell.twice + b.ell.twice) // 2 + margin)
            cache: dict[tuple, FormalSum] = {}
            parts = []
            for term, coeff in res_b:
                key = (term.j, term.orbit)
                if key not in cache:
                    base_term = StandardLabel(HalfInt.of(0), term.j, term.orbit)
                    cache[key] = _exact_hw_standard_product(params, a, base_term, top + 1 - term.ell.twice // 2)
                parts.append((cache[key].shifted(params, term.ell), coeff))
            raw = FormalSum.combine(parts).restrict(lambda lab: lab.ell.twice <= 2 * top)
        if _stable_zone(raw, top, period):
            return raw
        rewritten = rewrite_gaps(params, raw)
        safe_top = top - margin
        rewritten = rewritten.restrict(lambda lab: lab.ell.twice <= 2 * safe_top)
        if not _stable_zone(rewritten, safe_top, period):
            raise NotStabilisedError(
                f"fusion of {a} and {b} did not telescope by flow {top}; raise the depth"
            )
        return rewritten

    top1 = base + depth
    top2 = top1 + period
    out1 = compute(top1)
    out2 = compute(top2)
    window = top1 - period - margin
    r1 = out1.restrict(lambda lab: lab.ell.twice <= 2 * window)
    r2 = out2.restrict(lambda lab: lab.ell.twice <= 2 * window)
    if r1 != r2 or out2 != r2:
        raise NotStabilisedError(f"fusion of {a} and {b} is not stable at depth {depth}")
    return r1


def fuse(params: LevelParams, a, b, depth: int | None = None) -> FormalSum:
    """Fusion dispatcher: closed forms where they exist, resolutions otherwise."""
    if isinstance(a, StandardLabel) and isinstance(b, StandardLabel):
        return fuse_standard(params, a, b)
    if isinstance(a, StandardLabel) or isinstance(b, StandardLabel):
        hw, std = (b, a) if isinstance(a, StandardLabel) else (a, b)
        if orbit_type(params, hw.lam) == 3:
            return fuse_type3_standard(params, hw, std)
        return fuse_general(params, hw, std, depth)
    if orbit_type(params, a.lam) == 3 and orbit_type(params, b.lam) == 3:
        return fuse_type3_type3(params, a, b)
    return fuse_general(params, a, b, depth)


def fuse_sums(params: LevelParams, fa: FormalSum, fb: FormalSum, depth: int | None = None) -> FormalSum:
    """Bilinear extension of `fuse` to formal sums."""
    out = FormalSum()
    for la, ca in fa:
        for lb, cb in fb:
            out = out + (ca * cb) * fuse(params, la, lb, depth)
    return out


# ---------------------------------------------------------------------------
# Independent Verlinde oracle


def _standard_factor(params: LevelParams, x: StandardLabel, conj: bool):
    kappa = params.kappa
    lx = x.ell.as_fraction()
    sign = -1 if conj else 1
    return {
        "orbit": x.orbit,
        "m_freq": sign * (2 * kappa * lx + (x.j - kappa)),
        "k_freq": sign * lx,
        "d_power": 0,
        "conj": conj,
        "type3_under": None,
    }


def _type3_factor(params: LevelParams, x: HWLabel):
    kappa = params.kappa
    ell, mid = _type3_middle_form(params, x)
    under = orbit_of(params, RSLabel(mid.r, (params.v - 3, 0, 0)))
    return {
        "orbit": under,
        "m_freq": 2 * kappa * (ell - HALF) + j_of(params, mid),
        "k_freq": ell - HALF,
        "d_power": -1,
        "conj": False,
        "type3_under": mid,
    }


def verlinde_oracle(params: LevelParams, a, b, candidate: StandardLabel) -> int:
    """Fusion coefficient of `candidate` in a x b by exact Fourier extraction.

    The charge sum collapses to an exact rational congruence and the
    circle integral to a constant Fourier coefficient of a finite
    trigonometric polynomial, leaving a finite sum of S-matrix ratios.
    Inputs may be standard labels or type-3 highest-weight labels, at
    most one of the latter (two would leave a live denominator).
    """
    if is_nonsimple_standard(params, candidate):
        raise LabelError(f"candidate {candidate} must be simple")
    factors = []
    for x in (a, b):
        if isinstance(x, StandardLabel):
            factors.append(_standard_factor(params, x, conj=False))
        elif isinstance(x, HWLabel) and orbit_type(params, x.lam) == 3:
            factors.append(_type3_factor(params, x))
        else:
            raise LabelError(f"oracle input {x} must be standard or type-3")
    if sum(1 for f in factors if f["d_power"] == -1) > 1:
        raise LabelError("at most one type-3 input: two leave a live denominator")
    factors.append(_standard_factor(params, candidate, conj=True))
    kappa = params.kappa
    vac_under = vacuum_orbit(params)

    m_total = sum(f["m_freq"] for f in factors) + kappa
    if _mod1(m_total) != 0:
        return 0
    k_total = sum(f["k_freq"] for f in factors) + HALF
    d_total = sum(f["d_power"] for f in factors) + 1
    assert d_total in (0, 1)

    smat = _cached_smatrix(params)
    total = 0j
    two_k = 2 * k_total
    assert two_k.denominator == 1
    two_k = int(two_k)
    for mu in smat.orbits:
        coeff = 1 + 0j
        for f in factors:
            entry = smat.entry(f["orbit"], mu)
            coeff *= entry.conjugate() if f["conj"] else entry
        coeff /= smat.entry(vac_under, mu)
        if d_total == 0:
            kint = 1.0 if two_k == 0 else 0.0
        else:
            # expand D(k, mu) = y^3 + y^-3 - sum_i (y w_i + y^-1 w_i*) against y^{-2K}
            kint = 0j
            if two_k == 3:
                kint += 1
            if two_k == -3:
                kint += 1
            for member in mu.members:
                w_i = cexp(jtw_of(params, member))
                if two_k == 1:
                    kint -= w_i
                if two_k == -1:
                    kint -= w_i.conjugate()
        total += coeff * kint
    rounded = round(total.real)
    if abs(total - rounded) > 1e-6:
        raise OracleError(f"oracle value {total} is not an integer")
    return int(rounded)


# ---------------------------------------------------------------------------
# Simple currents and the type-3 subring


def simple_currents(params: LevelParams) -> list[tuple[HWLabel, Fraction, Fraction]]:
    """The two order-3 invertible highest-weight labels with their weights.

    Empty for u = 3, where both would collapse onto the vacuum orbit.
    """
    u, v = params.u, params.v
    if u == 3:
        return []
    out = []
    for r in ((0, u - 3, 0), (0, 0, u - 3)):
        mid = RSLabel(r, (v - 2, -1, 0))
        label = hw_label(params, mid, 0)
        data = hw_data(params, mid)
        for other in _type3_basis(params):
            product = fuse_type3_type3(params, label, other)
            if len(product) != 1 or any(c != 1 for _, c in product):
                raise RuntimeError(f"{label} failed the invertibility scan against {other}")
        out.append((label, data.j, data.delta))
    return out


def _type3_basis(params: LevelParams) -> list[HWLabel]:
    u, v = params.u, params.v
    out = []
    for r0 in range(u - 2):
        for r1 in range(u - 2 - r0):
            r = (r0, r1, u - 3 - r0 - r1)
            out.append(hw_label(params, RSLabel(r, (v - 2, -1, 0)), 0))
    return out


def subring_iso_check(params: LevelParams) -> bool:
    """Structure constants of the type-3 subring match the affine fusion ring."""
    level = params.u - 3
    basis = _type3_basis(params)
    mids = [_type3_middle_form(params, lab)[1].r for lab in basis]
    for i, a in enumerate(basis):
        for jx, b in enumerate(basis):
            product = fuse_type3_type3(params, a, b)
            total = sum(coeff for _, coeff in product)
            expected_total = 0
            for kx, c in enumerate(basis):
                expected = kac_walton(level, mids[i], mids[jx], mids[kx])
                if product.coeff(c) != expected:
                    return False
                expected_total += expected
            if total != expected_total:
                return False
    return True
