"""Runnable verification suites over the library invariants.

Each suite takes (params, tol) and returns (passed, detail).  The CLI
`verify` subcommand aggregates them; the pytest suite calls them too.
"""
from __future__ import annotations

import random
from fractions import Fraction

from .labels import (
    gap_charges,
    hw_label,
    is_nonsimple_standard,
    nonsimple_standard,
    orbit_type,
    standard_label,
)
from .levels import (
    LevelParams,
    RSLabel,
    enumerate_infwts,
    enumerate_surv,
    hw_data,
    orbit_of,
    w3_data,
)
from .verlinde import (
    GapDivergenceError,
    fuse_standard,
    fuse_type3_standard,
    fuse_general,
    simple_currents,
    subring_iso_check,
    type3_kernel,
    verlinde_oracle,
)
from .w3modular import (
    DEFAULT_TOL,
    W3SMatrix,
    ratio_weyl_character_check,
    sigma_phase_check,
    sum_fund_modules_check,
    tensor_sum_check,
    w3_fusion,
    w3_verlinde,
    SingularInputError,
)


def _tol(tol):
    return DEFAULT_TOL if tol is None else tol


def suite_levels(params: LevelParams, tol=None):
    ok = params.c_bp == params.c_pi + params.c_w3
    detail = f"c_bp = c_pi + c_w3: {ok}"
    for lab in enumerate_surv(params):
        if lab.s[1] >= 0:
            data = hw_data(params, lab)
            wd = w3_data(params, orbit_of(params, lab))
            if data.delta_tw != wd.delta + 9 * params.kappa / 4:
                return False, f"twisted-weight mismatch at {lab}"
    return ok, detail


def suite_w3_unitarity(params: LevelParams, tol=None):
    tol = _tol(tol)
    smat = W3SMatrix(params)
    checks = {
        "symmetric": smat.is_symmetric(tol),
        "unitary": smat.is_unitary(tol),
        "square=conjugation": smat.squares_to_conjugation(tol),
    }
    return all(checks.values()), ", ".join(f"{k}: {v}" for k, v in checks.items())


def suite_w3_sigma_phase(params: LevelParams, tol=None):
    tol = _tol(tol)
    orbits = enumerate_infwts(params)
    for a in orbits:
        for b in orbits:
            if not sigma_phase_check(params, a.rep, b.rep, tol):
                return False, f"phase identity failed at ({a}, {b})"
    return True, f"{len(orbits) ** 2} pairs"


def suite_w3_verlinde(params: LevelParams, tol=None):
    orbits = enumerate_infwts(params)
    count = 0
    for a in orbits:
        for b in orbits:
            for c in orbits:
                target = w3_fusion(params, a, b, c)
                numeric = w3_verlinde(params, a, b, c)
                if abs(numeric - target) > 1e-6:
                    return False, f"Verlinde mismatch at ({a},{b},{c}): {numeric} vs {target}"
                count += 1
    return True, f"{count} triples"


def suite_appendix(params: LevelParams, tol=None, samples=30, seed=7):
    tol = _tol(tol)
    rng = random.Random(seed)
    orbits = enumerate_infwts(params)
    done = 0
    for _ in range(samples):
        a = rng.choice(orbits).members[rng.randrange(3)]
        b = rng.choice(orbits).members[rng.randrange(3)]
        try:
            if not ratio_weyl_character_check(params, a, b, tol):
                return False, f"ratio identity failed at ({a},{b})"
        except SingularInputError:
            continue
        t = (rng.randrange(3), rng.randrange(3))
        if not tensor_sum_check(params, a, t, b, tol):
            return False, f"tensor-sum identity failed at ({a},{t},{b})"
        jp = Fraction(rng.randrange(1, 400), 401)
        try:
            if not sum_fund_modules_check(params, b, jp, tol):
                return False, f"symmetric-power sum failed at ({b},{jp})"
        except SingularInputError:
            continue
        done += 1
    return done > 0, f"{done} random draws"


def suite_fusion_oracle(params: LevelParams, tol=None, window=2):
    orbits = enumerate_infwts(params)
    kappa = params.kappa
    js = [Fraction(1, 7), Fraction(2, 7)]
    checked = 0
    for orb_a in orbits:
        for orb_b in orbits:
            a = standard_label(js[0], orb_a, 0)
            b = standard_label(js[1], orb_b, 0)
            closed = fuse_standard(params, a, b)
            for ell in range(-window, window + 2):
                for shift in (0, -4 * kappa, 2 * kappa, -2 * kappa):
                    for orb_c in orbits:
                        cand = standard_label(js[0] + js[1] + shift, orb_c, ell)
                        if is_nonsimple_standard(params, cand):
                            continue
                        got = verlinde_oracle(params, a, b, cand)
                        if got != closed.coeff(cand):
                            return False, f"oracle mismatch at {cand}: {got} vs {closed.coeff(cand)}"
                        checked += 1
    return True, f"{checked} coefficients"


def suite_telescoping(params: LevelParams, tol=None):
    jp = Fraction(1, 7)
    count = 0
    for lab in enumerate_surv(params):
        if orbit_type(params, lab) != 3:
            continue
        hw = hw_label(params, lab, 0)
        for orb in enumerate_infwts(params):
            b = standard_label(jp, orb, 0)
            direct = fuse_type3_standard(params, hw, b)
            resolved = fuse_general(params, hw, b)
            if direct != resolved:
                return False, f"telescoping mismatch at ({hw}, {b})"
            count += 1
    return True, f"{count} products"


def suite_simple_currents(params: LevelParams, tol=None):
    if params.u == 3:
        return True, "u = 3: no currents"
    currents = simple_currents(params)
    u, v = params.u, params.v
    expect_delta = Fraction((u - 3) * (2 * v - 3), 6)
    for lab, j, delta in currents:
        if abs(j) != Fraction(u - 3, 3) or delta != expect_delta:
            return False, f"weights of {lab} are ({j}, {delta})"
    return len(currents) == 2, f"{len(currents)} currents, delta = {expect_delta}"


def suite_subring(params: LevelParams, tol=None):
    ok = subring_iso_check(params)
    return ok, "structure constants match" if ok else "structure constants differ"


def suite_gap_structure(params: LevelParams, tol=None):
    for orb in enumerate_infwts(params):
        gaps = gap_charges(params, orb)
        for member in orb.members:
            lab = nonsimple_standard(params, member, 0)
            if lab.j not in gaps:
                return False, f"{lab} missed its own gap set"
            try:
                type3_kernel(params, _vacuum(params), lab)
                return False, f"kernel failed to diverge at {lab}"
            except GapDivergenceError:
                pass
        probe = Fraction(1, 997)
        simple = standard_label(probe, orb, 0)
        if is_nonsimple_standard(params, simple):
            return False, f"{simple} misclassified"
        type3_kernel(params, _vacuum(params), simple)
    return True, "divergence exactly on the gap charges"


def _vacuum(params: LevelParams):
    u, v = params.u, params.v
    return hw_label(params, RSLabel((u - 3, 0, 0), (v - 2, -1, 0)), 0)


SUITES = {
    "levels": suite_levels,
    "w3-unitarity": suite_w3_unitarity,
    "w3-sigma-phase": suite_w3_sigma_phase,
    "w3-verlinde": suite_w3_verlinde,
    "appendix": suite_appendix,
    "fusion-oracle": suite_fusion_oracle,
    "telescoping": suite_telescoping,
    "simple-currents": suite_simple_currents,
    "subring-iso": suite_subring,
    "gap-structure": suite_gap_structure,
}
