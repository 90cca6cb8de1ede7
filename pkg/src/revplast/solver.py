"""Incremental multiscale return-mapping driver with mixed strain/stress control.

Each increment advances the macroscopic strain, localizes a trial state with
frozen plastic strains, and if any phase violates its yield surface solves a
coupled Newton system for the plastic multiplier increments of the active
phases.  The active set is revised after every converged solve: phases whose
converged multiplier is negative leave, phases pushed past yield by the
redistribution join.  Macroscopic components may be strain- or
stress-controlled; stress control runs an outer fixed-point iteration on the
unknown strain components using the homogenized elastic stiffness as the
iteration operator, re-running the inner return mapping each pass.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .errors import ActiveSetOscillationError, ApexSingularityError, StepFailureError
from .mean_field import (MeanFieldOperators, localize, macro_plastic_strain,
                         upscale_stress)
from .plasticity import APEX_TOLERANCE, yield_value
from .tensors import IVEC

STRAIN = "strain"
STRESS = "stress"

# candidate threshold relative to each phase's shear strength
YIELD_TOL = 1e-10


@dataclass(frozen=True)
class SolverSettings:
    newton_tol: float = 1e-12          # times the phase shear strength
    newton_max_iter: int = 50
    active_set_max_iter: int = 20
    mixed_tol: float = 1e-8            # times max(1, |macro stress|)
    mixed_max_iter: int = 60
    max_subdivisions: int = 8
    fd_jacobian: bool = False
    fd_step: float = 1e-8
    validate: bool = True


@dataclass(frozen=True)
class LoadSegment:
    """Per-component end targets and control modes, reached in equal increments.

    A None target means "hold": the component stays at its segment-start value.
    Only strain-controlled components may hold.
    """

    targets: tuple[float | None, ...]
    modes: tuple[str, ...]
    increments: int

    def __post_init__(self):
        if len(self.targets) != 6 or len(self.modes) != 6:
            raise ValueError("segment needs 6 targets and 6 control modes")
        if any(m not in (STRAIN, STRESS) for m in self.modes):
            raise ValueError(f"control modes must be '{STRAIN}' or '{STRESS}'")
        if any(t is None and m == STRESS for t, m in zip(self.targets, self.modes)):
            raise ValueError("stress-controlled components need explicit targets")
        if self.increments < 1:
            raise ValueError("segment needs at least one increment")


@dataclass(frozen=True)
class LoadProgram:
    segments: tuple[LoadSegment, ...]

    @property
    def total_increments(self) -> int:
        return sum(s.increments for s in self.segments)


@dataclass(frozen=True)
class REVState:
    """Converged state of the representative volume at one time step."""

    step: int
    macro_strain: np.ndarray
    macro_stress: np.ndarray
    macro_plastic: np.ndarray
    strain: np.ndarray          # (n, 6)
    plastic_strain: np.ndarray  # (n, 6)
    stress: np.ndarray          # (n, 6)
    multipliers: np.ndarray     # (n,), zero for inactive phases
    active: tuple[bool, ...]


def initial_state(ops: MeanFieldOperators) -> REVState:
    n = ops.n_phases
    z6 = np.zeros(6)
    return REVState(step=0, macro_strain=z6, macro_stress=z6.copy(),
                    macro_plastic=z6.copy(), strain=np.zeros((n, 6)),
                    plastic_strain=np.zeros((n, 6)), stress=np.zeros((n, 6)),
                    multipliers=np.zeros(n), active=(False,) * n)


def phase_stresses(ops: MeanFieldOperators, strains: np.ndarray,
                   plastic_strains: np.ndarray) -> np.ndarray:
    return np.einsum("aij,aj->ai", ops.stiffness, strains - plastic_strains)


def _trial_at(ops: MeanFieldOperators, state: REVState, eps_bar: np.ndarray):
    eps_tr = localize(ops, eps_bar, state.plastic_strain)
    sig_tr = phase_stresses(ops, eps_tr, state.plastic_strain)
    return eps_bar, eps_tr, sig_tr


def trial_step(ops: MeanFieldOperators, state: REVState,
               d_macro_strain: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Elastic predictor: (macro strain, trial phase strains, trial phase stresses)."""
    return _trial_at(ops, state, state.macro_strain + np.asarray(d_macro_strain, float))


def check_yield(ops: MeanFieldOperators, stresses: np.ndarray
                ) -> tuple[np.ndarray, list[int]]:
    """Per-phase yield values (-inf for elastic phases) and candidate plastic set."""
    n = ops.n_phases
    f_vals = np.full(n, -np.inf)
    candidates = []
    for a, ph in enumerate(ops.phases):
        if ph.plastic is None:
            continue
        f_vals[a] = yield_value(ph.plastic, stresses[a])
        if f_vals[a] > YIELD_TOL * ph.plastic.shear_strength:
            candidates.append(a)
    return f_vals, candidates


class _ActiveSystem:
    """Vectorized views of the active phases for the Newton solve."""

    def __init__(self, ops, active):
        models = [ops.phases[a].plastic for a in active]
        self.active = active
        self.tan_f = np.array([np.tan(m.friction_angle) for m in models])
        self.tan_g = np.array([np.tan(m.potential_angle) for m in models])
        self.strength = np.array([m.shear_strength for m in models])
        self.infl_cols = ops.influence[:, active]      # (n, m, 6, 6)
        self.infl_act = ops.influence[np.ix_(active, active)]
        self.stiff = ops.stiffness
        self.stiff_act = ops.stiffness[active]

    def invariants(self, sig_act):
        mean = (sig_act[:, 0] + sig_act[:, 1] + sig_act[:, 2]) / 3.0
        dev = sig_act - mean[:, None] * IVEC
        eq = np.sqrt(1.5 * np.einsum("ai,ai->a", dev, dev))
        return mean, dev, eq

    def residuals(self, sig_act):
        mean, _, eq = self.invariants(sig_act)
        return eq + mean * self.tan_f - self.strength

    def directions(self, sig_act, tan):
        mean, dev, eq = self.invariants(sig_act)
        if np.any(eq <= APEX_TOLERANCE * self.strength):
            raise ApexSingularityError(
                "deviatoric stress vanished in an active phase; flow undefined")
        return 1.5 * dev / eq[:, None] + (tan / 3.0)[:, None] * IVEC

    def stress_update(self, sig_tr, lam, dirs):
        """Stresses of all phases for multipliers ``lam`` with flow ``dirs``."""
        incr = np.einsum("amij,mj->ai", self.infl_cols, lam[:, None] * dirs)
        incr[self.active] -= lam[:, None] * dirs
        return sig_tr + np.einsum("aij,aj->ai", self.stiff, incr)

    def jacobian(self, sig_act, dirs):
        """d F_a / d lambda_b with flow directions frozen at the current iterate."""
        normals = self.directions(sig_act, self.tan_f)
        v = np.einsum("abij,bj->abi", self.infl_act, dirs)
        m = len(self.active)
        v[np.arange(m), np.arange(m)] -= dirs
        return np.einsum("ai,aij,abj->ab", normals, self.stiff_act, v)

    def fd_jacobian(self, sig_tr, lam, dirs, step):
        m = len(self.active)
        jac = np.empty((m, m))
        base = self.residuals(self.stress_update(sig_tr, lam, dirs)[self.active])
        for kb in range(m):
            bumped = lam.copy()
            bumped[kb] += step
            sig = self.stress_update(sig_tr, bumped, dirs)
            jac[:, kb] = (self.residuals(sig[self.active]) - base) / step
        return jac


def _newton_multipliers(ops, sig_tr, active, settings):
    """Solve F(sig(lam)) = 0 on the active set; returns (lam, dirs, stresses).

    Flow directions are refreshed at each iterate; convergence is accepted only
    once the residual holds for stresses recomputed with the refreshed
    directions, so the discrete flow rule uses directions consistent with the
    returned stresses.
    """
    sys_ = _ActiveSystem(ops, active)
    tols = settings.newton_tol * sys_.strength
    lam = np.zeros(len(active))
    dirs = sys_.directions(sig_tr[active], sys_.tan_g)
    for _ in range(settings.newton_max_iter):
        sig = sys_.stress_update(sig_tr, lam, dirs)
        res = sys_.residuals(sig[active])
        if np.all(np.abs(res) <= tols):
            dirs_new = sys_.directions(sig[active], sys_.tan_g)
            sig_chk = sys_.stress_update(sig_tr, lam, dirs_new)
            if np.all(np.abs(sys_.residuals(sig_chk[active])) <= tols):
                return lam, dirs_new, sig_chk
            dirs = dirs_new
            continue
        dirs = sys_.directions(sig[active], sys_.tan_g)
        if settings.fd_jacobian:
            jac = sys_.fd_jacobian(sig_tr, lam, dirs, settings.fd_step)
        else:
            jac = sys_.jacobian(sig[active], dirs)
        try:
            lam = lam - np.linalg.solve(jac, res)
        except np.linalg.LinAlgError as exc:
            raise StepFailureError(f"singular return-mapping system: {exc}") from exc
    raise StepFailureError(
        f"return mapping did not converge in {settings.newton_max_iter} Newton "
        "iterations; subdivide the increment")


def return_map(ops: MeanFieldOperators, state: REVState, eps_bar: np.ndarray,
               eps_tr: np.ndarray, sig_tr: np.ndarray, candidates: list[int],
               settings: SolverSettings):
    """Active-set return mapping from a violating trial state.

    Returns (phase strains, plastic strains, stresses, multipliers, active mask).
    """
    if not candidates:
        raise ValueError("return mapping requires a nonempty candidate set")
    active = list(candidates)
    for _ in range(settings.active_set_max_iter):
        lam, dirs, sig = _newton_multipliers(ops, sig_tr, active, settings)
        negative = [active[k] for k in range(len(active)) if lam[k] < 0.0]
        if negative:
            active = [a for a in active if a not in negative]
            if not active:
                # entire candidate set withdrew: the step is elastic after all
                return (eps_tr, state.plastic_strain.copy(), sig_tr,
                        np.zeros(ops.n_phases), [False] * ops.n_phases)
            continue
        f_vals, _ = check_yield(ops, sig)
        newly = [a for a, ph in enumerate(ops.phases)
                 if ph.plastic is not None and a not in active
                 and f_vals[a] > YIELD_TOL * ph.plastic.shear_strength]
        if not newly:
            break
        active = active + newly
    else:
        raise ActiveSetOscillationError(
            f"active set did not settle within {settings.active_set_max_iter} updates")

    multipliers = np.zeros(ops.n_phases)
    eps_p = state.plastic_strain.copy()
    for k, a in enumerate(active):
        multipliers[a] = lam[k]
        eps_p[a] = eps_p[a] + lam[k] * dirs[k]
    strains = localize(ops, eps_bar, eps_p)
    stresses = phase_stresses(ops, strains, eps_p)
    mask = [a in active for a in range(ops.n_phases)]
    return strains, eps_p, stresses, multipliers, mask


def advance(ops: MeanFieldOperators, state: REVState, d_macro_strain: np.ndarray,
            settings: SolverSettings) -> REVState:
    """One strain-driven increment: trial, yield check, return mapping, macro update."""
    return _advance_to(ops, state, state.macro_strain + np.asarray(d_macro_strain, float),
                       settings)


def _advance_to(ops: MeanFieldOperators, state: REVState, eps_bar_new: np.ndarray,
                settings: SolverSettings) -> REVState:
    """Advance to an absolute macroscopic strain (keeps prescribed components exact)."""
    eps_bar, eps_tr, sig_tr = _trial_at(ops, state, eps_bar_new)
    _, candidates = check_yield(ops, sig_tr)
    if candidates:
        strains, eps_p, stresses, multipliers, mask = return_map(
            ops, state, eps_bar, eps_tr, sig_tr, candidates, settings)
    else:
        strains, eps_p, stresses = eps_tr, state.plastic_strain.copy(), sig_tr
        multipliers, mask = np.zeros(ops.n_phases), [False] * ops.n_phases
    sig_bar = upscale_stress(ops, eps_bar, eps_p)
    eps_bar_p = macro_plastic_strain(ops, eps_p)
    return REVState(step=state.step + 1, macro_strain=eps_bar, macro_stress=sig_bar,
                    macro_plastic=eps_bar_p, strain=strains, plastic_strain=eps_p,
                    stress=stresses, multipliers=multipliers, active=tuple(mask))


def validate_state(ops: MeanFieldOperators, state: REVState,
                   tol: float = 1e-10) -> None:
    """Raise if a converged state violates the constitutive, averaging or KKT identities."""
    sig_ref = max(1.0, float(np.abs(state.stress).max()))
    res_c = np.abs(state.stress - phase_stresses(
        ops, state.strain, state.plastic_strain)).max()
    if res_c > tol * sig_ref:
        raise StepFailureError(f"constitutive residual {res_c:.3e} exceeds tolerance")
    avg = np.einsum("a,ai->i", ops.fractions, state.strain)
    res_avg = np.abs(avg - state.macro_strain).max()
    if res_avg > tol * max(1.0, float(np.abs(state.macro_strain).max())):
        raise StepFailureError(f"strain-average residual {res_avg:.3e} exceeds tolerance")
    for a, ph in enumerate(ops.phases):
        if ph.plastic is None:
            continue
        f_val = yield_value(ph.plastic, state.stress[a])
        tol_f = YIELD_TOL * ph.plastic.shear_strength
        lam = state.multipliers[a]
        if f_val > tol_f or lam < 0.0 or abs(lam * f_val) > tol_f:
            raise StepFailureError(
                f"KKT violation in phase {ph.name!r}: F = {f_val:.3e}, "
                f"multiplier = {lam:.3e}")
    two_forms = ops.stiffness_hom @ (state.macro_strain - state.macro_plastic)
    if np.abs(two_forms - state.macro_stress).max() > 1e-12 * sig_ref:
        raise StepFailureError("macro stress forms disagree beyond roundoff")


def _solve_mixed_increment(ops, state, targets, modes, settings):
    """One increment with per-component strain/stress control."""
    stress_idx = [i for i in range(6) if modes[i] == STRESS]
    strain_idx = [i for i in range(6) if modes[i] == STRAIN]
    eps_new = state.macro_strain.copy()
    eps_new[strain_idx] = np.asarray(targets)[strain_idx]  # prescribed exactly
    if not stress_idx:
        return _advance_to(ops, state, eps_new, settings)
    c_block = ops.stiffness_hom[np.ix_(stress_idx, stress_idx)]
    for _ in range(settings.mixed_max_iter):
        new = _advance_to(ops, state, eps_new, settings)
        residual = new.macro_stress[stress_idx] - np.asarray(targets)[stress_idx]
        scale = max(1.0, float(np.linalg.norm(new.macro_stress)))
        if np.abs(residual).max() <= settings.mixed_tol * scale:
            return new
        eps_new[stress_idx] -= np.linalg.solve(c_block, residual)
    raise StepFailureError(
        f"stress-controlled components did not converge in "
        f"{settings.mixed_max_iter} outer iterations")


def _advance_with_subdivision(ops, state, targets, modes, settings):
    """Solve one increment, halving it on failure up to the subdivision cap."""

    def recurse(st, tg, depth):
        try:
            return _solve_mixed_increment(ops, st, tg, modes, settings)
        except StepFailureError:
            if depth >= settings.max_subdivisions:
                raise
        start = np.where([m == STRAIN for m in modes], st.macro_strain, st.macro_stress)
        mid = 0.5 * (start + np.asarray(tg))
        half = recurse(st, mid, depth + 1)
        return recurse(half, tg, depth + 1)

    out = recurse(state, targets, 0)
    return replace(out, step=state.step + 1)


def drive(ops: MeanFieldOperators, program: LoadProgram,
          settings: SolverSettings | None = None) -> list[REVState]:
    """Run a load program from the virgin state; returns one state per increment plus the start."""
    settings = settings or SolverSettings()
    states = [initial_state(ops)]
    for segment in program.segments:
        start_strain = states[-1].macro_strain.copy()
        start_stress = states[-1].macro_stress.copy()
        start = np.where([m == STRAIN for m in segment.modes], start_strain, start_stress)
        end = np.array([start[i] if t is None else float(t)
                        for i, t in enumerate(segment.targets)])
        for k in range(1, segment.increments + 1):
            if k == segment.increments:
                targets = end.copy()  # land on the segment target bit-exactly
            else:
                targets = start + (end - start) * (k / segment.increments)
            new = _advance_with_subdivision(ops, states[-1], targets,
                                            segment.modes, settings)
            if settings.validate:
                validate_state(ops, new)
            states.append(new)
    return states


def strain_program(path: list[tuple[np.ndarray, int]]) -> LoadProgram:
    """Fully strain-controlled program from (target strain, increments) pairs."""
    segments = tuple(LoadSegment(targets=tuple(float(x) for x in eps),
                                 modes=(STRAIN,) * 6, increments=n)
                     for eps, n in path)
    return LoadProgram(segments=segments)
