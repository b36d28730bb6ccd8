"""Experiment drivers: violation landscapes, coexistence points, scaling laws.

Analytic mode evaluates the closed-form margins of the minimal state
family; circuit mode re-derives every correlator from sampled Fourier
tests so the two can be compared cell by cell.  The coexistence point at
cycle size n is the angle where the CHSH and KCBS margins cross at
phi = 0, found by bisection; its common value is the overlap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analytic, circuits, observables
from .errors import EmptyGrid, NoIntersection
from .linalg import expectation, tensor

BISECTION_MAX_ITER = 200
BISECTION_THETA_TOL = 1e-14
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True)
class LandscapeRecord:
    """Margins of the minimal state at one grid cell."""

    n: int
    theta_deg: float
    phi_deg: float
    chsh_margin: float
    kcbs_margin: float
    mode: str
    shots: int | None = None
    seed: int | None = None


@dataclass(frozen=True)
class CoexistenceRecord:
    """Crossing of the two margins at phi = 0 for one cycle size."""

    n: int
    theta_opt_deg: float
    overlap: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class ScalingRecord:
    """Coexistence data plus the scaling-family margins and large-n laws."""

    n: int
    theta_opt_deg: float
    overlap: float
    residual: float
    psi_n_kcbs_margin: float
    psi_n_chsh_margin: float
    asym_kcbs: float
    asym_chsh: float


@dataclass(frozen=True)
class ScalingStudy:
    records: tuple[ScalingRecord, ...]
    loglog_slope: float | None


def _cell_seed(master_seed: int, cell_index: int) -> int:
    """Deterministic per-cell seed derived from the master seed."""
    return int(np.random.SeedSequence((int(master_seed), int(cell_index))).generate_state(1)[0])


def _sampled_estimate(theta, phi, alice_op, bob_op, shots, cell_seed, term_index) -> float:
    report = circuits.run_hybrid_protocol(theta, phi, alice_op, bob_op)
    term_seed = int(np.random.SeedSequence((cell_seed, int(term_index))).generate_state(1)[0])
    return circuits.sample_shots(report, shots, term_seed).estimator_combined


def _circuit_margins(n, theta, phi, shots, cell_seed) -> tuple[float, float]:
    """Both margins of one cell from sampled Fourier tests.

    CHSH uses the four correlators at the analytic optimal angles; KCBS
    uses the n adjacent products with the cycle's minus sign on the
    wraparound term.  Term seeds derive from the cell seed.
    """
    co = analytic.chsh_coefficients(circuits.prepare_state1(theta, phi), n)
    r0 = observables.alice_rotation(co.omega0)
    r2 = observables.alice_rotation(co.omega2)
    b0 = observables.b0_closed_form(n)
    bm = observables.bm_bm1_closed_form(n)

    chsh_sum = (_sampled_estimate(theta, phi, r2, bm, shots, cell_seed, 0)
                + _sampled_estimate(theta, phi, r2, b0, shots, cell_seed, 1)
                + _sampled_estimate(theta, phi, r0, bm, shots, cell_seed, 2)
                - _sampled_estimate(theta, phi, r0, b0, shots, cell_seed, 3))

    eye2 = np.eye(2)
    kcbs_sum = 0.0
    for j in range(n):
        sign = -1.0 if j == n - 1 else 1.0
        pair = observables.kcbs_pair(n, j)
        kcbs_sum += sign * _sampled_estimate(theta, phi, eye2, pair, shots, cell_seed, 4 + j)
    return chsh_sum - 2.0, kcbs_sum - (n - 2.0)


def landscape_scan(n, theta_grid_deg, phi_grid_deg, mode="analytic",
                   shots=None, seed=None) -> list[LandscapeRecord]:
    """Margins of the minimal state over a (theta, phi) grid in degrees.

    Records come back in theta-major, phi-minor order.  Circuit mode
    needs a shot count; each cell samples with a seed derived from the
    master seed and the cell index, so results are reproducible and
    independent of evaluation order.
    """
    observables.cycle_geometry(n)
    thetas = np.atleast_1d(np.asarray(theta_grid_deg, dtype=float))
    phis = np.atleast_1d(np.asarray(phi_grid_deg, dtype=float))
    if thetas.size == 0 or phis.size == 0:
        raise EmptyGrid("theta and phi grids must both be nonempty")
    if mode not in ("analytic", "circuit"):
        raise ValueError(f"mode must be 'analytic' or 'circuit', got {mode!r}")
    if mode == "circuit" and not shots:
        raise ValueError("circuit mode requires a positive shot count")

    records = []
    if mode == "analytic":
        chsh, kcbs = analytic.state1_margins(np.deg2rad(thetas)[:, None],
                                             np.deg2rad(phis)[None, :], n)
        for i, t in enumerate(thetas):
            for j, p in enumerate(phis):
                records.append(LandscapeRecord(n=n, theta_deg=float(t), phi_deg=float(p),
                                               chsh_margin=float(chsh[i, j]),
                                               kcbs_margin=float(kcbs[i, j]),
                                               mode="analytic"))
        return records

    master = 0 if seed is None else int(seed)
    for i, t in enumerate(thetas):
        for j, p in enumerate(phis):
            cell = i * phis.size + j
            cell_seed = _cell_seed(master, cell)
            ch, kc = _circuit_margins(n, math.radians(float(t)), math.radians(float(p)),
                                      int(shots), cell_seed)
            records.append(LandscapeRecord(n=n, theta_deg=float(t), phi_deg=float(p),
                                           chsh_margin=ch, kcbs_margin=kc,
                                           mode="circuit", shots=int(shots), seed=cell_seed))
    return records


def coexistence_point(n: int) -> CoexistenceRecord:
    """Angle where the CHSH and KCBS margins cross at phi = 0, by bisection.

    The KCBS margin is maximal at theta = 0 and decreasing while the CHSH
    margin rises from negative values, so their difference changes sign
    exactly once on (0, pi/2) for every valid n.  NoIntersection is
    raised if the bracket shows no sign change.
    """
    observables.cycle_geometry(n)

    def gap(theta):
        chsh, kcbs = analytic.state1_margins(theta, 0.0, n)
        return chsh - kcbs

    lo, hi = 1e-6, math.pi / 2 - 1e-6
    gap_lo = gap(lo)
    if gap_lo * gap(hi) > 0:
        raise NoIntersection(f"margins do not cross on (0, pi/2) for n = {n}")

    iterations = 0
    while hi - lo > BISECTION_THETA_TOL and iterations < BISECTION_MAX_ITER:
        mid = 0.5 * (lo + hi)
        gap_mid = gap(mid)
        if gap_lo * gap_mid <= 0:
            hi = mid
        else:
            lo, gap_lo = mid, gap_mid
        iterations += 1

    theta_opt = 0.5 * (lo + hi)
    chsh, kcbs = analytic.state1_margins(theta_opt, 0.0, n)
    return CoexistenceRecord(n=n, theta_opt_deg=math.degrees(theta_opt),
                             overlap=0.5 * (chsh + kcbs), iterations=iterations,
                             residual=abs(chsh - kcbs))


def scaling_study(n_min: int, n_max: int) -> ScalingStudy:
    """Coexistence points, scaling-family margins, and large-n laws per odd n.

    Also fits the log-log slope of overlap against n over the requested
    range (None when fewer than two points).
    """
    observables.cycle_geometry(n_min)
    observables.cycle_geometry(n_max)
    records = []
    for n in range(int(n_min), int(n_max) + 1, 2):
        point = coexistence_point(n)
        theta_n = 2.0 * math.acos(math.sqrt((n + 2.0) / (n + 4.0)))
        psi_chsh, psi_kcbs = analytic.state1_margins(theta_n, 0.0, n)
        asym_kcbs, asym_chsh = analytic.asymptotic_margins(n)
        records.append(ScalingRecord(n=n, theta_opt_deg=point.theta_opt_deg,
                                     overlap=point.overlap, residual=point.residual,
                                     psi_n_kcbs_margin=psi_kcbs, psi_n_chsh_margin=psi_chsh,
                                     asym_kcbs=asym_kcbs, asym_chsh=asym_chsh))
    slope = None
    if len(records) >= 2:
        logs_n = np.log([r.n for r in records])
        logs_overlap = np.log([r.overlap for r in records])
        slope = float(np.polyfit(logs_n, logs_overlap, 1)[0])
    return ScalingStudy(records=tuple(records), loglog_slope=slope)


def _random_states(rng, count: int) -> np.ndarray:
    raw = rng.normal(size=(count, 6)) + 1j * rng.normal(size=(count, 6))
    return raw / np.linalg.norm(raw, axis=1, keepdims=True)


def _chsh_operator(n, omega0, omega2) -> np.ndarray:
    b0 = observables.b0_closed_form(n).matrix
    bm = observables.bm_bm1_closed_form(n).matrix
    r0 = observables.alice_rotation(omega0).matrix
    r2 = observables.alice_rotation(omega2).matrix
    return tensor(r0, bm - b0) + tensor(r2, bm + b0)


def run_validation(report=print) -> bool:
    """Run the cross-module invariant suite; True iff every check passes.

    One line per check goes through ``report``.
    """
    rng = np.random.default_rng(20240917)
    checks: list[tuple[str, bool, str]] = []

    def add(name, ok, detail=""):
        checks.append((name, bool(ok), detail))

    # Cycle geometry: adjacent orthogonality (wraparound included) and
    # commutation of adjacent observables.
    worst_dot, worst_comm = 0.0, 0.0
    for n in range(5, 23, 2):
        vecs = [observables.kcbs_vector(n, j) for j in range(n)]
        obs = [observables.kcbs_observable(n, j).matrix for j in range(n)]
        for j in range(n):
            worst_dot = max(worst_dot, abs(float(vecs[j] @ vecs[(j + 1) % n])))
            comm = obs[j] @ obs[(j + 1) % n] - obs[(j + 1) % n] @ obs[j]
            worst_comm = max(worst_comm, float(np.max(np.abs(comm))))
    add("adjacent orthogonality <= 1e-12", worst_dot <= 1e-12, f"max |<psi_j|psi_j+1>| = {worst_dot:.2e}")
    add("adjacent commutation <= 1e-12", worst_comm <= 1e-12, f"max commutator entry = {worst_comm:.2e}")

    # Cycle operator identity: assembled sum equals the diagonal closed form.
    worst = 0.0
    for n in range(5, 23, 2):
        assembled = sum(observables.kcbs_pair(n, j).matrix for j in range(n - 1))
        assembled = assembled - observables.kcbs_pair(n, n - 1).matrix
        worst = max(worst, float(np.max(np.abs(assembled - observables.s_operator(n).matrix))))
        projector_sum = sum(np.outer(observables.kcbs_vector(n, j), observables.kcbs_vector(n, j))
                            for j in range(n))
        worst = max(worst, float(np.max(np.abs(
            4 * projector_sum - n * np.eye(3) - observables.s_operator(n).matrix))))
    add("cycle operator identity <= 1e-10", worst <= 1e-10, f"max entry gap = {worst:.2e}")

    # Involutions: every B_j, B_0, B_m B_m+1 squares to the identity.
    worst = 0.0
    for n in (5, 7, 9):
        mats = [observables.kcbs_observable(n, j).matrix for j in range(n)]
        mats += [observables.b0_closed_form(n).matrix, observables.bm_bm1_closed_form(n).matrix]
        for mat in mats:
            worst = max(worst, float(np.max(np.abs(mat @ mat - np.eye(3)))))
    add("observable involutions <= 1e-10", worst <= 1e-10, f"max |B^2 - I| = {worst:.2e}")

    # Closed form versus direct matrix expectations on random states.
    worst_chsh, worst_kcbs = 0.0, 0.0
    for n in (5, 7, 9):
        s_mat = tensor(np.eye(2), observables.s_operator(n).matrix)
        for amps in _random_states(rng, 50):
            om0, om2 = rng.uniform(0, 2 * math.pi, size=2)
            direct = expectation(amps, _chsh_operator(n, om0, om2))
            worst_chsh = max(worst_chsh, abs(direct - analytic.chsh_value(amps, n, om0, om2)))
            kcbs = analytic.kcbs_value(amps, n)
            worst_kcbs = max(worst_kcbs, abs(expectation(amps, s_mat) - kcbs.s_kcbs))
    add("closed-form CHSH matches matrices <= 1e-10", worst_chsh <= 1e-10, f"max gap = {worst_chsh:.2e}")
    add("closed-form KCBS matches matrices <= 1e-10", worst_kcbs <= 1e-10, f"max gap = {worst_kcbs:.2e}")

    # Optimality and the Tsirelson ceiling.
    worst_excess, worst_sopt = -math.inf, 0.0
    for n in (5, 7, 9, 11):
        for amps in _random_states(rng, 50):
            co = analytic.chsh_coefficients(amps, n)
            angles = rng.uniform(0, 2 * math.pi, size=(200, 2))
            probes = (co.x0 * np.cos(angles[:, 0]) + co.y0 * np.sin(angles[:, 0])
                      + co.x2 * np.cos(angles[:, 1]) + co.y2 * np.sin(angles[:, 1]))
            worst_excess = max(worst_excess, float(probes.max()) - co.s_opt)
            worst_sopt = max(worst_sopt, co.s_opt)
    add("optimum dominates random probes", worst_excess <= 1e-12, f"max probe excess = {worst_excess:.2e}")
    add("Tsirelson ceiling", worst_sopt <= 2 * math.sqrt(2) + 1e-9, f"max s_opt = {worst_sopt:.12f}")

    # KCBS range and threshold consistency.
    ok_range, ok_threshold = True, True
    for n in (5, 7, 9):
        geo = observables.cycle_geometry(n)
        threshold = analytic.p2_threshold(n)
        for amps in _random_states(rng, 50):
            kcbs = analytic.kcbs_value(amps, n)
            ok_range &= geo.lambda1 - 1e-10 <= kcbs.s_kcbs <= geo.lambda3 + 1e-10
            if abs(kcbs.p2 - threshold) > 1e-10:
                ok_threshold &= (kcbs.margin > 0) == (kcbs.p2 > threshold)
    add("KCBS value within [lambda1, lambda3]", ok_range)
    add("margin sign matches threshold", ok_threshold)

    # Minimal-state coefficient structure at phi = 0 and pi/3.
    worst = 0.0
    for n in (5, 7):
        geo = observables.cycle_geometry(n)
        s_plus = 4 * (-1) ** geo.m * geo.s2 + 2
        s_minus = s_plus - 4
        for theta in (0.3, 1.1, 2.4):
            for phi in (0.0, math.pi / 3):
                co = analytic.chsh_coefficients(analytic.state1(theta, phi), n)
                coh = math.sqrt(geo.c) * math.sin(theta) * math.cos(phi) / (1 + geo.c)
                worst = max(worst,
                            abs(co.x0 + 2 * geo.c / (1 + geo.c)),
                            abs(co.x2 - (2 - 4 * geo.c) / (1 + geo.c)),
                            abs(co.y0 - coh * s_minus),
                            abs(co.y2 - coh * s_plus))
    add("minimal-state coefficients <= 1e-12", worst <= 1e-12, f"max gap = {worst:.2e}")

    # Circuit pipeline: exact Fourier tests reproduce analytic correlators.
    worst = 0.0
    for _ in range(20):
        n = int(rng.choice((5, 7, 9)))
        theta = float(rng.uniform(0, math.pi))
        phi = float(rng.uniform(0, 2 * math.pi))
        psi = analytic.state1(theta, phi)
        co = analytic.chsh_coefficients(psi, n)
        alice = observables.alice_rotation(float(rng.choice((co.omega0, co.omega2, 0.0))))
        bob = (observables.b0_closed_form(n) if rng.uniform() < 0.5
               else observables.bm_bm1_closed_form(n))
        report_exact = circuits.run_hybrid_protocol(theta, phi, alice, bob)
        direct = expectation(psi, tensor(alice.matrix, bob.matrix))
        worst = max(worst, abs(report_exact.estimator_combined - direct),
                    abs(report_exact.p1 - report_exact.p2))
    add("Fourier test matches analytic correlators <= 1e-10", worst <= 1e-10, f"max gap = {worst:.2e}")

    # Sampling determinism.
    base = circuits.run_hybrid_protocol(0.9, 0.4, observables.alice_rotation(0.3),
                                        observables.b0_closed_form(5))
    sample_a = circuits.sample_shots(base, 5000, 11)
    sample_b = circuits.sample_shots(base, 5000, 11)
    add("seeded sampling is reproducible", sample_a.counts == sample_b.counts,
        f"counts = {sample_a.counts}")

    # Coexistence residuals and the tabulated n = 5 point.
    ok_residual = True
    for n in range(5, 17, 2):
        ok_residual &= coexistence_point(n).residual <= RESIDUAL_TOL
    point5 = coexistence_point(5)
    ok_point = abs(point5.theta_opt_deg - 49.605) <= 0.01 and abs(point5.overlap - 0.343069) <= 1e-4
    add("coexistence residuals <= 1e-9", ok_residual)
    add("n = 5 coexistence point", ok_point,
        f"theta = {point5.theta_opt_deg:.4f} deg, overlap = {point5.overlap:.6f}")

    # Landscape symmetry in phi.
    thetas = np.deg2rad(np.linspace(0, 180, 13))
    phis = np.deg2rad(np.linspace(0, 360, 25))
    chsh, kcbs = analytic.state1_margins(thetas[:, None], phis[None, :], 5)
    sym = float(np.max(np.abs(chsh - chsh[:, ::-1])))
    flat = float(np.max(np.abs(kcbs - kcbs[:, :1])))
    add("phi reflection symmetry <= 1e-12", sym <= 1e-12, f"max asymmetry = {sym:.2e}")
    add("KCBS margin independent of phi <= 1e-12", flat <= 1e-12, f"max variation = {flat:.2e}")

    all_ok = True
    for name, ok, detail in checks:
        all_ok &= ok
        suffix = f" ({detail})" if detail else ""
        report(f"[{'PASS' if ok else 'FAIL'}] {name}{suffix}")
    report(f"{sum(ok for _, ok, _ in checks)}/{len(checks)} checks passed")
    return all_ok
