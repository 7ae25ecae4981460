"""Self-contained acceptance suite: twelve numbered criteria with
pass/fail verdicts, shared by the CLI `accept` subcommand and the test
suite.

Each criterion draws its own seeded randomness, checks the stated
tolerances, and enforces its own wall-clock budget, so a verdict is
reproducible in isolation.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import channels, clockdist, convert, distill, measures, purification
from .config import DEFAULT
from .errors import GcdNotOneError
from .linalg import (
    noninteracting_hamiltonian,
    random_density,
    random_observable,
    tensor,
)


@dataclass(frozen=True)
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    seconds: float


def _finish(index, name, t0, ok, detail, budget=None) -> CriterionResult:
    dt = time.time() - t0
    if budget is not None and dt >= budget:
        ok = False
        detail += f"; runtime {dt:.1f}s over budget {budget}s"
    return CriterionResult(index=index, name=name, passed=ok,
                           detail=detail, seconds=dt)


def criterion_1() -> CriterionResult:
    """Optimal purification: 4*V_tot = F and stationarity residual."""
    t0 = time.time()
    worst_rel = 0.0
    worst_kkt = 0.0
    for i in range(200):
        rng = np.random.default_rng([101, i])
        d = 2 + i % 5
        rho = random_density(d, rng)
        H = random_observable(d, rng)
        pur = purification.build_optimal_purification(rho, H)
        F = measures.qfi(rho, H)
        rel = abs(4.0 * pur.total_variance - F) / max(F, 1e-12)
        worst_rel = max(worst_rel, rel)
        worst_kkt = max(worst_kkt, purification.kkt_residual(
            rho, H, pur.aux_hamiltonian))
    ok = worst_rel <= 1e-8 and worst_kkt < 1e-10
    detail = f"max rel |4V-F| {worst_rel:.2e}, max KKT {worst_kkt:.2e}"
    return _finish(1, "optimal purification variance", t0, ok, detail, 10.0)


def _ensemble_variance(phi, H, U, pair_cutoff):
    d = H.shape[0]
    phi_mat = phi.reshape(d, d)
    total = 0.0
    for k in range(d):
        eta = phi_mat @ U[:, k].conj()
        w = float(np.vdot(eta, eta).real)
        if w <= pair_cutoff:
            continue
        e1 = float(np.vdot(eta, H @ eta).real)
        e2 = float(np.vdot(eta, H @ (H @ eta)).real)
        total += e2 - e1 * e1 / w
    return total


def criterion_2() -> CriterionResult:
    """Optimal ensemble reaches F/4 and no alternative undercuts it."""
    t0 = time.time()
    worst_rel = 0.0
    worst_undercut = -math.inf
    pc = DEFAULT.pair_cutoff
    for i in range(30):
        rng = np.random.default_rng([202, i])
        d = 2 + i % 4
        rho = random_density(d, rng)
        H = random_observable(d, rng)
        ens = purification.optimal_ensemble(rho, H)
        F = measures.qfi(rho, H)
        rel = abs(4.0 * ens.average_variance - F) / max(F, 1e-12)
        worst_rel = max(worst_rel, rel)
        phi = purification.canonical_purification(rho).vector
        for _ in range(100):
            G = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
            U = np.linalg.qr(G)[0]
            alt = _ensemble_variance(phi, np.asarray(H, complex), U, pc)
            worst_undercut = max(worst_undercut,
                                 ens.average_variance - alt)
    ok = worst_rel <= 1e-8 and worst_undercut <= 1e-9
    detail = (f"max rel |4*avg-F| {worst_rel:.2e}, "
              f"worst undercut {worst_undercut:.2e}")
    return _finish(2, "convex-roof ensemble optimality", t0, ok, detail, 20.0)


def criterion_3() -> CriterionResult:
    """Five measures non-increasing under 1000 twirled channels each."""
    t0 = time.time()
    worst = -math.inf
    parts = []
    jobs = [("F", None), ("P", None), ("W", None),
            ("renyi", 1.5), ("renyi", 2.0)]
    for idx, (mid, alpha) in enumerate(jobs):
        kw = {} if alpha is None else {"alpha": alpha}
        rep = channels.monotonicity_suite(mid, trials=1000,
                                          seed=3000 + idx, **kw)
        worst = max(worst, rep.max_violation)
        label = mid if alpha is None else f"{mid}({alpha})"
        parts.append(f"{label}:{rep.max_violation:.1e}")
    ok = worst < 1e-8
    return _finish(3, "measure monotonicity", t0, ok,
                   "max violations " + ", ".join(parts), 60.0)


def criterion_4() -> CriterionResult:
    """P >= F, the W sandwich, and the qubit P/F identity."""
    t0 = time.time()
    bad_pf = 0
    bad_w = 0
    bad_qubit = 0
    w_lo, w_hi = math.inf, -math.inf
    for i in range(1000):
        rng = np.random.default_rng([404, i])
        d = 2 + i % 4
        rho = random_density(d, rng)
        H = random_observable(d, rng)
        F = measures.qfi(rho, H)
        P = measures.purity_of_coherence(rho, H)
        W = measures.skew_information(rho, H)
        if not P.infinite and P.value < F - 1e-10:
            bad_pf += 1
        if not (F / 2 - 1e-10 <= W <= F + 1e-10):
            bad_w += 1
        if F > 0:
            w_lo = min(w_lo, W / F)
            w_hi = max(w_hi, W / F)
        if d == 2 and not P.infinite:
            purity = float(np.trace(rho @ rho).real)
            rhs = F / (2.0 * (1.0 - purity))
            if abs(P.value - rhs) > 1e-10 * max(1.0, abs(P.value)):
                bad_qubit += 1
    ok = bad_pf == 0 and bad_w == 0 and bad_qubit == 0
    detail = (f"P<F fails {bad_pf}, W-sandwich fails {bad_w} "
              f"(observed W/F in [{w_lo:.4f}, {w_hi:.4f}]), "
              f"qubit identity fails {bad_qubit}")
    return _finish(4, "inequality chain P>=F, F/2<=W<=F", t0, ok, detail)


def criterion_5() -> CriterionResult:
    """Near-mixed limit: |P/F - 1| shrinking at the stated linear rate."""
    t0 = time.time()
    eps_list = (1e-2, 5e-3, 2.5e-3)
    r_lo, r_hi = math.inf, -math.inf
    bad = 0
    for i in range(20):
        rng = np.random.default_rng([505, i])
        d = 2 + i % 3
        A = random_observable(d, rng)
        A = A - np.trace(A) / d * np.eye(d)
        A = A / np.sum(np.abs(np.linalg.eigvalsh(A)))
        H = random_observable(d, rng)
        devs = []
        for eps in eps_list:
            rho = np.eye(d) / d + eps * A
            F = measures.qfi(rho, H)
            P = measures.purity_of_coherence(rho, H)
            devs.append(abs(P.value / F - 1.0))
        ratios = (devs[1] / devs[0], devs[2] / devs[1])
        r_lo = min(r_lo, *ratios)
        r_hi = max(r_hi, *ratios)
        if not all(1.0 / 3.0 <= r <= 2.0 / 3.0 for r in ratios):
            bad += 1
        if not devs[0] > devs[1] > devs[2]:
            bad += 1
    ok = bad == 0
    detail = (f"ratio window [1/3, 2/3] misses {bad}/20 directions; "
              f"observed ratios in [{r_lo:.4f}, {r_hi:.4f}]")
    return _finish(5, "near-mixed |P/F-1| scaling", t0, ok, detail)


def criterion_6() -> CriterionResult:
    """Fidelity-curvature QFI agrees with the closed form."""
    t0 = time.time()
    worst = 0.0
    for i in range(100):
        rng = np.random.default_rng([606, i])
        d = 2 + i % 4
        rho = random_density(d, rng)
        H = random_observable(d, rng)
        F = measures.qfi(rho, H)
        Ffd = measures.qfi_via_fidelity(rho, H)
        worst = max(worst, abs(Ffd - F) / max(1.0, F))
    ok = worst <= 1e-5
    return _finish(6, "QFI via fidelity curvature", t0, ok,
                   f"max scaled error {worst:.2e}")


def criterion_7() -> CriterionResult:
    """Translated-Poisson convergence under Barbour's bound."""
    t0 = time.time()
    fixtures = {
        "bernoulli": clockdist.integer_distribution(0, [0.5, 0.5]),
        "levels-023": clockdist.integer_distribution(
            0, [1 / 3, 0.0, 1 / 3, 1 / 3]),
    }
    ms = (16, 64, 256)
    ok = True
    notes = []
    for name, p in fixtures.items():
        tvs = [clockdist.tp_distance(p, m) for m in ms]
        bounds = [clockdist.barbour_bound(p, m) for m in ms]
        if not (tvs[0] > tvs[1] > tvs[2]):
            ok = False
        if not all(tv < b for tv, b in zip(tvs, bounds)):
            ok = False
        ratios = (tvs[1] / tvs[0], tvs[2] / tvs[1])
        if not all(0.3 <= r <= 0.7 for r in ratios):
            ok = False
        notes.append(f"{name} tv={tvs[0]:.4f}/{tvs[1]:.4f}/{tvs[2]:.4f} "
                     f"ratios={ratios[0]:.3f},{ratios[1]:.3f}")
    return _finish(7, "translated-Poisson convergence", t0, ok,
                   "; ".join(notes), 10.0)


def criterion_8() -> CriterionResult:
    """Conversion rate threshold trend at 0.9x and 1.1x the limit."""
    t0 = time.time()
    cbit = np.array([1.0, 1.0]) / math.sqrt(2.0)
    H_cbit = np.diag([0.0, 1.0])
    u023 = np.sqrt(np.array([1, 1, 1]) / 3.0)
    H_023 = np.diag([0.0, 2.0, 3.0])
    ok = True
    notes = []
    for name, psi, H in (("cbit", cbit, H_cbit), ("u023", u023, H_023)):
        R = convert.max_rate(psi, H, cbit, H_cbit)
        lo = convert.iid_sweep(psi, H, cbit, H_cbit, 0.9 * R, (256,))[0]
        hi = convert.iid_sweep(psi, H, cbit, H_cbit, 1.1 * R, (256,))[0]
        if not lo.tv_error < 0.05:
            ok = False
        if not hi.tv_error >= 0.1:
            ok = False
        notes.append(f"{name}->cbit 0.9R tv={lo.tv_error:.4f}, "
                     f"1.1R tv={hi.tv_error:.4f}")
    return _finish(8, "rate threshold trend", t0, ok, "; ".join(notes), 30.0)


def criterion_9() -> CriterionResult:
    """Min-entropy SDP sandwiched by the qubit converse and
    discard-achievability; analytic plug-ins re-verified."""
    t0 = time.time()
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    H2 = np.diag([0.0, 1.0])
    ok = True
    worst_gap = 0.0
    notes = []
    for lam in (0.3, 0.6, 0.9):
        rho1 = lam * np.outer(plus, plus) + (1 - lam) * np.eye(2) / 2
        for n in (1, 2, 3):
            rho = rho1
            H = H2
            for _ in range(n - 1):
                rho = tensor(rho, rho1)
            if n > 1:
                H = noninteracting_hamiltonian([H2] * n)
            om = distill.omega_state(rho, H, plus, H2)
            res = distill.conditional_min_entropy(om)
            worst_gap = max(worst_gap, res.primal_dual_gap)
            f_star = res.optimum
            lt = 2.0 * f_star - 1.0
            if lt * lt / (1.0 - lt * lt) > n * lam * lam / (1.0 - lam * lam) + 1e-6:
                ok = False
            if f_star < (1.0 + lam) / 2.0 - 1e-6:
                ok = False
            if n == 3:
                notes.append(f"F*(lam={lam},n=3)={f_star:.6f}")
    exact, asym = distill.qubit_infidelity_bound(0.6, 10)
    if abs(exact - 0.03927) > 1e-5 or abs(asym - 0.04444) > 1e-5:
        ok = False
    if worst_gap >= 1e-7:
        ok = False
    notes.append(f"max gap {worst_gap:.1e}; "
                 f"plug-ins {exact:.6f}/{asym:.6f}")
    return _finish(9, "min-entropy SDP sandwich", t0, ok,
                   "; ".join(notes), 60.0)


def criterion_10() -> CriterionResult:
    """Bound-resource verdicts and 1/eps copy-floor scaling."""
    t0 = time.time()
    plus = np.array([1.0, 1.0]) / math.sqrt(2.0)
    H2 = np.diag([0.0, 1.0])
    ok = True
    r_lo, r_hi = math.inf, -math.inf
    for i in range(50):
        rng = np.random.default_rng([1010, i])
        d = 2 + i % 3
        rho = random_density(d, rng)
        H = random_observable(d, rng)
        if measures.qfi(rho, H) <= 1e-6:
            continue
        if not distill.is_bound_resource(rho, H):
            ok = False
        floors = [distill.distillation_copy_floor(
            rho, H, plus, H2, eps=e).value for e in (0.04, 0.02, 0.01)]
        ratios = (floors[1] / floors[0], floors[2] / floors[1])
        r_lo = min(r_lo, *ratios)
        r_hi = max(r_hi, *ratios)
        if not all(1.9 <= r <= 2.1 for r in ratios):
            ok = False
    detail = f"floor ratios in [{r_lo:.4f}, {r_hi:.4f}]"
    return _finish(10, "bound-resource diagnostic", t0, ok, detail)


def criterion_11() -> CriterionResult:
    """Period and minimal overlap-copy fixtures."""
    t0 = time.time()
    tau = 2.0 * math.pi
    ok = True
    notes = []
    st02 = clockdist.extract_distribution(
        np.array([1.0, 0.0, 1.0]) / math.sqrt(2.0),
        np.diag([0.0, 1.0, 2.0]), tau)
    if st02.period != tau / 2:
        ok = False
    try:
        clockdist.overlap_copy_count(st02.distribution)
        ok = False
        notes.append("levels {0,2}: GcdNotOne not raised")
    except GcdNotOneError:
        notes.append(f"levels {{0,2}}: period tau/2, GcdNotOne")
    st023 = clockdist.extract_distribution(
        np.array([1.0, 0.0, 1.0, 1.0]) / math.sqrt(3.0),
        np.diag([0.0, 1.0, 2.0, 3.0]), tau)
    L = clockdist.overlap_copy_count(st023.distribution)
    if st023.period != tau or L != 2:
        ok = False
    notes.append(f"levels {{0,2,3}}: period tau, L={L}")
    return _finish(11, "period and Bezout fixtures", t0, ok, "; ".join(notes))


def criterion_12() -> CriterionResult:
    """Achievable-to-lower-bound infidelity ratio is 2/(1+lambda)."""
    t0 = time.time()
    worst = 0.0
    for lam in (0.3, 0.6, 0.9):
        for n in (1, 10, 100):
            _, asym = distill.qubit_infidelity_bound(lam, n)
            ach = distill.cirac_comparison(lam, n)
            worst = max(worst, abs(ach / asym - 2.0 / (1.0 + lam)))
    ok = worst <= 1e-12
    return _finish(12, "achievability-gap arithmetic", t0, ok,
                   f"max ratio deviation {worst:.2e}")


ALL_CRITERIA = (criterion_1, criterion_2, criterion_3, criterion_4,
                criterion_5, criterion_6, criterion_7, criterion_8,
                criterion_9, criterion_10, criterion_11, criterion_12)


def run_all():
    return [fn() for fn in ALL_CRITERIA]


def format_result(r: CriterionResult) -> str:
    tag = "PASS" if r.passed else "FAIL"
    return f"{tag} [{r.index:2d}] {r.name} ({r.seconds:.2f}s): {r.detail}"
