"""Batch command line front end.

Exit codes: 0 success, 1 input error (bad files, schemas, or values),
2 contract violation (a checked numerical guarantee did not hold).
Randomized subcommands default their seed to the COHERENCE_FORGE_SEED
environment variable (1234 if unset); --seed wins over the environment.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import acceptance, channels, clockdist, convert, distill, measures, purification
from .errors import (
    CoherenceForgeError,
    GcdNotOneError,
    SchemaError,
    SolverStallError,
    ValidationError,
    ZeroNuError,
)
from .linalg import (
    DensityMatrix,
    HermitianObservable,
    PureState,
    array_from_json,
    array_to_json,
    density_matrix,
    noninteracting_hamiltonian,
    observable,
    pure_state,
    tensor,
)


def default_seed() -> int:
    return int(os.environ.get("COHERENCE_FORGE_SEED", "1234"))


def load_state(path: str):
    """Read a JSON state: a 1-D array is a pure state, 2-D a density
    matrix."""
    with open(path) as fh:
        obj = json.load(fh)
    arr = array_from_json(obj)
    if arr.ndim == 1:
        return pure_state(arr)
    return density_matrix(arr)


def load_hamiltonian(path: str, tau: float | None = None):
    """Read a Hamiltonian file.

    Two schemas are accepted: a dense matrix {dim, re, im}, or the exact
    commensurate form {"levels_in_2pi_over_tau": [ints], "basis": matrix,
    "tau": t} which builds H = basis diag(2*pi*n/tau) basis^dag.  Returns
    (observable, tau, dense_fallback); dense inputs leave grid snapping
    to the downstream operation.
    """
    with open(path) as fh:
        obj = json.load(fh)
    if isinstance(obj, dict) and "levels_in_2pi_over_tau" in obj:
        levels = obj["levels_in_2pi_over_tau"]
        if not isinstance(levels, list) or not all(
                isinstance(n, int) or (isinstance(n, float) and n == int(n))
                for n in levels):
            raise SchemaError("levels_in_2pi_over_tau must be integers")
        t = float(obj.get("tau", tau if tau is not None else 2.0 * math.pi))
        if t <= 0:
            raise ValidationError("tau must be positive")
        unit = 2.0 * math.pi / t
        H = np.diag([unit * int(n) for n in levels]).astype(complex)
        if "basis" in obj:
            B = array_from_json(obj["basis"])
            if B.ndim != 2 or B.shape[0] != len(levels):
                raise SchemaError("basis shape does not match levels")
            if np.max(np.abs(B @ B.conj().T - np.eye(len(levels)))) > 1e-10:
                raise ValidationError("basis is not unitary")
            H = B @ H @ B.conj().T
        return observable(H), t, False
    arr = array_from_json(obj)
    if arr.ndim != 2:
        raise SchemaError("Hamiltonian matrix must be 2-D")
    return observable(arr), (tau if tau is not None else 2.0 * math.pi), True


def _dense_warning(dense: bool, what: str) -> None:
    if dense:
        print(f"note: dense Hamiltonian for {what}; eigenvalues are "
              "snapped to the 2*pi/tau grid (level_rel tolerance)",
              file=sys.stderr)


def _pure_vec(state, what: str) -> np.ndarray:
    if isinstance(state, PureState):
        return state.vector
    raise ValidationError(f"{what} must be a pure state (1-D JSON array)")


def _emit(obj) -> None:
    print(json.dumps(obj))


def _mv(value) -> object:
    from .measures import MeasureValue
    if isinstance(value, MeasureValue):
        return "inf" if value.infinite else value.value
    if isinstance(value, float) and math.isinf(value):
        return "inf"
    return value


def cmd_measures(args) -> int:
    st = load_state(args.state)
    H, _, _ = load_hamiltonian(args.ham)
    out = {
        "F": measures.qfi(st, H),
        "P": _mv(measures.purity_of_coherence(st, H)),
        "W": measures.skew_information(st, H),
        "variance_if_pure": (measures.energy_variance(st, H)
                             if isinstance(st, PureState) else None),
        "support_commutes": measures.support_commutes(st, H),
    }
    if args.alpha is not None:
        out["renyi"] = _mv(measures.renyi_purity_monotone(st, H, args.alpha))
        out["renyi_alpha"] = args.alpha
    _emit(out)
    return 0


def cmd_purify(args) -> int:
    st = load_state(args.state)
    H, _, _ = load_hamiltonian(args.ham)
    pur = purification.build_optimal_purification(st, H)
    out = {
        "aux_hamiltonian": array_to_json(pur.aux_hamiltonian.matrix),
        "total_variance": pur.total_variance,
        "qfi_over_4": measures.qfi(st, H) / 4.0,
        "kkt_residual": purification.kkt_residual(st, H,
                                                  pur.aux_hamiltonian),
    }
    if args.ensemble:
        ens = purification.optimal_ensemble(st, H)
        out["ensemble"] = [
            {"weight": float(w), "state": array_to_json(member.vector)}
            for w, member in zip(ens.weights, ens.states)
        ]
    _emit(out)
    return 0


def cmd_dist(args) -> int:
    st = load_state(args.state)
    H, tau, dense = load_hamiltonian(args.ham, args.tau)
    if args.tau is not None:
        tau = args.tau
    _dense_warning(dense, "clock distribution extraction")
    vec = _pure_vec(st, "--state")
    clock = clockdist.extract_distribution(vec, H, tau)
    p_m = clockdist.convolve_n(clock.distribution, args.copies)
    print("n,p")
    for n, pr in zip(range(p_m.offset, p_m.offset + len(p_m.probs)),
                     p_m.probs):
        print(f"{n},{float(pr)!r}")
    try:
        L = clockdist.overlap_copy_count(clock.distribution)
    except GcdNotOneError:
        L = "GcdNotOne"
    try:
        bound = clockdist.barbour_bound(clock.distribution, args.copies)
    except ZeroNuError:
        bound = math.inf   # never overlaps its unit shift; bound is vacuous
    summary = {
        "period": clock.period,
        "L": L,
        "tv_to_tp": clockdist.tp_distance(clock.distribution, args.copies),
        "barbour_bound": _mv(bound),
    }
    _emit(summary)
    return 0


def cmd_convert(args) -> int:
    s1 = load_state(args.infiles[0])
    H1, tau1, dense1 = load_hamiltonian(args.infiles[1], args.tau)
    s2 = load_state(args.outfiles[0])
    H2, tau2, dense2 = load_hamiltonian(args.outfiles[1], args.tau)
    _dense_warning(dense1 or dense2, "conversion planning")
    v1 = _pure_vec(s1, "--in")
    v2 = _pure_vec(s2, "--out")
    rate = args.rate
    if rate is None:
        rate = convert.max_rate(v1, H1, v2, H2)
        print(f"note: using max rate {rate!r}", file=sys.stderr)
    copies = [int(tok) for tok in args.copies.split(",") if tok]
    plans = convert.iid_sweep(v1, H1, v2, H2, rate, copies)
    print("m,k,tv_error,fidelity_floor")
    for plan in plans:
        print(f"{plan.copies_in},{plan.shift_k},{plan.tv_error!r},"
              f"{plan.fidelity_lower_bound!r}")
    return 0


def cmd_distill(args) -> int:
    st = load_state(args.infiles[0])
    H, _, dense = load_hamiltonian(args.infiles[1])
    tgt = load_state(args.target[0])
    Ht, _, dense_t = load_hamiltonian(args.target[1])
    _dense_warning(dense or dense_t, "difference-spectrum dephasing")
    tvec = _pure_vec(tgt, "--target")
    single = st.density() if isinstance(st, PureState) else st.matrix
    rho = single
    Hm = H.matrix
    n = args.copies
    if n > 1:
        for _ in range(n - 1):
            rho = tensor(rho, single)
        Hm = noninteracting_hamiltonian([H.matrix] * n)
    om = distill.omega_state(rho, Hm, tvec, Ht.matrix)
    res = distill.conditional_min_entropy(om)
    bound_exact = bound_asym = None
    if single.shape[0] == 2 and tvec.size == 2:
        lam = 2.0 * float(np.vdot(tvec, single @ tvec).real) - 1.0
        if 0.0 < lam <= 1.0:
            bound_exact, bound_asym = distill.qubit_infidelity_bound(lam, n)
    _emit({
        "fidelity": res.optimum,
        "hmin": -math.log2(res.optimum),
        "gap": res.primal_dual_gap,
        "bound_exact": bound_exact,
        "bound_asymptotic": bound_asym,
    })
    return 0


def cmd_qubit_bound(args) -> int:
    if args.lam is None:
        raise ValidationError("--lambda is required")
    print("n,exact,asymptotic,cirac")
    for n in range(1, args.n + 1):
        exact, asym = distill.qubit_infidelity_bound(args.lam, n)
        ach = distill.cirac_comparison(args.lam, n)
        print(f"{n},{exact!r},{asym!r},{ach!r}")
    return 0


def cmd_proptest(args) -> int:
    seed = args.seed if args.seed is not None else default_seed()
    rep = channels.monotonicity_suite(args.measure, trials=args.trials,
                                      seed=seed, alpha=args.alpha)
    _emit({
        "suite": args.suite,
        "measure": args.measure,
        "alpha": rep.alpha,
        "trials": rep.trials,
        "seed": rep.seed,
        "max_violation": rep.max_violation,
        "worst_trial": rep.worst_trial,
        "violations": rep.violations,
    })
    return 0 if rep.max_violation < 1e-8 else 2


def cmd_accept(args) -> int:
    results = acceptance.run_all()
    for r in results:
        print(acceptance.format_result(r))
    return 0 if all(r.passed for r in results) else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coherence-forge",
        description="Coherence and asymmetry toolkit: measures, optimal "
                    "purifications, clock distributions, conversion rates, "
                    "and distillation bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("measures", help="coherence measures of a state")
    p.add_argument("--state", required=True)
    p.add_argument("--ham", required=True)
    p.add_argument("--alpha", type=float, default=None,
                   help="also report the Renyi monotone at this order")
    p.set_defaults(func=cmd_measures)

    p = sub.add_parser("purify", help="variance-optimal purification")
    p.add_argument("--state", required=True)
    p.add_argument("--ham", required=True)
    p.add_argument("--ensemble", action="store_true",
                   help="also emit the optimal pure-state ensemble")
    p.set_defaults(func=cmd_purify)

    p = sub.add_parser("dist", help="clock energy distribution of copies")
    p.add_argument("--state", required=True)
    p.add_argument("--ham", required=True)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--copies", type=int, default=1)
    p.set_defaults(func=cmd_dist)

    p = sub.add_parser("convert", help="iid conversion error sweep")
    p.add_argument("--in", dest="infiles", nargs=2, required=True,
                   metavar=("STATE", "HAM"))
    p.add_argument("--out", dest="outfiles", nargs=2, required=True,
                   metavar=("STATE", "HAM"))
    p.add_argument("--rate", type=float, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--copies", default="16,64,256")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("distill", help="single-shot distillation fidelity")
    p.add_argument("--in", dest="infiles", nargs=2, required=True,
                   metavar=("STATE", "HAM"))
    p.add_argument("--target", nargs=2, required=True,
                   metavar=("STATE", "HAM"))
    p.add_argument("--copies", type=int, default=1)
    p.set_defaults(func=cmd_distill)

    p = sub.add_parser("qubit-bound", help="qubit infidelity bound table")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--n", type=int, default=20)
    p.set_defaults(func=cmd_qubit_bound)

    p = sub.add_parser("proptest", help="randomized property suites")
    p.add_argument("--suite", choices=["monotonicity"],
                   default="monotonicity")
    p.add_argument("--measure", choices=["F", "P", "W", "renyi", "cost"],
                   default="F")
    p.add_argument("--alpha", type=float, default=1.5)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_proptest)

    p = sub.add_parser("accept", help="run the acceptance suite")
    p.set_defaults(func=cmd_accept)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SolverStallError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (CoherenceForgeError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
