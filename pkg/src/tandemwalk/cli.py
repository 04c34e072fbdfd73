"""Command-line front end: run walks, sweeps and searches, emit CSV.

Output is plain CSV preceded by '#'-prefixed metadata lines (tool
version, parameter echo, tolerances), so every file documents how it was
produced.  Rows are emitted in deterministic grid order and never depend
on the worker count.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__
from .analytic import phi1, psi_down_2, psi_up_2
from .core import (
    BALANCED_ALPHA,
    TERM_THRESHOLD,
    UNITARITY_ATOL,
    CoinOperator,
    ShiftOperator,
    Spin,
    balanced_shift,
    initial_state,
    iter_steps,
    measure_spin,
    orthonormality_residual,
    step,
    verify_shift_unitarity,
)
from .entanglement import _series
from .sweep import (
    MAXIMAL_ATOL,
    CoinFamily,
    SearchMode,
    SweepMode,
    SweepSpec,
    family_coin,
    find_max_cases,
    grid_search,
    sweep_1d,
)

_QUARTER = float(np.pi / 2)

#: accepted spellings for irrational parameter values; plain decimals
#: truncate and miss the exactly degenerate points
_ALPHA_ALIASES = {"r2inv": BALANCED_ALPHA}
_ANGLE_ALIASES = {
    "0": 0.0,
    "pi/2": _QUARTER,
    "pi": 2 * _QUARTER,
    "3pi/2": 3 * _QUARTER,
}

_FIGURES = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6")


def _parse_alpha(text: str) -> float:
    if text in _ALPHA_ALIASES:
        return _ALPHA_ALIASES[text]
    return float(text)


def _parse_angle(text: str) -> float:
    if text in _ANGLE_ALIASES:
        return _ANGLE_ALIASES[text]
    return float(text)


def _parse_outcomes(text: str) -> tuple[Spin, ...]:
    if text == "both":
        return (Spin.DOWN, Spin.UP)
    return (Spin(text),)


def _resolve_workers(value: int | None) -> int:
    if value is not None:
        return value
    env = os.environ.get("QRW_WORKERS")
    if env:
        return int(env)
    return os.cpu_count() or 1


def _fmt(value) -> str:
    if isinstance(value, Spin):
        return value.value
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (np.floating,)):
        return repr(float(value))
    return str(value)


def _open_out(path):
    if path in (None, "-"):
        return sys.stdout, False
    return open(path, "w"), True


def _emit(stream, meta: dict, header: list[str], rows) -> int:
    stream.write(f"# tandemwalk {__version__}\n")
    for key, value in meta.items():
        stream.write(f"# {key}={_fmt(value)}\n")
    stream.write(",".join(header) + "\n")
    count = 0
    for row in rows:
        stream.write(",".join(_fmt(x) for x in row) + "\n")
        count += 1
    return count


def _merge_config(argv: list[str]) -> list[str]:
    """Prepend options from a --config file so explicit flags win.

    The file holds one key=value pair per line, '#' starts a comment,
    and keys mirror the long option names (beta_arg or beta-arg both
    work).  Unknown keys are rejected by the normal argument parser.
    """
    path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
    if path is None:
        return argv
    injected: list[str] = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"config line {line!r} is not key=value")
            key, value = (part.strip() for part in line.split("=", 1))
            injected.extend([f"--{key.replace('_', '-')}", value])
    return injected + argv


def _add_common(parser: argparse.ArgumentParser):
    parser.add_argument("--config", help="flat key=value file; flags override it")
    parser.add_argument("--out", help="output path (default: standard output)")


def _add_operator_args(parser: argparse.ArgumentParser):
    parser.add_argument(
        "--coin",
        choices=[f.value for f in CoinFamily],
        default="hadamard",
        help="coin family",
    )
    parser.add_argument("--rho", type=float, help="general coin rho in [0,1]")
    parser.add_argument("--theta", type=float, help="general coin theta in [0,pi]")
    parser.add_argument("--eta", type=float, help="general coin eta in [0,pi]")
    parser.add_argument(
        "--alpha",
        type=_parse_alpha,
        default=BALANCED_ALPHA,
        help="shift alpha in [0,1]; the alias r2inv selects the exact balanced point",
    )
    parser.add_argument(
        "--beta-arg",
        type=_parse_angle,
        default=0.0,
        help="phase of beta in [0,2pi); aliases pi/2, pi, 3pi/2 stay exact",
    )
    parser.add_argument("--p", type=int, default=1, help="up displacement")
    parser.add_argument("--q", type=int, default=-1, help="down displacement")


def _build_operators(args) -> tuple[CoinOperator, ShiftOperator]:
    family = CoinFamily(args.coin)
    coin = family_coin(family, rho=args.rho, theta=args.theta, eta=args.eta)
    balanced = args.alpha == BALANCED_ALPHA
    shift = ShiftOperator(
        alpha=args.alpha,
        beta_arg=args.beta_arg,
        p=args.p,
        q=args.q,
        beta_mod=BALANCED_ALPHA if balanced else None,
    )
    return coin, shift


def _operator_meta(args) -> dict:
    meta = {"coin": args.coin}
    if args.coin == "general":
        meta.update(rho=args.rho, theta=args.theta, eta=args.eta)
    meta.update(alpha=args.alpha, beta_arg=args.beta_arg, p=args.p, q=args.q)
    return meta


# ---------------------------------------------------------------------------
# evolve


def cmd_evolve(args) -> int:
    coin, shift = _build_operators(args)
    outcomes = _parse_outcomes(args.outcome)
    records = _series(coin, shift, args.steps, outcomes, args.term_threshold)
    rows = []
    for outcome in outcomes:
        for r in records[outcome]:
            rows.append(
                (r.step, outcome, r.probability, r.term_count, r.entropy, r.normalized)
            )
    rows.sort(key=lambda row: (row[0], row[1].value))
    meta = {"command": "evolve", **_operator_meta(args)}
    meta.update(steps=args.steps, outcome=args.outcome, term_threshold=args.term_threshold)
    stream, close = _open_out(args.out)
    try:
        _emit(stream, meta, ["step", "outcome", "P", "N", "E_bits", "normalized_E"], rows)
    finally:
        if close:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# sweep


def _figure_rows(tag: str, n_steps_override: int | None):
    """Header, metadata and rows for one named preset scan."""
    fine = 0.005
    if tag == "fig1":
        n = n_steps_override or 200
        spec = SweepSpec(
            CoinFamily.HADAMARD,
            "alpha",
            0.0,
            1.0,
            fine,
            n,
            fixed={"beta_arg": 0.0},
            include_balanced=True,
        )
        header, rows = sweep_1d(spec)
        desc = f"averaged entanglement over {n} steps vs alpha, hadamard coin, real beta"
        return desc, header, rows
    if tag == "fig2":
        n = n_steps_override or 800
        rows = []
        header = None
        for alpha in (0.7071067812, 0.71, 0.37):
            spec = SweepSpec(
                CoinFamily.HADAMARD,
                "alpha",
                alpha,
                alpha,
                1.0,
                n,
                fixed={"beta_arg": 0.0},
                outcomes=(Spin.DOWN,),
                mode=SweepMode.PER_STEP,
            )
            header, part = sweep_1d(spec)
            rows.extend(part)
        desc = f"per-step entanglement for {n} steps, hadamard coin, three alpha values"
        return desc, header, rows
    if tag == "fig3":
        n = n_steps_override or 200
        spec = SweepSpec(
            CoinFamily.HADAMARD,
            "beta_arg",
            0.0,
            2 * float(np.pi),
            fine,
            n,
            fixed={"alpha": 0.37},
        )
        header, rows = sweep_1d(spec)
        desc = f"averaged entanglement over {n} steps vs beta phase, hadamard coin, alpha=0.37"
        return desc, header, rows
    if tag == "fig4":
        n = n_steps_override or 200
        spec = SweepSpec(
            CoinFamily.HADAMARD,
            "beta_arg",
            0.0,
            2 * float(np.pi),
            fine,
            n,
            fixed={"alpha": BALANCED_ALPHA, "beta_mod": BALANCED_ALPHA},
        )
        header, rows = sweep_1d(spec)
        desc = f"averaged entanglement over {n} steps vs beta phase, hadamard coin, balanced alpha"
        return desc, header, rows
    if tag == "fig5":
        n = n_steps_override or 200
        header = None
        rows = []
        for alpha, beta_mod in ((BALANCED_ALPHA, BALANCED_ALPHA), (0.37, None)):
            fixed = {"alpha": alpha}
            if beta_mod is not None:
                fixed["beta_mod"] = beta_mod
            spec = SweepSpec(
                CoinFamily.KEMPE, "beta_arg", 0.0, 2 * float(np.pi), fine, n, fixed=fixed
            )
            part_header, part = sweep_1d(spec)
            header = [part_header[0], "alpha", *part_header[1:]]
            rows.extend((row[0], alpha, *row[1:]) for row in part)
        desc = f"averaged entanglement over {n} steps vs beta phase, kempe coin, two alpha values"
        return desc, header, rows
    if tag == "fig6":
        n = n_steps_override or 200
        spec = SweepSpec(
            CoinFamily.Z,
            "alpha",
            0.0,
            1.0,
            fine,
            n,
            fixed={"beta_arg": 0.0},
            include_balanced=True,
        )
        header, rows = sweep_1d(spec)
        desc = f"averaged entanglement over {n} steps vs alpha, z coin, real beta"
        return desc, header, rows
    raise ValueError(f"unknown figure tag {tag!r}")


def cmd_sweep(args) -> int:
    explicit = args.sweep is not None
    if args.figure and explicit:
        raise ValueError("--figure conflicts with an explicit --sweep")
    if not args.figure and not explicit:
        raise ValueError("need either --figure or --sweep")
    if args.figure:
        desc, header, rows = _figure_rows(args.figure, args.steps)
        meta = {"command": "sweep", "figure": args.figure, "description": desc}
    else:
        fixed = {}
        for key in ("rho", "theta", "eta"):
            value = getattr(args, key)
            if value is not None and args.sweep != key:
                fixed[key] = value
        if args.sweep != "alpha":
            fixed["alpha"] = args.alpha
            if args.alpha == BALANCED_ALPHA:
                fixed["beta_mod"] = BALANCED_ALPHA
        if args.sweep != "beta_arg":
            fixed["beta_arg"] = args.beta_arg
        spec = SweepSpec(
            CoinFamily(args.coin),
            args.sweep,
            args.start,
            args.stop,
            args.step,
            args.steps or 200,
            fixed=fixed,
            outcomes=_parse_outcomes(args.outcome),
            mode=SweepMode(args.mode),
            include_balanced=args.sweep == "alpha",
        )
        header, rows = sweep_1d(spec)
        meta = {"command": "sweep", **_operator_meta(args)}
        meta.update(
            sweep=args.sweep,
            start=args.start,
            stop=args.stop,
            grid_step=args.step,
            steps=spec.n_steps,
            outcome=args.outcome,
            mode=args.mode,
            term_threshold=TERM_THRESHOLD,
        )
    stream, close = _open_out(args.out)
    try:
        _emit(stream, meta, header, rows)
    finally:
        if close:
            stream.close()
    return 0


# ---------------------------------------------------------------------------
# search


def cmd_search(args) -> int:
    mode = SearchMode(args.mode)
    family = CoinFamily(args.coin)
    header = [
        "rho",
        "theta",
        "eta",
        "alpha",
        "beta_arg",
        "step",
        "outcome",
        "normalized_E",
        "P",
        "N",
    ]
    meta = {
        "command": "search",
        "mode": args.mode,
        "coin": args.coin,
        "grid": args.grid,
        "steps": args.steps,
        "p_min": args.p_min,
        "maximal_atol": args.maximal_atol,
        "term_threshold": TERM_THRESHOLD,
    }
    if mode is SearchMode.AVERAGED_HIGH:
        meta["avg_min"] = args.avg_min

    if family is CoinFamily.GENERAL:
        hits = grid_search(
            grid_step=args.grid,
            n_steps=args.steps,
            mode=mode,
            p_threshold=args.p_min,
            avg_threshold=args.avg_min,
            maximal_atol=args.maximal_atol,
            workers=_resolve_workers(args.workers),
        )
    else:
        if mode is not SearchMode.ISOLATED_MAX:
            raise ValueError("averaged search scans the general coin only")
        hits = iter(
            find_max_cases(
                family,
                n_max=args.steps,
                p_threshold=args.p_min,
                maximal_atol=args.maximal_atol,
            )
        )

    def rows():
        for h in hits:
            yield (
                h.rho,
                h.theta,
                h.eta,
                h.alpha,
                h.beta_arg,
                h.step,
                h.outcome,
                h.normalized,
                h.probability,
                h.term_count,
            )

    stream, close = _open_out(args.out)
    try:
        count = _emit(stream, meta, header, rows())
    finally:
        if close:
            stream.close()
    print(f"{count} hits", file=sys.stderr)
    return 0


# ---------------------------------------------------------------------------
# verify


def _suite_unitarity(samples: int, rng) -> list[str]:
    failures = []
    coins = [family_coin(f) for f in (CoinFamily.HADAMARD, CoinFamily.KEMPE, CoinFamily.Z)]
    for _ in range(samples):
        coins.append(
            CoinOperator(
                rho=rng.uniform(0, 1),
                theta=rng.uniform(0, np.pi),
                eta=rng.uniform(0, np.pi),
            )
        )
    for coin in coins:
        residual = coin.unitarity_residual()
        if residual >= UNITARITY_ATOL:
            failures.append(f"coin {coin} residual {residual:.3e}")
    for _ in range(samples):
        shift = ShiftOperator(alpha=rng.uniform(0, 1), beta_arg=rng.uniform(0, 2 * np.pi))
        ok, residual = verify_shift_unitarity(shift)
        if not ok:
            failures.append(f"shift {shift} residual {residual:.3e}")
    # negative control: a corrupted coefficient pair must be detected
    bad = orthonormality_residual(0.6 + 0j, complex(0.8 + 1e-3, 0.0))
    if bad < UNITARITY_ATOL:
        failures.append("corrupted coefficient pair passed the unitarity check")
    return failures


def _suite_oracle(samples: int, rng) -> list[str]:
    failures = []
    for _ in range(samples):
        coin = CoinOperator(
            rho=rng.uniform(0, 1), theta=rng.uniform(0, np.pi), eta=rng.uniform(0, np.pi)
        )
        shift = ShiftOperator(alpha=rng.uniform(0, 1), beta_arg=rng.uniform(0, 2 * np.pi))
        one = step(initial_state(), coin, shift)
        up1, down1 = phi1(coin, shift)
        err1 = max(
            abs(one.amplitude(Spin.UP, 1) - up1),
            abs(one.amplitude(Spin.DOWN, -1) - down1),
        )
        two = step(one, coin, shift)
        worst = err1
        for closed, outcome in ((psi_up_2(coin, shift), Spin.UP), (psi_down_2(coin, shift), Spin.DOWN)):
            result = measure_spin(two, outcome)
            worst = max(worst, abs(result.probability - closed.probability))
            if closed.probability > 1e-20:
                expect = closed.normalized_amps()
                got = np.array(
                    [result.amps[s - result.offset] for s in closed.sites]
                )
                pivot = int(np.argmax(np.abs(expect)))
                got = got * (expect[pivot] / got[pivot] / abs(expect[pivot] / got[pivot]))
                worst = max(worst, float(np.max(np.abs(got - expect))))
        if worst > 1e-12:
            failures.append(f"closed-form mismatch {worst:.3e} at {coin} {shift}")
    return failures


def _suite_special_points(n_steps: int = 500) -> list[str]:
    failures = []
    chains = [
        ("hadamard, real balanced shift", family_coin(CoinFamily.HADAMARD), balanced_shift(0.0)),
        ("kempe, beta phase 3pi/2", family_coin(CoinFamily.KEMPE), balanced_shift(3 * _QUARTER)),
    ]
    for label, coin, shift in chains:
        for state in iter_steps(coin, shift, n_steps):
            n = state.step
            if abs(abs(state.amplitude(Spin.UP, n)) - 1.0) > 1e-10:
                failures.append(f"{label}: chain broken at step {n}")
                break
            if measure_spin(state, Spin.DOWN).probability != 0.0:
                failures.append(f"{label}: down leakage at step {n}")
                break
    # kempe with beta phase pi/2 degenerates to a two-site bounce; every
    # step stays a product state with zero entanglement for both outcomes
    coin = family_coin(CoinFamily.KEMPE)
    for state in iter_steps(coin, balanced_shift(_QUARTER), n_steps):
        up = measure_spin(state, Spin.UP)
        down = measure_spin(state, Spin.DOWN)
        if up.term_count > 1 or down.term_count > 1:
            failures.append(f"kempe, beta phase pi/2: entangled terms at step {state.step}")
            break
    return failures


def cmd_verify(args) -> int:
    rng = np.random.default_rng(20240815)
    suites = {
        "unitarity": lambda: _suite_unitarity(args.samples, rng),
        "oracle": lambda: _suite_oracle(args.samples, rng),
        "special-points": lambda: _suite_special_points(),
    }
    selected = suites if args.suite == "all" else {args.suite: suites[args.suite]}
    failed = False
    for name, run in selected.items():
        failures = run()
        status = "pass" if not failures else "FAIL"
        print(f"{name}: {status}")
        for line in failures[:10]:
            print(f"  {line}", file=sys.stderr)
        failed = failed or bool(failures)
    return 1 if failed else 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tandemwalk",
        description="Coined quantum walk of two walkers moving in tandem: "
        "evolution, entanglement measures and parameter-space searches.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_evolve = sub.add_parser("evolve", help="run one walk, emit per-step entanglement")
    _add_common(p_evolve)
    _add_operator_args(p_evolve)
    p_evolve.add_argument("--steps", type=int, default=200)
    p_evolve.add_argument("--outcome", choices=["up", "down", "both"], default="both")
    p_evolve.add_argument(
        "--term-threshold",
        type=float,
        default=TERM_THRESHOLD,
        help="modulus cutoff for counting collapsed terms",
    )
    p_evolve.set_defaults(func=cmd_evolve)

    p_sweep = sub.add_parser("sweep", help="sweep one parameter, emit a table")
    _add_common(p_sweep)
    _add_operator_args(p_sweep)
    p_sweep.add_argument("--figure", choices=_FIGURES, help="named preset scan")
    p_sweep.add_argument("--sweep", choices=list("rho theta eta alpha beta_arg".split()))
    p_sweep.add_argument("--start", type=float, default=0.0)
    p_sweep.add_argument("--stop", type=float, default=1.0)
    p_sweep.add_argument("--step", type=float, default=0.005)
    p_sweep.add_argument("--steps", type=int, help="walk length (presets default 200/800)")
    p_sweep.add_argument("--outcome", choices=["up", "down", "both"], default="both")
    p_sweep.add_argument(
        "--mode", choices=[m.value for m in SweepMode], default="averaged"
    )
    p_sweep.set_defaults(func=cmd_sweep)

    p_search = sub.add_parser("search", help="scan parameter space for maximal entanglement")
    _add_common(p_search)
    p_search.add_argument(
        "--mode", choices=[m.value for m in SearchMode], default="isolated"
    )
    p_search.add_argument(
        "--coin", choices=[f.value for f in CoinFamily], default="general"
    )
    p_search.add_argument("--grid", type=float, default=0.1, help="grid step")
    p_search.add_argument("--steps", type=int, default=10)
    p_search.add_argument("--p-min", type=float, default=0.15)
    p_search.add_argument("--avg-min", type=float, default=0.99)
    p_search.add_argument(
        "--maximal-atol",
        type=float,
        default=MAXIMAL_ATOL,
        help="entanglement counts as maximal above 1 - this tolerance",
    )
    p_search.add_argument("--workers", type=int, help="process count (QRW_WORKERS, then cores)")
    p_search.set_defaults(func=cmd_search)

    p_verify = sub.add_parser("verify", help="run the correctness suites")
    p_verify.add_argument(
        "--suite",
        choices=["all", "unitarity", "oracle", "special-points"],
        default="all",
    )
    p_verify.add_argument("--samples", type=int, default=300)
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if argv and argv[0] in {"evolve", "sweep", "search", "verify"}:
        try:
            argv = [argv[0], *_merge_config(argv[1:])]
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse already printed the offending flag
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
