"""Command-line harness.

Subcommands: spectrum, gap, evolve, scaling, trotter, solve.  Figure-style
outputs are CSV data (a plotting recipe lives in docs/plotting.md); scalar
results are JSON with the built-in defaults echoed for provenance.  Exit
codes: 0 success, 2 usage, 3 parse error, 4 capacity, 5 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import evolution, reduction, ring, spectrum, trotter
from .errors import (
    AdiaquantError,
    CapacityError,
    ClauseError,
    ConvergenceError,
    GapZeroError,
    NormDriftError,
    ParseError,
    SectorError,
)
from .hamiltonian import CLAUSE_WEIGHTED, UNIFORM, build_pair, initial_state
from .instance import (
    DEFAULT_DIM_CAP,
    brute_force_solve,
    bush_instance,
    grover_instance,
    index_to_bitstring,
    overconstrained_instance,
    parse_instance,
    ring_instance,
    total_energy,
)

DEFAULTS = {
    "grid": 1000,
    "levels": 8,
    "safety": 10,
    "success_threshold": 0.99,
    "seed": 0,
    "shots": 1024,
    "dim_cap": DEFAULT_DIM_CAP,
    "coarse_points": 64,
    "refine_tol": 1e-8,
    "scaling_refine_tol": 1e-13,
    "epsilon": 0.01,
    "dense_cutoff": spectrum.DEFAULT_DENSE_CUTOFF,
    "mode": CLAUSE_WEIGHTED,
    "sector": "full",
}

_SECTORS = {
    "full": spectrum.FULL,
    "negation": spectrum.NEGATION,
    "symmetric": spectrum.SYMMETRIC,
}


def _workers():
    try:
        return max(1, int(os.environ.get("ADIAQUANT_THREADS", "1")))
    except ValueError:
        return 1


def _load_config(path):
    if path is None:
        return {}
    with open(path, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise ValueError("config file must hold a JSON object")
    return cfg


def _resolve(args, config, name):
    """Flag value if given, else config entry, else built-in default."""
    value = getattr(args, name.replace("-", "_"), None)
    if value is not None:
        return value
    if name in config:
        return config[name]
    return DEFAULTS[name]


def _read_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_instance(fh.read())


def _family_size_label(family, n):
    # bush sizes count the spokes; the instance then has n+1 bits
    return {"family": family, "n": int(n)}


def _family_instance(family, n):
    if family == "ring":
        return ring_instance(n)
    if family == "grover":
        return grover_instance("0" * n)
    if family in ("bush", "bush-uniform"):
        return bush_instance(n)
    if family == "overconstrained":
        return overconstrained_instance(n)
    raise ValueError(f"unknown family {family!r}")


def _emit(text, path):
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _print_json(payload):
    payload = dict(payload)
    payload["defaults"] = DEFAULTS
    sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_spectrum(args):
    config = _load_config(args.config)
    inst = _read_instance(args.instance)
    cap = int(_resolve(args, config, "dim_cap"))
    pair = build_pair(inst, _resolve(args, config, "mode"), cap)
    scan = spectrum.scan_spectrum(
        pair,
        k=int(_resolve(args, config, "levels")),
        grid_points=int(_resolve(args, config, "grid")),
        sector=_SECTORS[_resolve(args, config, "sector")],
        dense_cutoff=int(_resolve(args, config, "dense_cutoff")),
        workers=_workers(),
    )
    _emit(scan.to_csv(), args.output)
    return 0


def cmd_gap(args):
    config = _load_config(args.config)
    coarse = int(_resolve(args, config, "coarse_points"))
    refine = float(_resolve(args, config, "refine_tol"))
    if args.family is not None:
        if args.n is None:
            raise ValueError("--family needs --n")
        n = int(args.n)
        if args.family == "ring":
            g, s_star = ring.ring_gap(n, resolution=refine)
            payload = {
                "method": "analytic",
                "g_min": g,
                "s_star": s_star,
                "sector": "momentum-blocks(+1 negation)",
                "refinement_tolerance": refine,
                **_family_size_label("ring", n),
            }
            _print_json(payload)
            return 0
        if args.family == "grover":
            op = reduction.grover_reduced(n)
        elif args.family == "bush":
            op = reduction.bush_reduced(n, CLAUSE_WEIGHTED)
        elif args.family == "bush-uniform":
            op = reduction.bush_reduced(n, UNIFORM)
        elif args.family == "overconstrained":
            op = reduction.overconstrained_reduced(n, invariant=True)
        else:
            raise ValueError(f"unknown family {args.family!r}")
        report = spectrum.find_min_gap(
            op, coarse_points=coarse, refine_tol=refine, method="reduced"
        )
        payload = report.to_dict()
        payload.update(_family_size_label(args.family, n))
        payload.update(_time_scale(op, report))
        _print_json(payload)
        return 0
    if args.instance is None:
        raise ValueError("need an instance file or --family")
    inst = _read_instance(args.instance)
    cap = int(_resolve(args, config, "dim_cap"))
    pair = build_pair(inst, _resolve(args, config, "mode"), cap)
    sector = _SECTORS[_resolve(args, config, "sector")]
    report = spectrum.find_min_gap(
        pair,
        sector=sector,
        coarse_points=coarse,
        refine_tol=refine,
        dense_cutoff=int(_resolve(args, config, "dense_cutoff")),
        method="full",
    )
    payload = report.to_dict()
    payload.update(_time_scale(pair, report, sector))
    _print_json(payload)
    return 0


def _time_scale(target, report, sector=spectrum.FULL):
    """Evolution-time heuristic attached to gap reports when the gap is open.

    The suggested time multiplies the coupling-over-gap-squared ratio by the
    safety factor, a convention rather than a derived constant.
    """
    if report.g_min <= 0.0:
        return {}
    est = spectrum.adiabatic_time_estimate(target, report, sector=sector)
    return {
        "time_scale_ratio": est.ratio,
        "coupling": est.coupling,
        "coupling_bound": est.coupling_bound,
        "suggested_T": DEFAULTS["safety"] * est.ratio,
    }


def cmd_evolve(args):
    config = _load_config(args.config)
    inst = _read_instance(args.instance)
    cap = int(_resolve(args, config, "dim_cap"))
    pair = build_pair(inst, _resolve(args, config, "mode"), cap)
    result = evolution.evolve(pair, float(args.T), dt=args.dt)
    threshold = float(_resolve(args, config, "success_threshold"))
    shots = int(_resolve(args, config, "shots"))
    seed = int(_resolve(args, config, "seed"))
    payload = {
        "T": result.T,
        "dt": result.dt,
        "steps": result.steps,
        "overlap": result.overlap,
        "norm_drift": result.norm_drift,
        "ground_energy": result.ground_energy,
        "satisfiable": result.satisfiable,
        "success": result.overlap >= threshold,
        "success_threshold": threshold,
        "shots": shots,
        "seed": seed,
    }
    _print_json(payload)
    if shots > 0:
        counts = evolution.measure(result.final_state, inst.n, shots, seed)
        for bits, count in sorted(
            counts.items(), key=lambda kv: (-kv[1], kv[0])
        ):
            energy = total_energy(inst, [int(b) for b in bits])
            sys.stdout.write(f"{bits} {count} {energy}\n")
    return 0


def _parse_range(spec_text):
    parts = spec_text.split("..")
    if len(parts) == 2:
        a, b, step = int(parts[0]), int(parts[1]), 1
    elif len(parts) == 3:
        a, b, step = (int(p) for p in parts)
    else:
        raise ValueError("range format is a..b or a..b..step")
    if step < 1 or b < a:
        raise ValueError("range must ascend")
    return list(range(a, b + 1, step))


def cmd_scaling(args):
    config = _load_config(args.config)
    n_values = _parse_range(args.n_range)
    study = reduction.gap_scaling_study(
        args.family,
        n_values,
        coarse_points=max(128, int(_resolve(args, config, "coarse_points"))),
        refine_tol=float(_resolve(args, config, "scaling_refine_tol")),
        workers=_workers(),
    )
    out = args.output or f"scaling_{args.family}.csv"
    _emit(study.to_csv(), out)
    sys.stdout.write(study.fit_json() + "\n")
    return 0


def cmd_trotter(args):
    config = _load_config(args.config)
    inst = _read_instance(args.instance)
    cap = int(_resolve(args, config, "dim_cap"))
    mode = _resolve(args, config, "mode")
    epsilon = float(_resolve(args, config, "epsilon"))
    budget = trotter.plan_budget(inst, float(args.T), epsilon, mode)
    seq = trotter.compile_sequence(inst, float(args.T), budget, mode)
    out = args.output or "gates.txt"
    _emit(seq.to_text(), out)
    payload = {
        "T": float(args.T),
        "epsilon": epsilon,
        "M": budget.M,
        "K": budget.K,
        "delta": budget.delta,
        "gate_count": len(seq),
        "justification": budget.justification,
        "output": out,
    }
    if args.execute:
        pair = build_pair(inst, mode, cap)
        compiled = trotter.execute(seq, initial_state(inst.n, cap))
        continuous = evolution.evolve(pair, float(args.T), dt=args.dt)
        payload["fidelity"] = trotter.fidelity(compiled, continuous.final_state)
        payload["fidelity_target"] = 1.0 - epsilon
    _print_json(payload)
    return 0


def cmd_solve(args):
    config = _load_config(args.config)
    inst = _read_instance(args.instance)
    cap = int(_resolve(args, config, "dim_cap"))
    emin, assignments = brute_force_solve(inst, cap)
    _print_json(
        {
            "minimum_energy": emin,
            "count": len(assignments),
            "satisfiable": emin == 0,
        }
    )
    for a in assignments:
        sys.stdout.write("".join(str(b) for b in a) + "\n")
    return 0


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="adiaquant",
        description="Adiabatic-evolution simulator and gap analyzer for SAT instances",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON config file; flags win")
        p.add_argument("--dim-cap", type=int, help="max bit count for 2^n vectors")

    p = sub.add_parser("spectrum", help="scan the k lowest levels over s")
    p.add_argument("instance")
    p.add_argument("--levels", type=int, help="level count k")
    p.add_argument("--grid", type=int, help="grid points")
    p.add_argument("--sector", choices=sorted(_SECTORS))
    p.add_argument("--mode", choices=[CLAUSE_WEIGHTED, UNIFORM])
    p.add_argument("--dense-cutoff", type=int)
    p.add_argument("--output", help="CSV path (default stdout)")
    common(p)
    p.set_defaults(fn=cmd_spectrum)

    p = sub.add_parser("gap", help="locate the minimum gap")
    p.add_argument("instance", nargs="?")
    p.add_argument("--family", choices=reduction.FAMILIES)
    p.add_argument("--n", type=int, help="family size")
    p.add_argument("--sector", choices=sorted(_SECTORS))
    p.add_argument("--mode", choices=[CLAUSE_WEIGHTED, UNIFORM])
    p.add_argument("--coarse-points", type=int)
    p.add_argument("--refine-tol", type=float)
    p.add_argument("--dense-cutoff", type=int)
    common(p)
    p.set_defaults(fn=cmd_gap)

    p = sub.add_parser("evolve", help="integrate and sample measurements")
    p.add_argument("instance")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--dt", type=float)
    p.add_argument("--shots", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=[CLAUSE_WEIGHTED, UNIFORM])
    p.add_argument("--success-threshold", type=float)
    common(p)
    p.set_defaults(fn=cmd_evolve)

    p = sub.add_parser("scaling", help="gap-vs-size study with fits")
    p.add_argument("--family", choices=reduction.FAMILIES, required=True)
    p.add_argument("--n-range", required=True, help="a..b or a..b..step")
    p.add_argument("--coarse-points", type=int)
    p.add_argument("--output", help="CSV path (default scaling_<family>.csv)")
    common(p)
    p.set_defaults(fn=cmd_scaling)

    p = sub.add_parser("trotter", help="compile the evolution to gates")
    p.add_argument("instance")
    p.add_argument("--T", type=float, required=True)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--dt", type=float, help="oracle integrator step for --execute")
    p.add_argument("--mode", choices=[CLAUSE_WEIGHTED, UNIFORM])
    p.add_argument("--execute", action="store_true")
    p.add_argument("--output", help="gate file path (default gates.txt)")
    common(p)
    p.set_defaults(fn=cmd_trotter)

    p = sub.add_parser("solve", help="brute-force classical oracle")
    p.add_argument("instance")
    common(p)
    p.set_defaults(fn=cmd_solve)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (ParseError, ClauseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except CapacityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ConvergenceError, NormDriftError, GapZeroError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5
    except (ValueError, SectorError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except AdiaquantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 5


def run():
    raise SystemExit(main())


if __name__ == "__main__":
    run()
