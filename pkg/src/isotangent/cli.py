"""Command-line entry point.

Exit codes: 0 on success, 1 when a check or a mathematical precondition
fails (for example ``E`` not tangent), 2 on unreadable input or bad usage.
Indices on the command line and in CSV files are 1-based.
"""

import argparse
import os
import sys

import numpy as np

from . import __version__
from .bounds import eigval_bound, residual_ladder
from .exceptions import InputError, IsotangentError
from .experiments import ScenarioConfig, ScenarioKind, domination_summary, run_ensemble
from .expansions import eigvec_expansion, generic_expansions
from .jordan import jordan_block, jordan_order_validate, jordan_tangent_check
from .linalg import singular_values
from .matrix_io import read_matrix, read_vector, write_matrix
from .svd import singular_value_bound, solve_s_from_e
from .tangent import project_to_tangent, solve_b_diagonal, solve_b_general

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _index(value, n):
    if value is None:
        return list(range(n))
    if not 1 <= value <= n:
        raise InputError(f"index {value} outside 1..{n}")
    return [value - 1]


def _c(z):
    z = complex(z)
    return f"{z.real:.17g}{z.imag:+.17g}j"


def _read_diag_pair(args):
    d = read_vector(args.D)
    E = read_matrix(args.E)
    if d.shape[0] != E.shape[0]:
        raise InputError("D and E must have the same dimension")
    return d, E


def cmd_figure(args):
    diag = read_vector(args.diag) if args.diag else None
    cfg = ScenarioConfig.default(
        args.kind, n=args.n, norm_target=args.norm, seed=args.seed, t=args.t, output_path=args.out, diag=diag
    )
    if cfg.kind is ScenarioKind.CUSTOM and args.n is not None and args.n != cfg.n:
        raise InputError("--n does not match the custom diagonal")
    results = run_ensemble(cfg, args.seeds)
    ok = True
    for res in results:
        for path in res.paths:
            print(path)
            if args.svg:
                from .svgplot import render_csv

                svg = os.path.splitext(path)[0] + ".svg"
                render_csv(path, svg)
                print(svg)
        for name, (good, feasible, total) in domination_summary(res).items():
            print(f"# {name}: {good}/{feasible} feasible rows dominated ({total} rows, seed {res.metadata['seed']})")
            ok &= good == feasible
    return EXIT_OK if ok else EXIT_FAIL


def cmd_solve_b(args):
    A = read_matrix(args.A)
    E = read_matrix(args.E)
    if A.shape != E.shape or A.shape[0] != A.shape[1]:
        raise InputError("A and E must be square with the same shape")
    if np.array_equal(A, np.diag(np.diag(A))):
        E_in = E
        if args.project:
            E_in = project_to_tangent(np.diag(A), E).tangential
        sol = solve_b_diagonal(np.diag(A), E_in)
    else:
        sol = solve_b_general(A, E, args.tol)
    write_matrix(args.out, sol.B)
    print(f"gauge: {sol.gauge.value}")
    print(f"residual: {sol.residual:.3e}")
    return EXIT_OK


def cmd_bounds(args):
    d, E = _read_diag_pair(args)
    B = solve_b_diagonal(d, E).B
    reports = residual_ladder(d, E, B, args.t, with_actual=not args.no_actual)
    print("i,rho,order,err,bound,boundsharp")
    for i in _index(args.index, d.shape[0]):
        r = reports[i]
        for k, name in enumerate(("linear", "quadratic", "cubic")):
            err = "nan" if r.actual is None else f"{r.actual[k]:.6e}"
            print(f"{i + 1},{r.rho:.6e},{name},{err},{r.bound_coarse[k]:.6e},{r.bound_sharp[k]:.6e}")
    print("i,eigenvalue_shift,bound,boundsharp")
    for i in _index(args.index, d.shape[0]):
        rep = eigval_bound(d, E, B, i, args.t, actual=not args.no_actual)
        print(f"{i + 1},{rep.actual_delta:.6e},{rep.bound_coarse:.6e},{rep.bound_sharp:.6e}")
    return EXIT_OK


def cmd_expand(args):
    d, E = _read_diag_pair(args)
    tangent = not np.any(np.diag(E) != 0)
    B = solve_b_diagonal(d, E).B if tangent else None
    print("i,c1,c2,c3")
    for i in _index(args.index, d.shape[0]):
        exp = eigvec_expansion(d, E, B, i) if tangent else generic_expansions(d, E, i)
        vals = list(exp.terms_val) + [0j] * (4 - len(exp.terms_val))
        print(f"{i + 1},{_c(vals[1])},{_c(vals[2])},{_c(vals[3])}")
        if args.out_dir:
            os.makedirs(args.out_dir, exist_ok=True)
            terms = np.column_stack(exp.terms_vec)
            write_matrix(os.path.join(args.out_dir, f"x{i + 1}.txt"), terms)
    return EXIT_OK


def cmd_svd(args):
    A = read_matrix(args.A)
    E = read_matrix(args.E)
    sol = solve_s_from_e(A, E)
    bound = singular_value_bound(A, sol.S1, sol.S2)
    drift = np.abs(singular_values(A + E) - singular_values(A)).max()
    print(f"residual: {sol.residual:.3e}")
    print(f"max singular value drift: {drift:.6e}")
    print(f"bound: {bound.coarse:.6e}")
    print(f"boundsharp: {bound.sharp:.6e}")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        write_matrix(os.path.join(args.out_dir, "S1.txt"), sol.S1)
        write_matrix(os.path.join(args.out_dir, "S2.txt"), sol.S2)
    return EXIT_OK if drift <= bound.sharp * (1 + 1e-8) + 1e-14 else EXIT_FAIL


def cmd_jordan_order(args):
    if args.E:
        E = read_matrix(args.E)
        n = E.shape[0]
    else:
        if args.n is None or args.n < 2:
            raise InputError("give --n >= 2 or --E")
        n = args.n
        rng = np.random.Generator(np.random.PCG64(args.seed))
        Bm = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        J = jordan_block(n)
        E = J @ Bm - Bm @ J
        E *= args.norm / np.linalg.norm(E, 2)
    check = jordan_tangent_check(E)
    if not check.in_tangent:
        print("E is not tangent at the Jordan block")
        return EXIT_FAIL
    eps = np.logspace(np.log10(args.eps_max), np.log10(args.eps_min), args.num)
    v = jordan_order_validate(n, E, eps)
    print(f"n: {n}")
    print(f"coefficient: {_c(v.coefficient)}")
    print(f"predicted order: {v.predicted_order}")
    print(f"fitted slope: {v.slope:.6f}")
    print("eps,radius,ratio")
    for e, r, q in zip(v.epsilons, v.radii, v.ratios):
        print(f"{e:.6e},{r:.6e},{q:.6f}")
    rel = abs(v.slope - float(v.predicted_order)) / float(v.predicted_order)
    return EXIT_OK if rel <= args.rtol else EXIT_FAIL


def cmd_verify(args):
    from .verify import report, run_all

    return EXIT_OK if report(run_all()) else EXIT_FAIL


def build_parser():
    p = _Parser(prog="isotangent", description="Commutator perturbation analysis of eigenvalues and singular values.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("figure", help="run a figure scenario and write CSV files")
    f.add_argument("kind", choices=[k.value for k in ScenarioKind])
    f.add_argument("--n", type=int)
    f.add_argument("--norm", type=float, help="target spectral norm of E")
    f.add_argument("--seed", type=int, default=0)
    f.add_argument("--t", type=float, default=1.0)
    f.add_argument("--out", default=".")
    f.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    f.add_argument("--svg", action="store_true", help="also render SVG plots")
    f.add_argument("--diag", help="matrix file with the diagonal of D (custom kind)")
    f.set_defaults(func=cmd_figure)

    s = sub.add_parser("solve-b", help="solve AB - BA = E")
    s.add_argument("A")
    s.add_argument("E")
    s.add_argument("--out", required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--project", action="store_true", help="drop diag(E) first (diagonal A only)")
    s.set_defaults(func=cmd_solve_b)

    for name, func, help_ in (
        ("bounds", cmd_bounds, "residual and eigenvalue bounds for diagonal D"),
        ("expand", cmd_expand, "expansion coefficients for diagonal D"),
    ):
        b = sub.add_parser(name, help=help_)
        b.add_argument("D")
        b.add_argument("E")
        b.add_argument("--index", type=int, help="1-based index (default: all)")
        if name == "bounds":
            b.add_argument("--t", type=float, default=1.0)
            b.add_argument("--no-actual", action="store_true")
        else:
            b.add_argument("--out-dir")
        b.set_defaults(func=func)

    v = sub.add_parser("svd", help="singular value tangent analysis at A = [Sigma; 0]")
    v.add_argument("A")
    v.add_argument("E")
    v.add_argument("--out-dir")
    v.set_defaults(func=cmd_svd)

    j = sub.add_parser("jordan-order", help="fit the eigenvalue order of J + eps E")
    j.add_argument("--n", type=int)
    j.add_argument("--E")
    j.add_argument("--seed", type=int, default=0)
    j.add_argument("--norm", type=float, default=1.0)
    j.add_argument("--eps-min", type=float, default=1e-6)
    j.add_argument("--eps-max", type=float, default=1e-2)
    j.add_argument("--num", type=int, default=9)
    j.add_argument("--rtol", type=float, default=0.1)
    j.set_defaults(func=cmd_jordan_order)

    r = sub.add_parser("verify", help="run the self-check suite")
    r.set_defaults(func=cmd_verify)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except IsotangentError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
