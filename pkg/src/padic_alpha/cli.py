"""Command-line front end.

Exit codes: 0 certified/success, 1 not certified (or check failed),
2 singular within precision, 3 input error, 4 precision exhausted,
5 oracle budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import (
    BudgetExceeded,
    IterationCap,
    NotCertified,
    PadicAlphaError,
    PrecisionExhausted,
    SingularWithinPrecision,
)
from .oracle import DEFAULT_BUDGET, nearest_root_distance, roots_mod_pk
from .polysys import PolySystem, parse_system
from .smale import (
    certify,
    gamma_distance_check,
    hensel_univariate_check,
    lemma_quantities,
    separation_gamma,
    solve,
    solve_certified,
)
from .ultrascalar import PrimeContext, UltraMag, residue

EXIT_OK, EXIT_NOT_CERTIFIED, EXIT_SINGULAR, EXIT_INPUT, EXIT_PRECISION, EXIT_BUDGET = range(6)


class InputError(Exception):
    pass


def _rationals(text: str) -> list[Fraction]:
    try:
        return [Fraction(tok.strip()) for tok in text.split(",")]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational list {text!r}: {exc}") from None


def _points(text: str) -> list[list[Fraction]]:
    return [_rationals(chunk) for chunk in text.split(";") if chunk.strip()]


def _mag(m: UltraMag, p: int) -> str:
    return m.render(p)


def _scalar_str(s, p: int, target=None) -> str:
    if s.is_zero:
        return "0" if s.is_exact_zero else f"O({p}^{s.abs_prec})"
    if s.val >= 0 and target is not None:
        k = int(min(target, s.abs_prec))
        return f"{residue(s, k)} (mod {p}^{k})"
    return f"{s.lift()} + O({p}^{s.abs_prec})"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="padic-alpha",
                                     description="Certified Newton's method over the p-adic numbers")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--prime", type=int, required=True)
    common.add_argument("--precision", type=int, default=None,
                        help="significant base-p digits carried (default 32)")
    common.add_argument("--system", required=True, help="path to the system file")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, point=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if point:
            sp.add_argument("--point", required=True, help="comma-separated rationals, e.g. 1,7/2")
        return sp

    add("certify", "run the alpha test at a point")
    add("solve", "certify, then iterate Newton to a target exponent").add_argument(
        "--target", type=int, default=None, help="stop once beta <= p^(-target)")
    add("gamma", "Smale parameters and the gamma-distance condition").add_argument(
        "--roots", default=None,
        help="candidate roots, points separated by ';'; certified candidates are refined by Newton")
    brute = add("brute", "enumerate roots modulo p^k", point=False)
    brute.add_argument("--power", type=int, required=True)
    brute.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="lift-node budget before giving up (default 10^7)")
    add("hensel", "compare Hensel's condition with the alpha test")
    add("separation", "1/gamma at a root versus distance to the other roots").add_argument(
        "--roots", required=True, help="the other roots, comma-separated")
    add("lemmas", "quantities of the variation lemmas between two points").add_argument(
        "--second-point", required=True)
    return parser


def _load_system(path: str) -> PolySystem:
    try:
        with open(path, encoding="utf-8") as fh:
            return parse_system(fh.read())
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None


def _check_arity(f: PolySystem, pt, what="point") -> None:
    if len(pt) != f.n:
        raise InputError(f"{what} has {len(pt)} coordinates but the system has {f.n} variables")


def _params_json(params) -> dict:
    return {"alpha": params.alpha.to_json(), "beta": params.beta.to_json(),
            "gamma": params.gamma.to_json(), "jacobian_invertible": params.jacobian_invertible}


def _params_text(params, p: int) -> list[str]:
    return [f"alpha: {_mag(params.alpha, p)}", f"beta: {_mag(params.beta, p)}",
            f"gamma: {_mag(params.gamma, p)}",
            f"jacobian invertible: {'yes' if params.jacobian_invertible else 'no'}"]


def _cmd_certify(args, f, out):
    p = args.prime
    ctx = PrimeContext(p, args.precision or 32)
    pt = _rationals(args.point)
    _check_arity(f, pt)
    cert = certify(f, ctx.vector(pt))
    if args.json:
        out.append(cert.to_json())
    else:
        out.append(f"certified: {'yes' if cert.certified else 'no'}")
        out.extend(_params_text(cert.params, p))
        for pr in cert.predictions:
            out.append(f"k={pr.k}: alpha <= {_mag(pr.alpha_bound, p)}, "
                       f"error <= {_mag(pr.error_bound, p)}, gamma <= {_mag(pr.gamma_bound, p)}")
    if cert.certified:
        return EXIT_OK
    return EXIT_NOT_CERTIFIED if cert.params.jacobian_invertible else EXIT_SINGULAR


def _cmd_solve(args, f, out):
    p = args.prime
    pt = _rationals(args.point)
    _check_arity(f, pt)
    if args.target is not None and args.target < 1:
        raise InputError("--target must be at least 1")
    trace = solve(f, pt, p, args.target, args.precision)
    last = trace.params[-1]
    root = trace.root
    if args.json:
        out.append({
            "stop_reason": trace.stop_reason,
            "iterations": trace.steps,
            "beta": last.beta.to_json(),
            "root": [{"value": str(c.lift()), "abs_prec": None if c.is_exact_zero else int(c.abs_prec)}
                     for c in root],
            "betas": [pr.beta.to_json() for pr in trace.params],
        })
    else:
        out.append(f"stop: {trace.stop_reason} after {trace.steps} Newton steps")
        for k, pr in enumerate(trace.params):
            out.append(f"step {k}: beta = {_mag(pr.beta, p)}")
        for j, c in enumerate(root, start=1):
            out.append(f"x{j} = {_scalar_str(c, p, args.target)}")
        out.append(f"distance to root: {_mag(last.beta, p)}")
    return EXIT_OK


def _refine_root(f, r):
    # candidates that already certify are pushed to a root at full precision
    if certify(f, r).certified:
        return solve_certified(f, r).root
    return r


def _cmd_gamma(args, f, out):
    p = args.prime
    ctx = PrimeContext(p, args.precision or 32)
    pt = _rationals(args.point)
    _check_arity(f, pt)
    x = ctx.vector(pt)
    cert = certify(f, x)
    result = {**_params_json(cert.params), "inverse_gamma": cert.params.gamma.inverse().to_json()}
    code = EXIT_OK if cert.params.jacobian_invertible else EXIT_SINGULAR
    lines = _params_text(cert.params, p) + [f"1/gamma: {_mag(cert.params.gamma.inverse(), p)}"]
    if args.roots:
        roots = []
        for r in _points(args.roots):
            _check_arity(f, r, "root")
            roots.append(_refine_root(f, ctx.vector(r)))
        nearest = min(roots, key=lambda r: nearest_root_distance([r], x))
        rep = gamma_distance_check(f, x, nearest)
        result.update({"distance": rep.distance.to_json(), "inside": rep.inside,
                       "beta_equals_distance": rep.beta_equals_distance,
                       "certified": rep.certified})
        lines += [f"distance to nearest root: {_mag(rep.distance, p)}",
                  f"inside 1/gamma ball: {'yes' if rep.inside else 'no'}"]
        if rep.inside:
            lines += [f"beta equals distance: {'yes' if rep.beta_equals_distance else 'no'}",
                      f"certified: {'yes' if rep.certified else 'no'}"]
        code = EXIT_OK if rep.inside else EXIT_NOT_CERTIFIED
    out.append(result if args.json else "\n".join(lines))
    return code


def _cmd_brute(args, f, out):
    if args.power < 1:
        raise InputError("--power must be at least 1")
    roots = roots_mod_pk(f, args.prime, args.power, args.budget)
    if args.json:
        out.append({"modulus": f"{args.prime}^{args.power}",
                    "roots": [list(r.coords) for r in roots]})
    else:
        out.extend(",".join(map(str, r.coords)) for r in roots)
    return EXIT_OK


def _cmd_hensel(args, f, out):
    p = args.prime
    ctx = PrimeContext(p, args.precision or 32)
    pt = _rationals(args.point)
    _check_arity(f, pt)
    rep = hensel_univariate_check(f, pt[0], ctx)
    fields = [("f_value", rep.f_value), ("derivative_squared", rep.derivative_squared),
              ("gamma", rep.gamma), ("gamma_bound", rep.gamma_bound), ("alpha", rep.alpha)]
    flags = [("hensel_holds", rep.hensel_holds), ("gamma_bound_holds", rep.gamma_bound_holds),
             ("alpha_below_one", rep.alpha_below_one), ("implication_holds", rep.implication_holds)]
    if args.json:
        out.append({**{k: v.to_json() for k, v in fields}, **dict(flags)})
    else:
        out.extend(f"{k}: {_mag(v, p)}" for k, v in fields)
        out.extend(f"{k}: {'yes' if v else 'no'}" for k, v in flags)
    return EXIT_OK if rep.alpha_below_one else EXIT_NOT_CERTIFIED


def _cmd_separation(args, f, out):
    p = args.prime
    ctx = PrimeContext(p, args.precision or 32)
    zeta = _rationals(args.point)
    _check_arity(f, zeta)
    others = [ctx.vector([r]) for r in _rationals(args.roots)]
    rep = separation_gamma(f, ctx.vector(zeta), others)
    if args.json:
        out.append({"inverse_gamma": rep.inverse_gamma.to_json(),
                    "distance": rep.distance.to_json(), "equal": rep.equal})
    else:
        out += [f"1/gamma: {_mag(rep.inverse_gamma, p)}",
                f"distance to other roots: {_mag(rep.distance, p)}",
                f"equal: {'yes' if rep.equal else 'no'}"]
    return EXIT_OK if rep.equal else EXIT_NOT_CERTIFIED


def _cmd_lemmas(args, f, out):
    p = args.prime
    ctx = PrimeContext(p, args.precision or 32)
    a, b = _rationals(args.point), _rationals(args.second_point)
    _check_arity(f, a)
    _check_arity(f, b, "second point")
    rep = lemma_quantities(f, ctx.vector(a), ctx.vector(b))
    if args.json:
        out.append({"rho": rep.rho.to_json(), "distance": rep.distance.to_json(),
                    "preconditions_met": rep.preconditions_met,
                    "transfer_norm": rep.transfer_norm.to_json() if rep.transfer_norm else None,
                    "x": _params_json(rep.params_x),
                    "y": _params_json(rep.params_y) if rep.params_y else None})
    else:
        out += [f"rho: {_mag(rep.rho, p)}", f"distance: {_mag(rep.distance, p)}",
                f"preconditions met: {'yes' if rep.preconditions_met else 'no'}"]
        if rep.preconditions_met:
            out.append("||Df(y)^-1 Df(x)||: "
                       + (_mag(rep.transfer_norm, p) if rep.transfer_norm else "singular"))
            out += ["at x:"] + ["  " + s for s in _params_text(rep.params_x, p)]
            out += ["at y:"] + ["  " + s for s in _params_text(rep.params_y, p)]
    return EXIT_OK if rep.preconditions_met else EXIT_NOT_CERTIFIED


COMMANDS = {
    "certify": _cmd_certify,
    "solve": _cmd_solve,
    "gamma": _cmd_gamma,
    "brute": _cmd_brute,
    "hensel": _cmd_hensel,
    "separation": _cmd_separation,
    "lemmas": _cmd_lemmas,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    out: list = []
    try:
        if args.precision is not None and args.precision < 1:
            raise InputError("--precision must be positive")
        PrimeContext(args.prime)
        f = _load_system(args.system)
        code = COMMANDS[args.command](args, f, out)
    except (InputError, ValueError, SyntaxError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    except SingularWithinPrecision as exc:
        print(f"singular: {exc}", file=stderr)
        return EXIT_SINGULAR
    except (PrecisionExhausted, IterationCap) as exc:
        print(f"precision exhausted: {exc}", file=stderr)
        return EXIT_PRECISION
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=stderr)
        return EXIT_BUDGET
    except NotCertified as exc:
        print(f"not certified: {exc}", file=stderr)
        return EXIT_NOT_CERTIFIED
    except PadicAlphaError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT
    for item in out:
        if isinstance(item, dict):
            print(json.dumps(item, sort_keys=True), file=stdout)
        else:
            print(item, file=stdout)
    return code


def main() -> None:
    sys.exit(run())
