"""Command-line front end: ``mean``, ``verify`` and ``sample``.

Exit codes: 0 ok, 1 a verification verdict failed, 2 invalid input,
3 internal cross-check failure, 4 hard invariant violated.
"""

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction

import numpy as np

from . import __version__, _accel, cesaro, ewens, oracle, thresholds
from .exceptions import CrossCheckError, InvariantViolation, ValidationError
from .theta_binom import plus_weights
from .verify import geometric_ns, verify_lemma2, verify_thm1, verify_thm2, verify_thm3

EXIT_FAIL, EXIT_VALIDATION, EXIT_CROSSCHECK, EXIT_INVARIANT = 1, 2, 3, 4
FAMILIES = ("constant", "unimodular", "zero_on", "random_disk")
SERIES = ("alternating", "alternating_linear", "geometric", "exp_l")


# -- spec documents ----------------------------------------------------------

def _number(x, exact):
    if isinstance(x, str):
        try:
            return Fraction(x) if exact else float(Fraction(x))
        except (ValueError, ZeroDivisionError) as err:
            raise ValidationError(f"bad number {x!r}") from err
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"expected a number, got {x!r}")
    return Fraction(str(x)) if exact else float(x)


def _complex(x, exact):
    if isinstance(x, dict):
        if set(x) - {"re", "im"}:
            raise ValidationError(f"complex values use keys re/im, got {sorted(x)}")
        re = _number(x.get("re", 0), exact)
        im = _number(x.get("im", 0), exact)
        if exact and im != 0:
            raise ValidationError("exact mode supports real fhat only")
        return re if exact else complex(re, im)
    v = _number(x, exact)
    return v if exact else complex(v)


def build_spec(fhat_doc, n, exact=False):
    """Resolve an explicit fhat array or a named family into a MultiplicativeSpec."""
    if isinstance(fhat_doc, list):
        if len(fhat_doc) != n:
            raise ValidationError(f"explicit fhat has length {len(fhat_doc)}, expected n = {n}")
        vals = [_complex(v, exact) for v in fhat_doc]
        arr = np.array(vals, dtype=object if exact else np.complex128)
        return ewens.MultiplicativeSpec(arr, {"family": "explicit"})
    if not isinstance(fhat_doc, dict) or fhat_doc.get("family") not in FAMILIES:
        raise ValidationError(f"fhat must be an array or a family object with family in {FAMILIES}")
    fam = fhat_doc["family"]
    if fam == "constant":
        return ewens.constant(n, _complex(fhat_doc.get("u", 1), exact))
    if exact and fam != "zero_on":
        raise ValidationError(f"family {fam!r} has irrational values; drop --exact")
    if fam == "unimodular":
        return ewens.unimodular(n, _number(fhat_doc.get("tau", 0.0), False))
    if fam == "zero_on":
        lengths = fhat_doc.get("set", [])
        if not isinstance(lengths, list) or not all(isinstance(j, int) for j in lengths):
            raise ValidationError("zero_on needs an integer list under 'set'")
        spec = ewens.zero_on(n, lengths)
        return spec if exact else ewens.as_float(spec)
    seed = fhat_doc.get("seed", 0)
    if not isinstance(seed, int):
        raise ValidationError("random_disk needs an integer 'seed'")
    return ewens.random_disk(n, seed)


def load_document(path):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as err:
        raise ValidationError(f"cannot read spec file: {err}") from err
    except json.JSONDecodeError as err:
        raise ValidationError(f"spec file is not valid JSON: {err}") from err
    if not isinstance(doc, dict):
        raise ValidationError("spec document must be a JSON object")
    return doc


def _resolved_n(doc, override):
    n = override if override is not None else doc.get("n")
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    return n


def _resolved_theta(doc, override, exact):
    raw = override if override is not None else doc.get("theta")
    if raw is None:
        raise ValidationError("theta missing: give it in the spec or with --theta")
    theta = _number(raw, exact)
    if not theta > 0:
        raise ValidationError(f"theta must be positive, got {raw}")
    return theta


# -- output ------------------------------------------------------------------

def _plain(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": _plain(float(x.real)), "im": _plain(float(x.imag))}
    if isinstance(x, (np.floating, float)):
        x = float(x)
        if math.isinf(x) or math.isnan(x):
            return str(x)
        return x
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    return x


def spec_echo(spec, theta):
    vals = spec.fhat
    if spec.exact:
        fhat = [{"re": str(Fraction(v)), "im": "0"} for v in vals]
    else:
        fhat = [{"re": float(v.real), "im": float(v.imag)} for v in vals]
    return {"n": spec.n, "theta": _plain(theta), "family": _plain(spec.family), "fhat": fhat}


def _flat_row(row):
    out = {}
    for k, v in row.items():
        if isinstance(v, (complex, np.complexfloating)):
            out[f"{k}_re"] = float(v.real)
            out[f"{k}_im"] = float(v.imag)
        elif isinstance(v, Fraction):
            out[k] = str(v)
        elif v is None:
            out[k] = ""
        else:
            out[k] = _plain(v)
    return out


def emit(report, fmt, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        stream.write(json.dumps(_plain(report), sort_keys=True, indent=2) + "\n")
        return
    rows = [_flat_row(r) for r in report.get("rows", [])]
    buf = io.StringIO()
    if rows:
        writer = csv.DictWriter(buf, fieldnames=list(rows[0]), lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
    stream.write(buf.getvalue())
    for key, ok in report.get("checks", {}).items():
        sys.stderr.write(f"{key}: {'PASS' if ok else 'FAIL'}\n")
    if "verdict" in report:
        sys.stderr.write(f"verdict: {report['verdict']}\n")


def _base(args, command):
    return {
        "tool": "ewens-cesaro",
        "version": __version__,
        "thresholds_version": thresholds.VERSION,
        "backend": _accel.backend_name(),
        "command": command,
    }


# -- commands ----------------------------------------------------------------

def cmd_mean(args):
    doc = load_document(args.spec)
    exact = args.exact
    n = _resolved_n(doc, args.n)
    theta = _resolved_theta(doc, args.theta, exact)
    spec = build_spec(doc.get("fhat", {"family": "constant", "u": 1}), n, exact)
    coeffs = ewens.big_n_coeffs(spec, theta, n, exact=exact)
    weight = plus_weights(theta, n, exact=exact)[n]
    n_coeff = coeffs[n]
    mean = n_coeff / weight
    row = {"n": n, "mean": mean, "n_coeff": n_coeff, "weight": weight}
    if exact:
        row["mean_float"] = float(mean)
    report = _base(args, "mean")
    report["parameters"] = {"n": n, "theta": theta, "exact": exact, "oracle": args.oracle}
    report["spec"] = spec_echo(spec, theta)
    if args.oracle:
        brute = oracle.brute_mean(spec, theta)
        row["brute_mean"] = brute
        row["discrepancy"] = abs(mean - brute) if exact else float(abs(complex(mean) - complex(brute)))
    report["rows"] = [row]
    return report, 0


def _series_source(args, doc, theta):
    name = args.series
    if name == "alternating":
        return cesaro.alternating()
    if name == "alternating_linear":
        return cesaro.alternating_linear()
    if name == "geometric":
        return cesaro.geometric(args.ratio)
    if doc is None:
        raise ValidationError("series exp_l needs --spec")
    fhat_doc = doc.get("fhat")
    if isinstance(fhat_doc, list):
        spec = build_spec(fhat_doc, _resolved_n(doc, None))
        return lambda n: cesaro.exp_l(spec, theta)
    return lambda n: cesaro.exp_l(build_spec(fhat_doc, n), theta)


def _parse_grid(text, default):
    if text is None:
        return default
    try:
        a, b, f = text.split(":")
        a, b, f = int(a), int(b), float(f)
    except ValueError as err:
        raise ValidationError(f"--grid expects a:b:factor, got {text!r}") from err
    if a < 1 or b < a or f <= 1:
        raise ValidationError(f"--grid needs 1 <= a <= b and factor > 1, got {text!r}")
    return a, b, f


def _parse_overrides(items):
    out = {}
    for item in items or []:
        key, _, value = item.partition("=")
        try:
            out[key] = float(value)
        except ValueError as err:
            raise ValidationError(f"--threshold expects KEY=VALUE, got {item!r}") from err
    try:
        thresholds.resolve(out)
    except KeyError as err:
        raise ValidationError(str(err)) from err
    return out


def cmd_verify(args):
    doc = load_document(args.spec) if args.spec else None
    overrides = _parse_overrides(args.threshold)
    report = _base(args, f"verify {args.theorem}")
    theta = args.theta if args.theta is not None else (doc or {}).get("theta")
    params = {"theorem": args.theorem}

    if args.theorem == "thm3":
        if doc is None:
            raise ValidationError("thm3 needs --spec")
        theta = _resolved_theta(doc, args.theta, False)
        p = args.p if args.p is not None else 2.0
        a, b, f = _parse_grid(args.grid, (50, 1600, 2))
        grid = geometric_ns(a, b, f)
        fhat_doc = doc.get("fhat")
        if isinstance(fhat_doc, list):
            raise ValidationError("thm3 sweeps need a family spec, not an explicit fhat array")
        result = verify_thm3(lambda n: build_spec(fhat_doc, n), theta, p, grid, overrides)
        params.update(theta=theta, p=p, grid=grid, fhat=fhat_doc)
    elif args.theorem == "thm1":
        theta = float(_number(theta if theta is not None else 1.0, False))
        a, b, f = _parse_grid(args.grid, (100, 1600, 4))
        grid = geometric_ns(a, b, f)
        source = _series_source(args, doc, theta)
        result = verify_thm1(source, theta, grid, args.j_cap_factor, overrides)
        params.update(theta=theta, grid=grid, series=args.series, j_cap_factor=args.j_cap_factor)
    elif args.theorem == "thm2":
        p = args.p if args.p is not None else 1.0
        a, b, _ = _parse_grid(args.grid, (100, 100000, 2))
        source = _series_source(args, doc, p + 1)
        stream = source(b) if callable(source) else source
        result = verify_thm2(stream, p, b, n0=a, thresholds=overrides)
        params.update(p=p, n0=a, N=b, series=args.series)
        report["verdict"] = result.details["verdict"]
    else:
        theta = float(_number(theta if theta is not None else 1.0, False))
        result = verify_lemma2(theta, args.M, args.J, thresholds=overrides)
        params.update(theta=theta, M=args.M, J=args.J)

    report["parameters"] = params
    report["thresholds"] = thresholds.resolve(overrides)
    report["rows"] = result.rows
    report["checks"] = result.checks
    report["details"] = result.details
    report["passed"] = result.passed
    return report, 0 if result.passed else EXIT_FAIL


def cmd_sample(args):
    if args.samples < 100:
        raise ValidationError("--samples must be at least 100")
    report = _base(args, "sample")
    if args.spec:
        doc = load_document(args.spec)
        n = _resolved_n(doc, args.n)
        theta = float(_resolved_theta(doc, args.theta, False))
        spec = build_spec(doc.get("fhat", {"family": "constant", "u": 1}), n)
        est, se = oracle.mc_mean(spec, theta, args.samples, args.seed)
        exact = complex(ewens.mean_value(spec, theta))
        gap = abs(est - exact)
        z = gap / se if se > 0 else (0.0 if gap == 0 else math.inf)
        row = {"n": n, "estimate": est, "stderr": se, "mean": exact, "z": z}
        report["spec"] = spec_echo(spec, theta)
    else:
        if args.n is None or args.theta is None:
            raise ValidationError("sample needs --n and --theta (or --spec)")
        n, theta = args.n, float(args.theta)
        if n < 1:
            raise ValidationError("n must be positive")
        mult = oracle.crp_cycle_types(n, theta, args.samples, args.seed)
        k = mult.sum(axis=1)
        expected = sum(theta / (theta + i) for i in range(n))
        se = float(k.std(ddof=1) / math.sqrt(args.samples))
        z = abs(k.mean() - expected) / se if se > 0 else 0.0
        row = {"n": n, "cycles_mean": float(k.mean()), "stderr": se, "cycles_expected": expected, "z": z}
    report["parameters"] = {"n": n, "theta": theta, "samples": args.samples}
    report["seed"] = args.seed
    report["rows"] = [row]
    report["checks"] = {"z_within": row["z"] <= thresholds.DEFAULTS["mc_z_max"]}
    return report, 0


def build_parser():
    parser = argparse.ArgumentParser(prog="ewens-cesaro", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--theta", type=str, default=None, help="overrides the spec's theta")
        p.add_argument("--n", type=int, default=None)

    p = sub.add_parser("mean", help="Ewens mean value of a multiplicative function")
    p.add_argument("spec", help="JSON spec document")
    p.add_argument("--exact", action="store_true", help="rational arithmetic throughout")
    p.add_argument("--oracle", action="store_true", help="also enumerate cycle types")
    common(p)
    p.set_defaults(func=cmd_mean)

    p = sub.add_parser("verify", help="n-grid check of one of the asymptotic statements")
    p.add_argument("theorem", choices=("thm1", "thm2", "thm3", "lemma2"))
    p.add_argument("--spec", default=None)
    p.add_argument("--series", choices=SERIES, default="alternating")
    p.add_argument("--ratio", type=float, default=0.5, help="r for --series geometric")
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--grid", default=None, help="a:b:factor")
    p.add_argument("--j-cap-factor", type=float, default=cesaro.DEFAULT_J_CAP_FACTOR)
    p.add_argument("--M", type=int, default=200)
    p.add_argument("--J", type=int, default=50)
    p.add_argument("--threshold", action="append", metavar="KEY=VALUE")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sample", help="Chinese-restaurant Monte-Carlo")
    p.add_argument("--spec", default=None)
    p.add_argument("--samples", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    common(p)
    p.set_defaults(func=cmd_sample)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.theta is not None and args.command != "mean":
        try:
            args.theta = float(Fraction(args.theta))
        except (ValueError, ZeroDivisionError):
            parser.error(f"bad --theta {args.theta!r}")
    started = time.perf_counter()
    try:
        report, code = args.func(args)
    except ValidationError as err:
        sys.stderr.write(f"error: {err}\n")
        return EXIT_VALIDATION
    except CrossCheckError as err:
        sys.stderr.write(f"cross-check failed: {err}\n")
        return EXIT_CROSSCHECK
    except InvariantViolation as err:
        sys.stderr.write(f"invariant violated: {err}\n")
        return EXIT_INVARIANT
    report["argv"] = list(argv if argv is not None else sys.argv[1:])
    report["wall_clock_s"] = round(time.perf_counter() - started, 6)
    emit(report, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
