"""Command line interface: spec-file ingestion and stable reports.

Spec files are JSON documents:

    {
      "group": {"simple": [["A", 1]], "central_torus_rank": 0},
      "rep": [{"hw": [3], "mult": 1}],
      "options": {"weyl_cap": 1000000, "hilbert_degree": 8,
                  "seed": 0, "samples": 20}
    }

Highest weights are given in fundamental-weight coordinates per declared
factor followed by the central charges.  Unknown keys are rejected with
field-addressed messages.  Exit codes: 0 success, 1 failed numeric check,
2 parse/validation failure, 3 budget exceeded, 4 not supported by the
matrix-model catalog.
"""

import argparse
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .errors import (
    BudgetExceeded,
    NotACharacter,
    NotSupported,
    SpecFormatError,
    SymprepError,
    ValidationError,
    WeylCapExceeded,
)
from .reduction import DEFAULT_HILBERT_DEGREE, analyze
from .reps import invariant_dims, validate_symplectic_spec
from .rootdata import DEFAULT_WEYL_CAP, build_root_datum
from .verify import verify_suite

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_VALIDATION = 2
EXIT_BUDGET = 3
EXIT_NOT_SUPPORTED = 4

_OPTION_KEYS = {"weyl_cap", "hilbert_degree", "seed", "samples"}


def _env_default(name, fallback):
    raw = os.environ.get(name)
    if raw is None:
        return fallback
    try:
        return int(raw)
    except ValueError:
        raise SpecFormatError(f"environment variable {name} must be an integer")


def default_options():
    return {
        "weyl_cap": _env_default("SYMPREP_WEYL_CAP", DEFAULT_WEYL_CAP),
        "hilbert_degree": _env_default("SYMPREP_HILBERT_DEGREE", DEFAULT_HILBERT_DEGREE),
        "seed": _env_default("SYMPREP_SEED", 0),
        "samples": _env_default("SYMPREP_SAMPLES", 20),
    }


def parse_spec(source):
    """Parse a spec document (path or raw JSON text) into (spec, options)."""
    if isinstance(source, str) and "\n" not in source and os.path.exists(source):
        with open(source) as fh:
            text = fh.read()
    else:
        text = source
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"not valid JSON: {exc}")
    problems = []
    if not isinstance(doc, dict):
        raise SpecFormatError("top level must be an object")
    for key in doc:
        if key not in ("group", "rep", "options"):
            problems.append(f"unknown key {key!r} at top level")
    group = doc.get("group")
    if not isinstance(group, dict):
        problems.append("missing or malformed 'group' object")
        raise SpecFormatError(problems)
    for key in group:
        if key not in ("simple", "central_torus_rank"):
            problems.append(f"unknown key {key!r} in group")
    simple = group.get("simple", [])
    central = group.get("central_torus_rank", 0)
    if not isinstance(simple, list):
        problems.append("group.simple must be a list of [letter, rank] pairs")
    if not isinstance(central, int) or central < 0:
        problems.append("group.central_torus_rank must be a nonnegative integer")
    factors = []
    if isinstance(simple, list):
        for i, item in enumerate(simple):
            if (
                not isinstance(item, (list, tuple))
                or len(item) != 2
                or not isinstance(item[0], str)
                or not isinstance(item[1], int)
            ):
                problems.append(f"group.simple[{i}] must be [letter, rank]")
                continue
            factors.append((item[0], item[1]))
    rep = doc.get("rep")
    if not isinstance(rep, list) or not rep:
        problems.append("missing or empty 'rep' list")
        raise SpecFormatError(problems)
    entries = []
    for i, item in enumerate(rep):
        if not isinstance(item, dict):
            problems.append(f"rep[{i}] must be an object")
            continue
        for key in item:
            if key not in ("hw", "mult"):
                problems.append(f"unknown key {key!r} in rep[{i}]")
        hw = item.get("hw")
        mult = item.get("mult", 1)
        if not isinstance(hw, list) or not all(isinstance(x, int) for x in hw):
            problems.append(f"rep[{i}].hw must be a list of integers")
            continue
        if not isinstance(mult, int) or mult < 1:
            problems.append(f"rep[{i}].mult must be a positive integer")
            continue
        entries.append((tuple(hw), mult))
    options = default_options()
    raw_opts = doc.get("options", {})
    if not isinstance(raw_opts, dict):
        problems.append("'options' must be an object")
    else:
        for key, val in raw_opts.items():
            if key not in _OPTION_KEYS:
                problems.append(f"unknown key {key!r} in options")
            elif not isinstance(val, int):
                problems.append(f"options.{key} must be an integer")
            else:
                options[key] = val
    if problems:
        raise SpecFormatError(problems)
    try:
        datum = build_root_datum(factors, central)
    except SymprepError as exc:
        raise SpecFormatError(f"group: {exc}")
    for i, (hw, _) in enumerate(entries):
        if len(hw) != datum.ambient_dim:
            raise SpecFormatError(
                f"rep[{i}].hw has length {len(hw)}, ambient dimension is "
                f"{datum.ambient_dim}"
            )
    try:
        spec = validate_symplectic_spec(datum, entries)
    except ValidationError as exc:
        index = next(
            (i for i, (hw, _) in enumerate(entries) if tuple(hw) == exc.weight),
            None,
        )
        where = f" at rep[{index}]" if index is not None else ""
        raise ValidationError(exc.weight, f"{exc.code}({list(exc.weight)}){where}")
    return spec, options, {"group": {"simple": [list(f) for f in factors],
                                     "central_torus_rank": central},
                           "rep": [{"hw": list(h), "mult": m} for h, m in entries]}


def _jsonify(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (list, tuple)):
        return [_jsonify(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _jsonify(v) for k, v in x.items()}
    return x


def build_report(echo, options, analysis, trace=False, numeric=None):
    lw = analysis.little_weyl
    report = {
        "schema_version": SCHEMA_VERSION,
        "input": echo,
        "options": dict(sorted(options.items())),
        "rk_s": analysis.rk_s,
        "c_s": analysis.c_s,
        "mf": analysis.mf,
        "a_star_basis": _jsonify(analysis.a_star_basis),
        "A_rank": analysis.a_rank,
        "levi_L": analysis.levi.type_string(),
        "sp_factors": list(analysis.sp_factor_sizes),
        "gamma": {
            "order": analysis.gamma.gamma_order,
            "reflection_count": len(analysis.gamma.reflection_indices),
        },
        "little_weyl": {
            "status": lw.status,
            "order": lw.order,
            "degrees": _jsonify(lw.degrees) if lw.degrees is not None else None,
            "candidates": _jsonify(lw.candidates) if lw.candidates else None,
        },
        "isotropy": {
            "dim_H": analysis.isotropy.dim_h,
            "parts": list(analysis.isotropy.sp_parts),
            "constraint": analysis.isotropy.reductive_constraint,
        },
    }
    if trace:
        report["trace"] = [
            {
                "chi": _jsonify(step.chosen_chi),
                "delta_u_size": len(step.delta_u),
                "levi_type": step.levi.type_string(),
                "dim_S": step.s_spec.dim,
            }
            for step in analysis.trace
        ]
    if numeric is not None:
        report["numeric_verification"] = numeric
    return report


def report_to_json(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def report_to_text(report):
    lines = [
        f"symplectic rank      : {report['rk_s']}",
        f"symplectic complexity: {report['c_s']}",
        f"multiplicity free    : {report['mf']}",
        f"a* basis             : {report['a_star_basis']}",
        f"Levi L               : {report['levi_L']}",
        f"Sp factors           : {report['sp_factors']}",
        f"Gamma                : order {report['gamma']['order']}, "
        f"{report['gamma']['reflection_count']} reflections",
        f"little Weyl group    : {report['little_weyl']}",
        f"isotropy             : dim H = {report['isotropy']['dim_H']}, "
        f"parts {report['isotropy']['parts']}",
    ]
    if "trace" in report:
        for i, step in enumerate(report["trace"]):
            lines.append(
                f"step {i}: chi={step['chi']} |Delta_u|={step['delta_u_size']} "
                f"M={step['levi_type']} dim S={step['dim_S']}"
            )
    if "numeric_verification" in report:
        nv = report["numeric_verification"]
        lines.append(f"numeric verification : passed={nv['passed']} seed={nv['seed']}")
        for chk in nv["checks"]:
            lines.append(
                f"  {chk['name']}: residual {chk['residual']:.3e} "
                f"(tol {chk['tolerance']:.0e}) {'ok' if chk['passed'] else 'FAIL'}"
            )
    return "\n".join(lines) + "\n"


def _exit_code_for(exc):
    if isinstance(exc, (WeylCapExceeded, BudgetExceeded)):
        return EXIT_BUDGET
    if isinstance(exc, NotSupported):
        return EXIT_NOT_SUPPORTED
    if isinstance(exc, (SpecFormatError, ValidationError, NotACharacter)):
        return EXIT_VALIDATION
    return EXIT_VALIDATION


def cmd_analyze(args, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        spec, options, echo = parse_spec(args.spec)
        analysis = analyze(
            spec,
            weyl_cap=options["weyl_cap"],
            hilbert_degree=options["hilbert_degree"],
        )
    except SymprepError as exc:
        print(f"error: {exc}", file=err)
        return _exit_code_for(exc)
    report = build_report(echo, options, analysis, trace=args.trace)
    out.write(report_to_text(report) if args.text else report_to_json(report))
    return EXIT_OK


def cmd_verify(args, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        spec, options, echo = parse_spec(args.spec)
        if args.seed is not None:
            options["seed"] = args.seed
        if args.samples is not None:
            options["samples"] = args.samples
        analysis = analyze(
            spec,
            weyl_cap=options["weyl_cap"],
            hilbert_degree=options["hilbert_degree"],
        )
        result = verify_suite(
            spec, seed=options["seed"], samples=options["samples"],
            analysis=analysis,
        )
    except SymprepError as exc:
        print(f"error: {exc}", file=err)
        return _exit_code_for(exc)
    numeric = {
        "passed": result.passed,
        "seed": result.seed,
        "samples": result.samples,
        "checks": [
            {
                "name": c.name,
                "residual": c.residual,
                "tolerance": c.tolerance,
                "passed": c.passed,
                "detail": c.detail,
            }
            for c in result.checks
        ],
    }
    report = build_report(echo, options, analysis, trace=args.trace, numeric=numeric)
    out.write(report_to_text(report) if args.text else report_to_json(report))
    if not result.passed:
        names = ", ".join(c.name for c in result.failing())
        print(f"error: numeric checks failed: {names}", file=err)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def cmd_hilbert(args, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        spec, options, echo = parse_spec(args.spec)
        dims = invariant_dims(spec, args.degree)
    except SymprepError as exc:
        print(f"error: {exc}", file=err)
        return _exit_code_for(exc)
    out.write(json.dumps({
        "schema_version": SCHEMA_VERSION,
        "input": echo,
        "degree": args.degree,
        "invariant_dims": dims,
    }, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_gamma(args, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    try:
        spec, options, echo = parse_spec(args.spec)
        analysis = analyze(spec, weyl_cap=options["weyl_cap"],
                           hilbert_degree=options["hilbert_degree"])
        gamma = analysis.gamma
    except SymprepError as exc:
        print(f"error: {exc}", file=err)
        return _exit_code_for(exc)
    out.write(json.dumps({
        "schema_version": SCHEMA_VERSION,
        "input": echo,
        "a_star_basis": _jsonify(analysis.a_star_basis),
        "gamma_order": gamma.gamma_order,
        "reflection_count": len(gamma.reflection_indices),
        "normalizer_order": len(gamma.normalizer_elements),
        "centralizer_order": len(gamma.centralizer_elements),
        "matrices": _jsonify(gamma.gamma_matrices),
    }, sort_keys=True, indent=2) + "\n")
    return EXIT_OK


def cmd_batch(args, out=None, err=None):
    out = out if out is not None else sys.stdout
    err = err if err is not None else sys.stderr
    paths = sorted(
        os.path.join(args.directory, p)
        for p in os.listdir(args.directory)
        if p.endswith(".json")
    )
    if not paths:
        print(f"error: no .json spec files in {args.directory}", file=err)
        return EXIT_VALIDATION
    worst = EXIT_OK
    for path in paths:
        ns = argparse.Namespace(spec=path, text=False, trace=False)
        import io

        buf = io.StringIO()
        code = cmd_analyze(ns, out=buf, err=err)
        status = "ok" if code == EXIT_OK else f"exit {code}"
        out.write(f"{path}: {status}\n")
        worst = max(worst, code)
    return worst


def make_parser():
    parser = argparse.ArgumentParser(
        prog="symprep",
        description="Structural analysis of symplectic representations of "
        "reductive groups.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="combinatorial analysis of a spec file")
    p.add_argument("spec")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--json", dest="text", action="store_false", default=False)
    mode.add_argument("--text", dest="text", action="store_true")
    p.add_argument("--trace", action="store_true", help="include the reduction trace")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="numeric verification on the matrix model")
    p.add_argument("spec")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--samples", type=int, default=None)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--json", dest="text", action="store_false", default=False)
    mode.add_argument("--text", dest="text", action="store_true")
    p.add_argument("--trace", action="store_true")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hilbert", help="invariant dimensions per degree")
    p.add_argument("spec")
    p.add_argument("--degree", type=int, required=True)
    p.set_defaults(func=cmd_hilbert)

    p = sub.add_parser("gamma", help="normalizer/centralizer data for a*")
    p.add_argument("spec")
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("batch", help="analyze every .json file in a directory")
    p.add_argument("directory")
    p.set_defaults(func=cmd_batch)
    return parser


def main(argv=None):
    parser = make_parser()
    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
