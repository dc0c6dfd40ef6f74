"""
classical-w command line.

    classical-w generate --algebra gl --rank 2
    classical-w verify --algebra sp --rank 2 --workers 4
    classical-w miura --algebra so-odd --rank 2 --format text
    classical-w screen --algebra gl --rank 3
    classical-w macmahon --algebra gl --rank 3 --degree 3

Exit codes: 0 when every check passes, 1 on a mathematical failure (the
report carries a witness), 2 on a usage error.
"""
import argparse
import json
import logging
import sys

from .codec import (
    DecodeError,
    certificate_to_dict,
    format_generator_set,
    format_op,
    format_poly,
    generator_set_from_dict,
    generator_set_to_dict,
    op_to_dict,
    poly_for_spec,
    poly_to_dict,
)
from .config import (
    ALGEBRA_KINDS,
    DEFAULT_LOG_LEVEL,
    DEFAULT_TRUNCATION,
    DEFAULT_WORKERS,
    OUTPUT_FORMATS,
    RunConfig,
    configure_logging,
    load_settings,
    resolve_log_level,
)
from .lie_core import RankError, build_spec
from .miura import (
    g2_quartic_relation,
    miura_product,
    miura_targets,
    phi_h_family_check,
    phi_mismatches,
    screening_sweep,
)
from .wgen import (
    GeneratorError,
    d_type_structure,
    family_bound,
    generators,
    leading_part_check,
    macmahon_residuals,
    operator_order,
    verify_generator_set,
    verify_membership,
)

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    pass


def _parse_args(argv: list[str] | None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--algebra", required=True, choices=sorted(ALGEBRA_KINDS),
                        help="gl, so-odd (o_{2n+1}), sp (sp_{2n}), so-even (o_{2n}) or g2")
    common.add_argument("--rank", type=int, default=None, help="n; ignored for g2")
    common.add_argument("--format", dest="fmt", choices=OUTPUT_FORMATS, default=None)
    common.add_argument("--truncation", type=int, default=None,
                        help=f"pseudo-differential depth K (default {DEFAULT_TRUNCATION})")
    common.add_argument("--workers", type=int, default=None,
                        help=f"verification threads (default {DEFAULT_WORKERS})")
    common.add_argument("--config", dest="config_path", default=None, help="YAML settings file")
    common.add_argument("--output", dest="output_path", default=None, help="write the report here")
    common.add_argument("-v", "--verbose", action="count", default=0)

    parser = argparse.ArgumentParser(prog="classical-w", description="Generators of classical W-algebras")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("generate", parents=[common], help="print the generator set")
    verify = sub.add_parser("verify", parents=[common], help="check W-algebra membership")
    verify.add_argument("--input", dest="input_path", default=None,
                        help="verify the polynomials of a generator-set JSON file instead")
    sub.add_parser("miura", parents=[common], help="compare phi images with the Miura product")
    sub.add_parser("screen", parents=[common], help="apply the screening operators")
    macmahon = sub.add_parser("macmahon", parents=[common], help="check h(t) e(-t) = 1")
    macmahon.add_argument("--degree", type=int, default=None)
    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> RunConfig:
    """Flags override the settings file, which overrides the environment."""
    settings = load_settings(args.config_path)
    kind = ALGEBRA_KINDS[args.algebra]
    rank = 2 if kind == "G2" else args.rank
    if rank is None:
        raise UsageError(f"--rank is required for --algebra {args.algebra}")

    def pick(flag, key, default):
        if flag is not None:
            return flag
        return settings.get(key, default)

    try:
        truncation = int(pick(args.truncation, "truncation", DEFAULT_TRUNCATION))
        workers = int(pick(args.workers, "workers", DEFAULT_WORKERS))
    except (TypeError, ValueError) as e:
        raise UsageError(f"Bad numeric setting: {e}") from e
    return RunConfig(
        kind=kind,
        rank=rank,
        subcommand=args.command,
        fmt=pick(args.fmt, "format", "json"),
        truncation=truncation,
        verbosity=args.verbose,
        workers=workers,
        degree=getattr(args, "degree", None),
        input_path=getattr(args, "input_path", None),
        output_path=args.output_path,
        log_level=str(settings.get("log_level", DEFAULT_LOG_LEVEL)),
    )


def _header(cfg: RunConfig) -> dict:
    return {"command": cfg.subcommand, "kind": cfg.kind, "rank": cfg.rank, "truncation": cfg.truncation}


def cmd_generate(cfg: RunConfig) -> tuple:
    spec = build_spec(cfg.kind, cfg.rank)
    gs = generators(spec, cfg.truncation)
    report = _header(cfg) | {"generators": generator_set_to_dict(gs)}
    return report, format_generator_set(gs), EXIT_OK


def _load_input(cfg: RunConfig, spec) -> list:
    try:
        with open(cfg.input_path, "r", encoding="utf-8") as f:
            payload = json.load(f)
    except OSError as e:
        raise UsageError(f"Cannot read {cfg.input_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise DecodeError(f"{cfg.input_path} is not valid JSON: {e}") from e
    if isinstance(payload, dict) and "generators" in payload:
        payload = payload["generators"]
    kind, rank, items = generator_set_from_dict(payload)
    if (kind, rank) != (cfg.kind, cfg.rank):
        raise UsageError(f"Input is for {kind}{rank}, command line asks for {cfg.kind}{cfg.rank}")
    return [(label, poly_for_spec(spec, p, f"$.{label}")) for label, p in items]


def cmd_verify(cfg: RunConfig) -> tuple:
    spec = build_spec(cfg.kind, cfg.rank)
    report = _header(cfg)
    lines = []
    if cfg.input_path:
        labelled = _load_input(cfg, spec)
        certs = [(label, verify_membership(spec, p, cfg.workers)) for label, p in labelled]
        passed = True
    else:
        gs = generators(spec, cfg.truncation)
        certs = verify_generator_set(spec, gs, cfg.workers)
        ratios = leading_part_check(spec, gs)
        report["leading_part"] = {label: None if r is None else f"{r.numerator}/{r.denominator}"
                                  for label, r in ratios.items()}
        passed = all(r is not None for r in ratios.values())
        lines += [f"leading part {label}: {'ok' if r is not None else 'MISSING'}" for label, r in ratios.items()]
        if spec.kind == "D":
            structure = d_type_structure(spec, cfg.truncation)
            report["d_type"] = {"parity_ok": structure.parity_ok, "tail_ok": structure.tail_ok}
            passed = passed and structure.parity_ok and structure.tail_ok
            lines.append(f"parity {'ok' if structure.parity_ok else 'FAILED'}, tail {'ok' if structure.tail_ok else 'FAILED'}")
    report["membership"] = [certificate_to_dict(label, cert) for label, cert in certs]
    for label, cert in certs:
        if cert.passed:
            lines.append(f"{label}: ok ({len(cert.checks)} checks)")
        else:
            gen, residual = cert.witness
            lines.append(f"{label}: FAILED at {gen}: {residual!r}")
    passed = passed and all(cert.passed for _, cert in certs)
    report["passed"] = passed
    return report, "\n".join(lines), EXIT_OK if passed else EXIT_FAILED


def cmd_miura(cfg: RunConfig) -> tuple:
    spec = build_spec(cfg.kind, cfg.rank)
    gs = generators(spec, cfg.truncation)
    result = miura_product(spec, cfg.truncation)
    bad = phi_mismatches(spec, gs)
    passed = not bad and result.tail_ok
    report = _header(cfg) | {
        "operator": op_to_dict(result.operator),
        "w_tilde": {str(k): poly_to_dict(p) for k, p in sorted(result.w_tilde.items())},
        "y_tilde": None if result.y_tilde is None else poly_to_dict(result.y_tilde),
        "mismatches": bad,
        "tail_ok": result.tail_ok,
    }
    lines = [f"operator: {format_op(result.operator)}"]
    lines += [f"w~{k} = {format_poly(p)}" for k, p in sorted(result.w_tilde.items())]
    if spec.kind == "G2":
        relation = not g2_quartic_relation(result)
        report["quartic_relation"] = relation
        passed = passed and relation
        lines.append(f"w~4 relation: {'ok' if relation else 'FAILED'}")
    lines.append("agreement: " + ("ok" if not bad else "FAILED on " + ", ".join(bad)))
    report["passed"] = passed
    return report, "\n".join(lines), EXIT_OK if passed else EXIT_FAILED


def cmd_screen(cfg: RunConfig) -> tuple:
    spec = build_spec(cfg.kind, cfg.rank)
    result = miura_product(spec, cfg.truncation)
    rows = screening_sweep(spec, miura_targets(result), cfg.workers)
    passed = all(r.annihilated for r in rows)
    report = _header(cfg) | {
        "results": [
            {
                "label": r.label,
                "screening": r.index,
                "annihilated": r.annihilated,
                "residual": None if r.annihilated else poly_to_dict(r.residual),
            }
            for r in rows
        ],
        "passed": passed,
    }
    lines = [f"V{r.index}({r.label}): {'0' if r.annihilated else format_poly(r.residual)}" for r in rows]
    return report, "\n".join(lines), EXIT_OK if passed else EXIT_FAILED


def cmd_macmahon(cfg: RunConfig) -> tuple:
    spec = build_spec(cfg.kind, cfg.rank)
    bound = family_bound(spec, cfg.truncation)
    degree = cfg.degree if cfg.degree is not None else operator_order(spec)
    if degree > bound:
        raise UsageError(f"--degree {degree} exceeds the available range 0..{bound} for {spec.name}")
    residuals = macmahon_residuals(spec, degree, cfg.truncation)
    passed = not residuals
    report = _header(cfg) | {
        "degree": degree,
        "residuals": {str(m): op_to_dict(r) for m, r in sorted(residuals.items())},
    }
    lines = [f"m={m}: residual {format_op(r)}" for m, r in sorted(residuals.items())]
    if spec.kind == "D":
        phi_ok = phi_h_family_check(spec, degree, cfg.truncation)
        report["phi_h_family"] = phi_ok
        passed = passed and phi_ok
        lines.append(f"phi(h_m) formula: {'ok' if phi_ok else 'FAILED'}")
    lines.append(f"identity up to degree {degree}: {'ok' if not residuals else 'FAILED'}")
    report["passed"] = passed
    return report, "\n".join(lines), EXIT_OK if passed else EXIT_FAILED


HANDLERS = {
    "generate": cmd_generate,
    "verify": cmd_verify,
    "miura": cmd_miura,
    "screen": cmd_screen,
    "macmahon": cmd_macmahon,
}


def _emit(cfg: RunConfig, report: dict, text: str) -> None:
    payload = json.dumps(report, sort_keys=True, indent=2) if cfg.fmt == "json" else text
    if cfg.output_path:
        with open(cfg.output_path, "w", encoding="utf-8") as f:
            f.write(payload + "\n")
        logger.info("Report written to %s", cfg.output_path)
    else:
        sys.stdout.write(payload + "\n")


def main(argv: list[str] | None = None) -> int:
    try:
        args = _parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE
    configure_logging(resolve_log_level(args.verbose))
    try:
        cfg = build_config(args)
        configure_logging(resolve_log_level(cfg.verbosity, cfg.log_level))
        logger.debug("Running %s for %s rank %d", cfg.subcommand, cfg.kind, cfg.rank)
        report, text, code = HANDLERS[cfg.subcommand](cfg)
    except (RankError, DecodeError, ValueError) as e:
        logger.error("%s", e)
        return EXIT_USAGE
    except GeneratorError as e:
        logger.error("Generator construction failed: %s", e)
        return EXIT_FAILED
    _emit(cfg, report, text)
    if code != EXIT_OK:
        logger.warning("%s reported a failure", cfg.subcommand)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
