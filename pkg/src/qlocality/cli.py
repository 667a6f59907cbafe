"""Command-line surface: JSON in, JSON out, deterministic seeds.

Exit codes: 0 = success (including unmet hypotheses, which are reported
as flags); 1 = a failed invariant or certification (stuck sweep, violated
lemma assertion); 2 = input or format errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import bounds as bounds_mod
from . import certify, families, geometry, regions
from .codes import SubsystemCode, distance, parameters

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2


class InputError(Exception):
    """Malformed files, unknown names, bad flag values."""


def _load_json(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from None


def _load_code(path: str) -> SubsystemCode:
    try:
        return SubsystemCode.from_json(_load_json(path))
    except ValueError as exc:
        raise InputError(str(exc)) from None


def _load_embedding(path: str) -> geometry.Embedding:
    try:
        return geometry.Embedding.from_json(_load_json(path))
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"malformed embedding file {path}: {exc}") from None


def _dump(obj: dict, path: str | None = None) -> None:
    text = json.dumps(obj, sort_keys=True, indent=2)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------------------
# contour tables


@dataclass(frozen=True)
class ContourTable:
    dimension: int
    code_class: str
    grid_step: float
    entries: tuple[tuple[float, float, float, float | None], ...]

    def to_json(self) -> dict:
        return {
            "dimension": self.dimension,
            "code_class": self.code_class,
            "grid_step": self.grid_step,
            "entries": [
                {"kappa": k, "delta": d, "ell_exponent": e, "m_exponent": m}
                for k, d, e, m in self.entries
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> ContourTable:
        entries = tuple(
            (e["kappa"], e["delta"], e["ell_exponent"], e["m_exponent"])
            for e in obj["entries"]
        )
        return cls(
            dimension=int(obj["dimension"]),
            code_class=obj["code_class"],
            grid_step=float(obj["grid_step"]),
            entries=entries,
        )

    def to_csv(self) -> str:
        lines = ["kappa,delta,ell_exponent,m_exponent"]
        for k, d, e, m in self.entries:
            lines.append(f"{k:.6f},{d:.6f},{e:.6f},{'' if m is None else f'{m:.6f}'}")
        return "\n".join(lines) + "\n"

    def lookup(self, kappa: float, delta: float, tol: float = 1e-9) -> tuple[float, float | None]:
        for k, d, e, m in self.entries:
            if abs(k - kappa) <= tol and abs(d - delta) <= tol:
                return e, m
        raise KeyError(f"no grid entry at ({kappa}, {delta})")


def ell_star_exponent(kappa: float, delta: float, dim: int, code_class: str) -> float:
    """log_n ell* in exponent space, clamped at 0 in the local regime."""
    frac = (dim - 1) / dim
    branch_d = delta - frac
    if code_class == "subsystem":
        branch_k = frac * (kappa + delta / (dim - 1) - 1.0)
    elif code_class == "projector":
        branch_k = (dim - 1) / (2.0 * dim) * (kappa + 2.0 * delta / (dim - 1) - 1.0)
    else:
        raise InputError(f"unknown code class {code_class!r}")
    return max(branch_d, branch_k, 0.0)


def m_star_exponent(kappa: float, delta: float, dim: int, code_class: str) -> float | None:
    """log_n M* = max(kappa, delta), or None inside the local regime."""
    frac = (dim - 1) / dim
    if code_class == "subsystem":
        local = kappa + delta / (dim - 1) <= 1.0 and delta <= frac
    else:
        local = kappa + 2.0 * delta / (dim - 1) <= 1.0 and delta <= frac
    if local:
        return None
    return max(kappa, delta)


def emit_contours(dim: int, code_class: str, grid_step: float) -> ContourTable:
    if not 0 < grid_step <= 0.5:
        raise InputError(f"grid step {grid_step} outside (0, 0.5]")
    steps = int(round(1.0 / grid_step))
    values = [min(i * grid_step, 1.0) for i in range(steps)] + [1.0]
    entries = []
    for kappa in values:
        for delta in values:
            entries.append(
                (
                    kappa,
                    delta,
                    ell_star_exponent(kappa, delta, dim, code_class),
                    m_star_exponent(kappa, delta, dim, code_class),
                )
            )
    return ContourTable(
        dimension=dim,
        code_class=code_class,
        grid_step=grid_step,
        entries=tuple(entries),
    )


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_params(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    p = parameters(code)
    _dump({"n": p.n, "k": p.k, "g": p.g, "s": p.s})
    print(f"n={p.n} k={p.k} g={p.g} s={p.s}", file=sys.stderr)
    return EXIT_OK


def _cmd_distance(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    try:
        res = distance(code, weight_cap=args.weight_cap)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _dump({"distance": res.value, "weight_cap": res.weight_cap, "is_lower_bound": res.is_lower_bound})
    return EXIT_OK


def _cmd_interactions(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    emb = _load_embedding(args.embedding)
    if emb.n != code.n:
        raise InputError("embedding size does not match code size")
    ints = geometry.extract_interactions(code, emb)
    out = ints.to_json()
    if args.ell is not None:
        m, f = geometry.count_long(ints, args.ell)
        out["ell"] = args.ell
        out["long_count"] = m
        out["f_per_qubit"] = {str(q): v for q, v in sorted(f.items()) if v}
        out["bad_qubits"] = sorted(ints.bad_qubits(args.ell))
    _dump(out, args.out)
    return EXIT_OK


def _cmd_bounds(args: argparse.Namespace) -> int:
    fn = bounds_mod.subsystem_bounds if args.code_class == "subsystem" else bounds_mod.projector_bounds
    try:
        report = fn(args.n, args.k, args.d, args.dimension, mode=args.mode)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _dump(report.to_json(), args.out)
    return EXIT_OK


def _cmd_check_region(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    emb = _load_embedding(args.embedding) if args.embedding else None
    try:
        reg = regions.region_from_json(_load_json(args.region), emb)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out: dict = {"qubits": sorted(reg)}
    if args.correctable:
        out["correctable"] = regions.is_correctable(code, reg)
    if args.cleanable:
        out["dressed_cleanable"] = regions.is_dressed_cleanable(code, reg)
    if not (args.correctable or args.cleanable):
        raise InputError("pass --correctable and/or --cleanable")
    _dump(out, args.out)
    return EXIT_OK


def _cmd_tile(args: argparse.Namespace) -> int:
    emb = _load_embedding(args.embedding)
    points = [tuple(c) for c in emb.coordinates]
    try:
        tiling = geometry.find_tiling(
            points, points, args.w, args.ell, emb.dimension, seed=args.seed
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    report = geometry.verify_tiling(tiling, points, points, args.ell)
    out = {"tiling": tiling.to_json(), "report": report}
    _dump(out, args.out)
    return EXIT_OK if report["ok"] else EXIT_FAILED


def _cmd_subdivide(args: argparse.Namespace) -> int:
    obj = _load_json(args.spec)
    try:
        box = geometry.Box.from_json(obj["box"])
        masses = [(tuple(m["point"]), int(m["mass"])) for m in obj["masses"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed subdivide spec: {exc}") from None
    try:
        boxes = geometry.subdivide(box, masses, args.ell, args.d1)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _dump({"boxes": [b.to_json() for b in boxes]}, args.out)
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    code = _load_code(args.code) if args.code else None
    emb = _load_embedding(args.embedding)
    mode = "verified" if args.verified else "strict"
    if code is not None and emb.n != code.n:
        raise InputError("embedding size does not match code size")
    if code is None and mode == "verified":
        raise InputError("verified mode needs a code file")
    ints = (
        geometry.extract_interactions(code, emb)
        if code is not None
        else geometry.InteractionSet(n=emb.n, pairs=(), multiplicity={})
    )
    try:
        cert = certify.expansion_sweep(
            emb, ints, args.ell, args.tau, args.d, mode=mode, code=code
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(cert.to_json_lines())
    print(cert.trace())
    return EXIT_OK if cert.certified or cert.outcome == certify.OUTCOME_VIOLATED else EXIT_FAILED


def _cmd_holographic(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    emb = _load_embedding(args.embedding)
    try:
        box = geometry.Box.from_json(_load_json(args.box))
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"malformed box file: {exc}") from None
    mode = "verified" if args.verified else "strict"
    cert = certify.holographic_certify(code, emb, box, args.ell, mode=mode, d=args.d)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(cert.to_json_lines())
    print(cert.trace())
    if cert.outcome == certify.OUTCOME_STUCK:
        return EXIT_FAILED
    return EXIT_OK


def _cmd_partition(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    emb = _load_embedding(args.embedding)
    try:
        partition, cert = certify.theorem_partition_builder(
            code, emb, args.ell, args.variant, seed=args.seed, verify=not args.no_verify
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _dump({"partition": partition.to_json(), "certificate": cert.metadata}, args.out)
    return EXIT_OK if cert.outcome != certify.OUTCOME_STUCK else EXIT_FAILED


_FAMILIES = ("bacon_shor", "surface", "steane", "five_one_three", "repetition")


def _cmd_construct(args: argparse.Namespace) -> int:
    if args.family == "bacon_shor":
        ec = families.bacon_shor(args.size)
    elif args.family == "surface":
        ec = families.surface_code(args.size)
    elif args.family == "repetition":
        ec = families.small_inner_codes("repetition", r=args.size)
    elif args.family in ("steane", "five_one_three"):
        ec = families.small_inner_codes(args.family)
    else:
        raise InputError(f"unknown family {args.family!r}")
    _dump(ec.code.to_json(), args.out_code)
    _dump(ec.embedding.to_json(), args.out_embedding)
    return EXIT_OK


def _cmd_concat(args: argparse.Namespace) -> int:
    inner_code = _load_code(args.inner_code)
    inner_emb = _load_embedding(args.inner_embedding)
    outer_code = _load_code(args.outer_code)
    outer_emb = _load_embedding(args.outer_embedding)
    try:
        inner = families.EmbeddedCode(inner_code, inner_emb, "inner", {})
        outer = families.EmbeddedCode(outer_code, outer_emb, "outer", {})
        plan = families.ConcatPlan(
            inner=inner, outer=outer, ell_target=args.ell_target, ell2=args.ell2
        )
        ec = families.build_concat_embedding(plan)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _dump(ec.code.to_json(), args.out_code)
    _dump(ec.embedding.to_json(), args.out_embedding)
    _dump(ec.params, args.out_report)
    return EXIT_OK


def _cmd_saturation(args: argparse.Namespace) -> int:
    code = _load_code(args.code)
    emb = _load_embedding(args.embedding)
    try:
        ec = families.EmbeddedCode(code, emb, "file", {})
        report = families.saturation_report(
            ec, code_class=args.code_class, weight_cap=args.weight_cap
        )
    except ValueError as exc:
        raise InputError(str(exc)) from None
    _dump(report.to_json(), args.out)
    return EXIT_OK


def _cmd_contours(args: argparse.Namespace) -> int:
    table = emit_contours(args.dimension, args.code_class, args.grid_step)
    if args.csv:
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(table.to_csv())
        else:
            print(table.to_csv(), end="")
    else:
        _dump(table.to_json(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qlocality",
        description="Locality analysis of subsystem and stabilizer codes embedded in R^D",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="code parameters (n, k, g, s) from a code file")
    p.add_argument("code")
    p.set_defaults(fn=_cmd_params)

    p = sub.add_parser("distance", help="distance by region enumeration")
    p.add_argument("code")
    p.add_argument("--weight-cap", type=int, default=None)
    p.set_defaults(fn=_cmd_distance)

    p = sub.add_parser("interactions", help="interaction set from code + embedding")
    p.add_argument("code")
    p.add_argument("embedding")
    p.add_argument("--ell", type=float, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_interactions)

    p = sub.add_parser("bounds", help="evaluate M* and ell*")
    p.add_argument("--class", dest="code_class", choices=("subsystem", "projector"), required=True)
    p.add_argument("--mode", choices=("asymptotic", "explicit"), default="asymptotic")
    p.add_argument("-n", type=float, required=True)
    p.add_argument("-k", type=float, required=True)
    p.add_argument("-d", type=float, required=True)
    p.add_argument("-D", dest="dimension", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_bounds)

    p = sub.add_parser("check-region", help="correctability / cleanability of a region")
    p.add_argument("code")
    p.add_argument("region")
    p.add_argument("--embedding", default=None)
    p.add_argument("--correctable", action="store_true")
    p.add_argument("--cleanable", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_check_region)

    p = sub.add_parser("tile", help="find a grid tiling for the embedding's points")
    p.add_argument("embedding")
    p.add_argument("--w", type=float, required=True)
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_tile)

    p = sub.add_parser("subdivide", help="split a box into light or short slabs")
    p.add_argument("spec", help="JSON file with 'box' and 'masses'")
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--d1", type=float, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_subdivide)

    p = sub.add_parser("sweep", help="run the expansion sweep")
    p.add_argument("embedding")
    p.add_argument("--code", default=None)
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--tau", type=float, required=True)
    p.add_argument("--d", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strict", action="store_true")
    group.add_argument("--verified", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("holographic", help="holographic cube certification")
    p.add_argument("code")
    p.add_argument("embedding")
    p.add_argument("--box", required=True, help="JSON file with min/max corners")
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--d", type=int, default=None)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--strict", action="store_true")
    group.add_argument("--verified", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_holographic)

    p = sub.add_parser("partition", help="build a theorem's qubit partition")
    p.add_argument("code")
    p.add_argument("embedding")
    p.add_argument("--ell", type=float, required=True)
    p.add_argument("--variant", choices=("thm3_2", "thm5_1_case1", "thm5_1_case2"), required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--no-verify", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_partition)

    p = sub.add_parser("construct", help="emit a built-in family's code + embedding")
    p.add_argument("--family", choices=_FAMILIES, required=True)
    p.add_argument("--size", type=int, default=3)
    p.add_argument("--out-code", default=None)
    p.add_argument("--out-embedding", default=None)
    p.set_defaults(fn=_cmd_construct)

    p = sub.add_parser("concat", help="concatenate two embedded codes")
    p.add_argument("--inner-code", required=True)
    p.add_argument("--inner-embedding", required=True)
    p.add_argument("--outer-code", required=True)
    p.add_argument("--outer-embedding", required=True)
    p.add_argument("--ell-target", type=float, required=True)
    p.add_argument("--ell2", type=float, default=None)
    p.add_argument("--out-code", default=None)
    p.add_argument("--out-embedding", default=None)
    p.add_argument("--out-report", default=None)
    p.set_defaults(fn=_cmd_concat)

    p = sub.add_parser("saturation", help="measured locality vs the asymptotic ell*")
    p.add_argument("code")
    p.add_argument("embedding")
    p.add_argument("--class", dest="code_class", choices=("subsystem", "projector"), default="subsystem")
    p.add_argument("--weight-cap", type=int, default=None)
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_saturation)

    p = sub.add_parser("contours", help="exponent-space contour table")
    p.add_argument("--D", dest="dimension", type=int, required=True)
    p.add_argument("--class", dest="code_class", choices=("subsystem", "projector"), required=True)
    p.add_argument("--grid-step", type=float, default=0.1)
    p.add_argument("--csv", action="store_true")
    p.add_argument("--out", default=None)
    p.set_defaults(fn=_cmd_contours)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage, which matches the input-error code
        return EXIT_INPUT if exc.code not in (0, None) else EXIT_OK
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except AssertionError as exc:
        print(f"invariant failed: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
