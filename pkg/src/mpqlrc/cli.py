"""Command-line front end: ``mpqlrc {field,matrix,construct,verify,table,distance}``.

Exit codes: 0 on success, 2 when a mathematical check fails (a hypothesis, a
claimed parameter, dual containment, a table row), 1 on usage errors.  JSON
output is written with sorted keys so identical invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Any, Sequence, TextIO

import numpy as np

from .code import LinearCode, min_distance
from .errors import CodingError, InvalidRequest
from .fmatrix import FMatrix, matmul
from .gf import Field, make_field
from .locality import custom_recovery, whole_support_sets
from .mpc import (
    MpcSpec,
    _eval_rows,
    bsigma_order,
    euclidean_selforth_matrix,
    gram,
    hermitian_selforth_matrix,
    mpc_distance,
    vandermonde,
)
from .qlrc import (
    EUCLIDEAN,
    FAMILY_PARAMS,
    HERMITIAN,
    SCHEMA,
    TSV_HEADER,
    FamilyRequest,
    build_family,
    family_id,
    qlrc_from_code,
    reproduce_table,
    verify_artifact,
    verify_spec,
)

EXIT_OK, EXIT_USAGE, EXIT_MATH = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1 instead of 2."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- formatting ------------------------------------------------------------------------------


def element_label(F: Field, x: int) -> str:
    """Prime-subfield elements print as integers, the others as powers of the generator."""
    x = int(x)
    if x == 0:
        return "0"
    for c in range(1, F.p):
        if F.from_int(c) == x:
            return str(c)
    return f"g^{x - 1}"


def format_matrix(F: Field, M: np.ndarray) -> str:
    cells = [[element_label(F, x) for x in row] for row in np.asarray(M)]
    if not cells:
        return "(empty)"
    width = max(len(c) for row in cells for c in row)
    return "\n".join(" ".join(c.rjust(width) for c in row) for row in cells)


def _dump_json(obj: Any, out: TextIO) -> None:
    out.write(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_tsv(rows: Sequence[Sequence[Any]], out: TextIO) -> None:
    for row in rows:
        out.write("\t".join(str(x) for x in row) + "\n")


# -- commands --------------------------------------------------------------------------------


def _field(args) -> Field:
    return make_field(args.p, args.m)


def cmd_field(args, out: TextIO) -> int:
    F = _field(args)
    data = {
        "q": F.q,
        "p": F.p,
        "m": F.m,
        "modulus": list(F.modulus),
        "generator": F.generator,
        "lam": F.lam,
        "elements": [list(c) for c in F.order_list],
    }
    if args.out == "json":
        _dump_json(data, out)
    elif args.out == "tsv":
        _write_tsv([["index", "label", "coefficients"]], out)
        _write_tsv([[i, element_label(F, i), ",".join(map(str, c))] for i, c in enumerate(F.order_list)], out)
    else:
        out.write(f"GF({F.q}) = GF({F.p})[x]/({_poly(F.modulus)})\n")
        out.write(f"generator g: index {F.generator}; lam = (p-1)/2: {element_label(F, F.lam)}\n")
        for i, c in enumerate(F.order_list):
            out.write(f"  {i:>4}  {element_label(F, i):>6}  {list(c)}\n")
    return EXIT_OK


def _poly(coeffs: Sequence[int]) -> str:
    terms = []
    for i, c in reversed(list(enumerate(coeffs))):
        if c:
            mono = "1" if i == 0 else ("x" if i == 1 else f"x^{i}")
            terms.append(mono if c == 1 and i else f"{c}{'' if i == 0 else '*' + mono}")
    return " + ".join(terms) or "0"


def _matrices(args) -> list[tuple[str, FMatrix]]:
    F = _field(args)
    if args.kind == "vandermonde":
        if args.h is None or args.s is None:
            raise UsageError("--kind vandermonde needs --h and --s")
        return [("A", vandermonde(F, args.h, args.s))]
    if args.kind == "adot":
        W = FMatrix(F, _eval_rows(F, F.elements, F.q))
        A, _ = euclidean_selforth_matrix(F, F.q, "full_q")
        return [("W", W), ("A_dot", A), ("A_dot A_dot^T", gram(A))]
    A, sigma = hermitian_selforth_matrix(F)
    if args.kind == "addot":
        AAh = FMatrix(F, matmul(F, A.entries, A.conj().entries.T))
        return [("A_ddot", A), ("A_ddot A_ddot^dagger", AAh)]
    order = bsigma_order(sigma)
    s = F.q if args.s is None else args.s
    if not 1 <= s <= F.q:
        raise UsageError(f"--s must lie in [1, {F.q}]")
    B = FMatrix(F, A.entries[order[:s]])
    return [("B_sigma", B), ("B_sigma^q B_sigma^T", gram(B, HERMITIAN))]


def cmd_matrix(args, out: TextIO) -> int:
    F = _field(args)
    mats = _matrices(args)
    if args.out == "json":
        _dump_json(
            {
                "field": F.to_dict(),
                "kind": args.kind,
                "matrices": [
                    {"name": name, "entries": M.entries.tolist(), "display": [[element_label(F, x) for x in row] for row in M.entries]}
                    for name, M in mats
                ],
            },
            out,
        )
    elif args.out == "tsv":
        for name, M in mats:
            out.write(f"# {name}\n")
            _write_tsv([[element_label(F, x) for x in row] for row in M.entries], out)
    else:
        for i, (name, M) in enumerate(mats):
            if i:
                out.write("\n")
            out.write(f"{name} over GF({F.q}):\n{format_matrix(F, M.entries)}\n")
    return EXIT_OK


def _request(args) -> FamilyRequest:
    params = {key: getattr(args, key, None) for key in FAMILY_PARAMS[family_id(args.family)]}
    if params.get("k") is not None:
        try:
            params["k"] = [int(x) for x in params["k"].split(",") if x.strip()]
        except ValueError:
            raise UsageError("--k takes a comma-separated list of integers") from None
    return FamilyRequest(args.family, params)


def _report_row(rep) -> list[Any]:
    return [f"[[{rep.n}, {rep.k_Q}, {rep.d}]]_{rep.q}", f"({rep.r}, {rep.delta})", rep.kind, rep.level, rep.quantum_defect, rep.optimal]


def cmd_construct(args, out: TextIO) -> int:
    res = build_family(_request(args), args.budget, args.deep)
    rep = res.report
    if args.out == "json":
        _dump_json(res.to_dict(), out)
    elif args.out == "tsv":
        _write_tsv([["parameters", "locality", "kind", "verification", "quantum_defect", "optimal"], _report_row(rep)], out)
    else:
        out.write(f"{res.request.label}\n")
        out.write(f"  code      {rep.label}{' optimal' if rep.optimal else ''}\n")
        out.write(f"  kind      {rep.kind} over GF({rep.field_order})\n")
        bound = "unbounded" if rep.delta_bound == float("inf") else int(rep.delta_bound)
        out.write(f"  classical [{rep.n}, {rep.k}, {rep.d}], dual distance >= {bound}\n")
        out.write(f"  distance  {rep.distance.kind} ({rep.distance.method})\n")
        out.write(f"  locality  {rep.locality_origin}, verified={rep.locality_verified}\n")
        out.write(f"  defects   quantum {rep.quantum_defect}, classical {rep.classical_defect}\n")
        out.write(f"  level     {rep.level}\n")
        for note in rep.notes:
            out.write(f"  note      {note}\n")
    return EXIT_OK


def _load(path: str) -> Any:
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None


def _classify(data: Any) -> str:
    if not isinstance(data, dict):
        raise UsageError("spec file must hold a JSON object")
    if data.get("schema") == SCHEMA:
        return "artifact"
    if "constituents" in data and "A" in data:
        return "mpc"
    if "generator" in data and "field" in data:
        return "code"
    raise UsageError("unrecognized spec: expected a construct artifact, a product-code spec or a linear code")


def cmd_verify(args, out: TextIO) -> int:
    data = _load(args.spec)
    form = _classify(data)
    if form == "artifact":
        result = verify_artifact(data, args.budget, args.deep)
    elif form == "mpc":
        result = verify_spec(MpcSpec.from_dict(data), args.kind, args.budget)
    else:
        C = LinearCode.from_dict(data)
        cert = min_distance(C, args.budget)
        result = {"distance": cert.to_dict()}
        try:
            if cert.unbounded:
                raise CodingError("the zero code has no quantum counterpart")
            # a bare code carries only the trivial structure: the whole support, r = k, delta = d
            S = custom_recovery(C, whole_support_sets(C.n), max(C.k, 1), int(cert.value), args.budget)
            result["report"] = qlrc_from_code(C, args.kind, S, budget=args.budget).to_dict()
            result["passed"] = True
        except CodingError as exc:
            result["errors"] = [f"{type(exc).__name__}: {exc}"]
            result["passed"] = False
    if args.out == "json":
        _dump_json(result, out)
    else:
        out.write(f"{'PASS' if result['passed'] else 'FAIL'} ({form})\n")
        for name, ok in sorted(result.get("checks", {}).items()):
            out.write(f"  {'ok  ' if ok else 'FAIL'} {name}\n")
        for err in result.get("errors", []):
            out.write(f"  error: {err}\n")
    return EXIT_OK if result["passed"] else EXIT_MATH


def cmd_table(args, out: TextIO) -> int:
    rows = reproduce_table(args.q, args.budget, args.deep, jobs=args.jobs, max_length=args.max_length)
    if args.out == "json":
        _dump_json({"q": args.q, "rows": [r.to_dict() for r in rows]}, out)
    elif args.out == "tsv":
        _write_tsv([TSV_HEADER] + [r.tsv_fields() for r in rows], out)
    else:
        for r in rows:
            mark = "ok  " if r.reproduced else "FAIL"
            out.write(f"{mark} {r.parameters} {r.locality} defect={r.quantum_defect} {r.level or '-'} {r.built_from or r.reason}\n")
        done = sum(r.reproduced for r in rows)
        out.write(f"{done}/{len(rows)} rows reproduced\n")
    return EXIT_OK if all(r.reproduced for r in rows) else EXIT_MATH


def cmd_distance(args, out: TextIO) -> int:
    data = _load(args.spec)
    form = _classify(data)
    if form == "artifact":
        cons = data["construction"]
        if cons.get("type") != "mpc":
            raise UsageError("distance of an artifact needs a product-code construction")
        cert = mpc_distance(MpcSpec.from_dict(cons["spec"]), args.budget)
    elif form == "mpc":
        cert = mpc_distance(MpcSpec.from_dict(data), args.budget)
    else:
        cert = min_distance(LinearCode.from_dict(data), args.budget)
    if args.out == "json":
        _dump_json(cert.to_dict(), out)
    else:
        d = cert.to_dict()
        out.write(f"{d['value']}\t{d['kind']}\t{d['method']}\n")
    return EXIT_OK


# -- parser ----------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mpqlrc", description="Matrix-product quantum locally recoverable codes.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p: argparse.ArgumentParser, default_out: str) -> None:
        p.add_argument("--out", choices=("json", "tsv", "pretty"), default=default_out)
        p.add_argument("--budget", type=int, default=None, help="enumeration budget (default: QLRC_BUDGET or 2^22)")

    p = sub.add_parser("field", help="print GF(p^m) with its enumeration")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    common(p, "json")

    p = sub.add_parser("matrix", help="print a structured matrix and its Gram matrix")
    p.add_argument("--kind", choices=("vandermonde", "adot", "addot", "bsigma"), required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--h", type=int)
    p.add_argument("--s", type=int)
    common(p, "pretty")

    p = sub.add_parser("construct", help="build and verify a family instance")
    p.add_argument("--family", required=True)
    for key in ("q", "m", "h", "s", "t", "d", "i", "j", "a", "b"):
        p.add_argument(f"--{key}", type=int)
    p.add_argument("--k", help="comma-separated constituent dimensions")
    p.add_argument("--deep", action="store_true")
    common(p, "pretty")

    p = sub.add_parser("verify", help="re-verify a construct artifact, product-code spec or linear code")
    p.add_argument("--spec", required=True, help="JSON file, or - for stdin")
    p.add_argument("--kind", choices=(EUCLIDEAN, HERMITIAN), default=EUCLIDEAN)
    p.add_argument("--deep", action="store_true")
    common(p, "pretty")

    p = sub.add_parser("table", help="reproduce the table of optimal codes")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--deep", action="store_true")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--max-length", type=int, default=None)
    common(p, "tsv")

    p = sub.add_parser("distance", help="certified minimum distance of a code or product code")
    p.add_argument("--spec", required=True)
    common(p, "json")
    return parser


_COMMANDS = {
    "field": cmd_field,
    "matrix": cmd_matrix,
    "construct": cmd_construct,
    "verify": cmd_verify,
    "table": cmd_table,
    "distance": cmd_distance,
}


def run(argv: Sequence[str] | None = None, out: TextIO | None = None) -> int:
    """Parse ``argv``, run the command and return its exit code."""
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args, out)
    except (UsageError, InvalidRequest) as exc:
        sys.stderr.write(f"mpqlrc: error: {exc}\n")
        return EXIT_USAGE
    except CodingError as exc:
        sys.stderr.write(f"mpqlrc: {type(exc).__name__}: {exc}\n")
        return EXIT_MATH


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
