"""Command-line front end.

Exit codes: 0 success, 2 parse/schema error, 3 domain error, 4 numeric failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from typing import Optional

import numpy as np
from pydantic import ValidationError

from . import barycenter as bary
from . import multivariate as mv
from . import univariate as uni
from .documents import DistributionDocument, InputDocument, PointRow, ResultDocument
from .errors import DomainError, NumericFailure

EXIT_OK, EXIT_SCHEMA, EXIT_DOMAIN, EXIT_NUMERIC = 0, 2, 3, 4


class SchemaError(Exception):
    pass


# -- input -------------------------------------------------------------------

def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise SchemaError(f"cannot parse {text!r} as comma-separated numbers") from None


def inline_document(text: str, model: str, parametrization: Optional[str] = None) -> DistributionDocument:
    """Build a document from the comma-separated inline syntax.

    univariate: two values in the chosen parametrization; round:
    ``mu_1,...,mu_p,sigma``; diagonal: ``mu_1,sigma_1,...,mu_p,sigma_p``;
    bivariate-angular: ``sigma1,sigma2,mu1,mu2,u``.
    """
    v = _floats(text)
    if model == "univariate":
        param = parametrization or "classic"
        if len(v) != 2:
            raise SchemaError("univariate point needs exactly 2 values")
        names = {"classic": ("mu", "sigma"), "source": ("lambda1", "lambda2"),
                 "natural": ("theta1", "theta2"), "expectation": ("eta1", "eta2")}[param]
        data = {"type": model, names[0]: v[0], names[1]: v[1]}
        if parametrization:
            data["parametrization"] = parametrization
    elif model == "round":
        if len(v) < 2:
            raise SchemaError("round point needs mu_1..mu_p,sigma")
        data = {"type": model, "mu": v[:-1], "sigma": v[-1]}
    elif model == "diagonal":
        if len(v) < 2 or len(v) % 2:
            raise SchemaError("diagonal point needs pairs mu_i,sigma_i")
        data = {"type": model, "mu": v[0::2], "sigma": v[1::2]}
    elif model == "bivariate-angular":
        if len(v) != 5:
            raise SchemaError("bivariate-angular point needs sigma1,sigma2,mu1,mu2,u")
        data = dict(zip(("sigma1", "sigma2", "mu1", "mu2", "u"), v), type=model)
    else:
        raise SchemaError(f"{model} distributions must be given with --in")
    return _validate(DistributionDocument, data)


def _validate(cls, data):
    try:
        return cls.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        where = ".".join(str(p) for p in first.get("loc", ()))
        raise SchemaError(f"{where + ': ' if where else ''}{first['msg']}") from None


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc.strerror}") from None


def load_input(path: str) -> InputDocument:
    text = _read_text(path)
    stripped = text.lstrip()
    if stripped.startswith("{") or stripped.startswith("["):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc.msg}") from None
        if isinstance(data, list):
            data = {"points": data}
        return _validate(InputDocument, data)
    # CSV of univariate classic points with a mu,sigma header
    rows = list(csv.DictReader(io.StringIO(text)))
    if not rows or set(rows[0]) != {"mu", "sigma"}:
        raise SchemaError("CSV input needs exactly the columns mu,sigma")
    points = []
    for row in rows:
        try:
            points.append({"type": "univariate", "mu": float(row["mu"]), "sigma": float(row["sigma"])})
        except (TypeError, ValueError):
            raise SchemaError(f"bad CSV row: {row}") from None
    return _validate(InputDocument, {"points": points})


def _pair(args) -> tuple[DistributionDocument, DistributionDocument]:
    if args.input:
        doc = load_input(args.input)
        if doc.p is None or doc.q is None:
            raise SchemaError("input document needs both p and q")
        p, q = doc.p, doc.q
    else:
        if args.p1 is None or args.p2 is None:
            raise SchemaError("give --p1 and --p2, or --in")
        p = inline_document(args.p1, args.model, args.param)
        q = inline_document(args.p2, args.model, args.param)
    if p.type != q.type:
        raise SchemaError("both distributions must have the same type")
    return p, q


def _single(args) -> DistributionDocument:
    if args.input:
        doc = load_input(args.input)
        if doc.p is None:
            raise SchemaError("input document needs p")
        return doc.p
    if args.p1 is None:
        raise SchemaError("give --p1, or --in")
    return inline_document(args.p1, args.model, args.param)


def _require(doc: DistributionDocument, *types: str):
    if doc.type not in types:
        raise SchemaError(f"this command accepts {', '.join(types)} distributions, got {doc.type}")


# -- output ------------------------------------------------------------------

class Emitter:
    def __init__(self, digits: int):
        self.digits = digits

    def num(self, x: float) -> float:
        x = float(x)
        if not math.isfinite(x):
            raise NumericFailure("result is not finite")
        return float(f"{x:.{self.digits}g}")

    def text(self, x: float) -> str:
        return f"{float(x):.{self.digits}g}"

    def row(self, t, g: uni.GaussianUni) -> PointRow:
        return PointRow(t=self.num(t), mu=self.num(g.mu), sigma=self.num(g.sigma))


def render(doc: ResultDocument, fmt: str, em: Emitter) -> str:
    if fmt == "json":
        return doc.model_dump_json(indent=2, exclude_none=True) + "\n"
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    if doc.points is not None:
        writer.writerow(["t", "mu", "sigma"])
        for r in doc.points:
            writer.writerow([em.text(r.t), em.text(r.mu), em.text(r.sigma)])
    else:
        writer.writerow(["name", "value"])
        for name, value in doc.results.items():
            writer.writerow([name, em.text(value)])
        for name, matrix in (doc.matrices or {}).items():
            for i, row in enumerate(matrix):
                for j, value in enumerate(row):
                    writer.writerow([f"{name}[{i}][{j}]", em.text(value)])
    return out.getvalue()


# -- commands ----------------------------------------------------------------

def cmd_dist(args, em):
    p, q = _pair(args)
    P, Q = p.to_model(), q.to_model()
    diagnostics = {}
    if p.type == "univariate":
        d = uni.fisher_distance(P, Q)
    elif p.type == "round":
        d = mv.fisher_distance_round(P, Q)
    elif p.type == "diagonal":
        d = mv.fisher_distance_diagonal(P, Q)
    elif p.type == "fixed-mean":
        d = mv.fisher_distance_fixed_mean(P, Q)
    else:
        d = mv.fisher_distance_diag_u0(P, Q)
        diagnostics["note"] = "closed form on the u=0 fixed-mean slice; use bivar-estimate elsewhere"
    return ResultDocument(
        operation="dist", inputs={"p": p, "q": q}, results={"distance": em.num(d)},
        diagnostics=diagnostics,
    )


def cmd_geodesic(args, em):
    p, q = _pair(args)
    _require(p, "univariate")
    P, Q = p.to_model(), q.to_model()
    g = uni.fisher_geodesic(P, Q)
    lengths, pts = uni.fisher_geodesic_samples(P, Q, args.n)
    diagnostics = {"kind": g.kind}
    if g.kind == "vertical":
        diagnostics["mu0"] = em.num(g.mu0)
    else:
        diagnostics["mu_center"] = em.num(g.mu_center)
        diagnostics["R"] = em.num(g.R)
    return ResultDocument(
        operation="geodesic", inputs={"p": p, "q": q, "n": args.n},
        results={"distance": em.num(uni.fisher_distance(P, Q))},
        points=[em.row(t, x) for t, x in zip(lengths, pts)], diagnostics=diagnostics,
    )


def cmd_circle(args, em):
    c = _single(args)
    _require(c, "univariate")
    C = c.to_model()
    pts = uni.fisher_circle(C, args.r, args.n)
    residual = max(abs(uni.fisher_distance(C, x) - args.r) for x in pts)
    angles = 2.0 * np.pi * np.arange(args.n) / args.n
    return ResultDocument(
        operation="circle", inputs={"center": c, "r": args.r, "n": args.n},
        results={"radius": em.num(args.r)},
        points=[em.row(t, x) for t, x in zip(angles, pts)],
        diagnostics={"max_radius_residual": em.num(residual)},
    )


def cmd_midpoint(args, em):
    p, q = _pair(args)
    _require(p, "univariate")
    P, Q = p.to_model(), q.to_model()
    M = uni.fisher_midpoint(P, Q)
    return ResultDocument(
        operation="midpoint", inputs={"p": p, "q": q},
        results={
            "mu": em.num(M.mu), "sigma": em.num(M.sigma),
            "distance_to_p": em.num(uni.fisher_distance(P, M)),
            "distance_to_q": em.num(uni.fisher_distance(Q, M)),
        },
        points=[em.row(0.5, M)],
    )


def _point_set(args):
    weights = None
    if args.input:
        doc = load_input(args.input)
        if not doc.points:
            raise SchemaError("input document needs points")
        docs, weights = doc.points, doc.weights
    else:
        if not args.point:
            raise SchemaError("give --point (repeatable) or --in")
        docs = [inline_document(t, "univariate", args.param) for t in args.point]
    if getattr(args, "weights", None):
        weights = _floats(args.weights)
    for d in docs:
        _require(d, "univariate")
    return docs, weights


def cmd_average(args, em):
    docs, weights = _point_set(args)
    ws = bary.WeightedSet([d.to_model() for d in docs], weights)
    res = bary.karcher_mean(ws, tol=args.tol, max_iter=args.max_iter)
    doc = ResultDocument(
        operation="average",
        inputs={"points": docs, "weights": [float(w) for w in ws.weights]},
        results={"mu": em.num(res.mean.mu), "sigma": em.num(res.mean.sigma)},
        points=[em.row(0.0, res.mean)],
        diagnostics={"iterations": res.iterations, "residual": em.num(res.residual),
                     "converged": res.converged},
    )
    return doc, (EXIT_OK if res.converged else EXIT_NUMERIC)


def cmd_cluster(args, em):
    docs, _ = _point_set(args)
    res = bary.cluster([d.to_model() for d in docs], args.k, seed=args.seed, restarts=args.restarts)
    return ResultDocument(
        operation="cluster",
        inputs={"points": docs, "k": args.k, "seed": args.seed, "restarts": args.restarts},
        results={"within_dispersion": em.num(res.within_dispersion)},
        points=[em.row(i, c) for i, c in enumerate(res.centroids)],
        assignments=res.assignments,
        diagnostics={"iterations": res.iterations},
    )


def cmd_kl(args, em):
    p, q = _pair(args)
    _require(p, "univariate")
    P, Q = p.to_model(), q.to_model()
    return ResultDocument(
        operation="kl", inputs={"p": p, "q": q},
        results={
            "kl_pq": em.num(uni.kl_divergence(P, Q)),
            "kl_qp": em.num(uni.kl_divergence(Q, P)),
            "kl_symmetrized": em.num(uni.kl_symmetrized(P, Q)),
            "fisher_distance": em.num(uni.fisher_distance(P, Q)),
        },
    )


def _matrix(em, M):
    return [[em.num(v) for v in row] for row in np.asarray(M)]


def cmd_fisher_matrix(args, em):
    p = _single(args)
    _require(p, "univariate", "bivariate-angular")
    P = p.to_model()
    if p.type == "univariate":
        est = uni.estimate_fisher_matrix(P.mu, P.sigma)
        closed = uni.fisher_matrix(P.mu, P.sigma)
    else:
        est = mv.estimate_fisher_matrix_bivariate(P)
        closed = mv.bivariate_metric(P)
    return ResultDocument(
        operation="fisher-matrix", inputs={"p": p},
        results={"max_abs_residual": em.num(np.max(np.abs(est - closed)))},
        matrices={"quadrature": _matrix(em, est), "closed_form": _matrix(em, closed)},
    )


def cmd_curvature(args, em):
    p = _single(args)
    _require(p, "univariate")
    P = p.to_model()
    return ResultDocument(
        operation="curvature", inputs={"p": p, "h": args.h},
        results={"curvature": em.num(uni.fisher_curvature(P.mu, P.sigma, args.h))},
    )


def cmd_bivar_estimate(args, em):
    p, q = _pair(args)
    _require(p, "bivariate-angular")
    P, Q = p.to_model(), q.to_model()
    res = mv.bivariate_geodesic_path(P, Q, args.segments, args.iterations)
    results = {"distance": em.num(res.length)}
    try:
        results["closed_form"] = em.num(mv.fisher_distance_diag_u0(P, Q))
    except DomainError:
        pass
    return ResultDocument(
        operation="bivar-estimate",
        inputs={"p": p, "q": q, "segments": args.segments, "iterations": args.iterations},
        results=results,
        diagnostics={"iterations": res.iterations, "converged": res.converged,
                     "initial_length": em.num(res.history[0])},
    )


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--digits", type=int, default=12, help="significant digits (default 12)")

    def points(sp, two=True, default_model="univariate"):
        sp.add_argument("--model", default=default_model,
                        choices=("univariate", "round", "diagonal", "fixed-mean", "bivariate-angular"))
        sp.add_argument("--param", choices=uni.PARAMETRIZATIONS, default=None,
                        help="univariate parametrization of inline points")
        sp.add_argument("--p1", help="first point, comma-separated")
        if two:
            sp.add_argument("--p2", help="second point, comma-separated")
        sp.add_argument("--in", dest="input", help="JSON input document ('-' for stdin)")

    parser = argparse.ArgumentParser(
        prog="fishergeo", description="Fisher-Rao geometry of normal distributions."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("dist", parents=[common], help="Fisher distance")
    points(sp)
    sp.set_defaults(func=cmd_dist)

    sp = sub.add_parser("geodesic", parents=[common], help="sample the geodesic segment")
    points(sp)
    sp.add_argument("--n", type=int, default=33)
    sp.set_defaults(func=cmd_geodesic)

    sp = sub.add_parser("circle", parents=[common], help="sample a Fisher circle")
    points(sp, two=False)
    sp.add_argument("--r", type=float, required=True)
    sp.add_argument("--n", type=int, default=64)
    sp.set_defaults(func=cmd_circle)

    sp = sub.add_parser("midpoint", parents=[common], help="Fisher average of two points")
    points(sp)
    sp.set_defaults(func=cmd_midpoint)

    for name, func, help_text in (("average", cmd_average, "weighted Karcher mean"),
                                  ("cluster", cmd_cluster, "Lloyd clustering")):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        sp.add_argument("--point", action="append", help="univariate point mu,sigma (repeatable)")
        sp.add_argument("--param", choices=uni.PARAMETRIZATIONS, default=None)
        sp.add_argument("--in", dest="input", help="JSON (points/weights) or CSV (mu,sigma) file")
        sp.set_defaults(func=func)
        if name == "average":
            sp.add_argument("--weights", help="comma-separated positive weights")
            sp.add_argument("--tol", type=float, default=bary.DEFAULT_TOL)
            sp.add_argument("--max-iter", type=int, default=bary.DEFAULT_MAX_ITER)
        else:
            sp.add_argument("--k", type=int, required=True)
            sp.add_argument("--seed", type=int, default=0)
            sp.add_argument("--restarts", type=int, default=bary.DEFAULT_RESTARTS)

    sp = sub.add_parser("kl", parents=[common], help="Kullback-Leibler divergences")
    points(sp)
    sp.set_defaults(func=cmd_kl)

    sp = sub.add_parser("fisher-matrix", parents=[common], help="quadrature vs closed-form Fisher matrix")
    points(sp, two=False)
    sp.set_defaults(func=cmd_fisher_matrix)

    sp = sub.add_parser("curvature", parents=[common], help="finite-difference curvature of the Fisher metric")
    points(sp, two=False)
    sp.add_argument("--h", type=float, default=1e-4)
    sp.set_defaults(func=cmd_curvature)

    sp = sub.add_parser("bivar-estimate", parents=[common], help="numeric bivariate Fisher distance")
    points(sp, default_model="bivariate-angular")
    sp.add_argument("--segments", type=int, default=64)
    sp.add_argument("--iterations", type=int, default=500)
    sp.set_defaults(func=cmd_bivar_estimate)
    return parser


_VALUE_FLAGS = ("--p1", "--p2", "--point", "--weights")


def _attach_values(argv: list[str]) -> list[str]:
    """Rewrite ``--p1 -1,2`` as ``--p1=-1,2`` so argparse keeps negative values."""
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in _VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
        else:
            out.append(tok)
            i += 1
    return out


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    argv = _attach_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if not 1 <= args.digits <= 17:
        print("error: --digits must be between 1 and 17", file=stderr)
        return EXIT_SCHEMA
    em = Emitter(args.digits)
    try:
        out = args.func(args, em)
        doc, code = out if isinstance(out, tuple) else (out, EXIT_OK)
        text = render(doc, args.format, em)
    except SchemaError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_SCHEMA
    except DomainError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_DOMAIN
    except NumericFailure as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_NUMERIC
    stdout.write(text)
    if code == EXIT_NUMERIC:
        print("error: iteration did not converge; best iterate reported", file=stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
