"""Command-line front door: a thin client of the analysis service.

By default the CLI talks to the FastAPI app in-process (no daemon needed);
``--url`` points it at a running instance instead.  Exit codes: 0 success,
1 I/O or parse failure, 2 mathematical precondition failure, 3 internal
consistency failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .errors import HypokitError, MatrixFormatError
from .matrixio import load_matrix, matrix_to_dict

EXIT_OK = 0
EXIT_PARSE = 1
EXIT_PRECONDITION = 2
EXIT_CONSISTENCY = 3

_CATEGORY_EXIT = {"parse": EXIT_PARSE, "precondition": EXIT_PRECONDITION, "consistency": EXIT_CONSISTENCY}


class ServiceClient:
    """Minimal JSON-over-HTTP client; in-process ASGI unless a URL is given."""

    def __init__(self, url: str | None = None):
        if url:
            import httpx

            self._client = httpx.Client(base_url=url, timeout=300.0)
        else:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore", DeprecationWarning)
                from fastapi.testclient import TestClient

            from .service.app import app

            self._client = TestClient(app)

    def post(self, path: str, payload: dict):
        response = self._client.post(path, json=payload)
        content_type = response.headers.get("content-type", "")
        body = response.json() if "application/json" in content_type else response.text
        return response.status_code, body


def _fail(body, code: int) -> int:
    if isinstance(body, dict):
        print(json.dumps(body, indent=2))
    else:
        print(body, file=sys.stderr)
    return code


def _dispatch(client: ServiceClient, path: str, payload: dict, out: str | None) -> int:
    try:
        status, body = client.post(path, payload)
    except Exception as exc:  # connection errors against --url
        print(f"service request failed: {exc}", file=sys.stderr)
        return EXIT_PARSE
    if status != 200:
        category = body.get("error", {}).get("category", "") if isinstance(body, dict) else ""
        return _fail(body, _CATEGORY_EXIT.get(category, EXIT_PARSE if status == 422 else EXIT_PRECONDITION))
    text = body if isinstance(body, str) else json.dumps(body, indent=2)
    if out:
        Path(out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
    else:
        print(text)
    return EXIT_OK


def _matrix_payload(path: str) -> dict:
    return matrix_to_dict(load_matrix(path))


def _tolerance_overrides(args) -> dict | None:
    overrides = {}
    if getattr(args, "tol_rank", None) is not None:
        overrides["rank_rel_tol"] = args.tol_rank
    if getattr(args, "tol_psd", None) is not None:
        overrides["psd_rel_tol"] = args.tol_psd
    return overrides or None


def parse_tau_grid(spec: str) -> list[float]:
    """Grid spec: 'a:b:geometric' (dyadic halving from a down to b) or a comma list."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3 or parts[2] != "geometric":
            raise MatrixFormatError(f"grid spec must be 'a:b:geometric' or a comma list, got {spec!r}")
        try:
            start, stop = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise MatrixFormatError(f"bad grid endpoints in {spec!r}: {exc}")
        if not (0 < stop <= start):
            raise MatrixFormatError(f"grid needs 0 < b <= a, got {spec!r}")
        grid = []
        t = start
        while t >= stop * (1 - 1e-12):
            grid.append(t)
            t /= 2.0
        return grid
    try:
        return [float(x) for x in spec.split(",") if x.strip()]
    except ValueError as exc:
        raise MatrixFormatError(f"bad grid list {spec!r}: {exc}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hypokit",
        description="Stability analysis of x' = -Bx and x_{k+1} = B x_k: "
        "indices, decay constants, Cayley discretization, Lyapunov transforms.",
    )
    parser.add_argument("--url", default=None, help="remote service URL (default: in-process)")
    sub = parser.add_subparsers(dest="verb", required=True)

    def common(p, matrix=True):
        if matrix:
            p.add_argument("matrix", help="path to a JSON matrix file")
        p.add_argument("--out", default=None, help="write the report here instead of stdout")
        p.add_argument("--tol-rank", type=float, default=None, help="override rank_rel_tol")
        p.add_argument("--tol-psd", type=float, default=None, help="override psd_rel_tol")

    p = sub.add_parser("analyze", help="certify and compute index, kappa, decay constant")
    common(p)
    p.add_argument("--discrete", action="store_true", help="treat the matrix as an iteration map")
    p.add_argument("--m-max", type=int, default=None, help="index search cap (default dim-1)")

    p = sub.add_parser("decay", help="exact decay expansion plus the fitted cross-check")
    common(p)
    p.add_argument("--tau-grid", default=None, help="fit grid: 'a:b:geometric' or comma list")

    p = sub.add_parser("cayley", help="index preservation across the midpoint discretization")
    common(p)
    p.add_argument("--tau", type=float, action="append", required=True, help="step size (repeatable)")
    p.add_argument("--format", choices=("json", "csv"), default="json")

    p = sub.add_parser("sweep", help="CSV sweep of Phi(t) plus grid-function markers")
    common(p)
    p.add_argument("--tau", type=float, required=True, help="marker step size")
    p.add_argument("--k-max", type=int, required=True, help="largest marker index")
    p.add_argument("--t-points", type=int, default=200, help="curve sample count")

    p = sub.add_parser("hilbert", help="closed-form minima and the Hilbert inverse entry")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--out", default=None)

    p = sub.add_parser("transform", help="maximally coercive/contractive change of basis")
    common(p)
    p.add_argument("--epsilon", type=float, default=0.0)
    p.add_argument("--discrete", action="store_true")

    p = sub.add_parser("verify", help="run the seeded cross-module property corpus")
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--only", choices=("cayley", "plateau", "peano", "hilbert"), default=None)
    p.add_argument("--out", default=None)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    client = ServiceClient(args.url)

    try:
        if args.verb == "analyze":
            payload = {
                "matrix": _matrix_payload(args.matrix),
                "discrete": args.discrete,
                "m_max": args.m_max,
                "tolerances": _tolerance_overrides(args),
            }
            return _dispatch(client, "/analyze", payload, args.out)

        if args.verb == "decay":
            payload = {
                "matrix": _matrix_payload(args.matrix),
                "t_grid": parse_tau_grid(args.tau_grid) if args.tau_grid else None,
                "tolerances": _tolerance_overrides(args),
            }
            return _dispatch(client, "/decay", payload, args.out)

        if args.verb == "cayley":
            payload = {
                "matrix": _matrix_payload(args.matrix),
                "taus": args.tau,
                "matrix_id": Path(args.matrix).stem,
                "tolerances": _tolerance_overrides(args),
            }
            status, body = client.post("/cayley", payload)
            if status != 200:
                category = body.get("error", {}).get("category", "") if isinstance(body, dict) else ""
                return _fail(body, _CATEGORY_EXIT.get(category, EXIT_PRECONDITION))
            text = body["csv"] if args.format == "csv" else json.dumps(
                {k: v for k, v in body.items() if k != "csv"}, indent=2
            )
            if args.out:
                Path(args.out).write_text(text if text.endswith("\n") else text + "\n", encoding="utf-8")
            else:
                print(text)
            return EXIT_OK

        if args.verb == "sweep":
            payload = {
                "matrix": _matrix_payload(args.matrix),
                "tau": args.tau,
                "k_max": args.k_max,
                "t_points": args.t_points,
                "tolerances": _tolerance_overrides(args),
            }
            return _dispatch(client, "/sweep", payload, args.out)

        if args.verb == "hilbert":
            return _dispatch(client, "/hilbert", {"m": args.m}, args.out)

        if args.verb == "transform":
            payload = {
                "matrix": _matrix_payload(args.matrix),
                "epsilon": args.epsilon,
                "discrete": args.discrete,
                "tolerances": _tolerance_overrides(args),
            }
            return _dispatch(client, "/transform", payload, args.out)

        if args.verb == "verify":
            payload = {"seed": args.seed, "count": args.count, "only": args.only}
            status, body = client.post("/verify", payload)
            if status != 200:
                category = body.get("error", {}).get("category", "") if isinstance(body, dict) else ""
                return _fail(body, _CATEGORY_EXIT.get(category, EXIT_CONSISTENCY))
            for prop in body["properties"]:
                verdict = "PASS" if prop["passed"] else "FAIL"
                print(f"{prop['name']}: {prop['checked']} checked, {prop['failures']} failures: {verdict}")
            if args.out:
                Path(args.out).write_text(json.dumps(body, indent=2) + "\n", encoding="utf-8")
            if not body["passed"]:
                return EXIT_CONSISTENCY
            return EXIT_OK

    except MatrixFormatError as exc:
        print(json.dumps({"schema": "hypokit/1", "error": {"code": exc.code, "message": str(exc), "category": "parse"}}, indent=2))
        return EXIT_PARSE
    except HypokitError as exc:
        print(json.dumps({"schema": "hypokit/1", "error": {"code": exc.code, "message": str(exc), "category": exc.category}}, indent=2))
        return _CATEGORY_EXIT.get(exc.category, EXIT_PRECONDITION)
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_PARSE

    return EXIT_PARSE  # unreachable verb


if __name__ == "__main__":
    raise SystemExit(main())
