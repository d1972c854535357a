"""Command line client.

Every subcommand is an HTTP request to the skewlab service.  Without
``--server`` (or ``SKEWLAB_SERVER``) the service runs in-process.

Exit codes: 0 success, 2 rejected input, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
import warnings

from . import tables
from .config import RunConfig, build_config, parse_text, read_config_text
from .errors import ConfigError
from .quadratic_hamiltonian import HoppingProfile

SERVER_ENV = "SKEWLAB_SERVER"

EXIT_OK, EXIT_INPUT, EXIT_NUMERICAL = 0, 2, 3


class ServiceError(Exception):
    def __init__(self, status: int, detail: str):
        super().__init__(detail)
        self.status = status
        self.detail = detail

    @property
    def exit_code(self) -> int:
        return EXIT_NUMERICAL if self.status >= 500 else EXIT_INPUT


class Client:
    """Minimal JSON client over httpx, or over the in-process ASGI app."""

    def __init__(self, base_url: str | None = None, timeout: float = 900.0):
        if base_url:
            import httpx

            self._http = httpx.Client(base_url=base_url, timeout=timeout)
        else:
            with warnings.catch_warnings():
                # starlette nags about its httpx backend on import
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

            from .service import app

            self._http = TestClient(app, raise_server_exceptions=False)

    def post(self, path: str, payload: dict) -> dict:
        resp = self._http.post(path, json=payload)
        body = resp.json()
        if resp.status_code >= 400:
            raise ServiceError(resp.status_code, _detail(body))
        return body


def _detail(body) -> str:
    detail = body.get("detail") if isinstance(body, dict) else body
    if isinstance(detail, list):
        parts = []
        for err in detail:
            loc = ".".join(str(x) for x in err.get("loc", [])[1:])
            parts.append(f"{loc}: {err.get('msg')}" if loc else str(err.get("msg")))
        return "; ".join(parts)
    return str(detail)


def _emit(text: str, out_path):
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_spectrum(client, args) -> int:
    body = client.post("/spectrum", {"N": args.N, "p": args.p, "k": args.k})
    rows = tables.spectral_pairs_rows(body["eps"], body["zero_modes"])
    _emit(tables.render(tables.SPECTRUM_HEADER, rows), args.out)
    return EXIT_OK


def cmd_hamiltonian_check(client, args) -> int:
    with open(args.profile) as fh:
        profile = HoppingProfile.from_text(fh.read())
    payload = {"t": list(profile.t), "N": args.N, "oracle": args.oracle, "allow_large": args.allow_large}
    body = client.post("/hamiltonian-check", payload)
    _emit(body["text"], args.out)
    return EXIT_OK


def _override_values(args) -> dict:
    return {key: getattr(args, key) for key in RunConfig.model_fields if getattr(args, key, None) is not None}


def cmd_scan(client, args) -> int:
    values = parse_text(read_config_text(args.config))
    values.update(_override_values(args))
    cfg = build_config(values)
    body = client.post("/scan", cfg.model_dump())
    lines = [
        f"primes: {' '.join(str(p) for p in body['primes'])}",
        f"delta: {body['delta']:.16e}",
        f"peaks found: {body['n_peaks']}",
        f"compared: {body['m']} of {body['m_requested']} requested",
        f"scale: {body['scale']:.16e}",
        f"rms: {body['rms']:.16e}",
        f"cache: {body['cache_hits']} hits, {body['cache_misses']} misses",
    ]
    lines += [f"wrote {f}" for f in body["files"]]
    sys.stdout.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_zeros(client, args) -> int:
    body = client.post("/zeros", {"m": args.m})
    rows = tables.zeros_rows(body["ordinates"], body["bracket_widths"])
    _emit(tables.render(tables.ZEROS_HEADER, rows), args.out)
    return EXIT_OK


def cmd_serve(args) -> int:
    import uvicorn

    uvicorn.run("skewlab.service:app", host=args.host, port=args.port)
    return EXIT_OK


def _add_scan_overrides(p):
    for key, field in RunConfig.model_fields.items():
        if key == "delta":
            p.add_argument("--delta", type=lambda s: s if s == "auto" else float(s))
            continue
        ann = field.annotation
        kind = int if ann is int else float if ann is float else str
        p.add_argument(f"--{key.replace('_', '-')}", dest=key, type=kind)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skewlab", description=__doc__.splitlines()[0])
    parser.add_argument("--server", default=os.environ.get(SERVER_ENV),
                        help="service URL; in-process when omitted")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="spectral pairs of the gauge matrix at one k")
    p.add_argument("--N", type=int, required=True)
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--k", type=float, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("hamiltonian-check", help="closed form vs block eigensolve (+ Fock oracle)")
    p.add_argument("profile", help="file with t(1) .. t(N-1)")
    p.add_argument("--N", type=int)
    p.add_argument("--oracle", action="store_true", help="also run the Fock-space oracle")
    p.add_argument("--allow-large", action="store_true", help="permit the N=3 Fock oracle")
    p.add_argument("--out")
    p.set_defaults(func=cmd_hamiltonian_check)

    p = sub.add_parser("scan", help="full sweep -> DOS -> product -> peaks -> fit")
    p.add_argument("config", nargs="?", help="key = value file (default: bundled config)")
    _add_scan_overrides(p)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("zeros", help="zeta zero ordinates as CSV")
    p.add_argument("--m", type=int, default=10)
    p.add_argument("--out")
    p.set_defaults(func=cmd_zeros)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=None)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "serve":
        return cmd_serve(args)
    try:
        return args.func(Client(args.server), args)
    except ServiceError as exc:
        print(f"error: {exc.detail}", file=sys.stderr)
        return exc.exit_code
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
