"""Command line client: digest files, sign up, log in, run load benches.

Exit codes: 0 success, 1 rejected login or local failure, 2 duplicate user,
3 upload too large, 4 server unreachable, 5 unexpected HTTP status.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import httpx

from .bench import BenchConfig, ServerUnreachableError, run_load, write_report
from .client import AuthClient, AuthResult, ClientConfig
from .core import digest_file

DEFAULT_SERVER = "http://127.0.0.1:8000"

EXIT_OK = 0
EXIT_REJECTED = 1
EXIT_DUPLICATE = 2
EXIT_TOO_LARGE = 3
EXIT_NETWORK = 4
EXIT_HTTP = 5

_STATUS_EXITS = {200: EXIT_OK, 401: EXIT_REJECTED, 409: EXIT_DUPLICATE, 413: EXIT_TOO_LARGE}


def _exit_code(result: AuthResult) -> int:
    return _STATUS_EXITS.get(result.status_code, EXIT_HTTP)


def _fail(message: str) -> None:
    print(f"objauth: {message}", file=sys.stderr)


def _ms(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.3f}"


def cmd_hash(args: argparse.Namespace) -> int:
    try:
        digest = digest_file(args.path)
    except OSError as exc:
        _fail(str(exc))
        return EXIT_REJECTED
    print(digest.hex())
    return EXIT_OK


def cmd_signup(args: argparse.Namespace) -> int:
    config = ClientConfig(server_url=args.server)
    with AuthClient(config) as client:
        try:
            result = client.signup(args.user, args.object)
        except OSError as exc:
            _fail(str(exc))
            return EXIT_REJECTED
        except httpx.HTTPError as exc:
            _fail(f"connection failed: {exc}")
            return EXIT_NETWORK
    if result.accepted:
        print(f"ok auth_time_ms={_ms(result.auth_time_ms)}")
        return EXIT_OK
    _fail(f"signup failed: HTTP {result.status_code} ({result.error_code or 'unknown'})")
    return _exit_code(result)


def _resolve_hash_argument(credential: str) -> str:
    """A 64-hex argument that is not an existing file is a literal digest;
    anything else is a path whose digest is computed locally."""
    is_hex = len(credential) == 64 and all(c in "0123456789abcdefABCDEF" for c in credential)
    if is_hex and not Path(credential).exists():
        return credential.lower()
    return digest_file(Path(credential)).hex()


def cmd_login(args: argparse.Namespace) -> int:
    config = ClientConfig(server_url=args.server, throttle_bps=args.throttle_bps)
    with AuthClient(config) as client:
        try:
            if args.scheme == "hash":
                password = _resolve_hash_argument(args.credential)
                result = client.login_hash(args.user, password)
            else:
                result = client.login_object(args.user, Path(args.credential))
        except OSError as exc:
            _fail(str(exc))
            return EXIT_REJECTED
        except httpx.HTTPError as exc:
            _fail(f"connection failed: {exc}")
            return EXIT_NETWORK
    if result.status_code in (200, 401):
        verdict = "accepted" if result.accepted else "rejected"
        print(f"{verdict} wall_ms={result.wall_ms:.1f} auth_time_ms={_ms(result.auth_time_ms)}")
        return _exit_code(result)
    _fail(f"login failed: HTTP {result.status_code} ({result.error_code or 'unknown'})")
    return _exit_code(result)


def cmd_bench(args: argparse.Namespace) -> int:
    config = BenchConfig(
        scheme=args.scheme,
        duration_s=args.duration,
        size_bytes=args.size,
        rate_rps=args.rate,
        clients=args.clients,
        server_url=args.server,
        throttle_bps=args.throttle_bps,
    )
    try:
        report = run_load(config)
    except ServerUnreachableError as exc:
        _fail(str(exc))
        return EXIT_NETWORK
    write_report(report, args.out)
    print(f"wrote {args.out} ({len(report.records)} records)")
    throughput = "n/a" if report.throughput_rps is None else f"{report.throughput_rps:.3f}"
    print(f"throughput_rps={throughput}")
    print(
        f"latency_ms mean={_ms(report.latency_mean_ms)}"
        f" median={_ms(report.latency_median_ms)}"
        f" p95={_ms(report.latency_p95_ms)}"
    )
    print(f"errors={report.error_count} failed={'true' if report.failed else 'false'}")
    return EXIT_REJECTED if report.failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="objauth", description="Object-password authentication client")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("hash", help="print a file's SHA-256 digest as 64 hex chars")
    p.add_argument("path", type=Path)
    p.set_defaults(func=cmd_hash)

    p = sub.add_parser("signup", help="register a user with an object file")
    p.add_argument("--user", required=True, metavar="ID")
    p.add_argument("--object", required=True, type=Path, metavar="PATH")
    p.add_argument("--server", default=DEFAULT_SERVER, metavar="URL")
    p.set_defaults(func=cmd_signup)

    p = sub.add_parser("login", help="log in with an object file or its digest")
    p.add_argument("--user", required=True, metavar="ID")
    p.add_argument("--scheme", required=True, choices=("object", "hash"))
    p.add_argument("credential", metavar="PATH-OR-HEX", help="object file, or 64-hex digest for --scheme hash")
    p.add_argument("--server", default=DEFAULT_SERVER, metavar="URL")
    p.add_argument("--throttle-bps", type=int, default=None, metavar="N", help="cap upload bandwidth (bytes/sec)")
    p.set_defaults(func=cmd_login)

    p = sub.add_parser("bench", help="run a login load bench and write a CSV report")
    p.add_argument("--scheme", required=True, choices=("hash", "object"))
    mode = p.add_mutually_exclusive_group(required=True)
    mode.add_argument("--rate", type=float, default=None, metavar="RPS", help="open loop: requests per second")
    mode.add_argument("--clients", type=int, default=None, metavar="N", help="closed loop: concurrent clients")
    p.add_argument("--duration", required=True, type=float, metavar="SECONDS")
    p.add_argument("--size", required=True, type=int, metavar="BYTES", help="bench object size")
    p.add_argument("--throttle-bps", type=int, default=None, metavar="N", help="shared upload bandwidth cap (bytes/sec)")
    p.add_argument("--out", required=True, type=Path, metavar="REPORT.CSV")
    p.add_argument("--server", default=DEFAULT_SERVER, metavar="URL")
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        _fail(str(exc))
        return 2


if __name__ == "__main__":
    sys.exit(main())
