"""Process entry point for the authentication service."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

import uvicorn

from .app import ServerConfig, create_app


def parse_listen(text: str) -> tuple[str, int]:
    host, sep, port = text.rpartition(":")
    if not sep or not host:
        raise ValueError(f"expected host:port, got {text!r}")
    return host, int(port)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="objauth-server", description="Object-password authentication service")
    parser.add_argument("--listen", default="127.0.0.1:8000", metavar="ADDR:PORT")
    parser.add_argument("--store", required=True, metavar="PATH", help="account store file (created if missing)")
    parser.add_argument("--max-upload-bytes", type=int, default=64 * 1024 * 1024, metavar="N")
    parser.add_argument(
        "--artificial-delay-ms",
        type=float,
        default=0.0,
        metavar="MS",
        help="extra per-request processing delay, for load experiments",
    )
    parser.add_argument(
        "--allow-text-signup",
        action="store_true",
        help="extension: also accept JSON sign-ups with a plain text password",
    )
    parser.add_argument(
        "--static-dir",
        metavar="DIR",
        help="serve this directory at / (for the browser client)",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        host, port = parse_listen(args.listen)
        config = ServerConfig(
            store_path=Path(args.store),
            listen_host=host,
            listen_port=port,
            max_upload_bytes=args.max_upload_bytes,
            artificial_delay_ms=args.artificial_delay_ms,
            allow_text_signup=args.allow_text_signup,
            static_dir=Path(args.static_dir) if args.static_dir else None,
        )
    except ValueError as exc:
        print(f"objauth-server: {exc}", file=sys.stderr)
        return 2
    app = create_app(config)
    uvicorn.run(app, host=host, port=port, log_level="warning", access_log=False)
    return 0


if __name__ == "__main__":
    sys.exit(main())
