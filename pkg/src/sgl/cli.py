"""Thin command-line client for the pipeline service.

Every subcommand posts the config file to the in-process HTTP app and
writes the returned CSV artifact into the output directory.  Exit codes:
0 success, 2 result produced but claim not certified, 1 input error
(bad config, missing file, unknown key -- reported with its line).
"""

import argparse
import asyncio
import os
import sys
from pathlib import Path

import httpx

from .pipelines import SUBCOMMANDS
from .service.app import app


def _parser():
    p = argparse.ArgumentParser(
        prog="sgl",
        description="spectral gap / interpolation pipelines, CSV out",
    )
    p.add_argument("subcommand", choices=SUBCOMMANDS)
    p.add_argument("--config", required=True, help="flat key = value file")
    p.add_argument("--out", default=".", help="artifact directory")
    p.add_argument("--seed", type=int, default=None,
                   help="override the config's seed")
    p.add_argument("--threads", type=int, default=None,
                   help="worker count (default: SGL_THREADS or 1)")
    return p


def _post(subcommand, payload):
    async def go():
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(
            transport=transport, base_url="http://sgl"
        ) as client:
            return await client.post(f"/run/{subcommand}", json=payload)

    return asyncio.run(go())


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    threads = args.threads
    if threads is None and os.environ.get("SGL_THREADS"):
        try:
            threads = int(os.environ["SGL_THREADS"])
        except ValueError:
            print(f"error: SGL_THREADS={os.environ['SGL_THREADS']!r} "
                  "is not an integer", file=sys.stderr)
            return 1

    try:
        config_text = Path(args.config).read_text()
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 1

    payload = {"config": config_text, "seed": args.seed, "threads": threads}
    resp = _post(args.subcommand, payload)

    if resp.status_code != 200:
        detail = resp.json().get("detail", resp.text)
        if isinstance(detail, dict):
            where = f" (line {detail['line']})" if detail.get("line") else ""
            print(f"error: {detail['message']}{where}", file=sys.stderr)
        else:
            print(f"error: {detail}", file=sys.stderr)
        return 1

    body = resp.json()
    out_dir = Path(args.out)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
        path = out_dir / body["artifact_name"]
        path.write_text(body["artifact_text"])
    except OSError as exc:
        print(f"error: cannot write artifact: {exc}", file=sys.stderr)
        return 1

    print(f"{body['summary']} -> {path}")
    return body["exit_code"]


if __name__ == "__main__":
    sys.exit(main())
