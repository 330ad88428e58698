"""Command line front end: render every figure a manifest lists."""

from __future__ import annotations

import argparse
import sys

from .figures import FigureError, render
from .manifest import parse_manifest


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(
        prog="figgen",
        description="Render sweep-CSV figures listed in a manifest file.",
    )
    ap.add_argument("--manifest", required=True, help="figure list file")
    ap.add_argument("--csv-dir", default=None,
                    help="base directory for relative CSV paths")
    ap.add_argument("--out", default=None,
                    help="base directory for relative output paths")
    args = ap.parse_args(argv)

    try:
        specs = parse_manifest(args.manifest, args.csv_dir, args.out)
    except (FigureError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    failed = 0
    for spec in specs:
        try:
            out = render(spec)
            print(f"wrote {out}")
        except FigureError as exc:
            failed += 1
            print(f"error: {spec.style}: {exc}", file=sys.stderr)
    return 0 if not failed else 1


if __name__ == "__main__":
    sys.exit(main())
