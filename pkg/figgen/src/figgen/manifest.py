"""Figure-list manifest: one figure per line, style then output then inputs."""

from __future__ import annotations

from pathlib import Path

from .figures import STYLES, FigureError, FigureSpec


def parse_manifest(path, csv_dir=None, out_dir=None) -> list[FigureSpec]:
    """Read `style output.png input.csv [input2.csv ...]` lines.

    Relative CSV paths resolve against csv_dir (default: the manifest's
    directory); outputs resolve against out_dir (default: same).
    """
    path = Path(path)
    csv_base = Path(csv_dir) if csv_dir is not None else path.parent
    out_base = Path(out_dir) if out_dir is not None else path.parent
    specs = []
    for lineno, line in enumerate(path.read_text().splitlines(), start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        parts = text.split()
        if len(parts) < 3:
            raise FigureError(
                f"{path}:{lineno}: expected 'style output.png input.csv ...'"
            )
        style, out_name, *csv_names = parts
        if style not in STYLES:
            raise FigureError(
                f"{path}:{lineno}: unknown figure style {style!r} "
                f"(known: {', '.join(sorted(STYLES))})"
            )
        specs.append(
            FigureSpec(
                style=style,
                out_path=out_base / out_name,
                csv_paths=tuple(csv_base / name for name in csv_names),
            )
        )
    if not specs:
        raise FigureError(f"{path}: manifest lists no figures")
    return specs
