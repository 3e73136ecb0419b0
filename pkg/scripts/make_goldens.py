"""Regenerate the CLI golden files listed in tests/golden/manifest.json.

Run from the repository root after an intentional change of notation:

    python3 scripts/make_goldens.py
"""

import contextlib
import io
import json
from pathlib import Path

from sbo.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "tests" / "golden"


def render(argv):
    buf = io.StringIO()
    with contextlib.redirect_stdout(buf):
        code = main(argv)
    return code, buf.getvalue()


if __name__ == "__main__":
    manifest = json.loads((GOLDEN / "manifest.json").read_text())
    for name, argv in manifest.items():
        code, out = render(argv)
        (GOLDEN / name).write_text(out)
        print(f"{name}: exit {code}, {len(out)} bytes")
