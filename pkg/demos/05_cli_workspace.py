"""Drive the command line tool on a small workspace file."""

import json
import subprocess
import sys
import tempfile

doc = {
    "space": {"kind": "linf", "dim": 2},
    "vectors": {"x": ["1", "1"], "y": ["1", "-1"], "z": ["1", "0"]},
    "operators": {"T": [["1", "0"], ["-1", "2"]]},
    "sets": {"B": ["x", "z"]},
}
with tempfile.NamedTemporaryFile("w", suffix=".json", delete=False) as fh:
    json.dump(doc, fh)
    path = fh.name

commands = [
    ["ortho", "--space", path, "-x", "x", "-y", "y"],
    ["preserves", "--space", path, "--op", "T", "-x", "y"],
    ["kset", "decide", "--space", path, "--set", "B"],
    ["kappa", "--family", "l1", "--dim", "4"],
    ["repro", "polygon-rotation"],
]
for args in commands:
    out = subprocess.run([sys.executable, "-m", "bjortho.cli", "--output", "text", *args],
                         capture_output=True, text=True)
    print("$ bjortho", " ".join(a if a != path else "ws.json" for a in args), f"(exit {out.returncode})")
    print(out.stdout.rstrip() or out.stderr.rstrip())
    print()
