import os
from pathlib import Path


def out_dir() -> Path:
    d = Path(os.environ.get("BCPATHS_OUTPUT_DIR", Path(__file__).parent / "out"))
    d.mkdir(parents=True, exist_ok=True)
    return d
