#!/usr/bin/env python3
"""Download the ELEC2 (electricity) benchmark CSV into data/elec2.csv.

Needs outbound network access. The file is the normalized 45312-row,
9-column version commonly distributed with streaming-ML toolkits. If
your environment blocks downloads, obtain the file elsewhere and point
the ELEC2_CSV environment variable (or configs/elec2.json) at it.
"""

from __future__ import annotations

import argparse
import sys
import urllib.request
from pathlib import Path

URLS = [
    "https://raw.githubusercontent.com/scikit-multiflow/streaming-datasets/master/elec.csv",
    "https://www.openml.org/data/get_csv/2419/electricity-normalized.csv",
]

EXPECTED_HEADER = "date,day,period,nswprice,nswdemand,vicprice,vicdemand,transfer,class"
EXPECTED_ROWS = 45312


def normalize(text: str) -> str:
    # OpenML quotes nominal values; strip the quotes so levels read UP/DOWN
    return text.replace("'", "")


def verify(text: str) -> None:
    lines = text.strip().splitlines()
    header = lines[0].strip()
    if header != EXPECTED_HEADER:
        raise SystemExit(f"unexpected header: {header!r}")
    n = len(lines) - 1
    if n != EXPECTED_ROWS:
        raise SystemExit(f"expected {EXPECTED_ROWS} data rows, found {n}")
    width = len(lines[1].split(","))
    if width != 9:
        raise SystemExit(f"expected 9 columns, found {width}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default="data/elec2.csv",
                        help="where to write the CSV (default: data/elec2.csv)")
    args = parser.parse_args()

    last_error = None
    for url in URLS:
        print(f"trying {url} ...")
        try:
            with urllib.request.urlopen(url, timeout=60) as resp:
                text = normalize(resp.read().decode("utf-8"))
            verify(text)
        except Exception as exc:  # noqa: BLE001 - report and try the next mirror
            last_error = exc
            print(f"  failed: {exc}")
            continue
        out = Path(args.out)
        out.parent.mkdir(parents=True, exist_ok=True)
        out.write_text(text, encoding="utf-8")
        print(f"wrote {out} ({EXPECTED_ROWS} rows)")
        return 0
    print(f"could not fetch the dataset from any mirror (last error: {last_error})",
          file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
