"""Append-only TSV cache of per-prime point orders.

Line format: group_hash <TAB> point_hash <TAB> p <TAB> order.  Lines are
written atomically (single write of one line), so concurrent appenders keep
the file valid.  Corrupt lines are skipped with a warning; the cache is a
pure accelerator and every entry is re-derivable from scratch.
"""

import hashlib
import sys
from typing import Dict, Optional, Tuple


def spec_hash(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()[:16]


class OrderCache:
    """In-memory map backed (optionally) by an on-disk TSV file."""

    def __init__(self, path: Optional[str] = None):
        self.path = path
        self._data: Dict[Tuple[str, str, int], int] = {}
        self.corrupt_lines = 0
        if path is not None:
            self._load()

    def _load(self) -> None:
        try:
            with open(self.path, "r", encoding="utf-8") as fh:
                for lineno, line in enumerate(fh, 1):
                    line = line.strip()
                    if not line:
                        continue
                    parts = line.split("\t")
                    try:
                        gh, ph, p, order = parts
                        self._data[(gh, ph, int(p))] = int(order)
                    except ValueError:
                        self.corrupt_lines += 1
                        print(
                            f"warning: skipping corrupt cache line {lineno} in {self.path}",
                            file=sys.stderr,
                        )
        except FileNotFoundError:
            pass
        except OSError as e:
            print(f"warning: could not read cache {self.path}: {e}", file=sys.stderr)

    def get(self, gh: str, ph: str, p: int) -> Optional[int]:
        return self._data.get((gh, ph, p))

    def put(self, gh: str, ph: str, p: int, order: int) -> None:
        key = (gh, ph, p)
        if key in self._data:
            return
        self._data[key] = order
        if self.path is None:
            return
        try:
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(f"{gh}\t{ph}\t{p}\t{order}\n")
        except OSError as e:
            print(f"warning: could not append to cache {self.path}: {e}", file=sys.stderr)
