"""Small shared helpers: atomic file output, CSV text, thread-capped maps."""

from __future__ import annotations

import os
import tempfile
from concurrent.futures import ThreadPoolExecutor


def fmt_value(v) -> str:
    """CSV cell: floats at 17 significant digits, everything else str()."""
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def csv_text(meta: dict, header, rows) -> str:
    """CSV body with `# key=value` meta lines before the header row."""
    lines = [f"# {k}={fmt_value(v)}" for k, v in meta.items()]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(fmt_value(c) for c in row))
    return "\n".join(lines) + "\n"


def atomic_write_text(path, text: str) -> None:
    """Write `text` to `path` via a same-directory temp file + rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-", suffix="~")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def thread_count() -> int:
    """Worker cap: SEGSYM_THREADS if set, else hardware parallelism."""
    raw = os.environ.get("SEGSYM_THREADS", "")
    if raw.strip():
        try:
            n = int(raw)
        except ValueError:
            n = 1
        return max(1, n)
    return max(1, os.cpu_count() or 1)


def ordered_map(fn, items):
    """Map `fn` over `items`, preserving input order in the result list.

    Uses a thread pool sized by thread_count(); falls back to a plain
    loop when only one worker is allowed, so results are identical (and
    byte-stable) either way.
    """
    items = list(items)
    n = thread_count()
    if n == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=min(n, len(items))) as pool:
        return list(pool.map(fn, items))
