"""Worker-count control via the ILLCLUST_THREADS environment variable.

Results never depend on the worker count; it only caps parallel fan-out.
"""

import os


def worker_count() -> int:
    raw = os.environ.get("ILLCLUST_THREADS", "1")
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(n, 1)
