import os
from concurrent.futures import ThreadPoolExecutor

THREADS_ENV = "FOURPHOTON_THREADS"


def worker_count():
    """Worker cap from ``FOURPHOTON_THREADS``, defaulting to the CPU count."""
    cpus = os.cpu_count() or 1
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return cpus
    try:
        value = int(raw)
    except ValueError:
        return cpus
    return max(1, min(value, cpus))


def ordered_map(func, items):
    """``map`` over a thread pool; results come back in input order."""
    items = list(items)
    workers = min(worker_count(), len(items)) or 1
    if workers == 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))
