"""Deterministic fan-out of independent work chunks.

Results are always reduced in submission (index) order and every chunk
derives its own random stream, so the outcome is identical for any worker
count or scheduling.
"""

from concurrent.futures import ProcessPoolExecutor

__all__ = ["run_indexed"]


def run_indexed(fn, args_list, workers=1):
    """Apply ``fn(*args)`` to each tuple in ``args_list``; return results in
    list order.  ``fn`` must be a module-level function when ``workers > 1``
    (process pool)."""
    if workers is None or workers <= 1 or len(args_list) <= 1:
        return [fn(*args) for args in args_list]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args) for args in args_list]
        return [f.result() for f in futures]
