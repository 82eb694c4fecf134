"""Fork-join execution with a logical work/span meter.

Units: one adjacency-scan step or edge relaxation, one heap pop, or one
64-bit word operation in the boolean matrix kernel.  Sequential composition
adds both counters; a parallel join adds the children's work and the
largest child span plus a fixed barrier charge.  Counts are logical, so they
do not depend on how many threads actually ran the tasks.
"""
from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor

_local = threading.local()
_pool = None
_workers = 1


def barrier_units(n):
    """Per-join charge for an n-way fork: ceil(log2 n), at least 1."""
    return max(1, math.ceil(math.log2(max(n, 2))))


class CostMeter:
    __slots__ = ("work", "span", "barrier", "phases")

    def __init__(self, barrier=1):
        self.work = 0
        self.span = 0
        self.barrier = barrier
        self.phases = {}

    def charge(self, work, span=None, phase=None):
        """Sequential step; ``span`` defaults to ``work`` (no internal parallelism)."""
        self.work += work
        self.span += work if span is None else span
        if phase is not None:
            self.phases[phase] = self.phases.get(phase, 0) + work

    def child(self):
        return CostMeter(self.barrier)

    def join(self, children, leaves=()):
        """Parallel join of child meters.

        ``leaves`` holds (work, span, phase) batches, each entry standing for
        a child that made one charge; they join exactly like such children.
        """
        spans = [c.span for c in children]
        work = sum(c.work for c in children)
        for lw, ls, phase in leaves:
            if len(lw):
                total = int(sum(lw))
                work += total
                spans.append(int(max(ls)))
                if phase is not None:
                    self.phases[phase] = self.phases.get(phase, 0) + total
        if not spans:
            return
        self.work += work
        self.span += max(spans) + self.barrier
        for c in children:
            for k, v in c.phases.items():
                self.phases[k] = self.phases.get(k, 0) + v

    def snapshot(self):
        return self.work, self.span

    def __repr__(self):
        return f"CostMeter(work={self.work}, span={self.span})"


def set_workers(k):
    """Physical thread count for top-level forks (does not affect metering)."""
    global _pool, _workers
    k = max(1, int(k))
    if _pool is not None:
        _pool.shutdown(wait=True)
        _pool = None
    _workers = k
    if k > 1:
        _pool = ThreadPoolExecutor(max_workers=k, thread_name_prefix="hopsets")


def workers():
    return _workers


def _run(task, sub):
    _local.inside = True
    try:
        return task(sub), None
    except BaseException as exc:  # re-raised after the join
        return None, exc
    finally:
        _local.inside = False


def scoped_parallel(tasks, meter=None, leaves=()):
    """Run independent tasks ``task(sub_meter) -> result`` and join them.

    Results come back in task order.  ``leaves`` are precomputed single-charge
    branches of the same join (see ``CostMeter.join``).  Nested calls run inline on the calling
    worker.  The first task exception is raised once every task has finished.
    """
    tasks = list(tasks)
    barrier = meter.barrier if meter is not None else 1
    subs = [CostMeter(barrier) for _ in tasks]
    if _pool is not None and len(tasks) > 1 and not getattr(_local, "inside", False):
        outcomes = list(_pool.map(_run, tasks, subs))
    else:
        outcomes = []
        for t, s in zip(tasks, subs):
            try:
                outcomes.append((t(s), None))
            except BaseException as exc:
                outcomes.append((None, exc))
    if meter is not None:
        meter.join(subs, leaves)
    for _, exc in outcomes:
        if exc is not None:
            raise exc
    return [r for r, _ in outcomes]
