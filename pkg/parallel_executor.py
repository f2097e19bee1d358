#!/usr/bin/env python3
"""
Thread-Safe Shard Executor for enumeration kernels

Jobs are queued and consumed by daemon worker threads; results are kept in a
lock-protected store keyed by job id and handed back in submission order.
"""

import queue
import threading
import time
import uuid
from typing import Any, Callable, Dict, List, Sequence

from engine_errors import LimitError
from logging_config import get_logger


class ShardExecutor:
    """Runs independent shards of one enumeration on worker threads"""

    def __init__(self, workers: int = 1, max_queue_size: int = 1000, shard_timeout: float = 3600.0):
        self.workers = max(1, workers)
        self.execution_queue: "queue.Queue[Dict[str, Any]]" = queue.Queue(maxsize=max_queue_size)
        self.result_store: Dict[str, Dict[str, Any]] = {}
        self.store_lock = threading.Lock()
        self.shard_timeout = shard_timeout
        self.queue_check_interval = 0.01
        self.is_running = False
        self.worker_threads: List[threading.Thread] = []
        if self.workers > 1:
            self.is_running = True
            for i in range(self.workers):
                worker = threading.Thread(target=self._worker, name=f"shard-worker-{i}", daemon=True)
                worker.start()
                self.worker_threads.append(worker)

    def _worker(self):
        """Consume queued shards until stopped"""
        logger = get_logger()
        while self.is_running:
            try:
                job = self.execution_queue.get(timeout=self.queue_check_interval)
            except queue.Empty:
                continue

            job_id = job['id']
            try:
                value = job['fn'](job['shard'])
                outcome = {'status': 'success', 'result': value, 'timestamp': time.time()}
            except Exception as e:
                logger.debug("Shard failed", job_id=job_id, error=str(e))
                outcome = {'status': 'error', 'error': e, 'timestamp': time.time()}

            with self.store_lock:
                self.result_store[job_id] = outcome
            self.execution_queue.task_done()

    def run_shards(self, fn: Callable[[Any], Any], shards: Sequence[Any]) -> List[Any]:
        """Apply fn to every shard and return the results in shard order.

        A failing shard re-raises its exception in the caller.
        """
        shards = list(shards)
        if self.workers == 1 or len(shards) <= 1:
            return [fn(shard) for shard in shards]

        job_ids = []
        for shard in shards:
            job_id = str(uuid.uuid4())
            self.execution_queue.put({'id': job_id, 'fn': fn, 'shard': shard})
            job_ids.append(job_id)

        results: List[Any] = []
        start_time = time.time()
        for job_id in job_ids:
            while True:
                with self.store_lock:
                    outcome = self.result_store.pop(job_id, None)
                if outcome is not None:
                    break
                if time.time() - start_time > self.shard_timeout:
                    raise LimitError("ShardTimeout", "enumeration shard did not finish in time",
                                     timeout=self.shard_timeout)
                time.sleep(self.queue_check_interval)
            if outcome['status'] == 'error':
                raise outcome['error']
            results.append(outcome['result'])
        return results

    def stop(self):
        """Let the worker threads exit after their current shard"""
        self.is_running = False

    def get_pending_count(self) -> int:
        """Shards queued or finished but not yet collected"""
        with self.store_lock:
            return self.execution_queue.qsize() + len(self.result_store)


# Shared executor, rebuilt when the worker count changes
_executor_instance = None
_executor_lock = threading.Lock()


def get_executor(workers: int = None) -> ShardExecutor:
    """Get or create the global executor sized from settings"""
    global _executor_instance
    if workers is None:
        from engine_settings import get_settings
        workers = get_settings().workers

    with _executor_lock:
        if _executor_instance is None or _executor_instance.workers != max(1, workers):
            if _executor_instance is not None:
                _executor_instance.stop()
            _executor_instance = ShardExecutor(workers)
        return _executor_instance
