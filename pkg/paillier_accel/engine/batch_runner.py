"""Split long item lists into batches, run them through an Engine and gather results."""

import asyncio
from datetime import datetime
from typing import Any, Callable, List, Optional, Sequence, Union

from loguru import logger

from paillier_accel.engine.batch_engine import BatchHandle, Engine, OperationKind, split_requests


class BatchProgressTracker:
    """Tracks completed batches and items."""

    def __init__(self, total_batches: int, total_items: int):
        self.total_batches = total_batches
        self.total_items = total_items
        self.completed_batches = 0
        self.completed_items = 0
        self.failed_batches = 0
        self.current_batch: Optional[str] = None
        self.start_time = datetime.now()
        self.callbacks: List[Callable] = []

    def add_callback(self, callback: Callable):
        self.callbacks.append(callback)

    def update_progress(self, request_id: str, items: int, success: bool = True):
        """Record one finished batch and notify callbacks."""
        self.current_batch = request_id
        self.completed_batches += 1
        if success:
            self.completed_items += items
        else:
            self.failed_batches += 1

        for callback in self.callbacks:
            try:
                callback(self)
            except Exception as e:
                logger.warning(f"Progress callback failed: {e}")

    @property
    def progress_percentage(self) -> float:
        return (self.completed_batches / self.total_batches) * 100 if self.total_batches > 0 else 0.0

    @property
    def elapsed_time(self) -> float:
        return (datetime.now() - self.start_time).total_seconds()

    @property
    def estimated_remaining_time(self) -> Optional[float]:
        if self.completed_batches == 0:
            return None
        elapsed = self.elapsed_time
        if elapsed <= 0:
            return None
        rate = self.completed_batches / elapsed
        return (self.total_batches - self.completed_batches) / rate

    def print_progress_summary(self):
        elapsed = self.elapsed_time
        elapsed_str = f"{int(elapsed // 60):02d}:{int(elapsed % 60):02d}"
        eta = self.estimated_remaining_time
        eta_str = f"{int(eta // 60):02d}:{int(eta % 60):02d}" if eta else "N/A"

        logger.success(f"Batch progress [{datetime.now().strftime('%H:%M:%S')}]")
        logger.success("=" * 50)
        logger.success(f"Batches:   {self.completed_batches:3d}/{self.total_batches} ({self.progress_percentage:5.1f}%)")
        logger.success(f"Items:     {self.completed_items}/{self.total_items}")
        logger.success(f"Failed:    {self.failed_batches:3d}")
        logger.success(f"Elapsed:   {elapsed_str}")
        logger.success(f"ETA:       {eta_str}")
        logger.success("=" * 50)


class BatchRunner:
    """Feeds an Engine from asyncio; results come back in item order."""

    def __init__(self, engine: Engine, prefix: str = "req", summary: bool = True):
        self.engine = engine
        self.prefix = prefix
        self.summary = summary
        self.progress_tracker: Optional[BatchProgressTracker] = None
        self._callbacks: List[Callable] = []

    def add_progress_callback(self, callback: Callable):
        self._callbacks.append(callback)

    async def run(self, kind: Union[OperationKind, str], items: Sequence[Any]) -> List[Any]:
        """Process ``items`` in engine-sized batches and concatenate the results."""
        if not items:
            return []
        requests = split_requests(kind, items, self.engine.batch_size, self.prefix)
        self.progress_tracker = BatchProgressTracker(len(requests), len(items))
        for callback in self._callbacks:
            self.progress_tracker.add_callback(callback)
        logger.debug(f"Running {len(items)} {OperationKind(kind).value} items as {len(requests)} batches")

        async def run_one(handle: BatchHandle, size: int) -> List[Any]:
            try:
                results = await asyncio.wrap_future(handle.future)
            except Exception:
                self.progress_tracker.update_progress(handle.request_id, size, success=False)
                raise
            self.progress_tracker.update_progress(handle.request_id, size)
            return results

        pending = []
        for request in requests:
            # submit blocks on a full ring, so keep it off the event loop
            handle = await asyncio.to_thread(self.engine.submit, request)
            pending.append(asyncio.create_task(run_one(handle, len(request.items))))
        batches = await asyncio.gather(*pending)

        if self.summary:
            self.progress_tracker.print_progress_summary()
        return [result for batch in batches for result in batch]

    def run_sync(self, kind: Union[OperationKind, str], items: Sequence[Any]) -> List[Any]:
        return asyncio.run(self.run(kind, items))
