"""Batched Paillier engine: fixed-size batches, a ring of buffers and a worker pool.

Each worker thread owns one ``PaillierProcessor`` and processes whole batches.
Encryption randomness for item ``index`` of request ``request_id`` comes from
a stream seeded by (seed, request_id, index), so results do not depend on the
number of workers or on which worker ran the batch.
"""

import hashlib
import queue
import random
import secrets
import threading
import time
from collections import deque
from concurrent.futures import Future
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Deque, Dict, List, Optional, Sequence, Set, Tuple, Union

from loguru import logger

from paillier_accel.arith.bigint import BigUint
from paillier_accel.arith.montgomery import OpCounter
from paillier_accel.crypto.encoding import EncodedNumber, SparseWords, densify, sparsify
from paillier_accel.crypto.paillier import (
    Ciphertext,
    PrivateKey,
    PublicKey,
    add_cipher,
    decrypt,
    encrypt,
    random_coprime,
    scalar_mul,
)
from paillier_accel.engine.buffer_ring import BufferRing
from paillier_accel.engine.engine_config import EngineConfig
from paillier_accel.errors import EngineConfigError, EngineShutdownError


class OperationKind(str, Enum):
    ENCRYPT = "encrypt"
    DECRYPT = "decrypt"
    ADD = "add"
    SCALAR_MUL = "scalar_mul"


@dataclass
class BatchRequest:
    """One homogeneous batch of items.

    ENCRYPT takes EncodedNumber or BigUint plaintexts, DECRYPT takes
    Ciphertexts, ADD takes (Ciphertext, Ciphertext) pairs and SCALAR_MUL takes
    (Ciphertext, BigUint) pairs.
    """
    request_id: str
    kind: OperationKind
    items: List[Any]
    batch_size: int = 1024

    def __post_init__(self):
        """Validate batch shape and item types."""
        self.kind = OperationKind(self.kind)
        if not self.items:
            raise ValueError(f"Batch {self.request_id} is empty")
        if len(self.items) > self.batch_size:
            raise ValueError(f"Batch {self.request_id} has {len(self.items)} items, limit is {self.batch_size}")
        for index, item in enumerate(self.items):
            if not _item_matches(self.kind, item):
                raise TypeError(f"Item {index} of batch {self.request_id} is not valid for {self.kind.value}")


def _item_matches(kind: OperationKind, item: Any) -> bool:
    if kind is OperationKind.ENCRYPT:
        return isinstance(item, (EncodedNumber, BigUint))
    if kind is OperationKind.DECRYPT:
        return isinstance(item, Ciphertext)
    if not (isinstance(item, tuple) and len(item) == 2 and isinstance(item[0], Ciphertext)):
        return False
    if kind is OperationKind.ADD:
        return isinstance(item[1], Ciphertext)
    return isinstance(item[1], BigUint)


@dataclass
class BatchRecord:
    """Lifecycle timestamps of one batch (time.perf_counter seconds)."""
    request_id: str
    kind: str
    size: int
    slot: int
    enqueue_time: float
    start_time: Optional[float] = None
    finish_time: Optional[float] = None
    worker: Optional[str] = None
    error: Optional[str] = None

    @property
    def wait_seconds(self) -> float:
        return (self.start_time - self.enqueue_time) if self.start_time is not None else 0.0

    @property
    def service_seconds(self) -> float:
        if self.start_time is None or self.finish_time is None:
            return 0.0
        return self.finish_time - self.start_time

    def to_dict(self) -> Dict[str, Any]:
        return {
            "request_id": self.request_id,
            "kind": self.kind,
            "size": self.size,
            "slot": self.slot,
            "worker": self.worker,
            "enqueue_time": self.enqueue_time,
            "start_time": self.start_time,
            "finish_time": self.finish_time,
            "wait_seconds": self.wait_seconds,
            "service_seconds": self.service_seconds,
            "error": self.error,
        }


@dataclass
class QueueStats:
    """Snapshot of completed batches and queue depth over time."""
    records: List[BatchRecord] = field(default_factory=list)
    depth_samples: List[Tuple[float, int]] = field(default_factory=list)
    workers: int = 1
    ring_slots: int = 2
    batch_size: int = 1024
    peak_in_flight: int = 0

    @property
    def batch_count(self) -> int:
        return len(self.records)

    @property
    def total_items(self) -> int:
        return sum(r.size for r in self.records)

    @property
    def wall_span(self) -> float:
        """First enqueue to last finish."""
        if not self.records:
            return 0.0
        finishes = [r.finish_time for r in self.records if r.finish_time is not None]
        if not finishes:
            return 0.0
        return max(finishes) - min(r.enqueue_time for r in self.records)

    @property
    def items_per_second(self) -> float:
        span = self.wall_span
        return self.total_items / span if span > 0 else 0.0

    @property
    def max_queue_depth(self) -> int:
        return max((depth for _, depth in self.depth_samples), default=0)

    @property
    def failed_batches(self) -> int:
        return sum(1 for r in self.records if r.error is not None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "workers": self.workers,
            "ring_slots": self.ring_slots,
            "batch_size": self.batch_size,
            "batch_count": self.batch_count,
            "total_items": self.total_items,
            "wall_span_seconds": self.wall_span,
            "items_per_second": self.items_per_second,
            "peak_in_flight": self.peak_in_flight,
            "max_queue_depth": self.max_queue_depth,
            "failed_batches": self.failed_batches,
            "depth_samples": [list(sample) for sample in self.depth_samples],
            "batches": [r.to_dict() for r in self.records],
        }


class BatchHandle:
    """Result handle of a submitted batch; safe to pass between threads."""

    def __init__(self, request_id: str, future: Future):
        self.request_id = request_id
        self.future = future

    def result(self, timeout: Optional[float] = None) -> List[Any]:
        return self.future.result(timeout)

    def done(self) -> bool:
        return self.future.done()

    def add_done_callback(self, callback) -> None:
        self.future.add_done_callback(lambda _: callback(self))


def item_rng(seed: int, request_id: str, index: int) -> random.Random:
    """Deterministic per-item randomness stream."""
    digest = hashlib.sha256(f"{seed}:{request_id}:{index}".encode("utf-8")).digest()
    return random.Random(int.from_bytes(digest[:16], "big"))


# Staged form of an encrypt item: sparse plaintext words plus exponent.
StagedPlaintext = Tuple[SparseWords, int]


class PaillierProcessor:
    """One worker's processing context (the software counterpart of one core)."""

    def __init__(self, public_key: PublicKey, private_key: Optional[PrivateKey] = None,
                 seed: int = 0, fast_generator_power: bool = False):
        self.public_key = public_key
        self.private_key = private_key
        self.seed = seed
        self.fast_generator_power = fast_generator_power
        self.counter = OpCounter()

    def process_item(self, kind: OperationKind, request_id: str, index: int, item: Any) -> Any:
        pk = self.public_key
        if kind is OperationKind.ENCRYPT:
            if isinstance(item, tuple):
                sparse, exponent = item
                plaintext = densify(sparse)
            elif isinstance(item, EncodedNumber):
                plaintext, exponent = item.mantissa, item.exponent
            else:
                plaintext, exponent = item, 0
            rng = item_rng(self.seed, request_id, index)
            r = random_coprime(pk, rng)
            return encrypt(pk, plaintext, r, exponent=exponent,
                           fast_generator_power=self.fast_generator_power, counter=self.counter)
        if kind is OperationKind.DECRYPT:
            if self.private_key is None:
                raise EngineConfigError("Decryption requires an engine built with a private key")
            mantissa = decrypt(self.private_key, pk, item, counter=self.counter)
            return EncodedNumber(mantissa=mantissa, exponent=item.exponent)
        if kind is OperationKind.ADD:
            return add_cipher(pk, item[0], item[1], counter=self.counter)
        return scalar_mul(pk, item[0], item[1], counter=self.counter)

    def process(self, kind: OperationKind, request_id: str, items: Sequence[Any],
                out: Optional[List[Any]] = None) -> List[Any]:
        """Process a batch in input order, writing into ``out`` when given."""
        results = out if out is not None else [None] * len(items)
        for index, item in enumerate(items):
            results[index] = self.process_item(kind, request_id, index, item)
        return results


def stage_items(request: BatchRequest) -> List[Any]:
    """Convert request items into their buffered form (plaintexts stored sparse)."""
    if request.kind is not OperationKind.ENCRYPT:
        return list(request.items)
    staged = []
    for item in request.items:
        if isinstance(item, EncodedNumber):
            staged.append((sparsify(item.mantissa), item.exponent))
        else:
            staged.append((sparsify(item), 0))
    return staged


def run_serial(public_key: PublicKey, private_key: Optional[PrivateKey],
               requests: Sequence[BatchRequest], seed: int = 0,
               fast_generator_power: bool = False) -> Dict[str, List[Any]]:
    """Reference results computed in the calling thread, keyed by request id."""
    processor = PaillierProcessor(public_key, private_key, seed, fast_generator_power)
    return {req.request_id: processor.process(req.kind, req.request_id, req.items) for req in requests}


_STOP = None

# Batch records and depth samples kept between drains.
STATS_HISTORY = 4096


class Engine:
    """Worker pool over a ring of preallocated batch buffers.

    Without an explicit ``config`` the engine starts from ``EngineConfig()``
    with the PAILLIER_ENGINE_* environment applied; keyword arguments win over
    both. An unset seed is drawn from ``secrets``.
    """

    def __init__(self, public_key: PublicKey, private_key: Optional[PrivateKey] = None,
                 workers: Optional[int] = None, batch_size: Optional[int] = None,
                 ring_slots: Optional[int] = None, seed: Optional[int] = None,
                 fast_generator_power: Optional[bool] = None,
                 config: Optional[EngineConfig] = None):
        base = config if config is not None else EngineConfig.from_env()
        seed = base.seed if seed is None else seed
        self.config = EngineConfig(
            workers=base.workers if workers is None else workers,
            batch_size=base.batch_size if batch_size is None else batch_size,
            ring_slots=base.ring_slots if ring_slots is None else ring_slots,
            seed=secrets.randbits(64) if seed is None else seed,
            fast_generator_power=base.fast_generator_power if fast_generator_power is None else fast_generator_power,
        )
        self.public_key = public_key
        self.private_key = private_key
        self._ring = BufferRing(self.config.ring_slots, self.config.batch_size)
        self._queue: "queue.Queue" = queue.Queue()
        self._lock = threading.Lock()
        self._records: Deque[BatchRecord] = deque(maxlen=STATS_HISTORY)
        self._in_flight: Set[Future] = set()
        self._depth_samples: Deque[Tuple[float, int]] = deque(maxlen=STATS_HISTORY)
        self._pending = 0
        self._closed = False
        self.completed_batches = 0
        self.completed_items = 0
        self._processors = [
            PaillierProcessor(public_key, private_key, self.config.seed, self.config.fast_generator_power)
            for _ in range(self.config.workers)
        ]
        self._threads = [
            threading.Thread(target=self._worker_loop, args=(processor, f"paillier-worker-{index}"),
                             name=f"paillier-worker-{index}", daemon=True)
            for index, processor in enumerate(self._processors)
        ]
        for thread in self._threads:
            thread.start()
        logger.info(f"Engine started: {self.config.workers} workers, batch {self.config.batch_size}, "
                    f"{self.config.ring_slots} ring slots")

    @property
    def batch_size(self) -> int:
        return self.config.batch_size

    @property
    def ring(self) -> BufferRing:
        return self._ring

    @property
    def in_flight(self) -> int:
        """Batches submitted and not yet finished."""
        with self._lock:
            return len(self._in_flight)

    @property
    def retained_records(self) -> int:
        with self._lock:
            return len(self._records)

    @property
    def op_counter(self) -> OpCounter:
        """Montgomery counters summed over all workers."""
        total = OpCounter()
        for processor in self._processors:
            total.merge(processor.counter)
        return total

    def _sample_depth(self, delta: int) -> None:
        self._pending += delta
        self._depth_samples.append((time.perf_counter(), self._pending))

    def submit(self, request: BatchRequest, timeout: Optional[float] = None) -> BatchHandle:
        """Queue a batch; blocks while every ring slot is in flight."""
        if self._closed:
            raise EngineShutdownError("Engine has been shut down")
        if len(request.items) > self.config.batch_size:
            raise ValueError(f"Batch {request.request_id} has {len(request.items)} items, "
                             f"engine batch size is {self.config.batch_size}")
        if request.kind is OperationKind.DECRYPT and self.private_key is None:
            raise EngineConfigError("Engine has no private key; decrypt batches are not accepted")

        staged = stage_items(request)
        slot = self._ring.acquire(timeout)
        self._ring.stage(slot, staged)
        future: Future = Future()
        record = BatchRecord(request_id=request.request_id, kind=request.kind.value,
                             size=len(request.items), slot=slot, enqueue_time=time.perf_counter())
        with self._lock:
            if self._closed:
                self._ring.release(slot)
                raise EngineShutdownError("Engine has been shut down")
            self._records.append(record)
            self._in_flight.add(future)
            self._sample_depth(+1)
        self._queue.put((slot, request.kind, request.request_id, record, future))
        logger.debug(f"Queued batch {request.request_id} ({len(request.items)} {request.kind.value} items) in slot {slot}")
        return BatchHandle(request.request_id, future)

    def _worker_loop(self, processor: PaillierProcessor, name: str) -> None:
        while True:
            job = self._queue.get()
            if job is _STOP:
                self._queue.task_done()
                break
            slot, kind, request_id, record, future = job
            try:
                if not future.set_running_or_notify_cancel():
                    record.finish_time = time.perf_counter()
                    record.error = "CancelledError"
                    continue
                record.start_time = time.perf_counter()
                record.worker = name
                count = self._ring.count(slot)
                inputs = self._ring.input_buffer(slot)[:count]
                try:
                    processor.process(kind, request_id, inputs, self._ring.output_buffer(slot))
                    results = self._ring.collect(slot)
                    record.finish_time = time.perf_counter()
                    future.set_result(results)
                except Exception as e:
                    record.finish_time = time.perf_counter()
                    record.error = f"{type(e).__name__}: {e}"
                    logger.error(f"Batch {request_id} failed on {name}: {e}")
                    future.set_exception(e)
            finally:
                with self._lock:
                    self._sample_depth(-1)
                    self._in_flight.discard(future)
                    self.completed_batches += 1
                    self.completed_items += record.size
                self._ring.release(slot)
                self._queue.task_done()

    def drain(self) -> QueueStats:
        """Wait for every submitted batch and return the statistics since the last drain.

        Finished records and depth samples are handed out and dropped; batches
        submitted concurrently stay for the next drain.
        """
        self._queue.join()
        with self._lock:
            finished = [r for r in self._records if r.finish_time is not None]
            unfinished = [r for r in self._records if r.finish_time is None]
            self._records.clear()
            self._records.extend(unfinished)
            stats = QueueStats(
                records=sorted(finished, key=lambda r: r.enqueue_time),
                depth_samples=list(self._depth_samples),
                workers=self.config.workers,
                ring_slots=self.config.ring_slots,
                batch_size=self.config.batch_size,
                peak_in_flight=self._ring.peak_in_flight,
            )
            self._depth_samples.clear()
        if stats.batch_count:
            logger.success(f"Drained {stats.batch_count} batches, {stats.total_items} items "
                           f"at {stats.items_per_second:.1f} items/s")
        return stats

    def shutdown(self, wait_for_pending: bool = True) -> None:
        if self._closed:
            return
        if wait_for_pending:
            self.drain()
        with self._lock:
            self._closed = True
        for _ in self._threads:
            self._queue.put(_STOP)
        for thread in self._threads:
            thread.join()
        self._ring.close()
        logger.info("Engine stopped")

    def __enter__(self) -> "Engine":
        return self

    def __exit__(self, exc_type, exc, tb) -> None:
        self.shutdown()


def engine_new(public_key: PublicKey, private_key: Optional[PrivateKey] = None,
               workers: int = 1, batch_size: int = 1024, ring_slots: int = 2,
               seed: Optional[int] = None, fast_generator_power: bool = False) -> Engine:
    return Engine(public_key, private_key, workers=workers, batch_size=batch_size,
                  ring_slots=ring_slots, seed=seed, fast_generator_power=fast_generator_power)


def submit(engine: Engine, request: BatchRequest) -> BatchHandle:
    return engine.submit(request)


def drain(engine: Engine) -> QueueStats:
    return engine.drain()


def split_requests(kind: Union[OperationKind, str], items: Sequence[Any], batch_size: int,
                   prefix: str = "req") -> List[BatchRequest]:
    """Cut a long item list into consecutive fixed-size batches."""
    if batch_size < 1:
        raise ValueError(f"batch_size must be positive, got {batch_size}")
    kind = OperationKind(kind)
    return [
        BatchRequest(request_id=f"{prefix}-{start // batch_size}", kind=kind,
                     items=list(items[start:start + batch_size]), batch_size=batch_size)
        for start in range(0, len(items), batch_size)
    ]
