"""Batched Paillier engine: worker pool, buffer ring and batch runner."""

from .batch_engine import (
    BatchHandle,
    BatchRecord,
    BatchRequest,
    Engine,
    OperationKind,
    PaillierProcessor,
    QueueStats,
    drain,
    engine_new,
    item_rng,
    run_serial,
    split_requests,
    submit,
)
from .batch_runner import BatchProgressTracker, BatchRunner
from .buffer_ring import BufferRing
from .engine_config import EngineConfig, engine_config_from_dict, load_engine_config
from .stats_exporter import StatsExporter

__all__ = [
    "BatchHandle",
    "BatchRecord",
    "BatchRequest",
    "Engine",
    "OperationKind",
    "PaillierProcessor",
    "QueueStats",
    "drain",
    "engine_new",
    "item_rng",
    "run_serial",
    "split_requests",
    "submit",
    "BatchProgressTracker",
    "BatchRunner",
    "BufferRing",
    "EngineConfig",
    "engine_config_from_dict",
    "load_engine_config",
    "StatsExporter",
]
