"""Compare an encrypted training trace with its plaintext reference."""

from typing import Any, Dict, List

import numpy as np
from loguru import logger

from paillier_accel.fedsim.trainer import TrainingTrace


class TrajectoryValidator:
    """Checks that two weight trajectories agree in ∞-norm at every iteration."""

    def __init__(self, tolerance: float = 1e-6):
        self.tolerance = tolerance

    def validate(self, encrypted: TrainingTrace, reference: TrainingTrace) -> Dict[str, Any]:
        """
        Compare iteration by iteration.

        Returns:
            Dict with keys:
            - is_valid: every iteration within tolerance and equal lengths
            - max_abs_diff: largest weight difference seen
            - iterations: number of iterations compared
            - details: per-iteration {iteration, max_abs_diff, within_tolerance}
            - error_message: reason for failure, if any
        """
        if len(encrypted.records) != len(reference.records):
            message = (f"Trace lengths differ: {len(encrypted.records)} encrypted vs "
                       f"{len(reference.records)} reference")
            logger.warning(message)
            return {"is_valid": False, "max_abs_diff": None, "iterations": 0,
                    "details": [], "error_message": message}

        details: List[Dict[str, Any]] = []
        worst = 0.0
        for enc, ref in zip(encrypted.records, reference.records):
            a, b = np.array(enc.weights), np.array(ref.weights)
            if a.shape != b.shape:
                message = f"Weight shapes differ at iteration {enc.iteration}: {a.shape} vs {b.shape}"
                return {"is_valid": False, "max_abs_diff": None, "iterations": len(details),
                        "details": details, "error_message": message}
            diff = float(np.max(np.abs(a - b))) if a.size else 0.0
            worst = max(worst, diff)
            details.append({"iteration": enc.iteration, "max_abs_diff": diff,
                            "within_tolerance": diff <= self.tolerance})

        is_valid = all(d["within_tolerance"] for d in details)
        if is_valid:
            logger.info(f"Trajectories agree within {self.tolerance:g} (max diff {worst:.3e})")
        else:
            logger.warning(f"Trajectories diverge: max diff {worst:.3e} exceeds {self.tolerance:g}")
        return {
            "is_valid": is_valid,
            "max_abs_diff": worst,
            "iterations": len(details) - 1,
            "details": details,
            "error_message": None if is_valid else f"max diff {worst:.3e} exceeds {self.tolerance:g}",
        }
