"""Event-driven schedule of the Montgomery processing element.

The simulator tracks issue and completion events of the unrolled inner loop,
not data values. One inner iteration may issue per cycle. An iteration (i, j)
needs the quotient digit q_i and the word S_i^j produced by iteration
(i - 1, j + 1) of the previous outer loop. q_{i+1} is started as soon as
S_{i+1}^0 (written by iteration (i, 1)) completes.
"""

import heapq
import math
from dataclasses import dataclass, replace
from typing import Dict, List, Optional, Sequence, Tuple

from loguru import logger
from pydantic import BaseModel

from paillier_accel.errors import InfeasibleScheduleError

IO_MODES = ("streamed", "bulk")
STREAMED_IO_CYCLES = 2


@dataclass
class CoreConfig:
    """One ModMult core: operand width, radix, latencies and clock."""
    l: int = 2048
    k: int = 32
    mult_latency: int = 4
    q_latency: Optional[int] = None
    pe_count: int = 1
    unroll_factor: Optional[int] = None
    io_mode: str = "streamed"
    io_overhead_cycles: Optional[int] = None
    clock_mhz: float = 500.0
    dsp_native_bits: int = 16
    strict: bool = True

    def __post_init__(self):
        """Validate core parameters."""
        if self.k <= 0 or self.l <= 0:
            raise ValueError(f"Operand and radix widths must be positive (l={self.l}, k={self.k})")
        if self.l % self.k:
            raise ValueError(f"Radix {self.k} does not divide operand width {self.l}")
        if self.mult_latency < 0:
            raise ValueError(f"mult_latency must be non-negative, got {self.mult_latency}")
        if self.q_latency is not None and self.q_latency < 0:
            raise ValueError(f"q_latency must be non-negative, got {self.q_latency}")
        if self.pe_count != 1:
            raise ValueError(f"The core uses exactly one PE, got pe_count={self.pe_count}")
        if self.unroll_factor is not None and self.unroll_factor <= 0:
            raise ValueError(f"unroll_factor must be positive, got {self.unroll_factor}")
        if self.io_mode not in IO_MODES:
            raise ValueError(f"io_mode must be one of {IO_MODES}, got {self.io_mode!r}")
        if self.io_overhead_cycles is not None and self.io_overhead_cycles < 0:
            raise ValueError(f"io_overhead_cycles must be non-negative, got {self.io_overhead_cycles}")
        if self.clock_mhz <= 0:
            raise ValueError(f"clock_mhz must be positive, got {self.clock_mhz}")
        if self.dsp_native_bits <= 0:
            raise ValueError(f"dsp_native_bits must be positive, got {self.dsp_native_bits}")

    @property
    def words(self) -> int:
        return self.l // self.k

    @property
    def resolved_q_latency(self) -> int:
        return self.mult_latency if self.q_latency is None else self.q_latency

    @property
    def resolved_io_cycles(self) -> int:
        if self.io_overhead_cycles is not None:
            return self.io_overhead_cycles
        if self.io_mode == "bulk":
            return 2 * self.words
        return STREAMED_IO_CYCLES

    @property
    def clock_hz(self) -> float:
        return self.clock_mhz * 1e6


class ScheduleReport(BaseModel):
    """Simulated cycle count of one ModMult against the ideal (l/k)(l/k+1)."""
    l: int
    k: int
    words: int
    mult_latency: int
    q_latency: int
    io_overhead_cycles: int
    ideal_cycles: int
    simulated_cycles: int
    overhead_ratio: float
    fill_cycles: int
    stall_cycles: int
    initiation_interval: int
    inner_initiation_interval: int
    q_ready_cycles: List[int]
    q_needed_cycles: List[int]

    @property
    def q_slack(self) -> int:
        """Smallest gap between a q digit being ready and its first use."""
        if not self.q_ready_cycles:
            return 0
        return min(need - ready for ready, need in zip(self.q_ready_cycles, self.q_needed_cycles))

    def q_dependencies_safe(self) -> bool:
        return all(ready <= need for ready, need in zip(self.q_ready_cycles, self.q_needed_cycles))


def ideal_cycles(l: int, k: int) -> int:
    """(l/k)(l/k+1): one inner iteration per cycle, no fill, no I/O."""
    if k <= 0 or l <= 0 or l % k:
        raise ValueError(f"Radix {k} must divide operand width {l}")
    n = l // k
    return n * (n + 1)


class PipelineSimulator:
    """Cycle-by-cycle issue of the n(n+1) inner iterations of one ModMult."""

    def __init__(self, cfg: CoreConfig):
        self.cfg = cfg
        self.n = cfg.words
        self.latency = cfg.mult_latency
        self.q_latency = cfg.resolved_q_latency
        io = cfg.resolved_io_cycles
        self.read_in = math.ceil(io / 2)
        self.write_out = io - self.read_in

    def _dependencies(self, i: int, j: int, s_ready: Dict[Tuple[int, int], int],
                      q_ready: Dict[int, int], cycle: int) -> Optional[str]:
        """Name of the first unmet dependency of iteration (i, j), or None."""
        ready = q_ready.get(i)
        if ready is None or ready > cycle:
            return "q"
        if i > 0:
            ready = s_ready.get((i, j))
            if ready is None or ready > cycle:
                return "S"
        return None

    def run(self) -> ScheduleReport:
        n, latency = self.n, self.latency
        # completion events: (cycle, sequence, kind, payload)
        events: List[Tuple[int, int, str, Tuple[int, int]]] = []
        sequence = 0
        s_ready: Dict[Tuple[int, int], int] = {}
        q_ready: Dict[int, int] = {0: self.read_in}
        issue: Dict[Tuple[int, int], int] = {}
        stalls = 0

        order = [(i, j) for i in range(n) for j in range(n + 1)]
        position = 0
        cycle = self.read_in

        while position < len(order):
            while events and events[0][0] <= cycle:
                done, _, kind, payload = heapq.heappop(events)
                if kind == "S":
                    s_ready[payload] = done
                elif kind == "q_start":
                    heapq.heappush(events, (done + self.q_latency, sequence, "q", payload))
                    sequence += 1
                else:
                    q_ready[payload[0]] = done

            i, j = order[position]
            missing = self._dependencies(i, j, s_ready, q_ready, cycle)
            if missing is None:
                issue[(i, j)] = cycle
                done = cycle + latency
                if j >= 1:
                    heapq.heappush(events, (done, sequence, "S", (i + 1, j - 1)))
                    sequence += 1
                if j == n:
                    heapq.heappush(events, (done, sequence, "S", (i + 1, n)))
                    sequence += 1
                if j == 1 and i + 1 < n:
                    heapq.heappush(events, (done, sequence, "q_start", (i + 1, 0)))
                    sequence += 1
                position += 1
            else:
                if self.cfg.strict:
                    raise InfeasibleScheduleError(
                        f"Iteration ({i}, {j}) waits on {missing} at cycle {cycle}: "
                        f"mult_latency={latency}, q_latency={self.q_latency} too large for {n}-word operands"
                    )
                stalls += 1
            cycle += 1

        last_issue = issue[order[-1]]
        simulated = last_issue + 1 + latency + self.write_out
        ideal = ideal_cycles(self.cfg.l, self.cfg.k)
        starts = [issue[(i, 0)] for i in range(n)]
        outer_ii = starts[1] - starts[0] if n > 1 else n + 1
        inner_ii = max(
            (issue[order[p + 1]] - issue[order[p]] for p in range(len(order) - 1)
             if order[p + 1][0] == order[p][0]),
            default=1,
        )
        report = ScheduleReport(
            l=self.cfg.l,
            k=self.cfg.k,
            words=n,
            mult_latency=latency,
            q_latency=self.q_latency,
            io_overhead_cycles=self.cfg.resolved_io_cycles,
            ideal_cycles=ideal,
            simulated_cycles=simulated,
            overhead_ratio=simulated / ideal,
            fill_cycles=latency,
            stall_cycles=stalls,
            initiation_interval=outer_ii,
            inner_initiation_interval=inner_ii,
            q_ready_cycles=[q_ready[i] for i in range(n)],
            q_needed_cycles=starts,
        )
        assert report.simulated_cycles >= report.ideal_cycles
        assert report.q_dependencies_safe()
        logger.debug(
            f"Schedule l={self.cfg.l} k={self.cfg.k}: {simulated} cycles "
            f"(ideal {ideal}, ratio {report.overhead_ratio:.3f}, {stalls} stalls)"
        )
        return report


def simulate_schedule(cfg: CoreConfig) -> ScheduleReport:
    return PipelineSimulator(cfg).run()


def cycle_table(sizes: Sequence[int] = (256, 512, 1024, 2048), k: int = 32,
               base: Optional[CoreConfig] = None) -> List[Dict[str, float]]:
    """Ideal vs simulated cycles per operand size."""
    base = base or CoreConfig(k=k)
    rows = []
    for size in sizes:
        report = simulate_schedule(replace(base, l=size, k=k))
        rows.append({
            "l": size,
            "k": k,
            "ideal_cycles": report.ideal_cycles,
            "simulated_cycles": report.simulated_cycles,
            "overhead_ratio": round(report.overhead_ratio, 6),
            "stall_cycles": report.stall_cycles,
        })
    return rows
