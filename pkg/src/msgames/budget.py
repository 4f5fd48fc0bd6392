"""Search budget controls: node-count and wall-clock caps.

Exceeding a cap raises BudgetExceeded; a solver never returns an
approximate verdict.
"""

from __future__ import annotations

import os
import time


class BudgetExceeded(RuntimeError):
    """The configured search budget was exhausted before a verdict."""


class Budget:
    def __init__(self, max_nodes: int | None = None, max_ms: float | None = None):
        if max_nodes is None:
            env = os.environ.get("MSGAMES_BUDGET_NODES")
            max_nodes = int(env) if env else None
        if max_ms is None:
            env = os.environ.get("MSGAMES_BUDGET_MS")
            max_ms = float(env) if env else None
        self.max_nodes = max_nodes
        self.max_ms = max_ms
        self.nodes = 0
        self._start = time.monotonic()

    def tick(self, n: int = 1) -> None:
        self.nodes += n
        if self.max_nodes is not None and self.nodes > self.max_nodes:
            raise BudgetExceeded(f"node budget {self.max_nodes} exhausted")
        if self.max_ms is not None and (self.nodes & 0x3FF) == 0:
            self.check_time()

    def check_time(self) -> None:
        if self.max_ms is not None:
            if (time.monotonic() - self._start) * 1000.0 > self.max_ms:
                raise BudgetExceeded(f"time budget {self.max_ms} ms exhausted")

    @property
    def elapsed_ms(self) -> float:
        return (time.monotonic() - self._start) * 1000.0
