"""Sliding-window request limiter with an injectable clock."""

from __future__ import annotations

import threading
import time
from collections import deque
from collections.abc import Callable


class RateLimiter:
    """Blocks until issuing one more request keeps the last ``window`` seconds under ``max_requests``."""

    def __init__(
        self,
        max_requests: float,
        window: float = 1.0,
        clock: Callable[[], float] = time.monotonic,
        sleep: Callable[[float], None] = time.sleep,
    ):
        if max_requests <= 0:
            raise ValueError("max_requests must be positive")
        # fractional rates (e.g. 0.5/s) widen the window instead
        if max_requests < 1:
            window = window / max_requests
            max_requests = 1
        self.max_requests = int(max_requests)
        self.window = window
        self.clock = clock
        self.sleep = sleep
        self._issued: deque[float] = deque()
        self._lock = threading.Lock()

    def acquire(self) -> float:
        """Reserve a slot and return the timestamp it was granted at."""
        with self._lock:
            while True:
                now = self.clock()
                while self._issued and now - self._issued[0] >= self.window:
                    self._issued.popleft()
                if len(self._issued) < self.max_requests:
                    self._issued.append(now)
                    return now
                self.sleep(self.window - (now - self._issued[0]))
