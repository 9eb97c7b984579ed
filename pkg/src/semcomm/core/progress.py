"""Progress reporting for downloads and training loops."""

import logging
from typing import Optional

from tqdm import tqdm


class ProgressReporter:
    """Progress reporter backed by tqdm or by the logger.

    Args:
        mode: "tqdm" for progress bars, "log" for log lines, "silent" for none.
        log_interval: In "log" mode, emit a line every N steps.
    """

    MODES = ("tqdm", "log", "silent")

    def __init__(self, mode: str = "log", log_interval: int = 50):
        if mode not in self.MODES:
            raise ValueError(f"Unknown progress mode {mode!r}; expected one of {self.MODES}")
        self.mode = mode
        self.log_interval = max(1, log_interval)
        self.logger = logging.getLogger("semcomm.progress")
        self.pbar: Optional[tqdm] = None
        self.label = ""
        self.done = 0
        self.total: Optional[int] = None

    def start(self, label: str, total: Optional[int], unit: str = "it") -> None:
        """Begin tracking a task of ``total`` steps."""
        self.label = label
        self.done = 0
        self.total = total
        if self.mode == "tqdm":
            self.pbar = tqdm(
                total=total,
                desc=label,
                unit=unit,
                unit_scale=unit == "B",
                leave=False,
            )
        elif self.mode == "log":
            self.logger.info(f"{label}: started" + (f" ({total} {unit})" if total else ""))

    def advance(self, steps: int = 1, **postfix: float) -> None:
        """Record progress, optionally with live metrics such as the loss."""
        self.done += steps
        if self.pbar is not None:
            self.pbar.update(steps)
            if postfix:
                self.pbar.set_postfix({k: f"{v:.4g}" for k, v in postfix.items()})
        elif self.mode == "log" and self.done % self.log_interval == 0:
            details = " ".join(f"{k}={v:.4g}" for k, v in postfix.items())
            self.logger.debug(f"{self.label}: {self.done}/{self.total} {details}".rstrip())

    def end(self) -> None:
        """Finish the current task."""
        if self.pbar is not None:
            self.pbar.close()
            self.pbar = None
        elif self.mode == "log":
            self.logger.info(f"{self.label}: finished")
