"""Run configuration shared by the CLI commands and echoed into reports."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from zoneinfo import ZoneInfo


@dataclass
class RunConfig:
    tz: str = "UTC"
    window_seconds: float = 60.0
    overlap: float = 0.10
    ema_window_minutes: float = 60.0
    compare_windows_minutes: tuple[float, ...] = (30.0, 60.0, 120.0)
    basal_seconds: float = 600.0
    min_class_fraction: float = 0.10
    ratio: float = 0.75
    repeats: int = 5
    folds: int = 5
    c_exponents: tuple[int, ...] = tuple(range(-5, 16, 2))
    gamma_exponents: tuple[int, ...] = tuple(range(-15, 4, 2))
    tol: float = 1e-3
    seed: int | None = None
    target: str = "mood"
    extra: dict = field(default_factory=dict)

    @property
    def zoneinfo(self) -> ZoneInfo:
        return ZoneInfo(self.tz)

    @property
    def c_grid(self) -> tuple[float, ...]:
        return tuple(2.0**e for e in self.c_exponents)

    @property
    def gamma_grid(self) -> tuple[float, ...]:
        return tuple(2.0**e for e in self.gamma_exponents)

    def grid_config(self) -> dict:
        return {
            "c_grid": self.c_grid,
            "gamma_grid": self.gamma_grid,
            "folds": self.folds,
            "tol": self.tol,
        }

    def to_dict(self) -> dict:
        doc = asdict(self)
        doc["c_exponents"] = list(self.c_exponents)
        doc["gamma_exponents"] = list(self.gamma_exponents)
        doc["compare_windows_minutes"] = list(self.compare_windows_minutes)
        return doc
