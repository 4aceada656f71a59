"""Cost configuration for the non-lexical readings.

Only the ordering is semantically load-bearing: plain lexicon entries are
cheapest, then proper-noun and acronym readings, then the catch-all
unknown reading, and the constraint-violation penalty dominates them all
so a clean path (even one through UNKNOWN) always beats a violating one.
"""

from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Union


@dataclass(frozen=True)
class WeightConfig:
    w_proper: float = 2.0
    w_acronym: float = 5.0
    w_unk: float = 100.0
    w_neg: float = 1000.0

    def __post_init__(self):
        if not (0 < self.w_proper <= self.w_acronym < self.w_unk < self.w_neg):
            raise ValueError(
                "weights must satisfy 0 < w_proper <= w_acronym < w_unk < w_neg, "
                f"got {self.w_proper}/{self.w_acronym}/{self.w_unk}/{self.w_neg}")


_KEYS = tuple(f.name for f in fields(WeightConfig))


def load_weight_config(path: Union[str, Path],
                       base: WeightConfig | None = None) -> WeightConfig:
    """Read ``key=value`` overrides (keys: w_proper, w_acronym, w_unk, w_neg)."""
    cfg = base if base is not None else WeightConfig()
    overrides = {}
    with open(path, "r", encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key = key.strip()
            if not sep or key not in _KEYS:
                raise ValueError(f"{path}:{lineno}: expected one of "
                                 f"{', '.join(_KEYS)} = <number>")
            try:
                overrides[key] = float(value.strip())
            except ValueError:
                raise ValueError(f"{path}:{lineno}: bad number {value.strip()!r}") from None
    return replace(cfg, **overrides)
