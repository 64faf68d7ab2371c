"""Key-value config file for SVR hyperparameters and regime thresholds.

Format: one ``key = value`` pair per line, ``#`` comments, blank lines
ignored. Recognized keys:

    svr1.c  svr1.epsilon  svr1.gamma      (likewise svr2, svr3, svr4)
    regime.high_speed  regime.low_speed  regime.stop_speed  regime.slope_eps
    window.k

Unknown keys are an error so typos fail loudly.
"""

from __future__ import annotations

from dataclasses import replace

from .errors import ParseError
from .pipeline import SvrConfig
from .svr import DEFAULT_REGIME_PARAMS, DEFAULT_THRESHOLDS, RegimeLabel

__all__ = ["load_config", "parse_config"]

_REGIME_KEYS = {f"svr{i}.{f}" for i in (1, 2, 3, 4) for f in ("c", "epsilon", "gamma")}
_THRESH_KEYS = {
    "regime.high_speed",
    "regime.low_speed",
    "regime.stop_speed",
    "regime.slope_eps",
}


def parse_config(text: str) -> tuple[SvrConfig, int | None]:
    """Returns (SvrConfig, window_k or None if not set)."""
    values: dict[str, float] = {}
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"expected 'key = value', got {line!r}", line=lineno)
        key, _, val = line.partition("=")
        key = key.strip().lower()
        if key not in _REGIME_KEYS | _THRESH_KEYS | {"window.k"}:
            raise ParseError(f"unknown config key {key!r}", line=lineno)
        try:
            values[key] = float(val.strip())
        except ValueError:
            raise ParseError(f"non-numeric value for {key}: {val.strip()!r}",
                             line=lineno) from None

    params = dict(DEFAULT_REGIME_PARAMS)
    for i in (1, 2, 3, 4):
        label = RegimeLabel(f"SVR{i}")
        kw = {}
        for f, attr in (("c", "C"), ("epsilon", "epsilon"), ("gamma", "gamma")):
            key = f"svr{i}.{f}"
            if key in values:
                kw[attr] = values[key]
        if kw:
            params[label] = replace(params[label], **kw)

    tkw = {k.split(".", 1)[1]: v for k, v in values.items() if k in _THRESH_KEYS}
    thresholds = replace(DEFAULT_THRESHOLDS, **tkw) if tkw else DEFAULT_THRESHOLDS

    window_k = int(values["window.k"]) if "window.k" in values else None
    return SvrConfig(regime_params=params, thresholds=thresholds), window_k


def load_config(path) -> tuple[SvrConfig, int | None]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())
