"""Scenario files: strict JSON parsing, emission and seeded generation.

Layout::

    {
      "base_stations": [{"harvest_rate": 10, "bandwidth": 10}, ...],
      "terminals": [{"home_bs": 0, "min_rate": 1}, ...],
      "channel": {"mode": "deterministic", "average_gains": {"own": 1, "cross": 0.6}},
      "noise_density": 1,
      "tariff": {"grid_price": 1, "agg_buy": 0.5, "agg_sell": 0.4,
                 "contract_fee": 0.1, "transfer_loss": 0}
    }

``average_gains`` is either ``{"own": .., "cross": ..}`` or a full BS-by-MT
matrix.  ``"mode": "seeded-random"`` additionally needs ``"seed"``.
"""

from __future__ import annotations

import json
from importlib import resources
from numbers import Real
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .errors import ScenarioParseError, ScenarioValidationError
from .model import (CHANNEL_MODES, DETERMINISTIC, SEEDED_RANDOM, BaseStation, ChannelMatrix,
                    MobileTerminal, Scenario, Tariff, validate_scenario)

_TOP = {"base_stations", "terminals", "channel", "noise_density", "tariff"}
_TOP_OPTIONAL = {"description"}
_BS = {"harvest_rate", "bandwidth"}
_MT = {"home_bs", "min_rate"}
_CHANNEL = {"mode", "average_gains", "seed"}
_TARIFF = {"grid_price", "agg_buy", "agg_sell", "contract_fee", "transfer_loss"}
_TARIFF_OPTIONAL = {"contract_fee", "transfer_loss"}


def _keys(obj, where: str, required: set, optional: set = frozenset()) -> None:
    if not isinstance(obj, dict):
        raise ScenarioParseError(f"{where}: expected an object")
    unknown = sorted(set(obj) - required - set(optional))
    if unknown:
        raise ScenarioParseError(f"{where}: unknown key(s) {', '.join(unknown)}")
    missing = sorted(required - set(optional) - set(obj))
    if missing:
        raise ScenarioParseError(f"{where}: missing key(s) {', '.join(missing)}")


def _num(obj, key: str, where: str, default=None) -> float:
    if key not in obj:
        return default
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, Real):
        raise ScenarioParseError(f"{where}.{key}: expected a number, got {v!r}")
    return float(v)


def _int(obj, key: str, where: str) -> int:
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioParseError(f"{where}.{key}: expected an integer, got {v!r}")
    return v


def _list(obj, key: str) -> list:
    v = obj[key]
    if not isinstance(v, list):
        raise ScenarioParseError(f"{key}: expected a list")
    return v


def scenario_from_dict(doc: dict[str, Any]) -> Scenario:
    """Build a scenario from a parsed document (no invariant validation)."""
    _keys(doc, "scenario", _TOP | _TOP_OPTIONAL, _TOP_OPTIONAL)
    bss = []
    for i, b in enumerate(_list(doc, "base_stations")):
        where = f"base_stations[{i}]"
        _keys(b, where, _BS)
        bss.append(BaseStation(i, _num(b, "harvest_rate", where), _num(b, "bandwidth", where)))
    mts = []
    for k, t in enumerate(_list(doc, "terminals")):
        where = f"terminals[{k}]"
        _keys(t, where, _MT)
        mts.append(MobileTerminal(k, _int(t, "home_bs", where), _num(t, "min_rate", where)))

    ch = doc["channel"]
    _keys(ch, "channel", _CHANNEL, {"seed"})
    mode = ch["mode"]
    if mode not in CHANNEL_MODES:
        raise ScenarioParseError(f"channel.mode: expected one of {', '.join(CHANNEL_MODES)}, got {mode!r}")
    seed = None
    if "seed" in ch:
        seed = _int(ch, "seed", "channel")
        if not 0 <= seed < 2 ** 64:
            raise ScenarioParseError("channel.seed: must be an unsigned 64-bit integer")
    avg = ch["average_gains"]
    if isinstance(avg, dict):
        _keys(avg, "channel.average_gains", {"own", "cross"})
        own = _num(avg, "own", "channel.average_gains")
        cross = _num(avg, "cross", "channel.average_gains")
        channel = ChannelMatrix.own_cross([t.home_bs for t in mts], len(bss), own, cross, mode, seed)
    elif isinstance(avg, list):
        try:
            matrix = np.array(avg, dtype=float)
        except (TypeError, ValueError) as exc:
            raise ScenarioParseError(f"channel.average_gains: {exc}") from None
        if matrix.ndim != 2 and not (matrix.size == 0 and len(mts) == 0):
            raise ScenarioParseError("channel.average_gains: expected a BS-by-MT matrix")
        channel = ChannelMatrix(matrix.reshape(len(bss), -1) if matrix.size == 0 else matrix,
                                mode, seed)
    else:
        raise ScenarioParseError("channel.average_gains: expected an object or a matrix")

    tf = doc["tariff"]
    _keys(tf, "tariff", _TARIFF, _TARIFF_OPTIONAL)
    tariff = Tariff(_num(tf, "grid_price", "tariff"), _num(tf, "agg_buy", "tariff"),
                    _num(tf, "agg_sell", "tariff"), _num(tf, "contract_fee", "tariff", 0.0),
                    _num(tf, "transfer_loss", "tariff", 0.0))
    return Scenario(tuple(bss), tuple(mts), channel, _num(doc, "noise_density", "scenario"), tariff)


def scenario_to_dict(s: Scenario) -> dict[str, Any]:
    ch: dict[str, Any] = {"mode": s.channel.mode,
                          "average_gains": s.channel.average_gains.tolist()}
    if s.channel.seed is not None:
        ch["seed"] = int(s.channel.seed)
    t = s.tariff
    return {
        "base_stations": [{"harvest_rate": b.harvest_rate, "bandwidth": b.bandwidth}
                          for b in s.base_stations],
        "terminals": [{"home_bs": m.home_bs, "min_rate": m.min_rate} for m in s.terminals],
        "channel": ch,
        "noise_density": s.noise_density,
        "tariff": {"grid_price": t.grid_price, "agg_buy": t.agg_buy_price,
                   "agg_sell": t.agg_sell_price, "contract_fee": t.contract_fee,
                   "transfer_loss": t.transfer_loss},
    }


def emit_scenario(s: Scenario | dict) -> str:
    doc = scenario_to_dict(s) if isinstance(s, Scenario) else s
    return json.dumps(doc, indent=2) + "\n"


def loads_scenario(text: str, source: str = "<string>", validate: bool = True) -> Scenario:
    if not text.strip():
        raise ScenarioParseError(f"{source}: empty scenario file")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        s = scenario_from_dict(doc)
    except ScenarioParseError as exc:
        raise ScenarioParseError(f"{source}: {exc}") from None
    if validate:
        report = validate_scenario(s)
        if not report.ok:
            raise ScenarioValidationError(report)
    return s


def parse_scenario(path: str | Path, validate: bool = True) -> Scenario:
    path = Path(path)
    return loads_scenario(path.read_text(), str(path), validate)


def case_study_path() -> Path:
    return Path(str(resources.files("greencell") / "data" / "case_study.scenario"))


def load_case_study() -> Scenario:
    return parse_scenario(case_study_path())


def generate_scenario(bs_count: int, mts_per_bs: Sequence[int], seed: int, *,
                      bandwidth: float = 10.0, max_harvest: float = 10.0, min_rate: float = 1.0,
                      own: float = 1.0, cross: float = 0.6, noise_density: float = 1.0,
                      tariff: Tariff | None = None) -> dict[str, Any]:
    """A seeded Rayleigh-fading scenario document.

    Harvest rates are uniform on ``[0, max_harvest]`` (rounded to 3 decimals)
    and gains are own/cross averages times unit-mean exponential draws, all
    reproducible from ``seed``.
    """
    if bs_count < 1:
        raise ValueError("bs_count must be >= 1")
    mts_per_bs = list(mts_per_bs)
    if len(mts_per_bs) != bs_count or any(m < 0 for m in mts_per_bs):
        raise ValueError("mts_per_bs needs one nonnegative count per BS")
    if tariff is None:
        tariff = Tariff(1.0, 0.5, 0.4, 0.1, 0.0)
    rng = np.random.default_rng(seed)
    harvest = np.round(rng.uniform(0.0, max_harvest, size=bs_count), 3)
    homes = [i for i, m in enumerate(mts_per_bs) for _ in range(m)]
    return {
        "base_stations": [{"harvest_rate": float(e), "bandwidth": bandwidth} for e in harvest],
        "terminals": [{"home_bs": h, "min_rate": min_rate} for h in homes],
        "channel": {"mode": SEEDED_RANDOM, "average_gains": {"own": own, "cross": cross},
                    "seed": int(seed)},
        "noise_density": noise_density,
        "tariff": {"grid_price": tariff.grid_price, "agg_buy": tariff.agg_buy_price,
                   "agg_sell": tariff.agg_sell_price, "contract_fee": tariff.contract_fee,
                   "transfer_loss": tariff.transfer_loss},
    }


__all__ = ["DETERMINISTIC", "SEEDED_RANDOM", "case_study_path", "emit_scenario",
           "generate_scenario", "load_case_study", "loads_scenario", "parse_scenario",
           "scenario_from_dict", "scenario_to_dict"]
