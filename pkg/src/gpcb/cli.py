"""Config-driven batch front-end.

Commands operate on a plain-text key=value config with section headers
(INI syntax); experiment configs are the unit of reproducibility and are
meant to live in version control.  The CLI emits data only (CSV and
confidence-table files); plotting is left to external tools.

Exit codes: 0 success, 1 configuration error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import configparser
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .channel import (
    CSV_HEADER,
    BerRecord,
    ChannelConfig,
    default_workers,
    run_ber,
    shannon_limit,
)
from .concatenation import GpcbCode, gpcb_rate
from .confidence import ConfidenceTable, calibrate_confidence, calibration_key
from .cyclic import get_code, list_codes
from .gf2 import CodeConstructionError
from .interleavers import KINDS, make_interleaver
from .siho import DecoderConfig
from .systems import ComponentSystem, TurboSystem, UncodedBpsk
from .turbo import TurboConfig

OUTPUT_DIR_ENV = "GPCB_OUTPUT_DIR"


class ConfigError(ValueError):
    """Invalid or inconsistent run configuration."""


_SCHEMA = {
    "code": {"component", "component2", "M"},
    "interleaver": {"kind", "seed", "rows", "cols", "spread"},
    "decoder": {"p", "max_shifts", "threshold_enabled", "threshold_slack", "threshold"},
    "channel": {"ebn0_db", "seed", "max_frames", "target_bit_errors"},
    "turbo": {"iterations", "output_tap", "stop_on_convergence"},
    "calibration": {"ebn0_grid", "frames_per_point", "bins", "seed"},
    "run": {
        "output", "system", "workers", "table_dir", "trace_output",
        "frame_bits", "format", "progress",
    },
}

_SYSTEMS = ("gpcb", "component", "uncoded")


@dataclass(frozen=True)
class RunConfig:
    """Validated, fully-defaulted run configuration."""

    component: str = "bch-63-51"
    component2: str | None = None
    m_values: tuple[int, ...] = (1,)
    interleaver_kinds: tuple[str, ...] = ("random",)
    interleaver_seed: int = 0
    rows: int | None = None
    cols: int | None = None
    spread: int | None = None
    p: int = 4
    max_shifts: int | None = None
    threshold_enabled: bool = True
    threshold_slack: float = 2.0
    threshold: float | None = None
    ebn0_db: tuple[float, ...] = ()
    channel_seed: int = 0
    max_frames: int = 100_000
    target_bit_errors: int = 100
    iterations: int = 6
    output_tap: str = "combined"
    stop_on_convergence: bool = False
    calibration_grid: tuple[float, ...] = (1.0, 2.0, 3.0, 4.0, 5.0)
    calibration_frames: int = 2000
    calibration_bins: int = 32
    calibration_seed: int = 0
    output: str | None = None
    system: str = "gpcb"
    workers: int = field(default_factory=default_workers)
    table_dir: str | None = None
    trace_output: str | None = None
    frame_bits: int = 1000
    word_format: str = "bits"
    progress: bool = False


def _parse_bool(section: str, key: str, raw: str) -> bool:
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"[{section}] {key} = {raw!r}: expected true or false")


def _parse_int(section: str, key: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r}: expected an integer")


def _parse_float(section: str, key: str, raw: str) -> float:
    try:
        return float(raw.strip())
    except ValueError:
        raise ConfigError(f"[{section}] {key} = {raw!r}: expected a number")


def _parse_list(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


def parse_config(text: str) -> RunConfig:
    """Parse and validate a config; unknown sections or keys are rejected."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"config syntax: {exc}") from exc

    values: dict = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(
                f"unknown section [{section}]; accepted sections: "
                + ", ".join(sorted(_SCHEMA))
            )
        for key in parser[section]:
            if key not in _SCHEMA[section]:
                raise ConfigError(
                    f"unknown key {key!r} in [{section}]; accepted keys: "
                    + ", ".join(sorted(_SCHEMA[section]))
                )
            values[(section, key)] = parser[section][key]

    def take(section, key, default=None):
        return values.pop((section, key), default)

    kinds_raw = take("interleaver", "kind")
    kinds = tuple(_parse_list(kinds_raw)) if kinds_raw is not None else ("random",)
    for kind in kinds:
        if kind not in KINDS:
            raise ConfigError(
                f"unknown interleaver kind {kind!r}; supported kinds: "
                + ", ".join(KINDS)
            )

    m_raw = take("code", "M")
    m_values = tuple(_parse_int("code", "M", v) for v in _parse_list(m_raw)) if m_raw else (1,)
    if any(m < 1 for m in m_values):
        raise ConfigError("[code] M values must be >= 1")

    ebn0_raw = take("channel", "ebn0_db")
    ebn0 = tuple(_parse_float("channel", "ebn0_db", v) for v in _parse_list(ebn0_raw)) if ebn0_raw else ()

    grid_raw = take("calibration", "ebn0_grid")
    grid = (
        tuple(_parse_float("calibration", "ebn0_grid", v) for v in _parse_list(grid_raw))
        if grid_raw
        else (1.0, 2.0, 3.0, 4.0, 5.0)
    )

    system = take("run", "system", "gpcb").strip()
    if system not in _SYSTEMS:
        raise ConfigError(
            f"unknown system {system!r}; accepted values: " + ", ".join(_SYSTEMS)
        )
    word_format = take("run", "format", "bits").strip()
    if word_format not in ("bits", "hex"):
        raise ConfigError(
            f"unknown format {word_format!r}; accepted values: bits, hex"
        )
    output_tap = take("turbo", "output_tap", "combined").strip()
    if output_tap not in ("combined", "last_decisions"):
        raise ConfigError(
            f"unknown output_tap {output_tap!r}; accepted values: combined, last_decisions"
        )

    def opt_int(section, key):
        raw = take(section, key)
        return None if raw is None else _parse_int(section, key, raw)

    def opt_float(section, key):
        raw = take(section, key)
        return None if raw is None else _parse_float(section, key, raw)

    cfg = RunConfig(
        component=take("code", "component", "bch-63-51").strip(),
        component2=(take("code", "component2") or "").strip() or None,
        m_values=m_values,
        interleaver_kinds=kinds,
        interleaver_seed=_parse_int("interleaver", "seed", take("interleaver", "seed", "0")),
        rows=opt_int("interleaver", "rows"),
        cols=opt_int("interleaver", "cols"),
        spread=opt_int("interleaver", "spread"),
        p=_parse_int("decoder", "p", take("decoder", "p", "4")),
        max_shifts=opt_int("decoder", "max_shifts"),
        threshold_enabled=_parse_bool(
            "decoder", "threshold_enabled", take("decoder", "threshold_enabled", "true")
        ),
        threshold_slack=_parse_float(
            "decoder", "threshold_slack", take("decoder", "threshold_slack", "2.0")
        ),
        threshold=opt_float("decoder", "threshold"),
        ebn0_db=ebn0,
        channel_seed=_parse_int("channel", "seed", take("channel", "seed", "0")),
        max_frames=_parse_int("channel", "max_frames", take("channel", "max_frames", "100000")),
        target_bit_errors=_parse_int(
            "channel", "target_bit_errors", take("channel", "target_bit_errors", "100")
        ),
        iterations=_parse_int("turbo", "iterations", take("turbo", "iterations", "6")),
        output_tap=output_tap,
        stop_on_convergence=_parse_bool(
            "turbo", "stop_on_convergence", take("turbo", "stop_on_convergence", "false")
        ),
        calibration_grid=grid,
        calibration_frames=_parse_int(
            "calibration", "frames_per_point", take("calibration", "frames_per_point", "2000")
        ),
        calibration_bins=_parse_int("calibration", "bins", take("calibration", "bins", "32")),
        calibration_seed=_parse_int("calibration", "seed", take("calibration", "seed", "0")),
        output=take("run", "output"),
        system=system,
        workers=_parse_int("run", "workers", take("run", "workers", str(default_workers()))),
        table_dir=take("run", "table_dir"),
        trace_output=take("run", "trace_output"),
        frame_bits=_parse_int("run", "frame_bits", take("run", "frame_bits", "1000")),
        word_format=word_format,
        progress=_parse_bool("run", "progress", take("run", "progress", "false")),
    )
    assert not values, f"schema keys not consumed: {sorted(values)}"
    _validate(cfg)
    return cfg


def _validate(cfg: RunConfig) -> None:
    if cfg.p < 0 or cfg.p > 20:
        raise ConfigError("[decoder] p must lie in 0..20")
    if cfg.iterations < 1:
        raise ConfigError("[turbo] iterations must be >= 1")
    if cfg.max_frames < 1 or cfg.target_bit_errors < 1:
        raise ConfigError("[channel] max_frames and target_bit_errors must be >= 1")
    if cfg.calibration_frames < 1000:
        raise ConfigError("[calibration] frames_per_point must be >= 1000")
    if cfg.workers < 1:
        raise ConfigError("[run] workers must be >= 1")
    if cfg.frame_bits < 1:
        raise ConfigError("[run] frame_bits must be >= 1")


def decoder_config(cfg: RunConfig) -> DecoderConfig:
    return DecoderConfig(
        p=cfg.p,
        max_shifts=cfg.max_shifts,
        threshold_enabled=cfg.threshold_enabled,
        threshold=cfg.threshold,
        threshold_slack=cfg.threshold_slack,
    )


def _resolve_output(cfg: RunConfig, path: str) -> Path:
    base = Path(os.environ.get(OUTPUT_DIR_ENV, "."))
    p = Path(path)
    return p if p.is_absolute() else base / p


def _table_dir(cfg: RunConfig) -> Path:
    if cfg.table_dir is not None:
        return _resolve_output(cfg, cfg.table_dir)
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / "tables"


def _table_path(cfg: RunConfig, code_name: str) -> Path:
    key = calibration_key(
        code_name, cfg.p, cfg.calibration_grid, cfg.calibration_frames,
        cfg.calibration_bins, cfg.calibration_seed,
    )
    return _table_dir(cfg) / f"{code_name}-p{cfg.p}-{key}.csv"


def build_gpcb(cfg: RunConfig, m_subblocks: int, kind: str) -> GpcbCode:
    c1 = get_code(cfg.component)
    c2 = get_code(cfg.component2) if cfg.component2 else c1
    size = m_subblocks * c1.k
    rows, cols = cfg.rows, cfg.cols
    if kind in ("block", "diagonal", "cyclic", "helical"):
        rows = rows if rows is not None else m_subblocks
        cols = cols if cols is not None else c1.k
        if rows * cols != size:
            raise ConfigError(
                f"[interleaver] rows*cols = {rows}*{cols} != N = {size}"
            )
    interleaver = make_interleaver(
        kind, size, rows=rows, cols=cols, seed=cfg.interleaver_seed, spread=cfg.spread
    )
    return GpcbCode(c1, c2, m_subblocks, interleaver)


def _load_table(cfg: RunConfig, code_name: str) -> ConfidenceTable:
    path = _table_path(cfg, code_name)
    if not path.exists():
        raise RuntimeError(
            f"missing confidence table {path}; run `gpcb calibrate <config>` "
            "with the same [code], [decoder] and [calibration] settings first"
        )
    return ConfidenceTable.load(path)


def build_system(cfg: RunConfig, m_subblocks: int, kind: str):
    if cfg.system == "uncoded":
        return UncodedBpsk(frame_bits=cfg.frame_bits)
    if cfg.system == "component":
        return ComponentSystem(get_code(cfg.component), decoder_config(cfg))
    gpcb = build_gpcb(cfg, m_subblocks, kind)
    table1 = _load_table(cfg, gpcb.c1.name)
    table2 = _load_table(cfg, gpcb.c2.name) if gpcb.c2.name != gpcb.c1.name else None
    turbo_cfg = TurboConfig(
        table1=table1,
        table2=table2,
        max_iterations=cfg.iterations,
        component_cfg=decoder_config(cfg),
        output_tap=cfg.output_tap,
        stop_on_convergence=cfg.stop_on_convergence,
    )
    return TurboSystem(gpcb=gpcb, turbo_cfg=turbo_cfg)


# ---------------------------------------------------------------------------
# CSV plumbing

def _fmt(value) -> str:
    return repr(float(value)) if isinstance(value, float) else str(value)


def write_csv(records: list[BerRecord], path) -> None:
    """Write records with the exact sweep header; full float precision."""
    try:
        with open(path, "w") as fh:
            fh.write(CSV_HEADER + "\n")
            for r in records:
                fh.write(
                    ",".join(
                        _fmt(v)
                        for v in (
                            r.ebn0_db, r.iteration, r.frames, r.bits, r.bit_errors,
                            r.frame_errors, r.ber, r.fer, r.mean_test_sequences,
                        )
                    )
                    + "\n"
                )
    except OSError as exc:
        raise RuntimeError(f"cannot write {path}: {exc}") from exc


def read_csv(path) -> list[BerRecord]:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CSV_HEADER:
            raise RuntimeError(f"{path}: unexpected header {header!r}")
        out = []
        for line in fh:
            if not line.strip():
                continue
            f = line.split(",")
            out.append(
                BerRecord(
                    ebn0_db=float(f[0]), iteration=int(f[1]), frames=int(f[2]),
                    bits=int(f[3]), bit_errors=int(f[4]), frame_errors=int(f[5]),
                    ber=float(f[6]), fer=float(f[7]), mean_test_sequences=float(f[8]),
                )
            )
    return out


# ---------------------------------------------------------------------------
# word files for encode/decode round trips

def _read_words(path, width: int, word_format: str) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            if word_format == "hex" or line.startswith("0x"):
                value = int(line, 16)
                bits = [(value >> i) & 1 for i in range(width)]
            else:
                if len(line) != width or set(line) - {"0", "1"}:
                    raise RuntimeError(
                        f"{path}:{lineno}: expected {width} binary digits"
                    )
                bits = [int(c) for c in line]
            rows.append(bits)
    if not rows:
        raise RuntimeError(f"{path}: no frames found")
    return np.array(rows, dtype=np.uint8)


def _write_words(path, frames: np.ndarray, word_format: str) -> None:
    with open(path, "w") as fh:
        for row in frames:
            if word_format == "hex":
                value = sum(int(b) << i for i, b in enumerate(row))
                fh.write(f"0x{value:x}\n")
            else:
                fh.write("".join(str(int(b)) for b in row) + "\n")


# ---------------------------------------------------------------------------
# commands

def _require(cfg: RunConfig, what: str, ok: bool) -> None:
    if not ok:
        raise ConfigError(what)


def _scalar_axes(cfg: RunConfig, command: str) -> tuple[int, str]:
    _require(
        cfg,
        f"{command} needs a single M value in [code] (got {cfg.m_values})",
        len(cfg.m_values) == 1,
    )
    _require(
        cfg,
        f"{command} needs a single interleaver kind (got {cfg.interleaver_kinds})",
        len(cfg.interleaver_kinds) == 1,
    )
    return cfg.m_values[0], cfg.interleaver_kinds[0]


def _run_points(cfg: RunConfig, system, out_path: Path) -> None:
    _require(cfg, "[channel] ebn0_db is required", bool(cfg.ebn0_db))
    records = []
    for ebn0 in cfg.ebn0_db:
        channel = ChannelConfig(
            ebn0_db=ebn0,
            code_rate=system.rate,
            seed=cfg.channel_seed,
            max_frames=cfg.max_frames,
            target_bit_errors=cfg.target_bit_errors,
        )
        trace = None
        if cfg.trace_output is not None:
            t = _resolve_output(cfg, cfg.trace_output)
            trace = t.with_name(f"{t.stem}-e{ebn0:g}{t.suffix}")
        point = run_ber(system, channel, workers=cfg.workers, trace_path=trace)
        records.extend(point)
        if cfg.progress:
            last = point[-1]
            print(
                f"ebn0={ebn0:g} frames={last.frames} ber={last.ber:.3g}",
                file=sys.stderr,
            )
    out_path.parent.mkdir(parents=True, exist_ok=True)
    write_csv(records, out_path)
    print(out_path)


def cmd_simulate(cfg: RunConfig) -> int:
    _require(cfg, "[run] output is required for simulate", cfg.output is not None)
    m, kind = _scalar_axes(cfg, "simulate")
    system = build_system(cfg, m, kind)
    _run_points(cfg, system, _resolve_output(cfg, cfg.output))
    return 0


def cmd_sweep(cfg: RunConfig) -> int:
    _require(cfg, "[run] output is required for sweep", cfg.output is not None)
    base = _resolve_output(cfg, cfg.output)
    for m in cfg.m_values:
        for kind in cfg.interleaver_kinds:
            suffix = ""
            if len(cfg.m_values) > 1:
                suffix += f"-M{m}"
            if len(cfg.interleaver_kinds) > 1:
                suffix += f"-{kind}"
            out = base.with_name(f"{base.stem}{suffix}{base.suffix}")
            system = build_system(cfg, m, kind)
            _run_points(cfg, system, out)
    return 0


def cmd_calibrate(cfg: RunConfig) -> int:
    names = [cfg.component] + (
        [cfg.component2] if cfg.component2 and cfg.component2 != cfg.component else []
    )
    table_dir = _table_dir(cfg)
    table_dir.mkdir(parents=True, exist_ok=True)
    for name in names:
        code = get_code(name)
        table = calibrate_confidence(
            code,
            decoder_config(cfg),
            list(cfg.calibration_grid),
            cfg.calibration_frames,
            bins=cfg.calibration_bins,
            seed=cfg.calibration_seed,
        )
        path = _table_path(cfg, code.name)
        table.save(path)
        print(path)
    return 0


def cmd_limits(cfg: RunConfig, rate: float | None) -> int:
    if rate is None:
        c1 = get_code(cfg.component)
        c2 = get_code(cfg.component2) if cfg.component2 else c1
        gpcb = GpcbCode(c1, c2, 1, make_interleaver("identity", c1.k))
        rate = float(gpcb_rate(gpcb))
    print(f"rate {rate!r}")
    print(f"unconstrained_ebn0_db {shannon_limit(rate, constrained=False)!r}")
    print(f"bpsk_constrained_ebn0_db {shannon_limit(rate, constrained=True)!r}")
    return 0


def cmd_codes() -> int:
    print("name n k d rate generator")
    for code in list_codes():
        print(
            f"{code.name} {code.n} {code.k} {code.d} "
            f"{code.k}/{code.n} {code.generator}"
        )
    return 0


def cmd_encode(cfg: RunConfig, input_path: str, output_path: str) -> int:
    m, kind = _scalar_axes(cfg, "encode")
    gpcb = build_gpcb(cfg, m, kind)
    frames = _read_words(input_path, gpcb.N, cfg.word_format)
    from .concatenation import gpcb_encode

    coded = np.stack([gpcb_encode(gpcb, row) for row in frames])
    _write_words(output_path, coded, cfg.word_format)
    return 0


def cmd_decode(cfg: RunConfig, input_path: str, output_path: str) -> int:
    m, kind = _scalar_axes(cfg, "decode")
    system = build_system(cfg, m, kind)
    _require(
        cfg,
        "[channel] ebn0_db is required for decode (sets the decoder noise level)",
        bool(cfg.ebn0_db),
    )
    from .channel import bpsk_modulate, sigma_from_ebn0

    if isinstance(system, TurboSystem):
        width = system.gpcb.L
    elif isinstance(system, ComponentSystem):
        width = system.code.n
    else:
        width = system.frame_bits
    frames = _read_words(input_path, width, cfg.word_format)
    sigma = sigma_from_ebn0(system.rate, cfg.ebn0_db[0])
    decoded = np.stack(
        [system.decode(bpsk_modulate(row), sigma)[-1][0] for row in frames]
    )
    _write_words(output_path, decoded, cfg.word_format)
    return 0


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def main(argv=None) -> int:
    parser = _Parser(prog="gpcb", description=__doc__)
    parser.add_argument(
        "command",
        choices=["encode", "decode", "simulate", "calibrate", "sweep", "limits", "codes"],
    )
    parser.add_argument("config", nargs="?", help="path to the run config (INI)")
    parser.add_argument("--input", help="word file for encode/decode")
    parser.add_argument("--output", help="word file for encode/decode")
    parser.add_argument("--rate", type=float, help="rate override for limits")

    try:
        args = parser.parse_args(argv)
        if args.command == "codes":
            return cmd_codes()
        if args.command == "limits" and args.config is None:
            if args.rate is None:
                raise ConfigError("limits needs a config file or --rate")
            return cmd_limits(RunConfig(), args.rate)
        if args.config is None:
            raise ConfigError(f"{args.command} needs a config file")
        try:
            text = Path(args.config).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        cfg = parse_config(text)

        if args.command == "simulate":
            return cmd_simulate(cfg)
        if args.command == "sweep":
            return cmd_sweep(cfg)
        if args.command == "calibrate":
            return cmd_calibrate(cfg)
        if args.command == "limits":
            return cmd_limits(cfg, args.rate)
        if args.command in ("encode", "decode"):
            if args.input is None or args.output is None:
                raise ConfigError(f"{args.command} needs --input and --output")
            if args.command == "encode":
                return cmd_encode(cfg, args.input, args.output)
            return cmd_decode(cfg, args.input, args.output)
        raise ConfigError(f"unknown command {args.command}")
    except ConfigError as exc:
        print(f"gpcb: config error: {exc}", file=sys.stderr)
        return 1
    except (RuntimeError, CodeConstructionError, ValueError, OSError) as exc:
        print(f"gpcb: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
