"""Command-line interface: encode, predict, and report workflows.

Settings resolve with flag > config file > built-in default precedence,
and every value is validated before any computation with the offending
source named on failure. Outputs are deterministic: no timestamps, '.'
decimal separator, reals at fixed precision.

Exit codes: 0 success, 1 input/data error, 2 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from dataclasses import dataclass
from typing import Sequence, TextIO

from . import __version__
from .encoder import (
    MAX_CLASS_LEVEL,
    MIN_CLASS_LEVEL,
    EncodedCorpus,
    Reference,
    encode_corpus,
)
from .errors import (
    BadClassLevelError,
    BadConfigError,
    BadReferenceError,
    NoTestStepsError,
    SymcastError,
)
from .ingest import Corpus, read_numeric_series, read_text_corpus
from .learner import ADDITIVE_SUBTRACTIVE, MULTIPLICATIVE_DIVISIVE, LearnerConfig
from .pipeline import (
    RunConfig,
    baseline_persistence,
    decode_trace,
    mape,
    read_trace,
    run_continual,
    write_trace,
)

_CONFIG_ERRORS = (BadConfigError, BadClassLevelError, BadReferenceError)


@dataclass
class Settings:
    """Merged view of all tunable parameters."""

    class_level: int = 5
    reference: Reference = "last"
    train_fraction: float = 0.35
    population: int = 1000
    max_adjust: float = 2.0
    rule: str = ADDITIVE_SUBTRACTIVE
    lp: float = 0.0
    k_winners: int = 1
    freeze_after_train: bool = False

    def learner_config(self) -> LearnerConfig:
        return LearnerConfig(
            population_size=self.population,
            max_deviant_adjust=self.max_adjust,
            rule_mode=self.rule,
            bias=self.lp,
            k_winners=self.k_winners,
            class_level=self.class_level,
        )

    def run_config(self) -> RunConfig:
        return RunConfig(
            train_fraction=self.train_fraction,
            learner=self.learner_config(),
            freeze_after_train=self.freeze_after_train,
        )


def _parse_class_level(text: str) -> int:
    value = int(text)
    if not (MIN_CLASS_LEVEL <= value <= MAX_CLASS_LEVEL):
        raise ValueError(f"class level must be in [{MIN_CLASS_LEVEL}, {MAX_CLASS_LEVEL}], got {value}")
    return value


def _parse_reference(text: str) -> Reference:
    if text in ("last", "first"):
        return text
    try:
        row = int(text)
    except ValueError:
        raise ValueError(f"reference must be last, first, or a row number, got {text!r}") from None
    if row < 1:
        raise ValueError(f"reference row number must be >= 1, got {row}")
    return row - 1  # row numbers are 1-based on the command line


def _parse_train_fraction(text: str) -> float:
    value = float(text)
    if not (0.0 < value < 1.0):
        raise ValueError(f"train fraction must be in (0, 1), got {value}")
    return value


def _parse_population(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"population must be >= 1, got {value}")
    return value


def _parse_max_adjust(text: str) -> float:
    value = float(text)
    if not (value > 0):
        raise ValueError(f"max adjust must be > 0, got {value}")
    return value


def _parse_rule(text: str) -> str:
    if text not in (ADDITIVE_SUBTRACTIVE, MULTIPLICATIVE_DIVISIVE):
        raise ValueError(
            f"rule must be {ADDITIVE_SUBTRACTIVE} or {MULTIPLICATIVE_DIVISIVE}, got {text!r}"
        )
    return text


def _parse_lp(text: str) -> float:
    return float(text)


def _parse_k_winners(text: str) -> int:
    value = int(text)
    if value < 1:
        raise ValueError(f"k winners must be >= 1, got {value}")
    return value


def _parse_bool(text: str) -> bool:
    lowered = text.strip().lower()
    if lowered in ("true", "yes", "1"):
        return True
    if lowered in ("false", "no", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


# field name -> (flag spelling, parser)
_FIELDS = {
    "class_level": ("--class-level", _parse_class_level),
    "reference": ("--reference", _parse_reference),
    "train_fraction": ("--train-fraction", _parse_train_fraction),
    "population": ("--population", _parse_population),
    "max_adjust": ("--max-adjust", _parse_max_adjust),
    "rule": ("--rule", _parse_rule),
    "lp": ("--lp", _parse_lp),
    "k_winners": ("--k-winners", _parse_k_winners),
    "freeze_after_train": ("--freeze-after-train", _parse_bool),
}


def _read_config_file(path: str) -> dict[str, tuple[str, int]]:
    """Flat key = value file with # comments; returns raw values + line numbers."""
    entries: dict[str, tuple[str, int]] = {}
    with open(path, "r", encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise BadConfigError(
                    "config file", f"{path} line {line_number}: expected key = value"
                )
            key, _, value = line.partition("=")
            key = key.strip()
            value = value.strip()
            if key not in _FIELDS:
                raise BadConfigError(
                    "config file", f"{path} line {line_number}: unknown key {key!r}"
                )
            entries[key] = (value, line_number)
    return entries


def _merge_settings(args: argparse.Namespace) -> Settings:
    file_entries: dict[str, tuple[str, int]] = {}
    if getattr(args, "config", None):
        file_entries = _read_config_file(args.config)

    settings = Settings()
    for name, (flag, parser) in _FIELDS.items():
        flag_value = getattr(args, name, None)
        if flag_value is not None:
            raw, source = flag_value, f"flag {flag}"
        elif name in file_entries:
            raw, line_number = file_entries[name]
            source = f"config file {args.config} line {line_number}"
        else:
            continue
        try:
            setattr(settings, name, parser(raw))
        except ValueError as exc:
            raise BadConfigError(name, f"{exc} (from {source})") from None

    if settings.k_winners > settings.population:
        raise BadConfigError(
            "k_winners",
            f"must be <= population ({settings.population}), got {settings.k_winners}",
        )
    return settings


def _read_corpus(args: argparse.Namespace) -> Corpus:
    reader = read_numeric_series if getattr(args, "numeric", False) else read_text_corpus
    if args.input == "-":
        return reader(sys.stdin.buffer, source="<stdin>")
    with open(args.input, "rb") as handle:
        return reader(handle, source=args.input)


def _open_out(path: str | None) -> tuple[TextIO, bool]:
    """Output stream plus whether it must be closed (i.e. is a real file)."""
    if path is None or path == "-":
        return sys.stdout, False
    return open(path, "w", encoding="utf-8", newline=""), True


def _write_encode_report(encoded: EncodedCorpus, corpus: Corpus, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["row_index", "symbol", "match_value", "scale", "class"])
    for row, (symbol, score, cls) in enumerate(
        zip(corpus.items, encoded.scores, encoded.classes.classes), start=1
    ):
        writer.writerow([row, symbol, score.value, f"{float(score.scale):.6f}", cls])
    stream.write("\n")
    writer.writerow(["class", "symbol"])
    for slot, symbol in enumerate(encoded.memory.slots, start=1):
        writer.writerow([slot, "[]" if symbol is None else symbol])


def cmd_encode(args: argparse.Namespace) -> int:
    settings = _merge_settings(args)
    corpus = _read_corpus(args)
    encoded = encode_corpus(corpus.items, settings.class_level, settings.reference)
    stream, close = _open_out(args.out)
    try:
        _write_encode_report(encoded, corpus, stream)
    finally:
        if close:
            stream.close()
    return 0


def _write_decoded(decoded, stream: TextIO) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(["predicted_symbol", "expected_symbol", "exact"])
    for step in decoded:
        writer.writerow(
            [step.predicted_symbol, step.expected_symbol, "true" if step.exact else "false"]
        )


def _summary_lines(trace, baseline=None) -> list[str]:
    test_steps = trace.test_steps()
    exact = [step for step in test_steps if step.predicted_class == step.expected_class]
    lines = [
        f"train_elements: {len(trace.train_steps()) + 1}",
        f"test_steps: {len(test_steps)}",
        f"exact_test_matches: {len(exact)}",
    ]
    if exact:
        counts: dict[int, int] = {}
        for step in exact:
            counts[step.expected_class] = counts.get(step.expected_class, 0) + 1
        breakdown = " ".join(f"{cls}={counts[cls]}" for cls in sorted(counts))
        lines.append(f"exact_test_matches_by_class: {breakdown}")
    final_mape, _ = mape(trace)
    lines.append(f"final_mape_percent: {final_mape:.6f}")
    lines.append(f"final_deviant_mean: {trace.steps[-1].deviant_mean_after:.6f}")
    if baseline is not None:
        baseline_mape, _ = mape(baseline)
        lines.append(f"baseline_final_mape_percent: {baseline_mape:.6f}")
    return lines


def cmd_predict(args: argparse.Namespace) -> int:
    settings = _merge_settings(args)
    corpus = _read_corpus(args)
    encoded = encode_corpus(corpus.items, settings.class_level, settings.reference)
    run_config = settings.run_config()

    trace = run_continual(encoded.classes, run_config)
    baseline = baseline_persistence(encoded.classes, run_config) if args.baseline else None

    stream, close = _open_out(args.out)
    try:
        write_trace(trace, stream)
        if baseline is not None:
            stream.write("\n")
            write_trace(baseline, stream)
        if args.decode:
            stream.write("\n")
            _write_decoded(decode_trace(trace, encoded.memory), stream)
    finally:
        if close:
            stream.close()

    # Keep stdout machine-parseable when the trace itself goes to stdout.
    summary_stream = sys.stdout if close else sys.stderr
    for line in _summary_lines(trace, baseline):
        print(line, file=summary_stream)
    return 0


def _render_error_series_svg(series: Sequence[float]) -> str:
    width, height, margin = 640, 360, 48
    top = max(max(series), 1e-9)
    n = len(series)

    def x_at(i: int) -> float:
        return margin + (width - 2 * margin) * (i / (n - 1) if n > 1 else 0.5)

    def y_at(value: float) -> float:
        return height - margin - (height - 2 * margin) * (value / top)

    points = " ".join(f"{x_at(i):.2f},{y_at(v):.2f}" for i, v in enumerate(series))
    return (
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}">\n'
        f'<rect width="{width}" height="{height}" fill="white"/>\n'
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>\n'
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" '
        f'y2="{height - margin}" stroke="black"/>\n'
        f'<text x="{margin}" y="{margin - 8}" font-size="12">cumulative MAPE '
        f"(max {top:.6f}%)</text>\n"
        f'<text x="{width - margin}" y="{height - margin + 16}" font-size="12" '
        f'text-anchor="end">test step {n}</text>\n'
        f'<polyline points="{points}" fill="none" stroke="#1f6fb2" stroke-width="2"/>\n'
        f"</svg>\n"
    )


def cmd_report(args: argparse.Namespace) -> int:
    if args.input == "-":
        trace = read_trace(io.StringIO(sys.stdin.read()))
    else:
        with open(args.input, "r", encoding="utf-8") as handle:
            trace = read_trace(handle)

    series = [f"{value:.6f}" for value in trace.cumulative_mape]
    if not series:
        raise NoTestStepsError("trace has no test steps to report")

    stream, close = _open_out(args.out)
    try:
        stream.write("test_step,cumulative_mape\n")
        for step, value in enumerate(series, start=1):
            stream.write(f"{step},{value}\n")
    finally:
        if close:
            stream.close()

    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as handle:
            handle.write(_render_error_series_svg(trace.cumulative_mape))
    return 0


def _add_common_io(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--input", required=True, help="input path, or - for stdin")
    parser.add_argument("--out", help="output path (default: stdout)")


def _add_config_flags(parser: argparse.ArgumentParser, names: Sequence[str]) -> None:
    parser.add_argument("--config", help="key = value configuration file")
    helps = {
        "class_level": f"number of integer classes, {MIN_CLASS_LEVEL}..{MAX_CLASS_LEVEL}",
        "reference": "reference row: last, first, or a 1-based row number",
        "train_fraction": "fraction of elements used as the train prefix",
        "population": "number of candidate adjustment magnitudes",
        "max_adjust": "largest adjustment magnitude",
        "rule": f"update rule: {ADDITIVE_SUBTRACTIVE} or {MULTIPLICATIVE_DIVISIVE}",
        "lp": "bias added when a prediction is exact",
        "k_winners": "how many candidates the winner scan keeps",
    }
    for name in names:
        flag, _ = _FIELDS[name]
        parser.add_argument(flag, dest=name, metavar="V", help=helps[name])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symcast",
        description="Continual one-step-ahead prediction over symbol streams.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    encode = commands.add_parser("encode", help="encode a corpus into integer classes")
    _add_common_io(encode)
    _add_config_flags(encode, ["class_level", "reference"])
    encode.add_argument("--numeric", action="store_true", help="parse lines as numbers")
    encode.set_defaults(func=cmd_encode)

    predict = commands.add_parser("predict", help="encode, then continually predict")
    _add_common_io(predict)
    _add_config_flags(
        predict,
        ["class_level", "reference", "train_fraction", "population",
         "max_adjust", "rule", "lp", "k_winners"],
    )
    predict.add_argument("--numeric", action="store_true", help="parse lines as numbers")
    predict.add_argument("--baseline", action="store_true",
                         help="append a persistence-baseline trace")
    predict.add_argument("--decode", action="store_true",
                         help="append decoded symbol pairs")
    predict.add_argument("--freeze-after-train", dest="freeze_after_train",
                         action="store_const", const="true",
                         help="stop learning when the test phase begins")
    predict.set_defaults(func=cmd_predict)

    report = commands.add_parser("report", help="error-response series from a trace")
    _add_common_io(report)
    report.add_argument("--svg", metavar="PATH", help="also write a line chart")
    report.set_defaults(func=cmd_report)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (SymcastError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
