"""``negwit`` command line: run one experiment, write one CSV.

Exit codes: 0 success, 2 configuration error, 3 numeric failure,
4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from .experiments import COMMANDS, ConfigError, ExperimentConfig, Table, run
from .linalg import ConvergenceError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _float_list(text):
    try:
        return [float(x) for x in text.replace(";", ",").split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="negwit", description="Log Negativity witness experiments.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", type=Path, help="JSON config file; flags override its keys")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", type=Path, help="output CSV (default: stdout)")
    p.add_argument("--samples", type=int)
    p.add_argument("--dim-M", dest="M", type=int, help="subsystem dimension is M + 1")
    p.add_argument("--class", dest="cls", help="amplitude class tag")
    p.add_argument("--eta", type=_float_list)
    p.add_argument("--p-grid", dest="p_grid", type=_float_list)
    p.add_argument("--k", type=int)
    p.add_argument("--bins", type=int)
    p.add_argument("--beta1", type=float)
    p.add_argument("--beta2-grid", dest="beta2_grid", type=_float_list)
    p.add_argument("--base", choices=("projector", "identity"))
    p.add_argument("--same-unitary", dest="same_unitary", action="store_true", default=None)
    p.add_argument("--same-row", dest="force_same_row", action="store_true", default=None)
    p.add_argument("--inject-maximally-mixed", dest="inject_maximally_mixed",
                   action="store_true", default=None)
    p.add_argument("--jobs", type=int, help="worker processes (output order is unaffected)")
    p.add_argument("--sorted", action="store_true", default=None,
                   help="also write <stem>.sorted.csv ordered by ln_exact")
    p.add_argument("--force", action="store_true", default=None, help="overwrite existing outputs")
    p.add_argument("--emit-plotscript", dest="emit_plotscript", action="store_true", default=None)
    return p


def load_config(args) -> ExperimentConfig:
    mapping = {}
    if args.config is not None:
        try:
            mapping = json.loads(args.config.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{args.config}: invalid JSON ({exc})") from exc
        if not isinstance(mapping, dict):
            raise ConfigError(f"{args.config}: top level must be an object")
    overrides = {k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None}
    mapping.update(overrides)
    if "out" in mapping and mapping["out"] is not None:
        mapping["out"] = str(mapping["out"])
    try:
        return ExperimentConfig.from_mapping(args.command, mapping)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _cell(value):
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    for line in table.comments:
        buf.write(f"# {line}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def plot_script(csv_path: Path, table: Table) -> str:
    """A generic gnuplot script plotting every column against the first."""
    lines = [
        "set datafile separator ','",
        "set datafile commentschars '#'",
        "set key autotitle columnhead",
        f"set xlabel '{table.columns[0]}'",
        f"plot for [c=2:{len(table.columns)}] '{csv_path.name}' using 1:c with points",
    ]
    return "\n".join(lines) + "\n"


def _sibling(path: Path, suffix: str) -> Path:
    return path.with_name(f"{path.stem}.{suffix}{path.suffix or '.csv'}")


def outputs_for(cfg: ExperimentConfig, table: Table, out: Path) -> dict[Path, str]:
    files = {out: render_csv(table)}
    variants = list(table.variants)
    if cfg.sorted and "ln_exact" in table.columns and not any(s == "sorted" for s, _, _ in variants):
        variants.append(("sorted", "ln_exact", True))
    for suffix, column, descending in variants:
        files[_sibling(out, suffix)] = render_csv(table.sorted_by(column, descending))
    if cfg.emit_plotscript:
        files[out.with_suffix(".gp")] = plot_script(out, table)
    return files


def write_outputs(files: dict[Path, str], force: bool) -> None:
    clashes = [p for p in files if p.exists()]
    if clashes and not force:
        raise FileExistsError(f"refusing to overwrite {clashes[0]} (use --force)")
    for path, text in files.items():
        path.write_text(text, encoding="utf-8", newline="")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args)
        table = run(cfg)
        cfg = cfg.resolved()
        if cfg.out is None:
            # stdout gets the main table only; sibling files need --out
            sys.stdout.write(render_csv(table))
        else:
            write_outputs(outputs_for(cfg, table, Path(cfg.out)), cfg.force)
    except ConfigError as exc:
        print(f"negwit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        print(f"negwit: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"negwit: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        # parameter-driven rejections such as coherent truncation
        print(f"negwit: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
