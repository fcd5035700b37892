"""Command-line front end: scenario files, sweeps, JSON/CSV reports.

    entangled-banks thresholds --scenario p0.json
    entangled-banks sweep --sweep "p=0:0.001:0.01,r=1..3" --format csv
"""

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass
from typing import Dict, Iterator, List, Optional

from . import __version__
from .contagion import GENERATOR, Regime, classify_regime, monte_carlo, welfare_gains
from .errors import ModelError, RestrictionError, StructuralError
from .exact import literal
from .params import ModelParams, canonical_scenario, validate_params
from .thresholds import compute_thresholds
from .verification import run_verification

COMMANDS = ("validate", "thresholds", "classify", "simulate", "verify", "sweep")

EXIT_OK, EXIT_PARAMS, EXIT_IO, EXIT_INTERNAL = 0, 1, 2, 3

# Scenario-file key -> ModelParams attribute.
PARAM_KEYS = {
    "n": "n", "r": "r", "R_H": "R_H", "R_L": "R_L", "L": "L", "X": "X",
    "B0": "B_0", "B1": "B_1", "u": "u", "beta": "beta", "p": "p",
}
OPTIONAL_KEYS = {"seed", "trials", "insured", "intervene"}


class ScenarioError(ModelError):
    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


@dataclass(frozen=True)
class Scenario:
    params: ModelParams
    seed: int = 0
    trials: int = 10_000
    insured: Optional[bool] = None
    intervene: bool = False

    def to_json(self) -> dict:
        out = {key: getattr(self.params, attr) for key, attr in PARAM_KEYS.items()}
        out.update(seed=self.seed, trials=self.trials, intervene=self.intervene)
        if self.insured is not None:
            out["insured"] = self.insured
        return out


def scenario_from_dict(data) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = sorted(set(data) - set(PARAM_KEYS) - OPTIONAL_KEYS)
    if unknown:
        raise ScenarioError(f"unknown field {unknown[0]!r}", unknown[0])
    missing = [k for k in PARAM_KEYS if k not in data]
    if missing:
        raise ScenarioError(f"missing field {missing[0]!r}", missing[0])
    for key in ("n", "r", "seed", "trials"):
        if key in data and (isinstance(data[key], bool) or not isinstance(data[key], int)):
            raise ScenarioError(f"{key} must be an integer", key)
    for key in ("insured", "intervene"):
        if key in data and not isinstance(data[key], bool):
            raise ScenarioError(f"{key} must be true or false", key)
    for key in PARAM_KEYS:
        if isinstance(data[key], bool) or not isinstance(data[key], (int, float)):
            raise ScenarioError(f"{key} must be a number", key)
    params = ModelParams(**{attr: data[key] for key, attr in PARAM_KEYS.items()})
    trials = data.get("trials", 10_000)
    if trials < 1:
        raise ScenarioError("trials must be at least 1", "trials")
    return Scenario(
        params=params,
        seed=data.get("seed", 0),
        trials=trials,
        insured=data.get("insured"),
        intervene=data.get("intervene", False),
    )


def parse_scenario(path) -> Scenario:
    """Load a scenario file. Raises ``OSError`` for I/O problems, :class:`ModelError` otherwise."""
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"malformed JSON: {exc}") from exc
    return scenario_from_dict(data)


# -- sweeps --------------------------------------------------------------------


@dataclass(frozen=True)
class SweepSpec:
    p_values: tuple
    r_values: tuple
    base: ModelParams

    def points(self) -> Iterator[ModelParams]:
        for r in self.r_values:
            for p in self.p_values:
                yield self.base.replace(r=r, p=p)


def _p_axis(text) -> tuple:
    parts = text.split(":")
    if len(parts) == 1:
        return (float(parts[0]),)
    if len(parts) != 3:
        raise ScenarioError(f"p axis must be 'start:step:end', got {text!r}", "p")
    start, step, end = (literal(float(x)) for x in parts)
    if step <= 0:
        raise ScenarioError("p step must be positive", "p")
    count = int((end - start) / step) + 1 if end >= start else 0
    # Exact decimal stepping so grid points are the literals a user would type.
    return tuple(float(start + k * step) for k in range(count))


def _r_axis(text) -> tuple:
    if ".." in text:
        lo, hi = (int(x) for x in text.split(".."))
        return tuple(range(lo, hi + 1))
    return tuple(int(x) for x in text.split("|"))


def parse_sweep(text: str, base: ModelParams) -> SweepSpec:
    """Parse ``"p=a:step:b,r=c..d"``; either axis may be omitted to keep the base value."""
    axes = {}
    try:
        for part in filter(None, (s.strip() for s in text.split(","))):
            key, _, value = part.partition("=")
            key = key.strip()
            if key == "p":
                axes["p"] = _p_axis(value)
            elif key == "r":
                axes["r"] = _r_axis(value)
            else:
                raise ScenarioError(f"unknown sweep axis {key!r}", key)
    except ValueError as exc:
        raise ScenarioError(f"malformed sweep spec {text!r}: {exc}") from exc
    spec = SweepSpec(axes.get("p", (base.p,)), axes.get("r", (base.r,)), base)
    if not spec.p_values or not spec.r_values:
        raise ScenarioError("sweep grid is empty")
    for point in spec.points():
        pass  # ModelParams raises StructuralError for a bad point
    return spec


SWEEP_COLUMNS = (
    "p", "r", "regime", "p_soc", "p_ind", "p_star",
    "social_gain", "private_deviation_gain", "restriction_status",
)


def sweep_point(params: ModelParams) -> Dict[str, object]:
    status = validate_params(params).summary()
    row = dict.fromkeys(SWEEP_COLUMNS)
    row.update(p=params.p, r=params.r, restriction_status=status)
    try:
        t = compute_thresholds(params, check=False)
    except ModelError as exc:
        row["restriction_status"] = f"{status};degenerate:{exc}" if status != "ok" else f"degenerate:{exc}"
        return row
    report = classify_regime(params, t)
    gains = welfare_gains(params, t)
    row.update(
        regime=report.regime.value,
        p_soc=t.p_soc,
        p_ind=t.p_ind,
        p_star=t.p_star,
        **gains,
    )
    return row


def sweep(spec: SweepSpec) -> Iterator[Dict[str, object]]:
    """Rows in r-major, then p order; invalid points are kept and labelled."""
    for params in spec.points():
        yield sweep_point(params)


# -- reports -------------------------------------------------------------------


def _meta(seed) -> dict:
    return {"generator": GENERATOR, "seed": seed, "version": __version__}


def run(command: str, scenario: Scenario, *, sweep_text: Optional[str] = None):
    """Execute ``command``; returns ``(exit_code, report)``.

    ``report`` is a dict, or for ``sweep`` a list of row dicts.
    """
    params = scenario.params
    meta = _meta(scenario.seed)
    if command == "validate":
        report = validate_params(params)
        body = {
            "passed": report.passed,
            "restrictions": [
                {"number": c.number, "name": c.name, "passed": c.passed,
                 "lhs": c.lhs, "relation": c.relation, "rhs": c.rhs}
                for c in report.checks
            ],
        }
        return (EXIT_OK if report.passed else EXIT_PARAMS), {**meta, **body}
    if command == "thresholds":
        t = compute_thresholds(params)
        return EXIT_OK, {**meta, **t.as_dict(), "above_one": list(t.above_one)}
    if command == "classify":
        t = compute_thresholds(params)
        report = classify_regime(params, t)
        body = report.as_dict()
        body.update(welfare_gains(params, t))
        body.update(p=params.p, r=params.r, n=params.n)
        return EXIT_OK, {**meta, **body}
    if command == "simulate":
        t = compute_thresholds(params)
        insured = scenario.insured
        if insured is None:
            insured = classify_regime(params, t).regime is Regime.INSURED_STABLE
        mc = monte_carlo(params, scenario.trials, scenario.seed, insured, intervene=scenario.intervene)
        return EXIT_OK, {**meta, **mc.as_dict()}
    if command == "verify":
        checks = run_verification(params, seed=scenario.seed)
        ok = all(c.passed for c in checks)
        body = {"passed": ok, "checks": [c.as_dict() for c in checks]}
        return (EXIT_OK if ok else EXIT_INTERNAL), {**meta, **body}
    if command == "sweep":
        if not sweep_text:
            raise ScenarioError("sweep needs --sweep 'p=a:step:b,r=c..d'")
        spec = parse_sweep(sweep_text, params)
        rows = [{**row, **meta} for row in sweep(spec)]
        return EXIT_OK, rows
    raise ValueError(f"unknown command {command!r}")


def flatten(obj, prefix="") -> Dict[str, object]:
    """Flatten nested dicts/lists into dotted keys for CSV output."""
    out = {}
    if isinstance(obj, dict):
        for k, v in obj.items():
            out.update(flatten(v, f"{prefix}{k}."))
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            out.update(flatten(v, f"{prefix}{i}."))
    else:
        out[prefix[:-1]] = obj
    return out


def _csv_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format(value, ".17g")
    return value


def to_csv(report) -> str:
    rows = report if isinstance(report, list) else [report]
    rows = [flatten(r) for r in rows]
    header: List[str] = []
    for row in rows:
        header.extend(k for k in row if k not in header)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=header, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(v) for k, v in row.items()})
    return buf.getvalue()


def to_json(report) -> str:
    # repr-based float output is the shortest string that round-trips binary64.
    return json.dumps(report, indent=2, allow_nan=True) + "\n"


def _bool(text):
    lowered = text.lower()
    if lowered in ("true", "1", "yes"):
        return True
    if lowered in ("false", "0", "no"):
        return False
    raise argparse.ArgumentTypeError(f"expected true or false, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entangled-banks",
        description="Thresholds, regimes and cascades in a ring of hedged banks.",
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--scenario", help="JSON scenario file (default: built-in canonical scenario)")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    parser.add_argument("--output", help="write the report here instead of stdout")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--trials", type=int)
    parser.add_argument("--sweep", dest="sweep_text", help="grid, e.g. 'p=0:0.001:0.01,r=1..3'")
    parser.add_argument("--insured", type=_bool)
    parser.add_argument("--intervene", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.scenario:
            scenario = parse_scenario(args.scenario)
        else:
            scenario = Scenario(canonical_scenario())
        overrides = {
            k: v for k, v in (("seed", args.seed), ("trials", args.trials), ("insured", args.insured))
            if v is not None
        }
        if args.intervene:
            overrides["intervene"] = True
        if overrides:
            scenario = scenario_from_dict({**scenario.to_json(), **overrides})
        code, report = run(args.command, scenario, sweep_text=args.sweep_text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (StructuralError, ScenarioError) as exc:
        field = getattr(exc, "field", None)
        prefix = f"error in field {field!r}: " if field else "error: "
        print(prefix + str(exc), file=sys.stderr)
        return EXIT_PARAMS
    except (RestrictionError, ModelError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except Exception as exc:  # noqa: BLE001 - surfaced as an internal failure
        print(f"internal error: {exc!r}", file=sys.stderr)
        return EXIT_INTERNAL

    text = to_csv(report) if args.format == "csv" else to_json(report)
    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
