"""File formats: flat configs, price tables, state sequences, chains, code tables, reports."""
import csv
import datetime as _dt
import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import InputError

SIG_DIGITS = 12


# -- config ------------------------------------------------------------------

def read_config(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    cfg = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InputError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        cfg[key] = value
    return cfg


def parse_overrides(items):
    out = {}
    for item in items or ():
        if "=" not in item:
            raise InputError(f"override {item!r} is not KEY=VALUE")
        k, v = item.split("=", 1)
        out[k.strip()] = v.strip()
    return out


def _num(key, text, kind=float):
    try:
        return kind(text)
    except ValueError:
        raise InputError(f"{key}: cannot parse {text!r} as {kind.__name__}") from None


def get_float(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise InputError(f"missing required key {key!r}")
        return default
    v = cfg[key]
    return float(v) if isinstance(v, (int, float)) else _num(key, v)


def get_int(cfg, key, default=None):
    if key not in cfg:
        if default is None:
            raise InputError(f"missing required key {key!r}")
        return default
    v = cfg[key]
    return int(v) if isinstance(v, int) else _num(key, str(v), int)


def get_list(cfg, key, default=None, kind=float):
    """Comma-separated list."""
    if key not in cfg:
        if default is None:
            raise InputError(f"missing required key {key!r}")
        return default
    v = cfg[key]
    if isinstance(v, (list, tuple)):
        return [kind(x) for x in v]
    return [_num(f"{key}[{j}]", s.strip(), kind) for j, s in enumerate(str(v).split(","))]


def get_matrix(cfg, key, default=None):
    """Rows separated by ``;``, entries by ``,``."""
    if key not in cfg:
        return default
    v = cfg[key]
    if not isinstance(v, str):
        return np.asarray(v, dtype=float)
    rows = [r for r in v.split(";") if r.strip()]
    mat = [[_num(f"{key}[{i}][{j}]", s.strip()) for j, s in enumerate(r.split(","))]
           for i, r in enumerate(rows)]
    if len({len(r) for r in mat}) > 1:
        raise InputError(f"{key}: rows have different lengths")
    return np.array(mat)


# -- price tables ------------------------------------------------------------

@dataclass(frozen=True)
class PriceTable:
    dates: tuple
    assets: tuple
    prices: np.ndarray  # (rows, assets)

    def year_fractions(self):
        days = np.array([(d - self.dates[0]).days for d in self.dates], dtype=float)
        return days / 365.0


def ingest_prices(path) -> PriceTable:
    """Read ``date,<asset...>`` CSV with ISO dates and positive prices."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows:
        raise InputError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if not header or header[0].lower() != "date" or len(header) < 2:
        raise InputError(f"{path}: header must be 'date,<asset names...>'")
    assets = tuple(header[1:])
    data = [r for r in rows[1:] if any(c.strip() for c in r)]
    if not data:
        raise InputError(f"{path}: no rows")
    dates, prices = [], []
    for k, r in enumerate(data, 1):
        where = f"{path}: row {k}"
        if len(r) != len(header):
            raise InputError(f"{where}: expected {len(header)} fields, got {len(r)}")
        try:
            d = _dt.date.fromisoformat(r[0].strip())
        except ValueError:
            raise InputError(f"{where}, column date: unparseable date {r[0]!r}") from None
        if dates and d <= dates[-1]:
            raise InputError(f"{where}, column date: dates must be strictly ascending")
        vals = []
        for name, cell in zip(assets, r[1:]):
            try:
                x = float(cell)
            except ValueError:
                raise InputError(f"{where}, column {name}: unparseable price {cell!r}") from None
            if not (x > 0 and math.isfinite(x)):
                raise InputError(f"{where}, column {name}: price {cell.strip()} is not positive")
            vals.append(x)
        dates.append(d)
        prices.append(vals)
    return PriceTable(tuple(dates), assets, np.array(prices))


# -- sequences and chains ----------------------------------------------------

def read_state_sequence(path):
    states = []
    with open(path, newline="") as fh:
        for k, r in enumerate(csv.reader(fh), 1):
            if not r or not r[0].strip():
                continue
            cell = r[0].strip()
            if k == 1 and not cell.lstrip("-").isdigit():
                continue  # header
            if not cell.lstrip("-").isdigit():
                raise InputError(f"{path}: row {k}: state {cell!r} is not an integer")
            states.append(int(cell))
    if not states:
        raise InputError(f"{path}: no states")
    return states


def chain_to_json(chain):
    return {"n_states": chain.n_states, "transition": chain.transition.tolist()}


def read_chain_json(path):
    from .markov import MarkovChain

    try:
        doc = json.loads(Path(path).read_text())
        P = doc["transition"]
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"{path}: not a chain document ({exc})") from None
    chain = MarkovChain(P)
    if doc.get("n_states", chain.n_states) != chain.n_states:
        raise InputError(f"{path}: n_states disagrees with the matrix")
    return chain


def write_chain_json(chain, path):
    Path(path).write_text(json.dumps(chain_to_json(chain), indent=2) + "\n")


# -- coding tables -----------------------------------------------------------

def read_alphabet(path):
    """``symbol<TAB>probability[<TAB>codeword]`` lines; returns symbols, probs."""
    symbols, probs = [], []
    for k, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            raise InputError(f"{path}: line {k}: expected symbol<TAB>probability")
        symbols.append(parts[0])
        probs.append(_num(f"{path}: line {k}", parts[1].strip()))
    return symbols, probs


def format_code_table(symbols, probs, codewords):
    return "".join(f"{s}\t{fmt(p)}\t{w}\n" for s, p, w in zip(symbols, probs, codewords))


def read_channel_csv(path):
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r and any(c.strip() for c in r)]
    try:
        return np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None


# -- reports -----------------------------------------------------------------

def fmt(x):
    return float(f"{x:.{SIG_DIGITS}g}")


def clean(obj):
    """Recursively convert numpy types and round floats to 12 significant digits."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return fmt(float(obj))
    return obj


def dumps_report(report):
    return json.dumps(clean(report), indent=2) + "\n"


def flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from flatten(v, f"{prefix}.{k}" if prefix else str(k))
    elif isinstance(obj, (list, tuple)):
        for j, v in enumerate(obj):
            yield from flatten(v, f"{prefix}[{j}]")
    else:
        yield prefix, obj


def results_csv(report):
    rows = ["key,value"]
    for k, v in flatten(clean(report["results"])):
        rows.append(f"{k},{json.dumps(v)}")
    return "\n".join(rows) + "\n"


def table_csv(header, rows):
    lines = [",".join(header)]
    lines += [",".join(repr(fmt(v)) if isinstance(v, float) else str(v) for v in r)
              for r in rows]
    return "\n".join(lines) + "\n"
