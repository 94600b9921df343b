"""JSON helpers: rationals travel as ``"p/q"`` strings."""
import json
from pathlib import Path

from .linalg import as_fraction

__all__ = ["fmt", "fmt_vec", "parse_vec", "load_json", "dumps", "InputError"]


class InputError(ValueError):
    """Malformed or unreadable input file."""


def fmt(x):
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def fmt_vec(v):
    return [fmt(x) for x in v]


def parse_vec(v):
    return tuple(as_fraction(x) for x in v)


def load_json(path):
    path = Path(path)
    try:
        with path.open() as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc


def dumps(obj):
    return json.dumps(obj, indent=2) + "\n"
