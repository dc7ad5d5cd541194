"""JSON input files and report encoding.

Every number in a file is a decimal string: integers ``"5"``, rationals
``"1/5"``, reals ``"0.5"``, complex numbers ``["re", "im"]``.  Reports use
the same conventions and are written with sorted keys so identical inputs
give byte-identical output.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .errors import SchemaError, ValidationError
from .linalg import FiniteAbelianGroup, IntMatrix, LatticeSubgroup, RatMatrix
from .normal_functions import NormalFunctionExpr


def _load(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _int(value, path: str) -> int:
    if isinstance(value, bool):
        raise SchemaError(f"{path}: expected an integer string, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value.strip(), 10)
        except ValueError:
            pass
    raise SchemaError(f"{path}: expected an integer string, got {value!r}")


def _rational(value, path: str) -> Fraction:
    if isinstance(value, bool):
        raise SchemaError(f"{path}: expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise SchemaError(f"{path}: expected a rational string like \"1/5\", got {value!r}")


def _real(value, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (str, int, float)):
        raise SchemaError(f"{path}: expected a decimal string, got {value!r}")
    try:
        x = float(value)
    except ValueError:
        raise SchemaError(f"{path}: expected a decimal string, got {value!r}") from None
    if x != x or x in (float("inf"), float("-inf")):
        raise SchemaError(f"{path}: number must be finite")
    return x


def parse_complex(value, path: str = "$") -> complex:
    if not isinstance(value, list) or len(value) != 2:
        raise SchemaError(f"{path}: expected a [re, im] pair")
    return complex(_real(value[0], f"{path}[0]"), _real(value[1], f"{path}[1]"))


def _list(value, path: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{path}: expected a list")
    return value


def _matrix(value, path: str) -> IntMatrix:
    rows = _list(value, path)
    if not rows:
        raise SchemaError(f"{path}: matrix has no rows")
    parsed = [[_int(x, f"{path}[{i}][{j}]") for j, x in enumerate(_list(r, f"{path}[{i}]"))] for i, r in enumerate(rows)]
    n = len(parsed)
    for i, r in enumerate(parsed):
        if len(r) != n:
            raise ValidationError(f"{path}[{i}]: matrix must be square ({n} x {n})")
    return IntMatrix.from_rows(parsed)


def fmt_complex(z: complex) -> list[str]:
    z = complex(z)
    return [repr(float(z.real)), repr(float(z.imag))]


@dataclass(frozen=True)
class FamilySpec:
    monodromy: tuple[IntMatrix, ...]
    F0: tuple[tuple[complex, ...], ...] | None = None
    weight: int = -1
    label: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    @property
    def n(self) -> int:
        return self.monodromy[0].rows


_FAMILY_KEYS = {"monodromy", "F0", "weight", "label"}


def parse_family(text: str) -> FamilySpec:
    data = _load(text)
    if not isinstance(data, dict):
        raise SchemaError("$: expected a JSON object")
    unknown = set(data) - _FAMILY_KEYS
    if unknown:
        raise SchemaError(f"$: unknown field(s) {sorted(unknown)}")
    if "monodromy" not in data:
        raise SchemaError("$.monodromy: required field missing")
    mats = _list(data["monodromy"], "$.monodromy")
    if not 1 <= len(mats) <= 2:
        raise SchemaError("$.monodromy: expected one or two matrices")
    Ts = tuple(_matrix(m, f"$.monodromy[{i}]") for i, m in enumerate(mats))
    n = Ts[0].rows
    for i, T in enumerate(Ts):
        if T.rows != n:
            raise ValidationError(f"$.monodromy[{i}]: size {T.rows} differs from {n}")
        if abs(T.det()) != 1:
            raise ValidationError(f"$.monodromy[{i}]: determinant {T.det()} is not a unit")
    if len(Ts) == 2 and Ts[0] @ Ts[1] != Ts[1] @ Ts[0]:
        raise ValidationError("$.monodromy: the two matrices do not commute")
    F0 = None
    if "F0" in data and data["F0"] is not None:
        cols = _list(data["F0"], "$.F0")
        parsed = []
        for j, col in enumerate(cols):
            entries = _list(col, f"$.F0[{j}]")
            if len(entries) != n:
                raise ValidationError(f"$.F0[{j}]: column has length {len(entries)}, expected {n}")
            parsed.append(tuple(parse_complex(x, f"$.F0[{j}][{i}]") for i, x in enumerate(entries)))
        F0 = tuple(parsed)
    weight = _int(data.get("weight", "-1"), "$.weight")
    label = data.get("label", "")
    if not isinstance(label, str):
        raise SchemaError("$.label: expected a string")
    return FamilySpec(Ts, F0, weight, label)


def emit_family(spec: FamilySpec) -> str:
    out: dict[str, Any] = {
        "monodromy": [[[str(x) for x in row] for row in T.to_rows()] for T in spec.monodromy],
        "weight": str(spec.weight),
    }
    if spec.F0 is not None:
        out["F0"] = [[fmt_complex(z) for z in col] for col in spec.F0]
    if spec.label:
        out["label"] = spec.label
    return dumps(out)


def parse_normal_function(text: str, n: int) -> NormalFunctionExpr:
    """``{"sigma": {"<k>": [[re, im], ...]}, "ell": ["p/q", ...]}``."""
    data = _load(text)
    if not isinstance(data, dict):
        raise SchemaError("$: expected a JSON object")
    unknown = set(data) - {"sigma", "ell"}
    if unknown:
        raise SchemaError(f"$: unknown field(s) {sorted(unknown)}")
    sigma_raw = data.get("sigma", {})
    if not isinstance(sigma_raw, dict):
        raise SchemaError("$.sigma: expected an object keyed by exponent")
    sigma = {}
    for k, v in sigma_raw.items():
        exp = _int(k, f"$.sigma key {k!r}")
        vec = _list(v, f"$.sigma[{k}]")
        if len(vec) != n:
            raise ValidationError(f"$.sigma[{k}]: length {len(vec)}, expected {n}")
        sigma[exp] = [parse_complex(x, f"$.sigma[{k}][{i}]") for i, x in enumerate(vec)]
    ell_raw = _list(data.get("ell", ["0"] * n), "$.ell")
    if len(ell_raw) != n:
        raise ValidationError(f"$.ell: length {len(ell_raw)}, expected {n}")
    ell = tuple(_rational(x, f"$.ell[{i}]") for i, x in enumerate(ell_raw))
    return NormalFunctionExpr(n, sigma, ell)


def emit_normal_function(nf: NormalFunctionExpr) -> str:
    return dumps({
        "sigma": {str(k): [fmt_complex(z) for z in v] for k, v in nf.sigma.items()},
        "ell": [str(x) for x in nf.ell],
    })


# --- report encoding --------------------------------------------------------


def encode(obj) -> Any:
    """Turn library values into a JSON tree with string leaves."""
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, (int, Fraction)):
        return str(obj)
    if isinstance(obj, float):
        return repr(obj)
    if isinstance(obj, complex):
        return fmt_complex(obj)
    if isinstance(obj, (IntMatrix, RatMatrix)):
        return [[str(x) for x in row] for row in obj.to_rows()]
    if isinstance(obj, LatticeSubgroup):
        return {"rank": str(obj.rank), "basis": [[str(x) for x in c] for c in obj.columns()]}
    if isinstance(obj, FiniteAbelianGroup):
        return {
            "free_rank": str(obj.free_rank),
            "torsion": [str(d) for d in obj.torsion],
            "order": None if obj.order is None else str(obj.order),
            "description": str(obj),
        }
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(x) for x in obj]
    if hasattr(obj, "tolist"):
        return encode(obj.tolist())
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(tree) -> str:
    return json.dumps(tree, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
