"""
Manifestos JSON de teorias.

Números racionais viajam como strings "p/q" e expressões na gramática do
parser, para que ida e volta sejam exatas em qualquer plataforma.

    {
      "name": "meu-3spin",
      "labels": ["e1", "e2"],
      "metric": [["0", "1"], ["1", "0"]],
      "params": [{"name": "q", "min": 0, "max": 2, "weight": "2"}],
      "potential": "1/2*u[1,0]^2*u[2,0] + 1/72*u[2,0]^4",
      "g11": "...",              # ou "g_bar", ou "chi"; nenhum: gênero 1 do lema
      "euler": {"a": ["1", "2/3"], "b": ["0", "0"], "delta": "1/3"},
      "divisor": {"gamma": 2, "pairing": {"q": "1"}},
      "g_function": "0",
      "tau_shift": "0",
      "printed": [{"kind": "g11", "index": [], "text": "...", "eps_order": 4}],
      "correlators": [{"genus": 1, "insertions": [[1, 1]], "value": "1/24"}]
    }
"""

import json
import logging
import re
from fractions import Fraction
from pathlib import Path

from drh import DRHError, ManifestError
from drh.catalog.cohft import (
    CohFTSpec,
    CorrelatorTable,
    DivisorData,
    PrintedExpression,
)
from drh.expr import DiffPoly
from drh.genus import EulerData
from drh.hierarchy import primary_from_g11
from drh.localfunc import integral
from drh.models.caps import ComputationCaps, Context, ParamSpec
from drh.parser import parse_expr
from drh.poisson import Metric

logger = logging.getLogger(__name__)

_RATIONAL = re.compile(r"^-?\d+(/\d+)?$")

REQUIRED = ("name", "metric", "potential")


def _rational(value, where: str) -> Fraction:
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError) as ex:
        raise ManifestError(f"{where}: número inválido {value!r}") from ex


def _expr(text, ctx: Context, where: str) -> DiffPoly:
    if not isinstance(text, str):
        raise ManifestError(f"{where}: esperada uma expressão em texto")
    try:
        return parse_expr(text, ctx)
    except DRHError as ex:
        raise ManifestError(f"{where}: {ex}") from ex


def _optional_expr(data: dict, key: str, ctx: Context) -> DiffPoly | None:
    if data.get(key) is None:
        return None
    return _expr(data[key], ctx, key)


def _euler(data: dict | None) -> EulerData | None:
    if data is None:
        return None
    try:
        return EulerData.of(
            a=[_rational(x, "euler.a") for x in data["a"]],
            b=[_rational(x, "euler.b") for x in data["b"]] if "b" in data else None,
            delta=_rational(data.get("delta", "0"), "euler.delta"),
        )
    except KeyError as ex:
        raise ManifestError(f"euler sem o campo {ex}") from ex


def _correlator_value(raw) -> Fraction | str:
    text = str(raw).strip()
    return Fraction(text) if _RATIONAL.match(text) else text


def _correlators(rows: list | None) -> CorrelatorTable | None:
    if rows is None:
        return None
    table = CorrelatorTable()
    for i, row in enumerate(rows):
        try:
            insertions = [(int(a), int(d)) for a, d in row["insertions"]]
            table.set(
                int(row["genus"]),
                insertions,
                _correlator_value(row["value"]),
                row.get("provenance", "file"),
            )
        except (KeyError, TypeError, ValueError) as ex:
            raise ManifestError(f"correlators[{i}] malformado: {ex}") from ex
    return table


def _printed(rows: list | None) -> tuple[PrintedExpression, ...]:
    out = []
    for i, row in enumerate(rows or []):
        try:
            out.append(
                PrintedExpression(
                    kind=row["kind"],
                    index=tuple(int(x) for x in row.get("index", [])),
                    text=row["text"],
                    eps_order=int(row["eps_order"]),
                    note=row.get("note", ""),
                    miura=tuple(row.get("miura", [])),
                    eps_min=int(row.get("eps_min", 0)),
                    as_printed=bool(row.get("as_printed", True)),
                )
            )
        except (KeyError, TypeError, ValueError) as ex:
            raise ManifestError(f"printed[{i}] malformado: {ex}") from ex
    return tuple(out)


def spec_from_dict(data: dict, caps: ComputationCaps | None = None) -> CohFTSpec:
    missing = [key for key in REQUIRED if key not in data]
    if missing:
        raise ManifestError(f"Manifesto sem os campos {missing}")
    try:
        metric = Metric([[_rational(c, "metric") for c in row] for row in data["metric"]])
    except TypeError as ex:
        raise ManifestError(f"metric malformada: {ex}") from ex
    try:
        params = tuple(ParamSpec.from_dict(p) for p in data.get("params", []))
        ctx = Context(n_vars=metric.n, params=params, caps=caps or ComputationCaps())
    except (KeyError, ValueError) as ex:
        raise ManifestError(f"params malformados: {ex}") from ex
    potential = _expr(data["potential"], ctx, "potential")
    g_bar = None
    if data.get("g_bar") is not None:
        g_bar = integral(_expr(data["g_bar"], ctx, "g_bar"))
    elif data.get("g11") is not None:
        g_bar = primary_from_g11(integral(_expr(data["g11"], ctx, "g11")))
    divisor = None
    if data.get("divisor") is not None:
        div = data["divisor"]
        try:
            divisor = DivisorData(
                gamma=int(div["gamma"]),
                pairing={k: _rational(v, "divisor") for k, v in div["pairing"].items()},
            )
        except (KeyError, TypeError, AttributeError) as ex:
            raise ManifestError(f"divisor malformado: {ex}") from ex
    chi = data.get("chi")
    spec = CohFTSpec(
        name=str(data["name"]),
        ctx=ctx,
        metric=metric,
        potential=potential,
        labels=tuple(data.get("labels", ())),
        g_bar=g_bar,
        euler=_euler(data.get("euler")),
        divisor=divisor,
        printed=_printed(data.get("printed")),
        g_function=_optional_expr(data, "g_function", ctx),
        tau_shift=_optional_expr(data, "tau_shift", ctx),
        correlators=_correlators(data.get("correlators")),
        chi=None if chi is None else int(chi),
        description=str(data.get("description", "")),
    )
    for item in spec.printed:
        _expr(item.text, ctx, f"printed {item.label}")
    return spec


def spec_to_dict(spec: CohFTSpec) -> dict:
    data: dict = {
        "name": spec.name,
        "description": spec.description,
        "labels": list(spec.labels),
        "metric": [[str(c) for c in row] for row in spec.metric.lower],
        "params": [p.to_dict() for p in spec.ctx.params],
        "potential": spec.potential.to_string(),
    }
    if spec.g_bar is not None:
        data["g_bar"] = spec.g_bar.density.to_string()
    if spec.chi is not None:
        data["chi"] = spec.chi
    if spec.euler is not None:
        data["euler"] = {
            "a": [str(x) for x in spec.euler.a],
            "b": [str(x) for x in spec.euler.b],
            "delta": str(spec.euler.delta),
        }
    if spec.divisor is not None:
        data["divisor"] = {
            "gamma": spec.divisor.gamma,
            "pairing": {k: str(v) for k, v in spec.divisor.pairing.items()},
        }
    for key in ("g_function", "tau_shift"):
        value = getattr(spec, key)
        if value is not None:
            data[key] = value.to_string()
    if spec.printed:
        data["printed"] = [
            {
                "kind": p.kind,
                "index": list(p.index),
                "text": p.text,
                "eps_order": p.eps_order,
                "eps_min": p.eps_min,
                "note": p.note,
                "miura": list(p.miura),
                "as_printed": p.as_printed,
            }
            for p in spec.printed
        ]
    if spec.correlators is not None:
        data["correlators"] = [
            {
                "genus": genus,
                "insertions": [list(t) for t in insertions],
                "value": str(value),
                "provenance": spec.correlators.provenance[(genus, insertions)],
            }
            for (genus, insertions), value in spec.correlators.items()
        ]
    return data


def load_manifest(path: str | Path, caps: ComputationCaps | None = None) -> CohFTSpec:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except FileNotFoundError as ex:
        raise ManifestError(f"Manifesto {path} não encontrado") from ex
    except json.JSONDecodeError as ex:
        raise ManifestError(f"Manifesto {path} não é JSON válido: {ex}") from ex
    if not isinstance(data, dict):
        raise ManifestError(f"Manifesto {path} precisa ser um objeto JSON")
    spec = spec_from_dict(data, caps)
    logger.info("Manifesto %s carregado (%s)", path, spec.name)
    return spec


def save_manifest(spec: CohFTSpec, path: str | Path):
    path = Path(path)
    path.write_text(
        json.dumps(spec_to_dict(spec), ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8",
    )
    logger.info("Manifesto de %s salvo em %s", spec.name, path)
