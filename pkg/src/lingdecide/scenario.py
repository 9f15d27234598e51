"""Scenario files: the full decision problem as versioned JSON.

A scenario bundles the scale, attribute and alternative names, experts
with trust degrees, blend coefficients, the Markov block (assessments,
periods, iterations, origin, optional reshape updates), per-attribute
preference relations, and optional stage overrides. Loading collects
every violation with its location instead of stopping at the first.

Peak intervals are encoded as ``{"interval": [LO, HI], "p": x}`` or
``{"point": C, "p": x}`` where each coordinate is either a two-element
``[t, k]`` array or a term literal string such as ``"s-2(o1)"``.
"""

from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import ScenarioParseError, ScenarioValidationError
from .markov import LinguisticMarkovAssessment, check_transition_matrix
from .prefs import PreferenceRelation, validate_relation
from .scale import LinguisticScale, TermCoord, parse_term, to_unit
from .terms import PeakIntervalTerm

FORMAT_VERSION = 1


@dataclass(frozen=True)
class MarkovSpec:
    periods: int
    iterations: int
    origin: int
    scheme: str
    origin_updates: tuple[float, ...] | None
    assessments: tuple[LinguisticMarkovAssessment, ...] | None


@dataclass(frozen=True)
class Overrides:
    transition_matrix: np.ndarray | None = None
    period_weights: np.ndarray | None = None
    priority_vectors: dict[str, np.ndarray] = field(default_factory=dict)
    expert_weight_vectors: dict[str, np.ndarray] = field(default_factory=dict)


@dataclass(frozen=True)
class Scenario:
    scale: LinguisticScale
    attributes: tuple[str, ...]
    alternatives: tuple[str, ...]
    experts: tuple[str, ...]
    trust: tuple[float, ...]
    alpha: float
    beta: float
    gamma: float
    markov: MarkovSpec
    preferences: dict[str, tuple[PreferenceRelation, ...]]
    overrides: Overrides

    @property
    def q(self) -> int:
        return len(self.attributes)

    @property
    def m(self) -> int:
        return len(self.alternatives)

    @property
    def n(self) -> int:
        return len(self.experts)


class _Collector:
    def __init__(self):
        self.violations: list[str] = []

    def add(self, where: str, message: str):
        self.violations.append(f"{where}: {message}")

    def raise_if_any(self):
        if self.violations:
            raise ScenarioValidationError(self.violations)


def _expect_mapping(data, where: str, col: _Collector) -> dict | None:
    if not isinstance(data, dict):
        col.add(where, f"expected an object, got {type(data).__name__}")
        return None
    return data


def _decode_coord(scale: LinguisticScale, raw, where: str, col: _Collector) -> TermCoord | None:
    if isinstance(raw, str):
        maker = lambda: parse_term(raw)
    elif (
        isinstance(raw, (list, tuple))
        and len(raw) == 2
        and all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw)
    ):
        maker = lambda: TermCoord(float(raw[0]), float(raw[1]))
    else:
        col.add(where, f"expected [t, k] or a term literal, got {raw!r}")
        return None
    try:
        coord = maker()
        to_unit(scale, coord)
        return coord
    except ValueError as exc:
        col.add(where, str(exc))
        return None


def _decode_entry(scale: LinguisticScale, raw, where: str, col: _Collector) -> PeakIntervalTerm | None:
    obj = _expect_mapping(raw, where, col)
    if obj is None:
        return None
    if "p" not in obj:
        col.add(where, "missing certainty field 'p'")
        return None
    p = obj["p"]
    if not isinstance(p, (int, float)) or isinstance(p, bool):
        col.add(where, f"'p' must be a number, got {p!r}")
        return None
    if "point" in obj:
        c = _decode_coord(scale, obj["point"], where + ".point", col)
        if c is None:
            return None
        lower = upper = c
    elif "interval" in obj:
        iv = obj["interval"]
        if not isinstance(iv, (list, tuple)) or len(iv) != 2:
            col.add(where + ".interval", "expected [LO, HI]")
            return None
        lower = _decode_coord(scale, iv[0], where + ".interval[0]", col)
        upper = _decode_coord(scale, iv[1], where + ".interval[1]", col)
        if lower is None or upper is None:
            return None
    else:
        col.add(where, "entry needs 'interval' or 'point'")
        return None
    try:
        return PeakIntervalTerm(scale, lower, upper, float(p))
    except ValueError as exc:
        col.add(where, str(exc))
        return None


def _decode_term_matrix(
    scale: LinguisticScale,
    raw,
    rows: int,
    cols: int,
    where: str,
    col: _Collector,
) -> tuple[tuple[PeakIntervalTerm, ...], ...] | None:
    if not isinstance(raw, list) or len(raw) != rows:
        col.add(where, f"expected {rows} rows")
        return None
    out = []
    ok = True
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != cols:
            col.add(f"{where}[{i}]", f"expected {cols} entries")
            ok = False
            continue
        decoded = []
        for j, cell in enumerate(row):
            term = _decode_entry(scale, cell, f"{where}[{i}][{j}]", col)
            if term is None:
                ok = False
            else:
                decoded.append(term)
        if ok:
            out.append(tuple(decoded))
    return tuple(out) if ok else None


def _decode_real_matrix(raw, shape: tuple[int, int], where: str, col: _Collector) -> np.ndarray | None:
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError):
        col.add(where, "expected a numeric matrix")
        return None
    if arr.shape != shape:
        col.add(where, f"shape {arr.shape} does not match expected {shape}")
        return None
    if not np.all(np.isfinite(arr)):
        col.add(where, "entries must be finite")
        return None
    return arr


def _decode_scale(data, col: _Collector) -> LinguisticScale | None:
    obj = _expect_mapping(data, "scale", col)
    if obj is None:
        return None
    tau, zeta = obj.get("tau"), obj.get("zeta")
    for name, v in (("tau", tau), ("zeta", zeta)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            col.add(f"scale.{name}", f"must be an integer >= 1, got {v!r}")
            return None
    first = obj.get("first_labels")
    second = obj.get("second_labels")
    if first is None:
        first = [f"s{t}" for t in range(-tau, tau + 1)]
    if second is None:
        second = [f"o{k}" for k in range(-zeta, zeta + 1)]
    try:
        return LinguisticScale(tau, zeta, tuple(first), tuple(second))
    except ValueError as exc:
        col.add("scale", str(exc))
        return None


def _decode_names(data, key: str, minimum: int, col: _Collector) -> tuple[str, ...] | None:
    raw = data.get(key)
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        col.add(key, "expected a list of strings")
        return None
    if len(raw) < minimum:
        col.add(key, f"need at least {minimum} entries, got {len(raw)}")
        return None
    if len(set(raw)) != len(raw):
        col.add(key, "names must be unique")
        return None
    return tuple(raw)


def scenario_from_dict(data: dict) -> Scenario:
    """Build and fully validate a scenario from decoded JSON."""
    col = _Collector()
    if not isinstance(data, dict):
        col.add("$", f"expected a JSON object, got {type(data).__name__}")
        col.raise_if_any()
    if data.get("format") != FORMAT_VERSION:
        col.add("format", f"required field must equal {FORMAT_VERSION}, got {data.get('format')!r}")

    scale = _decode_scale(data.get("scale"), col)
    attributes = _decode_names(data, "attributes", 1, col)
    alternatives = _decode_names(data, "alternatives", 2, col)

    experts_raw = data.get("experts")
    experts: tuple[str, ...] | None = None
    trust: tuple[float, ...] | None = None
    if not isinstance(experts_raw, list) or not experts_raw:
        col.add("experts", "expected a nonempty list of {name, trust} objects")
    else:
        names, psis = [], []
        ok = True
        for idx, item in enumerate(experts_raw):
            obj = _expect_mapping(item, f"experts[{idx}]", col)
            if obj is None:
                ok = False
                continue
            name, psi = obj.get("name"), obj.get("trust")
            if not isinstance(name, str) or not name:
                col.add(f"experts[{idx}].name", "expected a nonempty string")
                ok = False
            if not isinstance(psi, (int, float)) or isinstance(psi, bool) or not 0.0 <= psi <= 1.0:
                col.add(f"experts[{idx}].trust", f"must be a real in [0, 1], got {psi!r}")
                ok = False
            if ok:
                names.append(name)
                psis.append(float(psi))
        if ok and len(set(names)) != len(names):
            col.add("experts", "names must be unique")
            ok = False
        if ok:
            experts, trust = tuple(names), tuple(psis)

    blend = data.get("blend")
    alpha = beta = gamma = 1.0 / 3.0
    if blend is not None:
        obj = _expect_mapping(blend, "blend", col)
        if obj is not None:
            vals = []
            for key in ("alpha", "beta", "gamma"):
                v = obj.get(key)
                if not isinstance(v, (int, float)) or isinstance(v, bool) or not 0.0 <= v <= 1.0:
                    col.add(f"blend.{key}", f"must be a real in [0, 1], got {v!r}")
                    vals = None
                    break
                vals.append(float(v))
            if vals is not None:
                if abs(sum(vals) - 1.0) > 1e-9:
                    col.add("blend", f"coefficients sum to {sum(vals):.12g}, not 1")
                else:
                    alpha, beta, gamma = vals

    if scale is None or attributes is None or alternatives is None or experts is None:
        col.raise_if_any()

    q, m, n = len(attributes), len(alternatives), len(experts)

    overrides = _decode_overrides(data.get("overrides"), attributes, q, m, n, col)

    markov = _decode_markov(
        data.get("markov"), scale, attributes, experts, q, overrides, col
    )

    if (
        overrides.period_weights is not None
        and markov is not None
        and overrides.period_weights.shape[0] != markov.periods
    ):
        col.add(
            "overrides.period_weights",
            f"{overrides.period_weights.shape[0]} rows but markov.periods is {markov.periods}",
        )

    preferences = _decode_preferences(
        data.get("preferences"), scale, attributes, experts, m, overrides, col
    )

    col.raise_if_any()
    return Scenario(
        scale=scale,
        attributes=attributes,
        alternatives=alternatives,
        experts=experts,
        trust=trust,
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        markov=markov,
        preferences=preferences,
        overrides=overrides,
    )


def _decode_overrides(
    raw,
    attributes: tuple[str, ...],
    q: int,
    m: int,
    n: int,
    col: _Collector,
) -> Overrides:
    if raw is None:
        return Overrides()
    obj = _expect_mapping(raw, "overrides", col)
    if obj is None:
        return Overrides()
    transition = None
    if "transition_matrix" in obj:
        transition = _decode_real_matrix(
            obj["transition_matrix"], (q, q), "overrides.transition_matrix", col
        )
        if transition is not None:
            for problem in check_transition_matrix(transition):
                col.add("overrides.transition_matrix", problem)
    period = None
    if "period_weights" in obj:
        arr = obj["period_weights"]
        if not isinstance(arr, list) or not arr:
            col.add("overrides.period_weights", "expected a nonempty list of period rows")
        else:
            period = _decode_real_matrix(arr, (len(arr), q), "overrides.period_weights", col)
            if period is not None and (np.any(period < -1e-9) or np.any(period > 1.0 + 1e-9)):
                col.add("overrides.period_weights", "entries must lie in [0, 1]")
                period = None

    def vectors(key: str, length: int) -> dict[str, np.ndarray]:
        out: dict[str, np.ndarray] = {}
        if key not in obj:
            return out
        sub = _expect_mapping(obj[key], f"overrides.{key}", col)
        if sub is None:
            return out
        for name, vec in sub.items():
            where = f"overrides.{key}.{name}"
            if name not in attributes:
                col.add(where, "unknown attribute")
                continue
            try:
                arr = np.asarray(vec, dtype=float)
            except (TypeError, ValueError):
                col.add(where, "expected a numeric vector")
                continue
            if arr.shape != (length,):
                col.add(where, f"shape {arr.shape} does not match expected ({length},)")
                continue
            if not np.all(np.isfinite(arr)) or np.any(arr < -1e-9) or np.any(arr > 1.0 + 1e-9):
                col.add(where, "entries must be finite reals in [0, 1]")
                continue
            out[name] = arr
        return out

    return Overrides(
        transition_matrix=transition,
        period_weights=period,
        priority_vectors=vectors("priority_vectors", m),
        expert_weight_vectors=vectors("expert_weight_vectors", n),
    )


def _decode_markov(
    raw,
    scale: LinguisticScale,
    attributes: tuple[str, ...],
    experts: tuple[str, ...],
    q: int,
    overrides: Overrides,
    col: _Collector,
) -> MarkovSpec | None:
    obj = _expect_mapping(raw if raw is not None else {}, "markov", col)
    if obj is None:
        return None
    periods = obj.get("periods", 1)
    iterations = obj.get("iterations", 1)
    for name, v in (("periods", periods), ("iterations", iterations)):
        if not isinstance(v, int) or isinstance(v, bool) or v < 1:
            col.add(f"markov.{name}", f"must be an integer >= 1, got {v!r}")
            return None
    origin_raw = obj.get("origin", 0)
    if isinstance(origin_raw, str):
        if origin_raw not in attributes:
            col.add("markov.origin", f"unknown attribute {origin_raw!r}")
            return None
        origin = attributes.index(origin_raw)
    elif isinstance(origin_raw, int) and not isinstance(origin_raw, bool) and 0 <= origin_raw < q:
        origin = origin_raw
    else:
        col.add("markov.origin", f"expected an attribute name or index, got {origin_raw!r}")
        return None
    scheme = obj.get("scheme", "power")
    if scheme not in ("power", "reshape"):
        col.add("markov.scheme", f"expected 'power' or 'reshape', got {scheme!r}")
        return None
    updates = None
    if "origin_updates" in obj:
        raw_updates = obj["origin_updates"]
        if (
            not isinstance(raw_updates, list)
            or len(raw_updates) != periods
            or not all(
                isinstance(x, (int, float)) and not isinstance(x, bool) and 0.0 <= x <= 1.0
                for x in raw_updates
            )
        ):
            col.add(
                "markov.origin_updates",
                f"expected {periods} reals in [0, 1], got {raw_updates!r}",
            )
        else:
            updates = tuple(float(x) for x in raw_updates)
    if scheme == "reshape" and updates is None:
        col.add("markov", "scheme 'reshape' requires origin_updates")

    assessments = None
    raw_assessments = obj.get("assessments")
    if raw_assessments is None:
        if overrides.transition_matrix is None:
            col.add(
                "markov.assessments",
                "required unless overrides.transition_matrix is present",
            )
    else:
        sub = _expect_mapping(raw_assessments, "markov.assessments", col)
        if sub is not None:
            missing = [e for e in experts if e not in sub]
            unknown = [e for e in sub if e not in experts]
            if missing:
                col.add("markov.assessments", f"missing experts {missing}")
            if unknown:
                col.add("markov.assessments", f"unknown experts {unknown}")
            if not missing and not unknown:
                decoded = []
                ok = True
                for e in experts:
                    entries = _decode_term_matrix(
                        scale, sub[e], q, q, f"markov.assessments.{e}", col
                    )
                    if entries is None:
                        ok = False
                    else:
                        decoded.append(LinguisticMarkovAssessment(scale, entries))
                if ok:
                    assessments = tuple(decoded)

    return MarkovSpec(
        periods=periods,
        iterations=iterations,
        origin=origin,
        scheme=scheme,
        origin_updates=updates,
        assessments=assessments,
    )


def _decode_preferences(
    raw,
    scale: LinguisticScale,
    attributes: tuple[str, ...],
    experts: tuple[str, ...],
    m: int,
    overrides: Overrides,
    col: _Collector,
) -> dict[str, tuple[PreferenceRelation, ...]]:
    out: dict[str, tuple[PreferenceRelation, ...]] = {}
    obj = {} if raw is None else _expect_mapping(raw, "preferences", col)
    if obj is None:
        obj = {}
    unknown = [a for a in obj if a not in attributes]
    if unknown:
        col.add("preferences", f"unknown attributes {unknown}")
    for attr in attributes:
        if attr not in obj:
            if attr not in overrides.priority_vectors:
                col.add(
                    f"preferences.{attr}",
                    "required unless overrides.priority_vectors covers this attribute",
                )
            continue
        sub = _expect_mapping(obj[attr], f"preferences.{attr}", col)
        if sub is None:
            continue
        missing = [e for e in experts if e not in sub]
        extra = [e for e in sub if e not in experts]
        if missing:
            col.add(f"preferences.{attr}", f"missing experts {missing}")
        if extra:
            col.add(f"preferences.{attr}", f"unknown experts {extra}")
        if missing or extra:
            continue
        relations = []
        ok = True
        for e in experts:
            where = f"preferences.{attr}.{e}"
            entries = _decode_term_matrix(scale, sub[e], m, m, where, col)
            if entries is None:
                ok = False
                continue
            relation = PreferenceRelation(scale, entries)
            bad = validate_relation(relation)
            if bad:
                for v in bad:
                    col.add(where, str(v))
                ok = False
            else:
                relations.append(relation)
        if ok:
            out[attr] = tuple(relations)
    return out


def bundled_scenario_text(name: str = "financial_crisis") -> str:
    """Raw JSON text of a scenario shipped with the package."""
    resource = importlib.resources.files("lingdecide").joinpath("data", f"{name}.json")
    try:
        return resource.read_text(encoding="utf-8")
    except (FileNotFoundError, OSError) as exc:
        raise ScenarioParseError(f"no bundled scenario named {name!r}") from exc


def load_bundled_scenario(name: str = "financial_crisis") -> Scenario:
    """Load a scenario shipped with the package."""
    return scenario_from_dict(json.loads(bundled_scenario_text(name)))


def load_scenario(path: str) -> Scenario:
    """Load and validate a scenario file.

    Unreadable files and malformed JSON raise a parse error carrying the
    line and column; everything else raises one validation error listing
    all violations with their locations.
    """
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ScenarioParseError(f"cannot read {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, line=exc.lineno, column=exc.colno) from exc
    return scenario_from_dict(data)
