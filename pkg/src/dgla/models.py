"""Cell-complex models: builders, symmetry morphisms, and verification.

A :class:`CellModel` assigns every generator a geometric boundary (the
bracket-free part of its differential) and a full differential series,
all at a fixed truncation order.  Builders cover the models with known
closed forms: arbitrary 1-complexes (vertices get the flatness
differential ``-1/2 [a, a]``, edges the Bernoulli edge series), the
disc with a single vertex, the two bigon models based at a vertex, and
the dihedrally symmetric bigon based at the midpoint.

Builders and :func:`compute_symmetric_data` are memoized; models are
immutable, so the cached instances are safe to share.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping

from .algebra import (
    AlgebraContext,
    AlgebraElement,
    GeneratorMorphism,
    SeriesParseError,
    apply_morphism,
    bracket,
    context_from_json,
    element_from_json_terms,
    terms_to_json,
    weight_component,
)
from .calculus import (
    OperatorSeries,
    bch,
    edge_differential,
    extend_differential,
    flow,
    maurer_cartan_defect,
)

__all__ = [
    "CellModel",
    "MODEL_NAMES",
    "ModelCheck",
    "OneComplex",
    "SymmetricBigonData",
    "VerificationReport",
    "build_bigon_based",
    "build_bigon_symmetric",
    "build_disc_one_vertex",
    "build_named_model",
    "build_one_complex",
    "check_equivariance",
    "circle_complex",
    "compare_reference_second_order",
    "compute_symmetric_data",
    "decode_model",
    "disc_reflection_morphism",
    "encode_model",
    "interval_complex",
    "model_from_json_dict",
    "model_to_json_dict",
    "point_complex",
    "reflection_morphism",
    "rotation_morphism",
    "symmetry_morphism",
    "verify_model",
]


@dataclass(frozen=True)
class OneComplex:
    """A finite graph: named vertices and directed, named edges."""

    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...] = ()  # (name, source, target)

    def __post_init__(self) -> None:
        names = list(self.vertices) + [e[0] for e in self.edges]
        if len(set(names)) != len(names):
            raise ValueError("vertex and edge names must be unique")
        vertex_set = set(self.vertices)
        for name, source, target in self.edges:
            if source not in vertex_set or target not in vertex_set:
                raise ValueError(f"edge {name!r} has an undeclared endpoint")


@dataclass(frozen=True)
class CellModel:
    """Generators with boundary data and a differential, at a fixed order.

    ``boundary0`` maps each generator to the bracket-free part of its
    differential; ``closure`` lists, for each generator, the generators
    of the cells its differential is allowed to touch (the locality
    constraint).  Instances are immutable and shareable.
    """

    context: AlgebraContext
    boundary0: Mapping[str, AlgebraElement]
    differential: Mapping[str, AlgebraElement]
    closure: Mapping[str, frozenset[str]]
    order: int


@dataclass(frozen=True)
class SymmetricBigonData:
    """The midpoint construction: direction ``v``, point ``x``, kernel element ``q``."""

    v: AlgebraElement
    x: AlgebraElement
    q: AlgebraElement


@dataclass(frozen=True)
class ModelCheck:
    name: str
    passed: bool
    witness: AlgebraElement | None = None


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of a model verification or equivariance run.

    ``overall`` is the conjunction of the individual checks; failing
    checks carry the offending nonzero element as a witness.
    """

    subject: str
    order: int
    checks: tuple[ModelCheck, ...]

    @property
    def overall(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> tuple[ModelCheck, ...]:
        return tuple(check for check in self.checks if not check.passed)

    def to_json_dict(self) -> dict:
        return {
            "subject": self.subject,
            "order": self.order,
            "overall": self.overall,
            "checks": [
                {
                    "name": check.name,
                    "pass": check.passed,
                    "witness": None if check.witness is None else terms_to_json(check.witness),
                }
                for check in self.checks
            ],
        }


# -- complexes and builders ----------------------------------------------


def point_complex() -> OneComplex:
    return OneComplex(("a",))


def interval_complex() -> OneComplex:
    return OneComplex(("a", "b"), (("e", "a", "b"),))


def circle_complex() -> OneComplex:
    """A circle subdivided into two vertices and two edges."""
    return OneComplex(("a", "b"), (("e", "a", "b"), ("f", "b", "a")))


def _vertex_differential(context: AlgebraContext, name: str) -> AlgebraElement:
    v = context.gen(name)
    return Fraction(-1, 2) * bracket(v, v)


def _check_d_squared(model: CellModel) -> None:
    for g in model.context.generators:
        square = extend_differential(model, model.differential[g.name])
        if square:
            raise RuntimeError(
                f"differential fails to square to zero on {g.name!r}; "
                f"weights {square.weights()}"
            )


def build_one_complex(complex_: OneComplex, order: int = 6) -> CellModel:
    """The model of a 1-complex: flat vertices, Bernoulli edge series."""
    entries = [(v, -1) for v in complex_.vertices]
    entries += [(name, 0) for name, _, _ in complex_.edges]
    context = AlgebraContext(entries, max_weight=order)
    boundary0: dict[str, AlgebraElement] = {}
    differential: dict[str, AlgebraElement] = {}
    closure: dict[str, frozenset[str]] = {}
    for v in complex_.vertices:
        boundary0[v] = context.zero()
        differential[v] = _vertex_differential(context, v)
        closure[v] = frozenset({v})
    for name, source, target in complex_.edges:
        boundary0[name] = context.gen(target) - context.gen(source)
        differential[name] = edge_differential(context, name, source, target)
        closure[name] = frozenset({name, source, target})
    model = CellModel(context, boundary0, differential, closure, order)
    _check_d_squared(model)
    return model


def build_disc_one_vertex(order: int = 6) -> CellModel:
    """The disc with one vertex: De = [e, a], Dg = e - [a, g]."""
    context = AlgebraContext([("a", -1), ("e", 0), ("g", 1)], max_weight=order)
    a, e, g = context.gen("a"), context.gen("e"), context.gen("g")
    boundary0 = {"a": context.zero(), "e": context.zero(), "g": e}
    differential = {
        "a": _vertex_differential(context, "a"),
        "e": bracket(e, a),
        "g": e - bracket(a, g),
    }
    closure = {
        "a": frozenset({"a"}),
        "e": frozenset({"a", "e"}),
        "g": frozenset({"a", "e", "g"}),
    }
    model = CellModel(context, boundary0, differential, closure, order)
    _check_d_squared(model)
    return model


def _bigon_context(order: int) -> AlgebraContext:
    return AlgebraContext(
        [("a", -1), ("b", -1), ("e", 0), ("f", 0), ("g", 1)], max_weight=order
    )


def _bigon_skeleton(context: AlgebraContext) -> tuple[dict, dict, dict]:
    # shared 1-skeleton of every bigon model: the two-vertex circle
    boundary0 = {
        "a": context.zero(),
        "b": context.zero(),
        "e": context.gen("b") - context.gen("a"),
        "f": context.gen("a") - context.gen("b"),
        "g": context.gen("e") + context.gen("f"),
    }
    differential = {
        "a": _vertex_differential(context, "a"),
        "b": _vertex_differential(context, "b"),
        "e": edge_differential(context, "e", "a", "b"),
        "f": edge_differential(context, "f", "b", "a"),
    }
    closure = {
        "a": frozenset({"a"}),
        "b": frozenset({"b"}),
        "e": frozenset({"a", "b", "e"}),
        "f": frozenset({"a", "b", "f"}),
        "g": frozenset({"a", "b", "e", "f", "g"}),
    }
    return boundary0, differential, closure


def build_bigon_based(base: str = "a", order: int = 6) -> CellModel:
    """A bigon model based at one of its vertices.

    Based at ``a`` the 2-cell differential is ``bch(e, f) - [a, g]``;
    based at ``b`` it is ``bch(f, e) - [b, g]``.  Both are invariant
    under the reflection but not under the rotation, which carries one
    to the other.
    """
    if base not in ("a", "b"):
        raise ValueError(f"base must be 'a' or 'b', got {base!r}")
    context = _bigon_context(order)
    boundary0, differential, closure = _bigon_skeleton(context)
    e, f, g = context.gen("e"), context.gen("f"), context.gen("g")
    if base == "a":
        differential["g"] = bch([e, f]) - bracket(context.gen("a"), g)
    else:
        differential["g"] = bch([f, e]) - bracket(context.gen("b"), g)
    model = CellModel(context, boundary0, differential, closure, order)
    _check_d_squared(model)
    return model


@lru_cache(maxsize=None)
def compute_symmetric_data(order: int = 6) -> SymmetricBigonData:
    """Construct the symmetric midpoint data over the two-vertex circle.

    ``v`` interpolates the two edge directions symmetrically:
    ``v = bch(-1/2 bch(e, f), e)``, so flowing by ``v`` for unit time
    carries one vertex to the other, and the midpoint is
    ``x = flow(v, a, 1/2)``.  ``q = bch(-v/2, e, f, v/2)`` spans the
    kernel of the differential twisted by ``x``, with weight-1 part
    ``e + f``.  Two internal cross-checks guard the construction:
    ``q`` must agree with ``exp(-1/2 ad_v)`` applied to ``bch(e, f)``,
    and the unit-time flow of ``a`` by ``v`` must equal ``b`` on the
    nose.  Results live in the circle context and are cached per order.
    """
    circle = build_named_model("circle2", order)
    context = circle.context
    a, b = context.gen("a"), context.gen("b")
    e, f = context.gen("e"), context.gen("f")
    half = Fraction(1, 2)
    loop = bch([e, f])
    v = bch([-half * loop, e])
    x = flow(circle, v, a, half)
    q = bch([-half * v, e, f, half * v])
    transported = OperatorSeries.exponential(-half, order - 1).apply(v, loop)
    if q != transported:
        raise RuntimeError("kernel element disagrees with its conjugation form")
    if flow(circle, v, a, 1) != b:
        raise RuntimeError("unit-time flow by the midpoint direction misses the far vertex")
    return SymmetricBigonData(v=v, x=x, q=q)


def build_bigon_symmetric(order: int = 6) -> CellModel:
    """The dihedrally symmetric bigon: ``Dg = q - [x, g]`` at the midpoint."""
    data = compute_symmetric_data(order)
    context = _bigon_context(order)
    boundary0, differential, closure = _bigon_skeleton(context)
    q = data.q.in_context(context)
    x = data.x.in_context(context)
    differential["g"] = q - bracket(x, context.gen("g"))
    model = CellModel(context, boundary0, differential, closure, order)
    _check_d_squared(model)
    return model


MODEL_NAMES = ("point", "interval", "circle2", "disc1", "bigon-a", "bigon-b", "bigon-sym")


@lru_cache(maxsize=None)
def build_named_model(name: str, order: int = 6) -> CellModel:
    """Build one of the catalogued models by name (cached, shareable)."""
    if name == "point":
        return build_one_complex(point_complex(), order)
    if name == "interval":
        return build_one_complex(interval_complex(), order)
    if name == "circle2":
        return build_one_complex(circle_complex(), order)
    if name == "disc1":
        return build_disc_one_vertex(order)
    if name == "bigon-a":
        return build_bigon_based("a", order)
    if name == "bigon-b":
        return build_bigon_based("b", order)
    if name == "bigon-sym":
        return build_bigon_symmetric(order)
    raise KeyError(f"unknown model {name!r}; choose from {MODEL_NAMES}")


# -- symmetry morphisms -----------------------------------------------------


def rotation_morphism(context: AlgebraContext) -> GeneratorMorphism:
    """Swap the two vertices and the two edges; fix the 2-cell if present."""
    return GeneratorMorphism(context, {"a": "b", "b": "a", "e": "f", "f": "e"})


def reflection_morphism(context: AlgebraContext) -> GeneratorMorphism:
    """Reverse both edges into each other and flip the 2-cell's orientation."""
    mapping: dict[str, str] = {"e": "-f", "f": "-e"}
    if "g" in context.names:
        mapping["g"] = "-g"
    return GeneratorMorphism(context, mapping)


def disc_reflection_morphism(context: AlgebraContext) -> GeneratorMorphism:
    """Reverse the loop edge and the 2-cell of the one-vertex disc."""
    return GeneratorMorphism(context, {"e": "-e", "g": "-g"})


def symmetry_morphism(model_name: str, context: AlgebraContext, which: str) -> GeneratorMorphism:
    """Resolve ``sigma``/``iota`` to the morphism a named model supports."""
    if which == "sigma":
        if model_name in ("circle2", "bigon-a", "bigon-b", "bigon-sym"):
            return rotation_morphism(context)
    elif which == "iota":
        if model_name in ("circle2", "bigon-a", "bigon-b", "bigon-sym"):
            return reflection_morphism(context)
        if model_name == "disc1":
            return disc_reflection_morphism(context)
    raise KeyError(f"model {model_name!r} has no morphism {which!r}")


# -- verification ------------------------------------------------------------


def verify_model(model: CellModel, subject: str = "model") -> VerificationReport:
    """Run the defining checks of a cell model and report each outcome.

    Checks, per generator where applicable: the differential squares to
    zero at the model's order; vertices satisfy the flatness equation;
    the weight-1 part of each differential equals the stored geometric
    boundary; each differential only involves generators in the closure
    of its cell.  Failures carry the offending element as a witness.
    """
    checks: list[ModelCheck] = []
    context = model.context
    for g in context.generators:
        square = extend_differential(model, model.differential[g.name])
        checks.append(ModelCheck(f"d_squared_zero[{g.name}]", not square, square or None))
    for g in context.generators:
        if g.degree == -1:
            defect = maurer_cartan_defect(model, context.gen(g.name))
            checks.append(ModelCheck(f"vertex_flatness[{g.name}]", not defect, defect or None))
    for g in context.generators:
        differential = model.differential[g.name]
        got = (
            weight_component(differential, 1) if differential else context.zero()
        )
        expected = model.boundary0[g.name]
        difference = got - expected
        checks.append(
            ModelCheck(f"boundary_matches_weight1[{g.name}]", not difference, difference or None)
        )
    for g in context.generators:
        allowed = {context.generator(name).index for name in model.closure[g.name]}
        stray: dict = {}
        for word, coeff in model.differential[g.name]._terms.items():
            if not set(word) <= allowed:
                stray[word] = coeff
        witness = AlgebraElement._make(context, stray)
        checks.append(ModelCheck(f"locality[{g.name}]", not witness, witness or None))
    return VerificationReport(subject, model.order, tuple(checks))


def check_equivariance(
    model: CellModel, morphism: GeneratorMorphism, subject: str = "model"
) -> VerificationReport:
    """Check that the morphism commutes with the model's differential."""
    checks: list[ModelCheck] = []
    for g in model.context.generators:
        lhs = apply_morphism(morphism, model.differential[g.name])
        rhs = extend_differential(model, apply_morphism(morphism, model.context.gen(g.name)))
        difference = lhs - rhs
        checks.append(
            ModelCheck(f"commutes_with_differential[{g.name}]", not difference, difference or None)
        )
    return VerificationReport(subject, model.order, tuple(checks))


def compare_reference_second_order(order: int = 6) -> bool:
    """Whether our symmetric 2-cell differential departs from the earlier
    published one at three letters.

    Builds the previously published weight-3 term
    ``1/24 ((F - E) G + G (F - E))(b - a)`` with ``E, F, G`` the
    adjoint actions of the edges and the 2-cell, and returns True when
    it differs from the symmetric model's weight-3 component.
    """
    if order < 4:
        raise ValueError(f"comparison needs order >= 4, got {order}")
    model = build_named_model("bigon-sym", order)
    context = model.context
    difference = context.gen("f") - context.gen("e")
    g = context.gen("g")
    span = context.gen("b") - context.gen("a")
    reference = Fraction(1, 24) * (
        bracket(difference, bracket(g, span)) + bracket(g, bracket(difference, span))
    )
    ours = weight_component(model.differential["g"], 3)
    return ours != reference


# -- model serialization ------------------------------------------------------


def model_to_json_dict(model: CellModel, name: str) -> dict:
    """The JSON envelope: generators, boundaries, closures, differentials."""
    context = model.context
    return {
        "model": name,
        "order": model.order,
        "generators": [{"name": g.name, "degree": g.degree} for g in context.generators],
        "boundary0": {g.name: terms_to_json(model.boundary0[g.name]) for g in context.generators},
        "closure": {
            g.name: sorted(model.closure[g.name], key=lambda n: context.generator(n).index)
            for g in context.generators
        },
        "differential": {
            g.name: terms_to_json(model.differential[g.name]) for g in context.generators
        },
    }


def model_from_json_dict(data: object) -> tuple[str, CellModel]:
    """Rebuild a model from its JSON envelope; strict validation throughout."""
    if not isinstance(data, dict):
        raise SeriesParseError("model envelope must be a JSON object", position="$")
    name = data.get("model")
    if not isinstance(name, str) or not name:
        raise SeriesParseError("model name must be a nonempty string", position="model")
    context = context_from_json(data)
    names = set(context.names)
    tables: dict[str, dict[str, AlgebraElement]] = {}
    for field in ("boundary0", "differential"):
        raw = data.get(field)
        if not isinstance(raw, dict) or set(raw) != names:
            raise SeriesParseError(
                f"{field} must map exactly the declared generators", position=field
            )
        tables[field] = {
            gname: element_from_json_terms(context, terms, path=f"{field}.{gname}")
            for gname, terms in raw.items()
        }
    raw_closure = data.get("closure")
    if not isinstance(raw_closure, dict) or set(raw_closure) != names:
        raise SeriesParseError(
            "closure must map exactly the declared generators", position="closure"
        )
    closure: dict[str, frozenset[str]] = {}
    for gname, members in raw_closure.items():
        if not isinstance(members, list) or not all(
            isinstance(m, str) and m in names for m in members
        ):
            raise SeriesParseError(
                "closure entries must list declared generator names",
                position=f"closure.{gname}",
            )
        closure[gname] = frozenset(members)
    model = CellModel(
        context=context,
        boundary0=tables["boundary0"],
        differential=tables["differential"],
        closure=closure,
        order=context.max_weight,
    )
    return name, model


def encode_model(model: CellModel, name: str) -> str:
    return json.dumps(model_to_json_dict(model, name), indent=2, ensure_ascii=False)


def decode_model(text: str) -> tuple[str, CellModel]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SeriesParseError(exc.msg, position=exc.pos) from None
    return model_from_json_dict(data)
