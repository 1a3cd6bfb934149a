"""Analytic layer over the truncated tensor algebra.

Everything here is exact: scalar power series are lists of rationals,
operator series are polynomials in ``ad`` of a chosen degree-0
direction, and the exponential/logarithm pair lives in the
unit-augmented tensor algebra with the unit tracked implicitly (an
element ``z`` stands for ``1 + z``).  The multi-argument
Baker-Campbell-Hausdorff element is computed as the logarithm of a
product of exponentials, so its output is primitive weight by weight
whenever the inputs are; :func:`dgla.algebra.is_primitive` provides an
independent cross-check.

Series with a nonzero constant term, such as ``T/(1 - e^T)``, are
obtained by truncated division of scalar power series in one variable
before the variable is specialized to ``ad`` of anything.

The Bernoulli table is memoized through :func:`functools.lru_cache`,
which is safe under concurrent readers in CPython (at worst a value is
computed twice).
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

from .algebra import (
    AlgebraContext,
    AlgebraElement,
    Generator,
    GradingError,
    as_fraction,
    bracket,
)

if TYPE_CHECKING:  # pragma: no cover
    from .models import CellModel

__all__ = [
    "FlatnessError",
    "ModelError",
    "OperatorSeries",
    "apply_operator_series",
    "bch",
    "bernoulli",
    "edge_differential",
    "edge_differential_bernoulli",
    "exp_assoc",
    "extend_differential",
    "flow",
    "log_assoc",
    "maurer_cartan_defect",
    "twisted_differential",
]


class ModelError(ValueError):
    """A cell model is missing data needed by an operation."""


class FlatnessError(ValueError):
    """A purported point fails the flatness (Maurer-Cartan) equation."""


# -- scalar power series ------------------------------------------------


def _factorials(order: int) -> list[int]:
    out = [1]
    for k in range(1, order + 1):
        out.append(out[-1] * k)
    return out


def _series_quotient(
    num: Sequence[Fraction], den: Sequence[Fraction], order: int
) -> list[Fraction]:
    """Coefficients of num/den as a truncated power series.

    A common factor x^s is cancelled first, so the quotient exists as a
    formal power series exactly when num vanishes at least to the order
    den does.
    """
    num = list(num)
    den = list(den)
    shift = 0
    while shift < len(den) and not den[shift]:
        shift += 1
    if shift == len(den):
        raise ZeroDivisionError("division by the zero series")
    if any(num[k] for k in range(min(shift, len(num)))):
        raise ValueError("quotient is not a formal power series")
    num = num[shift:] or [Fraction(0)]
    den = den[shift:]
    lead = den[0]
    out = [Fraction(0)] * (order + 1)
    for k in range(order + 1):
        acc = num[k] if k < len(num) else Fraction(0)
        for j in range(max(0, k - len(den) + 1), k):
            acc -= out[j] * den[k - j]
        out[k] = acc / lead
    return out


def _exp_minus_one_over_x(order: int) -> list[Fraction]:
    facts = _factorials(order + 1)
    return [Fraction(1, facts[k + 1]) for k in range(order + 1)]


def _one_minus_exp(order: int, sign: int) -> list[Fraction]:
    # coefficients of 1 - e^{sign * x}
    facts = _factorials(order)
    out = [Fraction(0)] * (order + 1)
    for k in range(1, order + 1):
        out[k] = Fraction(-(sign**k), facts[k])
    return out


@lru_cache(maxsize=None)
def _bernoulli_table(order: int) -> tuple[Fraction, ...]:
    # x/(e^x - 1) = 1 / ((e^x - 1)/x); B_n is n! times the n-th coefficient
    one = [Fraction(1)] + [Fraction(0)] * order
    quotient = _series_quotient(one, _exp_minus_one_over_x(order), order)
    facts = _factorials(order)
    return tuple(quotient[n] * facts[n] for n in range(order + 1))


def bernoulli(n: int) -> Fraction:
    """The n-th Bernoulli number, from the expansion of x/(e^x - 1)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError(f"Bernoulli index must be a nonnegative integer, got {n!r}")
    return _bernoulli_table(n)[n]


# -- operator series ------------------------------------------------------


class OperatorSeries:
    """A polynomial ``sum_k c_k T^k`` awaiting ``T = ad`` of a direction.

    Coefficients are canonical rationals with zeros dropped.  Addition,
    subtraction, negation and scalar multiplication act coefficientwise;
    :meth:`compose` multiplies series, which is composition of the
    corresponding operators once both are specialized to the same
    direction.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Mapping[int, int | Fraction] | Iterable[tuple[int, int | Fraction]]) -> None:
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        cleaned: dict[int, Fraction] = {}
        for k, raw in items:
            if not isinstance(k, int) or isinstance(k, bool) or k < 0:
                raise ValueError(f"powers must be nonnegative integers, got {k!r}")
            value = as_fraction(raw)
            if value:
                cleaned[k] = value
        self.coeffs = cleaned

    @classmethod
    def from_coefficients(cls, seq: Sequence[int | Fraction]) -> OperatorSeries:
        return cls(enumerate(seq))

    @classmethod
    def exponential(cls, scale: int | Fraction, order: int) -> OperatorSeries:
        """``exp(scale * T)`` through ``T^order``."""
        s = as_fraction(scale)
        facts = _factorials(order)
        return cls({k: s**k / facts[k] for k in range(order + 1)})

    @classmethod
    def flow_integrator(cls, t: int | Fraction, order: int) -> OperatorSeries:
        """``(1 - exp(-t T)) / T`` through ``T^order``."""
        s = as_fraction(t)
        facts = _factorials(order + 1)
        return cls(
            {k: (-1) ** k * s ** (k + 1) / facts[k + 1] for k in range(order + 1)}
        )

    @classmethod
    def edge_source_series(cls, order: int) -> OperatorSeries:
        """``T/(1 - e^T)``: the series weighting an edge's source vertex.

        Obtained by truncated division of scalar power series, not from
        the Bernoulli table, so it stays an independent route from the
        explicit Bernoulli-sum form of the edge differential.
        """
        x = [Fraction(0), Fraction(1)]
        return cls(enumerate(_series_quotient(x, _one_minus_exp(order + 1, 1), order)))

    @classmethod
    def edge_target_series(cls, order: int) -> OperatorSeries:
        """``T/(1 - e^{-T})``: the series weighting an edge's target vertex."""
        x = [Fraction(0), Fraction(1)]
        return cls(enumerate(_series_quotient(x, _one_minus_exp(order + 1, -1), order)))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OperatorSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __add__(self, other: OperatorSeries) -> OperatorSeries:
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) + c
        return OperatorSeries(out)

    def __sub__(self, other: OperatorSeries) -> OperatorSeries:
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out.get(k, Fraction(0)) - c
        return OperatorSeries(out)

    def __neg__(self) -> OperatorSeries:
        return OperatorSeries({k: -c for k, c in self.coeffs.items()})

    def __rmul__(self, scalar: int | Fraction) -> OperatorSeries:
        s = as_fraction(scalar)
        return OperatorSeries({k: s * c for k, c in self.coeffs.items()})

    def compose(self, other: OperatorSeries, order: int | None = None) -> OperatorSeries:
        """Series product; equals operator composition at a common direction."""
        out: dict[int, Fraction] = {}
        for i, ci in self.coeffs.items():
            for j, cj in other.coeffs.items():
                if order is not None and i + j > order:
                    continue
                out[i + j] = out.get(i + j, Fraction(0)) + ci * cj
        return OperatorSeries(out)

    def apply(self, direction: AlgebraElement, target: AlgebraElement) -> AlgebraElement:
        return apply_operator_series(self, direction, target)

    def __repr__(self) -> str:
        body = " + ".join(f"({c}) T^{k}" for k, c in sorted(self.coeffs.items()))
        return f"<OperatorSeries {body or '0'}>"


def apply_operator_series(
    phi: OperatorSeries, direction: AlgebraElement, target: AlgebraElement
) -> AlgebraElement:
    """Evaluate ``phi(ad_direction)`` on ``target``.

    The direction must be graded-homogeneous of degree 0 and the target
    graded-homogeneous; iterated brackets truncate at the context's max
    weight, so the loop stops as soon as a power of ``ad`` vanishes.
    """
    if direction.context != target.context:
        raise GradingError("direction and target must share a context")
    ddeg = direction.homogeneous_degree()
    if ddeg not in (0, None):
        raise GradingError(f"operator direction must have degree 0, got {ddeg}")
    target.homogeneous_degree()  # raises on mixed input
    coeffs = phi.coeffs
    zero = target.context.zero()
    if not coeffs:
        return zero
    result = coeffs.get(0, Fraction(0)) * target
    current = target
    for k in range(1, max(coeffs) + 1):
        current = bracket(direction, current)
        if not current:
            break
        c = coeffs.get(k)
        if c:
            result = result + c * current
    return result


# -- exponentials, logarithms, BCH ---------------------------------------


def exp_assoc(x: AlgebraElement) -> AlgebraElement:
    """The truncated exponential ``sum_{k>=1} x^k / k!``, unit dropped.

    The returned element stands for ``exp(x) - 1``; the implicit unit
    makes products of exponentials expressible inside the truncated
    algebra.  Only graded-homogeneous elements of even degree are
    accepted: exponentials of odd elements are undefined here.
    """
    degree = x.homogeneous_degree()
    if degree is not None and degree % 2:
        raise GradingError(f"exponential of an odd element (degree {degree}) is undefined")
    acc = x
    power = x
    factorial = 1
    for k in range(2, x.context.max_weight + 1):
        power = power * x
        if not power:
            break
        factorial *= k
        acc = acc + Fraction(1, factorial) * power
    return acc


def log_assoc(z: AlgebraElement) -> AlgebraElement:
    """The truncated logarithm of ``1 + z``; inverse of :func:`exp_assoc`."""
    acc = z
    power = z
    for k in range(2, z.context.max_weight + 1):
        power = power * z
        if not power:
            break
        acc = acc + Fraction((-1) ** (k + 1), k) * power
    return acc


def _unital_product(z1: AlgebraElement, z2: AlgebraElement) -> AlgebraElement:
    # (1 + z1)(1 + z2) with the unit kept implicit
    return z1 + z2 + z1 * z2


def bch(
    xs: Sequence[AlgebraElement], context: AlgebraContext | None = None
) -> AlgebraElement:
    """The multi-argument Baker-Campbell-Hausdorff element.

    Computes ``log`` of the product of the exponentials of the inputs,
    truncated at the context's max weight, so that
    ``exp(bch([x1, ..., xn])) = exp(x1) ... exp(xn)`` holds through that
    weight.  Inputs must be graded-homogeneous of degree 0.  An empty
    input list yields the zero element of ``context``, which must then
    be supplied.
    """
    if not xs:
        if context is None:
            raise ValueError("bch of an empty list needs an explicit context")
        return context.zero()
    product: AlgebraElement | None = None
    for x in xs:
        degree = x.homogeneous_degree()
        if degree not in (0, None):
            raise GradingError(f"bch arguments must have degree 0, got {degree}")
        factor = exp_assoc(x)
        product = factor if product is None else _unital_product(product, factor)
    assert product is not None
    return log_assoc(product)


# -- differentials and flows ----------------------------------------------


def _resolve_generator(context: AlgebraContext, g: Generator | str) -> Generator:
    return context.generator(g if isinstance(g, str) else g.name)


def edge_differential(
    context: AlgebraContext,
    edge: Generator | str,
    source: Generator | str,
    target: Generator | str,
) -> AlgebraElement:
    """The unique differential of an edge generator, as an operator series.

    Evaluates ``T/(1 - e^T)`` on the source vertex and ``T/(1 - e^{-T})``
    on the target vertex, both at ``T = ad_edge``, truncated at the
    context's max weight.  The weight-1 part is ``target - source``.
    """
    e = _resolve_generator(context, edge)
    a = _resolve_generator(context, source)
    b = _resolve_generator(context, target)
    if e.degree != 0 or a.degree != -1 or b.degree != -1:
        raise GradingError(
            "edge differential needs a degree-0 edge and degree -1 endpoints"
        )
    order = context.max_weight - 1
    e_el = context.gen(e.name)
    left = OperatorSeries.edge_source_series(order).apply(e_el, context.gen(a.name))
    right = OperatorSeries.edge_target_series(order).apply(e_el, context.gen(b.name))
    return left + right


def edge_differential_bernoulli(
    context: AlgebraContext,
    edge: Generator | str,
    source: Generator | str,
    target: Generator | str,
) -> AlgebraElement:
    """The same edge differential via the explicit Bernoulli sum.

    Computes ``ad_e(b) + sum_i B_i/i! ad_e^i (b - a)``; kept alongside
    the operator-series form so the two independent routes can be
    compared exactly at every order.
    """
    e = _resolve_generator(context, edge)
    a = _resolve_generator(context, source)
    b = _resolve_generator(context, target)
    if e.degree != 0 or a.degree != -1 or b.degree != -1:
        raise GradingError(
            "edge differential needs a degree-0 edge and degree -1 endpoints"
        )
    order = context.max_weight - 1
    e_el = context.gen(e.name)
    b_el = context.gen(b.name)
    difference = b_el - context.gen(a.name)
    facts = _factorials(order)
    table = _bernoulli_table(order)
    series = OperatorSeries({k: table[k] / facts[k] for k in range(order + 1)})
    return bracket(e_el, b_el) + series.apply(e_el, difference)


def extend_differential(model: "CellModel", x: AlgebraElement) -> AlgebraElement:
    """Apply a model's differential to any element by the Leibniz rule.

    The differential assignment on generators extends uniquely to an
    odd derivation of the tensor algebra:
    ``D(uv) = (Du) v + (-1)^{|u|} u (Dv)``.  On (images of) Lie
    elements this restricts to the graded Lie derivation
    ``D[x, y] = [Dx, y] + (-1)^{|x|} [x, Dy]``.
    """
    context = model.context
    if x.context != context:
        raise ModelError("element does not belong to the model's context")
    x.homogeneous_degree()  # raises on mixed input
    differential = model.differential
    generators = context.generators
    parities = context._parities
    limit = context.max_weight
    out: dict[tuple[int, ...], Fraction] = {}
    for word, coeff in x._terms.items():
        sign = 1
        for position, letter in enumerate(word):
            name = generators[letter].name
            assigned = differential.get(name)
            if assigned is None:
                raise ModelError(f"generator {name!r} has no differential assignment")
            prefix = word[:position]
            suffix = word[position + 1 :]
            room = limit - len(word) + 1
            scale = coeff if sign > 0 else -coeff
            for u, cu in assigned._terms.items():
                if len(u) > room:
                    continue
                w = prefix + u + suffix
                prev = out.get(w)
                out[w] = scale * cu if prev is None else prev + scale * cu
            if parities[letter]:
                sign = -sign
    return AlgebraElement._make(context, out)


def maurer_cartan_defect(model: "CellModel", p: AlgebraElement) -> AlgebraElement:
    """``D p + (1/2)[p, p]``; zero exactly when ``p`` is a point."""
    degree = p.homogeneous_degree()
    if degree not in (-1, None):
        raise GradingError(f"a candidate point must have degree -1, got {degree}")
    return extend_differential(model, p) + Fraction(1, 2) * bracket(p, p)


def twisted_differential(
    model: "CellModel",
    p: AlgebraElement,
    x: AlgebraElement,
    verify_point: bool = True,
) -> AlgebraElement:
    """The differential twisted by a point: ``D x + [p, x]``.

    ``p`` must satisfy the flatness equation exactly at the model's
    order; pass ``verify_point=False`` to skip re-checking a point that
    was already verified (the check costs a full defect computation).
    """
    if verify_point:
        defect = maurer_cartan_defect(model, p)
        if defect:
            raise FlatnessError(
                f"twisting requires a flat point; defect has weights {defect.weights()}"
            )
    return extend_differential(model, x) + bracket(p, x)


def flow(
    model: "CellModel",
    direction: AlgebraElement,
    start: AlgebraElement,
    t: int | Fraction = 1,
) -> AlgebraElement:
    """Evolve ``start`` along the grading-preserving flow by ``direction``.

    In degree -1 the evolution is ``dx/dt = D(direction) - ad(direction) x``
    and the closed-form solution
    ``exp(-t ad) start + ((1 - exp(-t ad))/ad) D(direction)`` is
    evaluated through operator series; in degrees >= 0 the source term
    is absent and the solution is ``exp(-t ad) start``.  Flowing by
    ``direction`` for time ``t`` equals flowing by ``t * direction``
    for unit time.  The zero element is flowed as a degree -1 initial
    condition (its orbit sweeps the component of 0).
    """
    time = as_fraction(t)
    ddeg = direction.homogeneous_degree()
    if ddeg not in (0, None):
        raise GradingError(f"flow direction must have degree 0, got {ddeg}")
    degree = start.homogeneous_degree()
    order = model.context.max_weight - 1
    moved = OperatorSeries.exponential(-time, order).apply(direction, start)
    if degree is not None and degree >= 0:
        return moved
    source = extend_differential(model, direction)
    pushed = OperatorSeries.flow_integrator(time, order).apply(direction, source)
    return moved + pushed
