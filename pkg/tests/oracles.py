"""Independent test oracles, built from first principles only.

These deliberately avoid the code paths they are used to check: the
Bernoulli oracle uses the binomial recurrence instead of series
division, and the flow oracle integrates the defining ODE weight by
weight with exact polynomial coefficients instead of evaluating the
closed-form operator series.
"""

from fractions import Fraction
from math import comb

from dgla import bracket, extend_differential, weight_component


def bernoulli_recurrence(n: int) -> Fraction:
    """B_n from the recurrence sum_{k<n} C(n+1, k) B_k = -(n+1) B_n."""
    values = [Fraction(1)]
    for m in range(1, n + 1):
        acc = sum(comb(m + 1, k) * values[k] for k in range(m))
        values.append(Fraction(-acc, m + 1))
    return values[n]


def iterative_flow(model, direction, start, t):
    """Solve the flow ODE degree by degree in the weight filtration.

    In degree -1 the equation is dx/dt = D(direction) - ad(direction) x,
    in degrees >= 0 the source term is absent.  The weight-k component
    of the solution only involves lower-weight components on the right
    hand side, so each x_k(t) is an exact polynomial in t obtained by
    integrating a polynomial built from already-solved weights.
    """
    ctx = model.context
    order = ctx.max_weight
    time = Fraction(t)
    degree = start.homogeneous_degree()
    include_source = degree is None or degree == -1
    zero = ctx.zero()
    source = extend_differential(model, direction) if include_source else zero

    direction_parts = {}
    for k in range(1, order + 1):
        part = weight_component(direction, k)
        if part:
            direction_parts[k] = part

    # polys[k][j] is the weight-k element multiplying t^j
    polys: dict[int, list] = {}
    for k in range(1, order + 1):
        rhs = [weight_component(source, k)] if source else [zero]
        for i, e_i in direction_parts.items():
            if i >= k:
                continue
            for j, coefficient in enumerate(polys[k - i]):
                while len(rhs) <= j:
                    rhs.append(zero)
                if coefficient:
                    rhs[j] = rhs[j] - bracket(e_i, coefficient)
        poly = [weight_component(start, k)]
        for j, r in enumerate(rhs):
            poly.append(Fraction(1, j + 1) * r)
        polys[k] = poly

    total = zero
    for poly in polys.values():
        power = Fraction(1)
        for coefficient in poly:
            if coefficient:
                total = total + power * coefficient
            power *= time
    return total
