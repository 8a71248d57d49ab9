"""Independent brute-force references used as test oracles.

Deliberately written with plain Python loops and no numpy so that nothing
here shares a code path with the library. All functions work both on floats
and on ``fractions.Fraction`` values, which makes exact-arithmetic
trajectory comparisons possible.
"""


def dot(a, b):
    if len(a) != len(b):
        raise ValueError("length mismatch")
    total = 0
    for x, y in zip(a, b):
        total = total + x * y
    return total


def step_for(kind, params, n, momentum):
    if kind == "invariant":
        return params["mu"]
    if kind == "iteration-promoting":
        decayed = params["mu0"] / n
        return decayed if decayed > params["phi"] else params["phi"]
    if kind == "error-driven":
        pp = dot(momentum, momentum)
        return params["mu0"] * pp / (pp + params["c"])
    raise ValueError(kind)


def trajectory(initial_taps, regressors, observations, kind, params):
    """Run the adaptive recursion with naive loops.

    Returns one (taps, error) pair per processed sample, where ``taps`` is
    the estimate after that sample's update.
    """
    taps = list(initial_taps)
    momentum = [0 * t for t in taps]
    out = []
    n = 1
    for x, y in zip(regressors, observations):
        e = y - dot(taps, x)
        if kind == "error-driven":
            power = dot(x, x)
            if power != 0:
                eta = params["eta"]
                coef = (1 - eta) * e / power
                momentum = [eta * pk + coef * xk for pk, xk in zip(momentum, x)]
        mu = step_for(kind, params, n, momentum)
        taps = [tk + mu * e * xk for tk, xk in zip(taps, x)]
        out.append((list(taps), e))
        n += 1
    return out


def tap_error_curve(true_taps, estimates):
    """Squared tap-error norm per estimate, naive loops."""
    curve = []
    for est in estimates:
        s = 0
        for w, v in zip(true_taps, est):
            s = s + (w - v) * (w - v)
        curve.append(s)
    return curve


def mean(values):
    total = 0
    for v in values:
        total = total + v
    return total / len(values)
