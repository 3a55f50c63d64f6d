"""Deterministic, seedable generators for the test dynamics.

All generators are pure functions of their parameters (seed included):
the same parameters always reproduce the same series bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, NumericalEscapeError

#: Coupled-map trajectories beyond this magnitude are treated as escaped.
HENON_ESCAPE_LIMIT = 1e6
#: Cubic-map orbits beyond this magnitude are treated as escaped.
CUBIC_ESCAPE_LIMIT = 10.0


@dataclass(frozen=True)
class HenonParams:
    """Parameters of the unidirectionally coupled quadratic-map pair.

    ``form="standard"`` uses the response update
    ``x1' = 1.4 - (eps*y1*x1 + (1-eps)*x1^2) + b*x2`` in which eps = 1
    synchronises the pair exactly; ``form="literal"`` replaces it with the
    affine variant ``x1' = 1.4 - (eps*y1 + (1-eps)*x1 + b*x2)``, kept
    selectable for comparison even though it cannot sustain chaos.
    ``initial_state`` optionally fixes (y1, y2, x1, x2) instead of drawing
    them uniformly from (-0.1, 0.1).
    """

    epsilon: float
    b: float = 0.3
    n: int = 100_000
    seed: int | None = None
    transient: int = 1000
    form: str = "standard"
    initial_state: tuple[float, float, float, float] | None = None

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise InvalidInputError(f"coupling must lie in [0, 1], got {self.epsilon}")
        if self.n < 1:
            raise InvalidInputError("n must be positive")
        if self.transient < 0:
            raise InvalidInputError("transient must be non-negative")
        if self.form not in ("standard", "literal"):
            raise InvalidInputError(f"form must be 'standard' or 'literal', got {self.form!r}")
        if self.initial_state is not None:
            state = tuple(float(v) for v in self.initial_state)
            if len(state) != 4 or not all(np.isfinite(state)):
                raise InvalidInputError("initial_state must be 4 finite values (y1, y2, x1, x2)")
            object.__setattr__(self, "initial_state", state)


@dataclass(frozen=True)
class MapParams:
    """Parameters shared by the scalar map generators.

    ``r`` is the logistic rate, ``a`` the cubic amplitude.  When ``x0`` is
    None the initial condition is drawn from the seed; ``transient``
    iterations are discarded before emitting ``n`` values.
    """

    n: int
    r: float = 4.0
    a: float = 3.0
    x0: float | None = None
    seed: int | None = None
    transient: int = 1000

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("n must be positive")
        if self.transient < 0:
            raise InvalidInputError("transient must be non-negative")
        if self.x0 is not None and not np.isfinite(self.x0):
            raise InvalidInputError("x0 must be finite")


def henon_coupled(params: HenonParams) -> tuple[np.ndarray, np.ndarray]:
    """Iterate the coupled pair and return (driver y1, response x1).

    The map runs ``transient + n`` steps from the initial state; the first
    ``transient`` iterates are discarded.  Trajectories exceeding
    ``HENON_ESCAPE_LIMIT`` raise :class:`NumericalEscapeError` naming the
    offending step.
    """
    if params.initial_state is not None:
        y1, y2, x1, x2 = params.initial_state
    else:
        rng = np.random.default_rng(params.seed)
        y1, y2, x1, x2 = rng.uniform(-0.1, 0.1, size=4)
    eps = float(params.epsilon)
    b = float(params.b)
    literal = params.form == "literal"
    driver = np.empty(params.n)
    response = np.empty(params.n)
    total = params.transient + params.n
    for step in range(total):
        if literal:
            x1_next = 1.4 - (eps * y1 + (1.0 - eps) * x1 + b * x2)
        else:
            x1_next = 1.4 - (eps * y1 * x1 + (1.0 - eps) * x1 * x1) + b * x2
        y1_next = 1.4 - y1 * y1 + b * y2
        y2 = y1
        x2 = x1
        y1 = y1_next
        x1 = x1_next
        if abs(y1) > HENON_ESCAPE_LIMIT or abs(x1) > HENON_ESCAPE_LIMIT:
            raise NumericalEscapeError(
                f"coupled-map trajectory escaped |value| > {HENON_ESCAPE_LIMIT:g} "
                f"at step {step} (eps={eps}, seed={params.seed})",
                step=step,
            )
        emit = step - params.transient
        if emit >= 0:
            driver[emit] = y1
            response[emit] = x1
    return driver, response


def logistic(params: MapParams) -> np.ndarray:
    """Logistic map ``x' = r x (1 - x)``; x0 must lie strictly inside (0, 1)."""
    if params.x0 is not None:
        x = float(params.x0)
    else:
        rng = np.random.default_rng(params.seed)
        x = float(rng.uniform(1e-9, 1.0 - 1e-9))
    if not 0.0 < x < 1.0:
        raise InvalidInputError(f"x0 must lie in (0, 1), got {x}")
    r = float(params.r)
    out = np.empty(params.n)
    total = params.transient + params.n
    for step in range(total):
        x = r * x * (1.0 - x)
        emit = step - params.transient
        if emit >= 0:
            out[emit] = x
    return out


def cubic(params: MapParams) -> np.ndarray:
    """Cubic map ``x' = a x (1 - x^2)`` on [-1, 1].

    Boundary starts (|x0| = 1, or x0 = 0) give degenerate all-zero orbits and
    are allowed; orbits leaving |x| > CUBIC_ESCAPE_LIMIT raise
    :class:`NumericalEscapeError`.
    """
    if params.x0 is not None:
        x = float(params.x0)
        if not -1.0 <= x <= 1.0:
            raise InvalidInputError(f"x0 must lie in [-1, 1], got {x}")
    else:
        rng = np.random.default_rng(params.seed)
        x = 0.0
        while x == 0.0:
            x = float(rng.uniform(-1.0, 1.0))
    a = float(params.a)
    out = np.empty(params.n)
    total = params.transient + params.n
    for step in range(total):
        x = a * x * (1.0 - x * x)
        if abs(x) > CUBIC_ESCAPE_LIMIT:
            raise NumericalEscapeError(
                f"cubic-map orbit escaped |x| > {CUBIC_ESCAPE_LIMIT:g} at step {step}",
                step=step,
            )
        emit = step - params.transient
        if emit >= 0:
            out[emit] = x
    return out


def white_noise(n: int, seed: int | None = None) -> np.ndarray:
    """n i.i.d. standard Gaussian draws from a seedable generator."""
    if n < 1:
        raise InvalidInputError("n must be positive")
    rng = np.random.default_rng(seed)
    return rng.standard_normal(n)
