"""Canned problems used by ``delayosc verify --suite`` and the acceptance tests."""

from .problem import Problem

# each horizon covers [0, 5 tau] with one spare interval
CANNED = {
    "pure-delay": Problem(0.0, 1.0, 1.0, 6, "1", "0"),
    "no-delay": Problem(1.0, 0.0, 1.0, 6, "sin(t)", "0"),
    "mixed": Problem(1.0, 0.5, 1.0, 6, "sin(t)", "cos(2*t)"),
    "forced": Problem(2.0, 1.5, 0.8, 6, "0", "sin(t)"),
    "history": Problem(0.7, 1.2, 1.3, 6, "exp(t/2) - t^2", "1"),
}
