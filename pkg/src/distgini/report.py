"""Verdict records produced by the grid-based checkers."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

import numpy as np

DIRECTIONS = ("le", "ge", "both-boundary", "neither")
VERDICTS = ("holds", "fails", "untested")


@dataclass
class ConditionReport:
    """Outcome of checking one sufficient condition.

    Attributes
    ----------
    theorem_id : str
    direction : str
        Which reading of the pointwise comparison ``lhs (<=|>=) rhs`` holds
        on the whole grid: ``"le"``, ``"ge"``, ``"both-boundary"`` (equality
        within tolerance) or ``"neither"``.
    pointwise_violations : list of (u, lhs, rhs, reading)
        Grid points where ``reading`` (``"le"`` or ``"ge"``) fails.
    integral_terms : dict
        Named scalar integrals and measure values used by the check.
    implied_conclusion : str
        Human readable statement of what the hypotheses imply.
    conclusion_verified : str
        ``"holds"`` / ``"fails"`` after an independent numerical re-check,
        ``"untested"`` when no branch of the hypotheses was satisfied.
    details : dict
        Per-branch and auxiliary verdicts.
    """

    theorem_id: str
    direction: str
    pointwise_violations: list = field(default_factory=list)
    integral_terms: dict = field(default_factory=dict)
    implied_conclusion: str = ""
    conclusion_verified: str = "untested"
    details: dict = field(default_factory=dict)

    def violations_of(self, reading):
        return [v for v in self.pointwise_violations if v[3] == reading]

    def to_text(self) -> str:
        lines = [
            f"theorem: {self.theorem_id}",
            f"direction: {self.direction}",
            f"implied_conclusion: {self.implied_conclusion}",
            f"conclusion_verified: {self.conclusion_verified}",
        ]
        for name, value in self.integral_terms.items():
            lines.append(f"integral[{name}]: {_fmt(value)}")
        for name, value in self.details.items():
            lines.append(f"detail[{name}]: {_fmt(value)}")
        nle, nge = len(self.violations_of("le")), len(self.violations_of("ge"))
        lines.append(f"violations: le={nle} ge={nge}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["theorem", "reading", "u", "lhs", "rhs"])
        for u, lhs, rhs, reading in self.pointwise_violations:
            w.writerow([self.theorem_id, reading, _fmt(u), _fmt(lhs), _fmt(rhs)])
        return buf.getvalue()


def _fmt(value):
    if isinstance(value, float):
        return f"{value:.9g}"
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {_fmt(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "(" + ", ".join(_fmt(v) for v in value) + ")"
    if hasattr(value, "to_text"):
        return value.to_text().replace("\n", "; ")
    return str(value)


def compare_on_grid(u, lhs, rhs, tol=1e-9):
    """Classify ``lhs`` versus ``rhs`` sampled on grid ``u``.

    The slack at each point is ``tol * max(1, |lhs|, |rhs|)``, so large
    values (a quantile density near an endpoint) are compared relatively.

    Returns
    -------
    direction : str
    violations : list of (u, lhs, rhs, reading)
    """
    u = np.asarray(u, dtype=float)
    lhs = np.broadcast_to(np.asarray(lhs, dtype=float), u.shape)
    rhs = np.broadcast_to(np.asarray(rhs, dtype=float), u.shape)
    diff = lhs - rhs
    slack = tol * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs)))
    bad_le = diff > slack
    bad_ge = diff < -slack
    if not np.all(np.isfinite(diff)):
        bad_le |= ~np.isfinite(diff)
        bad_ge |= ~np.isfinite(diff)
    le_ok, ge_ok = not bad_le.any(), not bad_ge.any()
    if le_ok and ge_ok:
        direction = "both-boundary"
    elif le_ok:
        direction = "le"
    elif ge_ok:
        direction = "ge"
    else:
        direction = "neither"
    violations = [(float(u[i]), float(lhs[i]), float(rhs[i]), "le") for i in np.flatnonzero(bad_le)]
    violations += [(float(u[i]), float(lhs[i]), float(rhs[i]), "ge") for i in np.flatnonzero(bad_ge)]
    return direction, violations


def reading_holds(direction, reading):
    """Does a grid ``direction`` satisfy the requested ``reading``?"""
    return direction == reading or direction == "both-boundary"
