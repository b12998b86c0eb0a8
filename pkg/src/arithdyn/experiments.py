"""Batch experiments producing deterministic tabular reports."""

from __future__ import annotations

import csv
import io
import json
import statistics
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd
from functools import reduce

from . import __version__
from .distance import DEFAULT_EPS, Delta_hat, complexity, delta_hat
from .errors import DegenerateInputError, NotAMorphismError
from .height_bounds import find_certificate
from .intervals import DEFAULT_PRECISION, decimal_string, log_enclosure
from .morphisms import Morphism, naive_height, phi_A, power_map
from .points import ProjPoint
from .polynomials import num_monomials

SCHEMA_VERSION = 1
_DIGITS = 20


def _fmt(x, column: str = "") -> str:
    if isinstance(x, Fraction):
        up = column.endswith(("upper", "_hi"))
        return decimal_string(x, _DIGITS, "ceiling" if up else "floor")
    if isinstance(x, bool):
        return "1" if x else "0"
    if x is None:
        return ""
    return str(x)


@dataclass
class ExperimentReport:
    name: str
    config: dict
    columns: list[str]
    rows: list[dict]
    summary: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["schema"] + self.columns)
        tag = f"{self.name}/v{SCHEMA_VERSION}"
        for row in self.rows:
            w.writerow([tag] + [_fmt(row.get(c), c) for c in self.columns])
        return buf.getvalue()

    def to_json(self) -> dict:
        return {
            "experiment": self.name,
            "schema": SCHEMA_VERSION,
            "config": self.config,
            "provenance": self.provenance,
            "summary": {k: _fmt(v, k) if isinstance(v, Fraction) else v for k, v in self.summary.items()},
            "rows": [{c: _fmt(r.get(c), c) for c in self.columns} for r in self.rows],
        }

    def dumps(self, fmt: str = "json") -> str:
        if fmt == "csv":
            return self.to_csv()
        return json.dumps(self.to_json(), indent=2, sort_keys=False) + "\n"


def _provenance(precision_bits: int, eps, **extra) -> dict:
    out = {"version": __version__, "precision": precision_bits, "eps": str(Fraction(eps))}
    out.update(extra)
    return out


def phi_A_experiment(d: int, A_list, B: int = 10, eps=DEFAULT_EPS,
                     precision_bits: int = DEFAULT_PRECISION) -> ExperimentReport:
    """Distances of phi_A = [x^d + A x^(d-1) y : y^d] from the power map, with [-A:1] always sampled.

    Each row sets the measured sup of |(1/d) h(phi(a)) - h(a)| beside the
    value (1/d) log(1 + |A|) and flags rows where the measurement exceeds it.
    """
    eps = Fraction(eps)
    columns = ["d", "A", "h_map_lo", "h_map_hi", "Delta_lower", "Delta_upper", "Delta_witness",
               "delta_lower", "delta_upper", "delta_witness", "measured_sup_lower",
               "claimed_bound_hi", "exceeds_claimed"]
    rows = []
    for A in A_list:
        A = int(A)
        if A == 0:
            raise DegenerateInputError("phi_A needs A != 0")
        phi = phi_A(d, A)
        extra = [ProjPoint((-A, 1))]
        D = Delta_hat(phi, None, B, eps, precision_bits, extra)
        c = complexity(phi, B, eps, precision_bits, extra)
        h = naive_height(phi, precision_bits)
        claimed = log_enclosure(1 + abs(A), precision_bits).scale(Fraction(1, d), bits=precision_bits + 8)
        rows.append({
            "d": d, "A": A, "h_map_lo": h.lo, "h_map_hi": h.hi,
            "Delta_lower": D.lower, "Delta_upper": D.upper, "Delta_witness": str(D.witness),
            "delta_lower": c.lower, "delta_upper": c.upper, "delta_witness": str(c.witness),
            "measured_sup_lower": D.lower, "claimed_bound_hi": claimed.hi,
            "exceeds_claimed": D.lower > claimed.hi,
        })
    summary = {"rows_exceeding_claimed": sum(r["exceeds_claimed"] for r in rows)}
    return ExperimentReport("phi_a", {"d": d, "A": [int(a) for a in A_list], "bound": B},
                            columns, rows, summary, _provenance(precision_bits, eps))


def iter_coefficient_points(N: int, d: int, coeff_bound: int):
    """Primitive integer coefficient tensors with entries in [-c, c], first nonzero entry positive."""
    K = num_monomials(N, d)
    n = (N + 1) * K
    for flat in product(range(-coeff_bound, coeff_bound + 1), repeat=n):
        first = next((c for c in flat if c), 0)
        if first <= 0 or reduce(gcd, flat, 0) != 1:
            continue
        yield Morphism(N, d, tuple(flat[i * K:(i + 1) * K] for i in range(N + 1)))


def _morphism_or_none(phi: Morphism):
    try:
        return find_certificate(phi)
    except NotAMorphismError:
        return None


def alpha_scan(N: int, d: int, coeff_bound: int = 1, B: int = 3, eps=DEFAULT_EPS,
               precision_bits: int = DEFAULT_PRECISION) -> ExperimentReport:
    """Certified brackets for h(phi) / Delta_hat(phi) over all small-coefficient morphisms."""
    eps = Fraction(eps)
    columns = ["index", "map", "h_map_lo", "h_map_hi", "Delta_lower", "Delta_upper",
               "ratio_lower", "ratio_upper", "zero_complexity"]
    rows = []
    xs, ys = [], []
    for idx, phi in enumerate(iter_coefficient_points(N, d, coeff_bound)):
        if _morphism_or_none(phi) is None:
            continue
        h = naive_height(phi, precision_bits)
        D = Delta_hat(phi, None, B, eps, precision_bits)
        zero = D.upper == 0
        row = {"index": idx, "map": str(phi), "h_map_lo": h.lo, "h_map_hi": h.hi,
               "Delta_lower": D.lower, "Delta_upper": D.upper, "zero_complexity": zero}
        if not zero:
            row["ratio_lower"] = h.lo / D.upper
            row["ratio_upper"] = h.hi / max(D.lower, eps)
        rows.append(row)
        xs.append(float(h.mid))
        ys.append(float(D.upper))
    ceiling = d * num_monomials(N, d)
    brackets = [r["ratio_lower"] for r in rows if not r["zero_complexity"]]
    summary = {
        "morphisms": len(rows),
        "max_ratio_lower": max(brackets) if brackets else None,
        "ceiling_dK": ceiling,
    }
    if len(set(xs)) >= 2:
        fit = statistics.linear_regression(xs, ys)
        summary["fit_Delta_upper_slope"] = round(fit.slope, 12)
        summary["fit_Delta_upper_intercept"] = round(fit.intercept, 12)
    return ExperimentReport("alpha", {"N": N, "d": d, "coeff_bound": coeff_bound, "bound": B},
                            columns, rows, summary, _provenance(precision_bits, eps))


def bounded_complexity_search(N: int, d: int, psi: Morphism | None = None, coeff_bound: int = 1,
                              B_complexity=1, sample_bound: int = 2, eps=DEFAULT_EPS,
                              precision_bits: int = DEFAULT_PRECISION) -> ExperimentReport:
    """Enumerate Rat_d^N up to a coefficient bound and bracket delta_hat(phi, psi) for every morphism.

    Rows whose certified upper bound is at most ``B_complexity`` are flagged
    as the bounded-complexity sub-table.  The run aborts if a row contradicts
    the certified two-sided relation between h(phi) and the distance.
    """
    eps = Fraction(eps)
    psi = psi if psi is not None else power_map(N, 2)
    if psi.N != N or psi.d < 2:
        raise DegenerateInputError("reference map must act on P^N with degree >= 2")
    find_certificate(psi)
    B_complexity = Fraction(B_complexity)
    K = num_monomials(N, d)
    h_psi = naive_height(psi, precision_bits)
    columns = ["index", "map", "is_morphism", "h_map_lo", "h_map_hi", "delta_lower",
               "delta_upper", "witness", "bounded"]
    rows = []
    n_total = n_morph = 0
    for idx, phi in enumerate(iter_coefficient_points(N, d, coeff_bound)):
        n_total += 1
        row = {"index": idx, "map": str(phi)}
        if _morphism_or_none(phi) is None:
            row["is_morphism"] = False
            rows.append(row)
            continue
        n_morph += 1
        h = naive_height(phi, precision_bits)
        est = delta_hat(phi, psi, sample_bound, eps, precision_bits)
        for P, gap in est.pointwise.items():
            if gap.lo > est.upper:
                raise AssertionError(f"pointwise gap at {P} exceeds the certified bound for {phi}")
        row.update({"is_morphism": True, "h_map_lo": h.lo, "h_map_hi": h.hi,
                    "delta_lower": est.lower, "delta_upper": est.upper,
                    "witness": str(est.witness), "bounded": est.upper <= B_complexity})
        rows.append(row)

    scatter = [r for r in rows if r["is_morphism"]]
    summary = {"candidates": n_total, "morphisms": n_morph, "non_morphisms": n_total - n_morph,
               "bounded_count": sum(1 for r in scatter if r["bounded"])}
    if scatter:
        # measured constants for h(phi) <= (d+1) K delta.upper + C and delta.lower <= h(phi) + h(psi) + C'
        c_upper = max(r["h_map_hi"] - (d + 1) * K * r["delta_upper"] for r in scatter)
        c_lower = max(r["delta_lower"] - r["h_map_lo"] - h_psi.lo for r in scatter)
        for r in scatter:
            if r["h_map_hi"] > (d + 1) * K * r["delta_upper"] + c_upper:
                raise AssertionError(f"scatter row {r['index']} violates the upper relation")
            if r["delta_lower"] > r["h_map_lo"] + h_psi.lo + c_lower:
                raise AssertionError(f"scatter row {r['index']} violates the lower relation")
        summary["C_psi_measured"] = c_upper
        summary["C_prime_measured"] = c_lower
    config = {"N": N, "d": d, "psi": psi.to_json(), "coeff_bound": coeff_bound,
              "B_complexity": str(B_complexity), "sample_bound": sample_bound}
    return ExperimentReport("finiteness", config, columns, rows, summary,
                            _provenance(precision_bits, eps))
