"""Discrete measures, moment sequences and elliptic Gram matrices.

Every verified statement depends on the measure only through its moments (one
variable) or its Gram entries (elliptic basis), so finite point measures are
the only input form.
"""

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from hungryqd.errors import BasisIndexError, BudgetExceeded, InvalidMeasure
from hungryqd.exact.scalar import EXACT, FLOAT, format_scalar, parse_scalar

_MASK = (1 << 64) - 1


class SplitMix64:
    """SplitMix64 generator (Steele, Lea, Flood constants).

    Chosen because it is a few lines in any language, so seeded measures can be
    reproduced outside Python.
    """

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] (modulo bias is negligible for small ranges)."""
        if hi < lo:
            raise ValueError("empty range")
        return lo + self.next_u64() % (hi - lo + 1)

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)


# ---------------------------------------------------------------- one variable


@dataclass(frozen=True)
class DiscreteMeasure:
    nodes: Tuple
    weights: Tuple
    source: object = None

    def __post_init__(self):
        if len(self.nodes) != len(self.weights):
            raise InvalidMeasure("nodes and weights differ in length")
        if len(set(self.nodes)) != len(self.nodes):
            raise InvalidMeasure("duplicate nodes")

    @property
    def size(self) -> int:
        return len(self.nodes)

    @property
    def positive(self) -> bool:
        """Positive-mode measure: all data > 0 and nodes strictly descending."""
        return (
            all(w > 0 for w in self.weights)
            and all(x > 0 for x in self.nodes)
            and all(a > b for a, b in zip(self.nodes, self.nodes[1:]))
        )

    def to_json(self) -> dict:
        return {"nodes": [format_scalar(x) for x in self.nodes], "weights": [format_scalar(w) for w in self.weights]}


def random_measure(seed: int, size: int, positive: bool = True) -> DiscreteMeasure:
    """Seeded measure with small-height rational nodes and weights.

    Positive measures have nodes p/q with 1 <= p <= 40, 1 <= q <= 6, sorted
    descending, and weights p/q with 1 <= p <= 9, 1 <= q <= 4.  Otherwise node
    numerators range over -40..40 (zero excluded) and weights may be negative.
    """
    if size < 1:
        raise InvalidMeasure("measure size must be at least 1")
    rng = SplitMix64(seed)
    nodes = set()
    while len(nodes) < size:
        p = rng.randint(1, 40) if positive else rng.randint(-40, 40)
        if p == 0:
            continue
        nodes.add(Fraction(p, rng.randint(1, 6)))
    ordered = sorted(nodes, reverse=True)
    weights = []
    for _ in ordered:
        w = Fraction(rng.randint(1, 9), rng.randint(1, 4))
        if not positive and rng.randint(0, 1):
            w = -w
        weights.append(w)
    return DiscreteMeasure(tuple(ordered), tuple(weights), source={"seed": seed, "size": size, "positive": positive})


def moment_budget(n_max: int, l_max: int, m: int) -> int:
    """Number of moments needed for every tau_n^l with n <= n_max, l <= l_max."""
    if n_max <= 0:
        return l_max + 1
    return l_max + m * (n_max - 1) + n_max


class MomentSequence:
    """c_0 .. c_{N-1} with hunger parameter m.  Reads past N raise BudgetExceeded."""

    __slots__ = ("values", "m", "source")

    def __init__(self, values: Sequence, m: int, source=None):
        if m < 1:
            raise ValueError("hunger parameter m must be >= 1")
        self.values = tuple(values)
        self.m = m
        self.source = source

    def __len__(self):
        return len(self.values)

    def __getitem__(self, i: int):
        if i < 0 or i >= len(self.values):
            raise BudgetExceeded(f"moment c_{i} outside budget of {len(self.values)}")
        return self.values[i]


def moments_from_measure(measure: DiscreteMeasure, count: int, m: int = 1, mode: str = EXACT) -> MomentSequence:
    """c_i = sum_j w_j * x_j**i for 0 <= i < count."""
    if count < 1:
        raise ValueError("moment count must be >= 1")
    if len(set(measure.nodes)) != len(measure.nodes):
        raise InvalidMeasure("duplicate nodes")
    conv = float if mode == FLOAT else Fraction
    nodes = [conv(x) for x in measure.nodes]
    weights = [conv(w) for w in measure.weights]
    values = []
    powers = list(weights)
    for _ in range(count):
        values.append(sum(powers, conv(0)))
        powers = [p * x for p, x in zip(powers, nodes)]
    return MomentSequence(values, m, source=measure.source)


# ---------------------------------------------------------------- elliptic


@dataclass(frozen=True)
class CurveSpec:
    """Weierstrass curve y^2 = x^3 - a x - b."""

    a: object
    b: object

    def rhs(self, x):
        return x ** 3 - self.a * x - self.b


def curve_membership(spec: CurveSpec, point, rel_tol: float = 1e-12) -> bool:
    x, y = point
    lhs, rhs = y * y, spec.rhs(x)
    if isinstance(lhs, float) or isinstance(rhs, float):
        return abs(lhs - rhs) <= rel_tol * max(1.0, abs(lhs), abs(rhs))
    return lhs == rhs


@dataclass(frozen=True)
class EllipticMeasure:
    points: Tuple
    weights: Tuple
    curve: Optional[CurveSpec] = None
    on_curve: bool = False
    source: object = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.points) != len(self.weights):
            raise InvalidMeasure("points and weights differ in length")
        if len(set(self.points)) != len(self.points):
            raise InvalidMeasure("duplicate points")
        if self.on_curve:
            if self.curve is None:
                raise InvalidMeasure("on_curve set without a curve")
            bad = [p for p in self.points if not curve_membership(self.curve, p)]
            if bad:
                raise InvalidMeasure(f"points not on curve: {bad[:3]}")

    @property
    def size(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        out = {
            "points": [[format_scalar(x), format_scalar(y)] for x, y in self.points],
            "weights": [format_scalar(w) for w in self.weights],
            "curve": None,
        }
        if self.curve is not None:
            out["curve"] = {"a": format_scalar(self.curve.a), "b": format_scalar(self.curve.b)}
        return out


def random_point_measure(seed: int, size: int, span: int = 12) -> EllipticMeasure:
    """Generic off-curve measure: distinct integer points in [-span, span]^2, weights 1..9.

    Integer data keeps every Gram entry an integer, which is what makes the
    large relation suites fast.
    """
    if size < 1:
        raise InvalidMeasure("measure size must be at least 1")
    if size > (2 * span + 1) ** 2:
        raise InvalidMeasure("more points requested than the grid holds")
    rng = SplitMix64(seed)
    pts = set()
    while len(pts) < size:
        pts.add((Fraction(rng.randint(-span, span)), Fraction(rng.randint(-span, span))))
    ordered = sorted(pts)
    weights = tuple(Fraction(rng.randint(1, 9)) for _ in ordered)
    return EllipticMeasure(tuple(ordered), weights, source={"seed": seed, "size": size, "kind": "generic"})


def curve_point_measure(seed: int, size: int, a: float = 0.0, b: float = -1.0) -> EllipticMeasure:
    """Float measure on y^2 = x^3 - a x - b: sample x where the cubic is positive, take y = +-sqrt."""
    if size < 1:
        raise InvalidMeasure("measure size must be at least 1")
    rng = SplitMix64(seed)
    curve = CurveSpec(float(a), float(b))
    pts = set()
    guard = 0
    while len(pts) < size:
        guard += 1
        if guard > 100000:
            raise InvalidMeasure("could not sample enough curve points")
        x = -3.0 + 6.0 * rng.random()
        r = curve.rhs(x)
        if r <= 0:
            continue
        y = math.sqrt(r) * (1 if rng.randint(0, 1) else -1)
        pts.add((x, y))
    ordered = sorted(pts)
    weights = tuple(0.5 + rng.random() for _ in ordered)
    return EllipticMeasure(tuple(ordered), weights, curve=curve, on_curve=True,
                           source={"seed": seed, "size": size, "kind": "curve"})


def check_basis_index(k: int) -> None:
    if k < 0 or k == 1:
        raise BasisIndexError(f"basis index {k} is not admissible (must be 0 or >= 2)")


def eval_basis(k: int, point):
    """e_0 = 1, e_{2j} = x^j, e_{2j+1} = x^(j-1) y."""
    check_basis_index(k)
    x, y = point
    if k == 0:
        return x - x + 1
    if k % 2 == 0:
        return x ** (k // 2)
    return x ** ((k - 1) // 2 - 1) * y


def admissible_indices(max_index: int) -> list:
    return [k for k in range(max_index + 1) if k != 1]


class GramMatrix:
    """M_ij = <e_i, e_j> over admissible indices up to max_index, filled eagerly."""

    def __init__(self, measure: EllipticMeasure, max_index: int):
        if max_index < 0:
            raise ValueError("max_index must be >= 0")
        self.measure = measure
        self.max_index = max_index
        idx = admissible_indices(max_index)
        values = {k: [eval_basis(k, p) for p in measure.points] for k in idx}
        w = measure.weights
        zero = w[0] - w[0] if w else Fraction(0)
        entries = {}
        for a, i in enumerate(idx):
            vi = values[i]
            wi = [wp * e for wp, e in zip(w, vi)]
            for j in idx[a:]:
                s = sum((x * y for x, y in zip(wi, values[j])), zero)
                entries[i, j] = s
                entries[j, i] = s
        self._entries = entries

    def __call__(self, i: int, j: int):
        return self.entry(i, j)

    def entry(self, i: int, j: int):
        check_basis_index(i)
        check_basis_index(j)
        if i > self.max_index or j > self.max_index:
            raise BudgetExceeded(f"Gram entry ({i},{j}) beyond max_index {self.max_index}")
        return self._entries[i, j]

    def inner(self, p: dict, q: dict):
        """<p, q> for coefficient maps over basis indices."""
        return sum((a * b * self.entry(i, j) for i, a in p.items() for j, b in q.items()), Fraction(0))


def gram_matrix(measure: EllipticMeasure, max_index: int) -> GramMatrix:
    return GramMatrix(measure, max_index)


# ---------------------------------------------------------------- JSON specs


def parse_measure_spec(spec: dict, mode: str = EXACT):
    """Build a DiscreteMeasure or EllipticMeasure from its JSON form.

    Accepted shapes:
      {"nodes": [...], "weights": [...]}
      {"seed": n, "size": r, "positive": true}
      {"points": [[x, y], ...], "weights": [...], "curve": {"a": .., "b": ..} | null}
      {"seed": n, "size": r, "elliptic": true}
    Rationals may be given as "p/q" strings.
    """
    if not isinstance(spec, dict):
        raise InvalidMeasure("measure spec must be a JSON object")
    conv = parse_scalar if mode == EXACT else (lambda v: float(parse_scalar(v)))
    try:
        if "points" in spec:
            pts = tuple((conv(x), conv(y)) for x, y in spec["points"])
            weights = tuple(conv(w) for w in spec.get("weights", [1] * len(pts)))
            curve = spec.get("curve")
            cs = CurveSpec(conv(curve["a"]), conv(curve["b"])) if curve else None
            return EllipticMeasure(pts, weights, curve=cs, on_curve=cs is not None, source=spec)
        if "nodes" in spec:
            nodes = tuple(conv(x) for x in spec["nodes"])
            weights = tuple(conv(w) for w in spec.get("weights", [1] * len(nodes)))
            return DiscreteMeasure(nodes, weights, source=spec)
        if "seed" in spec:
            seed, size = int(spec["seed"]), int(spec["size"])
            if spec.get("elliptic"):
                return random_point_measure(seed, size)
            return random_measure(seed, size, bool(spec.get("positive", True)))
    except InvalidMeasure:
        raise
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidMeasure(f"malformed measure spec: {exc}") from exc
    raise InvalidMeasure("measure spec needs one of 'nodes', 'points' or 'seed'")
