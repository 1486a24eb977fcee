"""Striped Hankel determinants tau_n^l = det(c_{l+m i+j}) and the variables built from them."""

from hungryqd.errors import LatticeBreakdown, OutOfDomain
from hungryqd.exact.linalg import det
from hungryqd.measures import MomentSequence

KINDS = ("v", "w", "vt", "wt")


class TauLattice:
    """Memoized tau_n^l over a moment sequence.

    Cells are filled on first use and never change; a plain dict is enough
    because concurrent fills of one cell compute the same value.
    """

    def __init__(self, moments: MomentSequence):
        self.moments = moments
        self.m = moments.m
        self._cache = {}

    def matrix(self, n: int, l: int) -> list:
        c, m = self.moments, self.m
        return [[c[l + m * i + j] for j in range(n)] for i in range(n)]

    def tau(self, n: int, l: int):
        if n < 0 or l < 0:
            raise OutOfDomain(f"tau_{n}^{l} is undefined")
        key = (n, l)
        v = self._cache.get(key)
        if v is None:
            if n == 0:
                v = self.moments.values[0] * 0 + 1
            else:
                v = det(self.matrix(n, l))
            self._cache[key] = v
        return v

    __call__ = tau

    def _ratio(self, what, site, num, den):
        if den == 0:
            raise LatticeBreakdown(what, site, "zero tau in denominator")
        return num / den

    def v(self, n: int, l: int):
        """v_n^l = tau_{n+1}^{l+m} tau_n^l / (tau_n^{l+m} tau_{n+1}^l)."""
        t, m = self.tau, self.m
        return self._ratio("v", (n, l), t(n + 1, l + m) * t(n, l), t(n, l + m) * t(n + 1, l))

    def w(self, n: int, l: int):
        """w_n^l = tau_{n+2}^l tau_n^{l+1} / (tau_{n+1}^{l+1} tau_{n+1}^l); w_{-1} = 0."""
        t = self.tau
        if n == -1:
            return self.tau(0, 0) * 0
        return self._ratio("w", (n, l), t(n + 2, l) * t(n, l + 1), t(n + 1, l + 1) * t(n + 1, l))

    def vt(self, n: int, l: int):
        """vt_n^l = tau_{n+1}^{l+1} tau_n^l / (tau_n^{l+1} tau_{n+1}^l)."""
        t = self.tau
        return self._ratio("vt", (n, l), t(n + 1, l + 1) * t(n, l), t(n, l + 1) * t(n + 1, l))

    def wt(self, n: int, l: int):
        """wt_n^l = tau_{n+2}^l tau_n^{l+m} / (tau_{n+1}^{l+m} tau_{n+1}^l); wt_{-1} = 0."""
        t, m = self.tau, self.m
        if n == -1:
            return self.tau(0, 0) * 0
        return self._ratio("wt", (n, l), t(n + 2, l) * t(n, l + m), t(n + 1, l + m) * t(n + 1, l))

    def var(self, kind: str, n: int, l: int):
        if kind not in KINDS:
            raise ValueError(f"unknown variable kind {kind!r}; expected one of {KINDS}")
        return getattr(self, kind)(n, l)


def qd_var(lattice: TauLattice, kind: str, n: int, l: int):
    return lattice.var(kind, n, l)
