"""Exception types shared across the package."""


class DimensionError(ValueError):
    """Matrix shapes are incompatible with the requested operation."""


class InvalidMeasure(ValueError):
    """A measure specification violates its invariants (duplicate nodes, bad sizes, ...)."""


class BudgetExceeded(IndexError):
    """A lattice request needs moments or Gram entries beyond what was generated."""


class LatticeBreakdown(ZeroDivisionError):
    """A denominator determinant vanished at a lattice site.

    ``what`` names the quantity being built and ``site`` is its ``(n, l)`` or
    ``(k, l)`` coordinate.
    """

    def __init__(self, what, site, detail=""):
        self.what = what
        self.site = tuple(site)
        msg = f"breakdown building {what} at site {self.site}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class OutOfDomain(LookupError):
    """A site lies outside the domain on which an identity is asserted.

    Raised for negative or order-0 determinant requests inside relation
    evaluation and for ``l < 2`` on the elliptic lattices.  Suites catch it and
    record the site as skipped.
    """


class LaxConstructionError(ValueError):
    """A Lax matrix entry cannot be placed or evaluated."""


class BasisIndexError(ValueError):
    """An elliptic basis index outside {0, 2, 3, 4, ...} was requested."""
