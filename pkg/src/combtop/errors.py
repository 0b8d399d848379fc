"""Exception hierarchy shared by all modules."""


class CombTopError(Exception):
    """Base class for domain errors raised by this package."""


class WordError(CombTopError):
    """Invalid polygon word (parse failure or invariant violation)."""


class MoveError(CombTopError):
    """A rewrite was applied at positions that do not match its pattern."""


class MapError(CombTopError):
    """Invalid combinatorial map or map file."""


class GraphError(CombTopError):
    """Invalid graph input (disconnected where connectivity is required, ...)."""


class GuardExceeded(CombTopError):
    """An exhaustive search would exceed its configured guard."""


class GeometryError(CombTopError):
    """Invalid map geometry (valency or angle-bound violation, bad boundary)."""


class SPlaneError(CombTopError):
    """Invalid marked-plane configuration or query."""


class MultiGroupError(CombTopError):
    """Invalid multigroup structure or file."""


class LagrangeError(MultiGroupError):
    """No disjoint coset cover exists under the implemented coset definition."""


class ContractionError(CombTopError):
    """A declared contraction failed its sampled verification or did not settle."""


class InternalInconsistencyError(CombTopError):
    """Two routes that must agree disagreed; this signals a bug, not bad input."""
