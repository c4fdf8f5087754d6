"""Small builders shared by the test modules."""
from models.models import BoundaryCondition, Mesh


def periodic_mesh(*counts, extents=None) -> Mesh:
    """Unit box with periodic boundaries on every side."""
    extents = extents or tuple((0.0, 1.0) for _ in counts)
    sides = ["left", "right"] if len(counts) == 1 else ["left", "right", "bottom", "top"]
    return Mesh(
        extents=extents,
        counts=tuple(counts),
        boundary={side: BoundaryCondition(kind="periodic") for side in sides},
    )
