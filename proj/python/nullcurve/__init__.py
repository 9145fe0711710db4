"""Null curves and conformal minimal immersions on punctured planar domains.

The heavy lifting lives in the compiled extension ``nullcurve._core``:
exact Weierstrass data over Q(i), quadric geometry, spinor monodromy,
contour periods and flux, convex-integration path deformation, and the
period correction to exact null curves.
"""

try:
    from ._core import (  # noqa: F401
        NullcurveError,
        catalog_classify,
        catalog_entries,
        classify,
        correct_to_null,
        deform_flat_loop,
        from_gw,
        is_nonflat,
        periods,
        residual,
        retract,
        spinor_monodromy,
        spinor_project,
        surface_grid,
        tangent_frame,
        winding_number,
    )
except ImportError:  # development tree: the extension sits on sys.path
    from _core import (  # noqa: F401
        NullcurveError,
        catalog_classify,
        catalog_entries,
        classify,
        correct_to_null,
        deform_flat_loop,
        from_gw,
        is_nonflat,
        periods,
        residual,
        retract,
        spinor_monodromy,
        spinor_project,
        surface_grid,
        tangent_frame,
        winding_number,
    )

__all__ = [
    "NullcurveError",
    "catalog_classify",
    "catalog_entries",
    "classify",
    "correct_to_null",
    "deform_flat_loop",
    "from_gw",
    "is_nonflat",
    "periods",
    "residual",
    "retract",
    "spinor_monodromy",
    "spinor_project",
    "surface_grid",
    "tangent_frame",
    "winding_number",
]
