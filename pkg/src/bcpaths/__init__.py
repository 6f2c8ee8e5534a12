"""Bounded-curvature paths in the plane: planning, winding and homotopy classes."""
