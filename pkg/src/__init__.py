"""
abeltrace - Trace Tests and Interpolation for Germ Families

Numerical toolkit for deciding whether finitely many hypersurface germs lie on one
algebraic hypersurface, by tracking how their intersections with a moving family of
curves behave, and for reconstructing that hypersurface.
"""

__version__ = "0.1.0"
