"""Relative Picard groups of moduli stacks of principal bundles on pointed curves.

The package is organised bottom-up:

* :mod:`bunpic.abelian` exact integer linear algebra and abelian groups;
* :mod:`bunpic.rootdata` root data, derived lattices, π₁ and Weyl groups;
* :mod:`bunpic.symforms` Sym² lattices, invariant forms and contractions;
* :mod:`bunpic.taut` tautological classes on the torus side;
* :mod:`bunpic.picard` the assembled Picard group presentations;
* :mod:`bunpic.cli` the ``bunpic`` command.
"""
from __future__ import annotations

__version__ = "0.1.0"
