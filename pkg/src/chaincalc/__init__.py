"""Composable theories of labeled chains.

Subpackages and modules:

* :mod:`chaincalc.formula` -- monadic second-order formulas, parser, depth
* :mod:`chaincalc.chain` -- finite words, chain expressions, brute-force oracle
* :mod:`chaincalc.theory` -- n-theories, their sums and omega-powers, deciding
* :mod:`chaincalc.interp` -- interpretations of structures in words
* :mod:`chaincalc.cli` -- the ``chaincalc`` command
"""

__version__ = "0.1.0"
