"""Distance-regular graph feasibility toolkit.

Library layout:

* drgf.core        -- intersection arrays, parsing, derived parameters
* drgf.spectral    -- eigenvalues of L, standard sequences, multiplicities
* drgf.feasibility -- the battery of necessary conditions
* drgf.bound       -- the odd-girth smallest-eigenvalue bound machinery
* drgf.search      -- pruned enumeration and the diameter-4/5 classification
* drgf.oracle      -- explicit witness graphs and brute-force verification
* drgf.cli         -- the `drgf` command
"""

from .core import (IntersectionArray, derive_parameters, format_array,
                   odd_girth_of_array, parse_array)
from .feasibility import full_report
from .search import SearchSpec, classify_diameter, enumerate_arrays
from .spectral import eigenvalues, multiplicity, spectrum, standard_sequence

__version__ = "0.1.0"

__all__ = [
    "IntersectionArray", "SearchSpec", "classify_diameter",
    "derive_parameters", "eigenvalues", "enumerate_arrays", "format_array",
    "full_report", "multiplicity", "odd_girth_of_array", "parse_array",
    "spectrum", "standard_sequence", "__version__",
]
