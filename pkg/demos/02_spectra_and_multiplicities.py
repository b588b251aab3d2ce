"""Spectra of intersection matrices, exactly where possible.

The tridiagonal intersection matrix L has D+1 simple eigenvalues.  Rational
ones are integers (the characteristic polynomial is monic with integer
coefficients) and are extracted exactly; the rest are isolated by exact Sturm
counts and polished to the working precision (DRGF_PRECISION digits).
"""

from drgf import parse_array, spectrum, standard_sequence
from drgf.spectral import intersection_matrix, multiplicity_upper_bound

arr = parse_array("{5,4,4,3;1,1,2,2}")   # the Odd graph O_5
print("L =")
print(intersection_matrix(arr))

spec = spectrum(arr)
print(f"eigenvalues: {spec.thetas}")
print(f"multiplicities: {spec.mults}  (sum = {sum(spec.mults)} = v)")

# the standard sequence of the smallest eigenvalue alternates in sign
seq = standard_sequence(arr, spec.theta_min)
print(f"u(theta_min) = {[str(u) for u in seq.u]}")
print(f"terminal residual = {seq.terminal_residual}")

# the tail bound dominates the true multiplicity for every split point j
for j in range(1, arr.D + 1):
    b = multiplicity_upper_bound(arr, seq, j)
    print(f"  multiplicity bound (j={j}): {float(b):9.4f}  >=  m = 8")

# mixed rational/irrational spectra work the same way
cox = parse_array("{3,2,2,1;1,1,1,2}")   # the Coxeter graph
spec = spectrum(cox)
print(f"\nCoxeter eigenvalues: {[str(t)[:20] for t in spec.thetas]}")
print(f"Coxeter multiplicities: {spec.mults}")
