"""Words, Laurent polynomials, and derivations.

Walks through the algebra layer: free reduction, products that cancel
across the junction, and the system derivation annihilating the commutator
integral.
"""

from selsolve import NCPoly, Word, apply_derivation, poly_mul, poly_pow
from selsolve.ncalgebra import U, U_INV, V, V_INV
from selsolve.symmetry import COMMUTATOR_UV, kontsevich_system

u, v = Word((U,)), Word((V,))
ui, vi = Word((U_INV,)), Word((V_INV,))

print("words reduce as they multiply:")
print(f"  (u v) (v^-1 u)     = {Word((U, V)) * Word((V_INV, U))}")
print(f"  (u v u^-1) (u v^-1) = {Word((U, V, U_INV)) * Word((U, V_INV))}")
print(f"  u u^-1              = {u * ui}")

print("\npolynomials distribute over words:")
p = NCPoly({u: 1, v: 1})
q = NCPoly({ui: 1})
print(f"  (u + v)(u^-1) = {poly_mul(p, q)}")

system = kontsevich_system()
print("\nthe system flow:")
print(f"  D_t u = {system.dt.image_u}")
print(f"  D_t v = {system.dt.image_v}")
print(f"  D_t u^-1 = {system.dt.letter_image(U_INV)}  (derived, not stored)")

i_poly = NCPoly.from_word(COMMUTATOR_UV)
print("\nthe commutator word is a first integral:")
print(f"  I      = {i_poly}")
print(f"  I^-1   = {poly_pow(i_poly, -1)}")
print(f"  D_t I  = {apply_derivation(system.dt, i_poly)}")
print(f"  D_t I^-1 = {apply_derivation(system.dt, poly_pow(i_poly, -1))}")
