"""A short tour of the exact integer layer.

Run with ``python3 demos/smith_form_tour.py``.
"""

from chowcalc.abelian import PresentedGroup, cokernel, int_matrix, matmul, snf

# Smith normal form: U M V = D with U, V unimodular
M = int_matrix([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
U, D, V = snf(M)
print("M =\n", M)
print("D =\n", D)
print("U M V == D:", (matmul(matmul(U, M), V) == D).all())

# the cokernel Z^3 / im M reads off the diagonal
print("coker M =", cokernel(M))

# a presented group: Z^2 modulo the relation (2, 4)
G = PresentedGroup(2, int_matrix([[2], [4]]))
print("Z^2 / <(2, 4)> =", G.invariants())
