"""Finite fields and the self-orthogonal matrices behind the constructions."""

from __future__ import annotations

# %% A field is enumerated as 0, then powers of a primitive element.
from mpqlrc import make_field
from mpqlrc.gf import conjugate
from mpqlrc.cli import element_label

F = make_field(3, 2)
print(F.q, "elements:", [element_label(F, x) for x in range(F.q)])
print("conjugate of g:", element_label(F, conjugate(F, F.generator)))

# %% The Euclidean matrix over GF(3): its Gram matrix is anti-diagonal with entries -1 = 2.
from mpqlrc.mpc import euclidean_selforth_matrix, gram

A, witness = euclidean_selforth_matrix(make_field(3), 3)
print(A.entries)
print(gram(A).entries)
print("permutation", witness.permutation, "diagonal", witness.diagonal)

# %% The Hermitian matrix over GF(9): A conj(A)^T is -1 times a permutation matrix.
from mpqlrc.fmatrix import conj_transpose, monomial_decompose
from mpqlrc.mpc import addot

Add = addot(F)
wit = monomial_decompose(Add @ conj_transpose(Add))
print("permutation", wit.permutation)
