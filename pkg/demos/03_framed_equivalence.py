"""Framed representations of the tensor quiver and the round trip through B."""
import random

from fermat_mirror import check_framed, functor_F, functor_G, lemma_identities, trivialize
from fermat_mirror.framed import random_framed_rep
from fermat_mirror.rep import random_beilinson_rep

rng = random.Random(1)
E = random_beilinson_rep(3, [1, 2, 1], rng=rng)
fr = functor_F(E)
print("F(E) lives on", len(fr.rep.support), "vertices; framing ok:", check_framed(fr).ok)
print("G(F(E)) == E:", functor_G(fr) == E)

# a framed rep whose framings are far from the identity
fr = random_framed_rep(4, [1, 1, 2, 1], rng=rng)
triv, t = trivialize(fr)
print("trivialization is a framed isomorphism:", t.is_isomorphism())
print("it lands on F(G(fr)):", triv.rep == functor_F(functor_G(fr)).rep)
print("lemma identities:", lemma_identities(fr))
