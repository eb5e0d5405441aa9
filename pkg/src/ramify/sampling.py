"""Random polynomials for property checks."""
from __future__ import annotations

import random

from .algebra.fields import random_element
from .algebra.poly import Poly

__all__ = ["random_poly"]


def random_poly(ring, rng: random.Random, max_degree: int = 6, max_terms: int = 5,
                height: int = 3) -> Poly:
    """A nonzero polynomial in the two parameters of ``ring`` with small coefficients."""
    field = ring.field
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            i = rng.randint(0, max_degree)
            j = rng.randint(0, max_degree - i)
            c = random_element(field, rng, height)
            if c != field.zero:
                terms[(i, j)] = c
        f = Poly(field, ring.names, terms)
        if not f.is_zero():
            return f
