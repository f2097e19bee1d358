"""Seeded property checks over the small bundled sesquiads"""

import random
import unittest

from support import golden

from sesquiad import compose, enumerate_morphisms, is_embedding, tensor
from sheaf import localized_morphism
from spectrum import Congruence, closed_points, is_prime, pullback, spec_c
from universal_ring import ring_spectrum_finite

# tensor products of any two of these are nonzero
SMALL = ("f1", "idempotent", "tau-involution", "z3-field", "z6-units")
FINITE_RINGS = ("z3-field", "z4-nilpotent", "z6-units", "z15-units", "f7-squares", "idempotent-pair")
LOCAL_RINGS = ("z3-field", "z4-nilpotent", "z6-units", "f7-squares", "idempotent-pair")


def load_all(names):
    return {name: golden(name) for name in names}


class TestTensorHomBijection(unittest.TestCase):
    def test_sampled_triples(self):
        pool = load_all(SMALL)
        triples = [(a, b, c) for a in SMALL for b in SMALL for c in SMALL]
        rng = random.Random(20)
        hom_count = {}

        def homs(x, y):
            key = (x, y)
            if key not in hom_count:
                hom_count[key] = len(enumerate_morphisms(pool[x], pool[y]))
            return hom_count[key]

        for a, b, c in rng.sample(triples, 60):
            with self.subTest(a=a, b=b, c=c):
                product = tensor(pool[a], pool[b])
                self.assertEqual(len(enumerate_morphisms(product, pool[c])),
                                 homs(a, c) * homs(b, c))


class TestMorphismProperties(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.pool = load_all(SMALL + ("klein", "z4-nilpotent"))
        cls.rng = random.Random(11)

    def random_pairs(self, count):
        names = sorted(self.pool)
        for _ in range(count):
            yield self.rng.choice(names), self.rng.choice(names)

    def test_embedding_of_composite(self):
        names = sorted(self.pool)
        for _ in range(40):
            a, b, c = (self.rng.choice(names) for _ in range(3))
            for first in enumerate_morphisms(self.pool[a], self.pool[b]):
                for second in enumerate_morphisms(self.pool[b], self.pool[c]):
                    if is_embedding(compose(first, second)):
                        self.assertTrue(is_embedding(first), (a, b, c, first.map))

    def test_pullback_is_prime(self):
        for a, b in self.random_pairs(40):
            target = spec_c(self.pool[b])
            for m in enumerate_morphisms(self.pool[a], self.pool[b]):
                for point in target.points:
                    self.assertTrue(is_prime(self.pool[a], pullback(m, point)), (a, b, m.map))


class TestLocalization(unittest.TestCase):
    def test_localized_morphisms_are_local(self):
        pool = load_all(LOCAL_RINGS)
        for a in LOCAL_RINGS:
            for b in LOCAL_RINGS:
                for m in enumerate_morphisms(pool[a], pool[b]):
                    for point in spec_c(pool[b]).points:
                        local = localized_morphism(m, point)
                        with self.subTest(a=a, b=b, map=m.map, point=point.class_of):
                            self.assertTrue(local.exact)
                            self.assertTrue(local.local)


class TestMaximalIdeals(unittest.TestCase):
    def test_image_meets_every_closed_set(self):
        for name in FINITE_RINGS:
            with self.subTest(name=name):
                a = golden(name)
                s = spec_c(a)
                image = {Congruence.from_classes(m.class_of) for m in ring_spectrum_finite(a.ring)}
                self.assertTrue(image <= set(s.points))
                self.assertTrue(all(s.points[i] in image for i in closed_points(s)))


if __name__ == '__main__':
    unittest.main()
