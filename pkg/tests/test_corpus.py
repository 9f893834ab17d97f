import numpy as np

from hypokit import hypocoercivity_index
from hypokit.corpus import (
    random_semidissipative,
    run_verification,
    semidissipative_corpus,
    stable_corpus,
)


class TestGenerators:
    def test_semidissipative_structure(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            b = random_semidissipative(rng, 4, rank=2)
            h = (b + b.conj().T) / 2.0
            w = np.linalg.eigvalsh(h)
            assert w[0] >= -1e-12
            assert np.sum(w > 1e-8) == 2

    def test_corpus_deterministic(self):
        a = semidissipative_corpus(11, 5)
        b = semidissipative_corpus(11, 5)
        assert len(a) == len(b) == 5
        for x, y in zip(a, b):
            assert np.array_equal(x.B, y.B)

    def test_corpus_index_spread(self):
        indices = {hypocoercivity_index(s).index for s in semidissipative_corpus(2024, 60)}
        assert indices >= {0, 1, 2}

    def test_stable_corpus(self):
        for b in stable_corpus(3, 10):
            lam = np.linalg.eigvals(b)
            assert lam.real.min() > 0  # -B strictly stable


class TestVerification:
    def test_deterministic_summary(self):
        s1 = run_verification(seed=5, count=8)
        s2 = run_verification(seed=5, count=8)
        assert s1.passed and s2.passed
        for p1, p2 in zip(s1.properties, s2.properties):
            assert (p1.name, p1.checked, p1.failures) == (p2.name, p2.checked, p2.failures)

    def test_only_filter(self):
        summary = run_verification(seed=5, count=5, only="hilbert")
        assert [p.name for p in summary.properties] == ["hilbert"]
        assert summary.passed

    def test_property_counts(self):
        summary = run_verification(seed=9, count=6)
        names = [p.name for p in summary.properties]
        assert names == ["cayley", "plateau", "peano", "hilbert"]
        cayley = summary.properties[0]
        assert cayley.checked == 6 * 3  # three step sizes per system
