import pytest

from sfasat.services.selftest_service import SelftestService, compositions, count_vectors, enumerate_set_models


class TestHelpers:
    def test_compositions(self):
        assert list(compositions(2, 2)) == [(0, 2), (1, 1), (2, 0)]
        assert list(compositions(0, 0)) == [()]
        assert list(compositions(1, 0)) == []

    def test_count_vectors(self):
        assert list(count_vectors(2, 1)) == [(0, 0), (0, 1), (1, 0)]

    def test_set_models(self):
        models = list(enumerate_set_models(["A"], 2))
        assert [(m.universe, m.sets["A"]) for m in models] == [(0, []), (1, [1]), (1, []), (2, [1, 2]), (2, [2]), (2, [])]


class TestSmallSuites:
    def test_plain(self):
        report = SelftestService.plain_agreement(count=25, seed=11, domain=range(-3, 4), max_len=2)
        assert report.passed, report.failures

    def test_cardinality(self):
        report = SelftestService.cardinality_agreement(count=10, seed=12, domain=range(-2, 3), max_len=2)
        assert report.passed, report.failures

    def test_parikh(self):
        report = SelftestService.parikh_agreement(count=8, seed=13, length=3)
        assert report.passed, report.failures

    def test_parikh_linearity(self):
        report = SelftestService.parikh_linearity(sizes=range(5, 11))
        assert report.passed, report.failures
        assert report.instances == 6

    def test_qfbapa(self):
        report = SelftestService.qfbapa_agreement(count=15, seed=14, max_universe=4)
        assert report.passed, report.failures


@pytest.mark.slow
class TestAcceptanceSuites:
    def test_plain(self):
        assert SelftestService.plain_agreement().passed

    def test_cardinality(self):
        assert SelftestService.cardinality_agreement().passed

    def test_parikh(self):
        assert SelftestService.parikh_agreement().passed

    def test_parikh_linearity(self):
        assert SelftestService.parikh_linearity().passed

    def test_qfbapa(self):
        assert SelftestService.qfbapa_agreement().passed
