import pytest

from supertwist.parallel import pmap, thread_cap


def test_default_cap(monkeypatch):
    monkeypatch.delenv("SUPERTWIST_THREADS", raising=False)
    assert thread_cap() == 1


@pytest.mark.parametrize("bad", ["0", "-2", "many"])
def test_bad_cap(monkeypatch, bad):
    monkeypatch.setenv("SUPERTWIST_THREADS", bad)
    with pytest.raises(ValueError):
        thread_cap()


@pytest.mark.parametrize("n", ["1", "4"])
def test_order_is_preserved(monkeypatch, n):
    monkeypatch.setenv("SUPERTWIST_THREADS", n)
    assert pmap(lambda x: x * x, range(20)) == [x * x for x in range(20)]


def test_threaded_results_match(monkeypatch):
    from supertwist.algebra import defining, su
    from supertwist.vertex import brst_cohomology
    g = su(2)
    monkeypatch.setenv("SUPERTWIST_THREADS", "1")
    a = brst_cohomology(g, defining(g, 4), 1).dims
    monkeypatch.setenv("SUPERTWIST_THREADS", "3")
    assert brst_cohomology(g, defining(g, 4), 1).dims == a
