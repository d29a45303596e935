from core.cache import cache_info, clear_caches, memoize


class TestMemoize:
    def test_second_call_hits_cache(self):
        calls = []

        @memoize(name="test.square")
        def square(n):
            calls.append(n)
            return n * n

        assert square(4) == 16
        assert square(4) == 16
        assert calls == [4]
        assert cache_info()["test.square"] == 1

    def test_clear_caches(self):
        @memoize(name="test.cleared")
        def double(n):
            return 2 * n

        double(3)
        clear_caches()
        assert cache_info()["test.cleared"] == 0

    def test_maxsize_bounds_table(self):
        @memoize(maxsize=2, name="test.bounded")
        def ident(n):
            return n

        for n in range(5):
            ident(n)
        assert len(ident.cache) == 2
