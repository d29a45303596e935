from core.formatters import format_divider, format_header, format_kv, format_status, format_table


class TestFormatDivider:
    def test_default(self):
        result = format_divider()
        assert len(result) == 20

    def test_custom(self):
        assert format_divider("-", 5) == "-----"


class TestFormatHeader:
    def test_title_upper(self):
        result = format_header("spectrum")
        assert result.splitlines()[0] == "✦ SPECTRUM ✦"

    def test_subtitle(self):
        result = format_header("spectrum", "q0 = 1/2, L = 6")
        assert result.splitlines()[-1] == "q0 = 1/2, L = 6"


class TestFormatKv:
    def test_row(self):
        assert format_kv("value", "-1") == "▫️ value: -1"


class TestFormatStatus:
    def test_pass(self):
        assert format_status(True) == "[ PASS ]"

    def test_fail_with_label(self):
        assert format_status(False, "tau_eta") == "[ FAIL • tau_eta ]"


class TestFormatTable:
    def test_alignment(self):
        lines = format_table(("n", "+[n]"), [(1, "1"), (10, "3.5")]).splitlines()
        assert lines[0] == "n   +[n]"
        assert lines[2] == "1   1"
        assert lines[3] == "10  3.5"

    def test_divider_width(self):
        lines = format_table(("ab", "c"), [("x", "yy")]).splitlines()
        assert lines[1] == "─" * 6
