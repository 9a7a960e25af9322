import pytest

app_test = pytest.importorskip("streamlit.testing.v1")


def test_app_runs_default_sweep():
    at = app_test.AppTest.from_file("../app.py", default_timeout=60).run()
    assert not at.exception
    assert len(at.info) == 1

    at.sidebar.button[0].click().run()
    assert not at.exception
    assert not at.error
    assert len(at.dataframe) >= 1
    assert at.metric[0].value == "62"


def test_app_reports_parse_errors():
    at = app_test.AppTest.from_file("../app.py", default_timeout=60).run()
    at.sidebar.text_input[0].set_value("x^").run()
    at.sidebar.button[0].click().run()
    assert not at.exception
    assert "Invalid input" in at.error[0].value
