from kickratchet.svg import Series, plot_csv, read_csv_columns, render_svg


def _csv(path):
    path.write_text("g,x,y\n0,0,1\n0,1,2\n1,0,-1\n1,1,nan\n")
    return path


def test_plot_is_pure_function_of_csv(tmp_path):
    c = _csv(tmp_path / "d.csv")
    series = [Series("x", "y", "a", "both", where=("g", 0)),
              Series("x", "y", "b", "markers", where=("g", 1))]
    plot_csv(c, tmp_path / "1.svg", series, title="t")
    plot_csv(c, tmp_path / "2.svg", series, title="t")
    assert (tmp_path / "1.svg").read_bytes() == (tmp_path / "2.svg").read_bytes()
    text = (tmp_path / "1.svg").read_text()
    assert text.startswith("<svg") and text.rstrip().endswith("</svg>")
    assert "<polyline" in text and text.count("<circle") == 3


def test_read_columns(tmp_path):
    cols = read_csv_columns(_csv(tmp_path / "d.csv"))
    assert list(cols) == ["g", "x", "y"] and cols["y"][3] == "nan"


def test_log_axis_drops_non_positive():
    svg = render_svg([("c", "markers", [1, 2, 3], [1e-3, 0.0, 10.0])], log_y=True)
    assert svg.count("<circle") == 2


def test_escapes_labels():
    svg = render_svg([("a<b", "line", [0, 1], [0, 1])], title="x & y")
    assert "a&lt;b" in svg and "x &amp; y" in svg


def test_empty_data_still_renders():
    svg = render_svg([("none", "line", [], [])])
    assert svg.startswith("<svg") and "<polyline" not in svg
