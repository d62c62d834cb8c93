"""Rendering contract tests over handcrafted sweep CSVs."""

import math
import shutil
import subprocess

import pytest

from plots.cli import main
from plots.render import FigureSpec, RenderError, read_rows, render

FACTORS_HEADER = (
    "model,grid_order,delta_km,beta,v_db,policy,n_samples,"
    "mean_f,se_f,mean_l,se_l,mean_l_db,seed,oracle_f,oracle_l"
)
BLOCKING_HEADER = (
    "tech,model,grid_order,delta_km,beta,v_db,traffic_erlang_km2,"
    "C,M,R,mean_blocking,se,seed"
)


def factors_row(model, grid, beta, v, mean_f=0.5, mean_l=2e12):
    oracle_f = repr(2.0 / (beta - 2.0)) if model == "poisson" else ""
    oracle_l = "1.5e12" if model == "poisson" else ""
    mean_l_db = f"{10 * math.log10(mean_l):.6f}"
    return (
        f"{model},{grid},1.0,{beta},{v},smallest_path_loss,1000,"
        f"{mean_f},0.01,{mean_l},5e10,{mean_l_db},1,{oracle_f},{oracle_l}"
    )


def write_factors_csv(path, models=("hex", "poisson"), grids=(6, 30), betas=(3.0, 4.0),
                      vs=(0.0, 10.0, 20.0)):
    lines = [FACTORS_HEADER]
    for model in models:
        for grid in grids:
            for beta in betas:
                for i, v in enumerate(vs):
                    lines.append(factors_row(model, grid, beta, v, 0.4 + 0.1 * i))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_blocking_csv(path, betas=(2.5, 3.0, 4.0), vs=(0.0, 10.0, 20.0),
                       traffics=(46.2, 23.1)):
    lines = [BLOCKING_HEADER]
    for t in traffics:
        for beta in betas:
            for v in vs:
                b = min(0.9, 0.01 * t * (5.0 - beta) / (1.0 + 0.05 * v))
                lines.append(f"ofdma,hex,6,1.0,{beta},{v},{t},1000,1080,4,{b:.6f},0.002,1")
    path.write_text("\n".join(lines) + "\n")
    return path


class TestInputs:
    def test_unknown_kind_rejected(self):
        with pytest.raises(RenderError, match="unknown figure kind"):
            FigureSpec("x.csv", "pie", "x.png")

    def test_missing_file(self, tmp_path):
        with pytest.raises(RenderError, match="cannot read"):
            read_rows(tmp_path / "nope.csv")

    def test_header_only_csv(self, tmp_path):
        p = tmp_path / "empty.csv"
        p.write_text(FACTORS_HEADER + "\n")
        with pytest.raises(RenderError, match="no data rows"):
            read_rows(p)

    def test_comment_lines_tolerated(self, tmp_path):
        p = tmp_path / "c.csv"
        p.write_text("# a comment\n" + FACTORS_HEADER + "\n" + factors_row("hex", 6, 3.0, 0.0) + "\n")
        assert len(read_rows(p)) == 1

    def test_missing_columns_named(self, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("model,beta\nhex,3\n")
        with pytest.raises(RenderError, match="missing required columns.*v_db"):
            render(FigureSpec(str(p), "f_vs_v", str(tmp_path / "o.png")))


class TestFactorFigures:
    def test_one_curve_per_group_plus_references(self, tmp_path):
        csv_path = write_factors_csv(tmp_path / "f.csv")
        res = render(FigureSpec(str(csv_path), "f_vs_v", str(tmp_path / "f.png")))
        curves = [l for l in res.curve_labels if not l.startswith("Poisson limit")]
        refs = [l for l in res.curve_labels if l.startswith("Poisson limit")]
        assert len(curves) == 2 * 2 * 2  # models x grids x betas
        assert len(refs) == 2  # one per beta, Poisson rows only
        for path in res.paths:
            suffix = path.rsplit(".", 1)[1]
            assert suffix in ("png", "svg")
            assert (tmp_path / f"f.{suffix}").stat().st_size > 0

    def test_l_figure_uses_db_column(self, tmp_path):
        csv_path = write_factors_csv(tmp_path / "f.csv")
        res = render(FigureSpec(str(csv_path), "l_vs_v", str(tmp_path / "l.png")))
        assert len(res.curve_labels) == 8
        assert not any(l.startswith("Poisson limit") for l in res.curve_labels)

    def test_rendering_is_deterministic(self, tmp_path):
        csv_path = write_factors_csv(tmp_path / "f.csv")
        spec_a = FigureSpec(str(csv_path), "f_vs_v", str(tmp_path / "a.png"))
        spec_b = FigureSpec(str(csv_path), "f_vs_v", str(tmp_path / "b.png"))
        render(spec_a)
        render(spec_b)
        for ext in ("png", "svg"):
            assert (tmp_path / f"a.{ext}").read_bytes() == (tmp_path / f"b.{ext}").read_bytes()

    def test_single_row_renders(self, tmp_path):
        p = tmp_path / "one.csv"
        p.write_text(FACTORS_HEADER + "\n" + factors_row("poisson", 10, 4.0, 6.0) + "\n")
        res = render(FigureSpec(str(p), "f_vs_v", str(tmp_path / "one.png")))
        assert len(res.curve_labels) == 2  # the point and its reference line

    def test_empty_group_skipped_with_warning(self, tmp_path, capsys):
        p = tmp_path / "gap.csv"
        good = factors_row("hex", 6, 3.0, 0.0)
        hole = "hex,30,1.0,4.0,0.0,smallest_path_loss,1000,,,,,,1,,"
        p.write_text(FACTORS_HEADER + "\n" + good + "\n" + hole + "\n")
        res = render(FigureSpec(str(p), "f_vs_v", str(tmp_path / "gap.png")))
        assert res.skipped == ("hex N=30 beta=4",)
        assert "skipped" in capsys.readouterr().err
        assert len(res.curve_labels) == 1

    def test_all_groups_empty_is_an_error(self, tmp_path):
        p = tmp_path / "void.csv"
        p.write_text(FACTORS_HEADER + "\nhex,6,1.0,3.0,0.0,s,10,,,,,,1,,\n")
        with pytest.raises(RenderError, match="no plottable curves"):
            render(FigureSpec(str(p), "f_vs_v", str(tmp_path / "void.png")))


class TestBlockingSurface:
    def test_panel_per_traffic(self, tmp_path):
        csv_path = write_blocking_csv(tmp_path / "b.csv")
        res = render(FigureSpec(str(csv_path), "blocking_surface", str(tmp_path / "b.png")))
        assert res.curve_labels == ("46.2 Erlang/km2", "23.1 Erlang/km2")
        for path in res.paths:
            assert path.endswith((".png", ".svg"))

    def test_single_cell_surface(self, tmp_path):
        p = tmp_path / "one.csv"
        p.write_text(
            BLOCKING_HEADER + "\nofdma,hex,6,1.0,3.38,12.0,46.2,1000,1080,4,0.21,0.005,1\n"
        )
        res = render(FigureSpec(str(p), "blocking_surface", str(tmp_path / "one.png")))
        assert res.curve_labels == ("46.2 Erlang/km2",)

    def test_duplicate_cells_averaged(self, tmp_path):
        p = tmp_path / "dup.csv"
        rows = [
            "ofdma,hex,6,1.0,3.0,0.0,46.2,1000,1080,4,0.2,0.005,1",
            "ofdma,poisson,6,1.0,3.0,0.0,46.2,1000,1080,4,0.4,0.005,1",
        ]
        p.write_text(BLOCKING_HEADER + "\n" + "\n".join(rows) + "\n")
        res = render(FigureSpec(str(p), "blocking_surface", str(tmp_path / "dup.png")))
        assert res.curve_labels == ("46.2 Erlang/km2",)

    def test_deterministic(self, tmp_path):
        csv_path = write_blocking_csv(tmp_path / "b.csv")
        render(FigureSpec(str(csv_path), "blocking_surface", str(tmp_path / "a.png")))
        render(FigureSpec(str(csv_path), "blocking_surface", str(tmp_path / "c.png")))
        assert (tmp_path / "a.svg").read_bytes() == (tmp_path / "c.svg").read_bytes()
        assert (tmp_path / "a.png").read_bytes() == (tmp_path / "c.png").read_bytes()


class TestCli:
    def test_renders_and_prints_paths(self, tmp_path, capsys):
        csv_path = write_factors_csv(tmp_path / "f.csv")
        rc = main(["f_vs_v", "--in", str(csv_path), "--out", str(tmp_path / "fig.svg")])
        assert rc == 0
        out = capsys.readouterr().out.splitlines()
        assert out == [str(tmp_path / "fig.png"), str(tmp_path / "fig.svg")]
        assert (tmp_path / "fig.png").exists() and (tmp_path / "fig.svg").exists()

    def test_bad_input_exits_2(self, tmp_path, capsys):
        p = tmp_path / "bad.csv"
        p.write_text("model,beta\nhex,3\n")
        assert main(["f_vs_v", "--in", str(p), "--out", str(tmp_path / "x.png")]) == 2
        assert "missing required columns" in capsys.readouterr().err

    def test_unknown_kind_rejected_by_parser(self, tmp_path):
        with pytest.raises(SystemExit):
            main(["pie", "--in", "x.csv"])


@pytest.mark.skipif(shutil.which("shadowcell") is None, reason="simulator CLI not installed")
class TestEndToEnd:
    def test_c13_default_sweep_csvs_render_deterministically(self, tmp_path):
        # default sweep axes (models, grids, betas, v grid), sample counts
        # trimmed; then every figure kind, rendered twice, byte-stable
        factors = tmp_path / "factors.csv"
        blocking = tmp_path / "blocking.csv"
        run = lambda args: subprocess.run(args, capture_output=True, text=True, timeout=1200)
        proc = run(
            ["shadowcell", "factors", "--n-samples", "500", "--seed", "5",
             "--out", str(factors)]
        )
        assert proc.returncode == 0, proc.stderr[-2000:]
        proc = run(
            ["shadowcell", "blocking", "--realizations", "2", "--locations", "360",
             "--seed", "5", "--out", str(blocking)]
        )
        assert proc.returncode == 0, proc.stderr[-2000:]

        res_f = render(FigureSpec(str(factors), "f_vs_v", str(tmp_path / "f.png")))
        curves = [l for l in res_f.curve_labels if not l.startswith("Poisson limit")]
        refs = [l for l in res_f.curve_labels if l.startswith("Poisson limit")]
        assert len(curves) == 3 * 3 + 4 * 3  # hex grids x betas + poisson grids x betas
        assert len(refs) == 3
        res_l = render(FigureSpec(str(factors), "l_vs_v", str(tmp_path / "l.png")))
        assert len(res_l.curve_labels) == 21
        res_b = render(FigureSpec(str(blocking), "blocking_surface", str(tmp_path / "b.png")))
        assert len(res_b.curve_labels) == 3  # one panel per traffic density

        again = render(FigureSpec(str(factors), "f_vs_v", str(tmp_path / "f2.png")))
        assert again.curve_labels == res_f.curve_labels
        assert (tmp_path / "f.svg").read_bytes() == (tmp_path / "f2.svg").read_bytes()
        assert (tmp_path / "f.png").read_bytes() == (tmp_path / "f2.png").read_bytes()
