import json
import os

import pytest

from graph_seqlab.cli import main


def run(argv):
    """main() returns an int, but argparse usage failures raise SystemExit."""
    try:
        return main(argv)
    except SystemExit as exc:
        return exc.code


@pytest.fixture
def corpus(tmp_path):
    path = tmp_path / "corpus.sdp"
    code = run(
        [
            "gen",
            "--n-sents",
            "12",
            "--len",
            "9",
            "--density",
            "1.2",
            "--p-cycle",
            "0.4",
            "--p-reentrancy",
            "0.4",
            "--seed",
            "5",
            str(path),
        ]
    )
    assert code == 0
    return path


def test_gen_is_deterministic(tmp_path):
    a, b = tmp_path / "a.sdp", tmp_path / "b.sdp"
    assert run(["gen", "--n-sents", "3", "--seed", "2", str(a)]) == 0
    assert run(["gen", "--n-sents", "3", "--seed", "2", str(b)]) == 0
    assert a.read_text() == b.read_text()


def test_encode_decode_score_flow(tmp_path, corpus, capsys):
    labels = tmp_path / "labels.tsv"
    decoded = tmp_path / "decoded.sdp"
    assert run(["encode", "--codec", "hb", str(corpus), str(labels)]) == 0
    assert labels.read_text().startswith("#codec=hb\n")
    assert run(["decode", str(labels), str(decoded)]) == 0
    capsys.readouterr()
    assert run(["score", str(corpus), str(decoded)]) == 0
    out = capsys.readouterr().out
    assert "UF=100.00" in out and "UM=100.00" in out


def test_encode_bk_roundtrip(tmp_path, corpus, capsys):
    labels = tmp_path / "labels.tsv"
    assert run(["encode", "--codec", "bk", "--k", "3", str(corpus), str(labels)]) == 0
    assert labels.read_text().startswith("#codec=bk:3\n")
    assert run(["roundtrip", "--codec", "hb", str(corpus)]) == 0
    out = capsys.readouterr().out
    assert out.strip().endswith("coverage: 100.00")


def test_roundtrip_reports_failures(tmp_path, corpus, capsys):
    assert run(["roundtrip", "--codec", "bk", "--k", "1", str(corpus)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[-1].startswith("coverage: ")
    value = float(out[-1].split()[-1])
    assert value < 100.0
    assert any(line.startswith("sentence ") and "missing" in line for line in out)


def test_stats_tsv_and_json(corpus, capsys, tmp_path):
    assert run(["stats", str(corpus)]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split("\t") == [
        "n_sents",
        "mean_len",
        "density",
        "mean_structural",
        "planes",
        "n_cycles",
    ]
    assert out[1].split("\t")[0] == "12"
    assert run(["stats", "--json", str(corpus)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["n_sents"] == 12


def test_stats_figures(corpus, capsys, tmp_path):
    figures = tmp_path / "figs"
    assert run(["stats", "--figures", str(figures), str(corpus)]) == 0
    assert (figures / "planes.png").stat().st_size > 0


def test_labelstats_outputs(tmp_path, corpus, capsys):
    labels = tmp_path / "labels.tsv"
    run(["encode", "--codec", "hb", str(corpus), str(labels)])
    figures = tmp_path / "figs"
    ranks = tmp_path / "ranks.tsv"
    code = run(
        [
            "labelstats",
            "--figures",
            str(figures),
            "--ranks",
            str(ranks),
            str(labels),
            str(labels),
        ]
    )
    assert code == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].split("\t") == ["inventory_size", "total", "unseen", "p50"]
    row = out[1].split("\t")
    assert row[2] == "0"  # eval set equals train set
    assert (figures / "rank_frequency.png").stat().st_size > 0
    lines = ranks.read_text().splitlines()
    assert lines[0] == "rank\tcount\tcumulative_fraction"
    assert lines[-1].endswith("1.000000")


def test_labelstats_json(tmp_path, corpus, capsys):
    labels = tmp_path / "labels.tsv"
    run(["encode", "--codec", "hb", str(corpus), str(labels)])
    assert run(["labelstats", "--json", str(labels)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["unseen"] == 0 and payload["inventory_size"] > 0


def test_decode_strict_flag(tmp_path, capsys):
    bad = tmp_path / "bad.tsv"
    bad.write_text("#codec=hb\nw1\t>\n\n")
    out = tmp_path / "out.sdp"
    assert run(["decode", str(bad), str(out)]) == 0  # robust salvages
    assert run(["decode", "--strict", str(bad), str(out)]) == 2
    err = capsys.readouterr().err
    assert "sentence 1" in err


def test_decode_conllu_output(tmp_path, capsys):
    labels = tmp_path / "l.tsv"
    labels.write_text("#codec=hb\na\t!/\nb\t^!>\n\n")
    out = tmp_path / "out.conllu"
    assert run(["decode", "--format", "conllu", str(labels), str(out)]) == 0
    text = out.read_text()
    assert "0:dep" in text and "1:dep" in text


def test_usage_errors_exit_one(corpus):
    assert run(["encode", "--codec", "bk", str(corpus), "out.tsv"]) == 1
    assert run(["encode", "--codec", "hb", "--k", "2", str(corpus), "out.tsv"]) == 1
    assert run(["roundtrip", "--codec", "bk", "--k", "0", str(corpus)]) == 1
    assert run(["gen", "--n-sents", "0", "out.sdp"]) == 1
    assert run(["nonsense"]) == 1


def test_data_errors_exit_two(tmp_path, capsys):
    missing = tmp_path / "missing.sdp"
    assert run(["stats", str(missing)]) == 2
    bad = tmp_path / "bad.sdp"
    bad.write_text("1\tw\t_\n\n")
    assert run(["stats", str(bad)]) == 2
    err = capsys.readouterr().err
    assert f"{bad}:1" in err


def test_jobs_env_and_flag(tmp_path, corpus, monkeypatch):
    labels_seq = tmp_path / "seq.tsv"
    labels_par = tmp_path / "par.tsv"
    assert run(["encode", "--codec", "hb", str(corpus), str(labels_seq)]) == 0
    assert (
        run(["encode", "--codec", "hb", "--jobs", "2", str(corpus), str(labels_par)])
        == 0
    )
    assert labels_seq.read_text() == labels_par.read_text()
    monkeypatch.setenv("GRAPH_SEQLAB_JOBS", "2")
    labels_env = tmp_path / "env.tsv"
    assert run(["encode", "--codec", "hb", str(corpus), str(labels_env)]) == 0
    assert labels_env.read_text() == labels_seq.read_text()
    monkeypatch.setenv("GRAPH_SEQLAB_JOBS", "soon")
    assert run(["encode", "--codec", "hb", str(corpus), str(labels_env)]) == 1


def test_stdout_output(corpus, capsys):
    assert run(["encode", "--codec", "hb", str(corpus), "-"]) == 0
    assert capsys.readouterr().out.startswith("#codec=hb\n")


def test_score_mismatched_corpora_exit_two(tmp_path, corpus, capsys):
    other = tmp_path / "other.sdp"
    run(["gen", "--n-sents", "2", str(other)])
    assert run(["score", str(corpus), str(other)]) == 2


def test_gen_conllu_format(tmp_path):
    out = tmp_path / "c.conllu"
    assert run(["gen", "--n-sents", "2", "--format", "conllu", str(out)]) == 0
    assert "\t0:" not in out.read_text()  # no root arcs generated
    from graph_seqlab.formats import parse_conllu

    with open(out) as handle:
        assert len(parse_conllu(handle)) == 2
