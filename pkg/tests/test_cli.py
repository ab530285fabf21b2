import json

import pytest

from colstream.cli import main
from colstream.cycles import compare_sweep, cycles_this_work, rows_from_csv
from colstream.mapping import Event, build_schedule
from colstream.priorart import builtin_dataset, records_to_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sim_227_k4(capsys):
    code, out, _ = run(capsys, "sim", "--n", "227", "--k", "4", "--seed", "1")
    assert code == 0
    assert out.strip() == "cycles=117840 verified=true"


def test_sim_unsupported_kernel(capsys):
    code, _, err = run(capsys, "sim", "--n", "10", "--k", "12")
    assert code == 2
    assert "unsupported kernel" in err


def test_sim_unsupported_stride(capsys):
    code, _, err = run(capsys, "sim", "--n", "10", "--k", "3", "--stride", "2")
    assert code == 2
    assert "stride" in err


def test_sim_multi_channel(capsys, tmp_path):
    out_path = tmp_path / "sim.json"
    code, out, _ = run(capsys, "sim", "--n", "16", "--k", "5", "--channels", "2",
                       "--filters", "2", "--seed", "7", "--out", str(out_path))
    assert code == 0
    assert out.strip() == f"cycles={4 * cycles_this_work(16, 5)} verified=true"
    summary = json.loads(out_path.read_text())
    assert summary["verified"] and summary["padded_elements"] == 0 and summary["passes"] == 20


def test_sim_mismatch_exit_code(capsys, monkeypatch):
    import colstream.cli as cli
    real = cli.verify_against_oracle

    def broken(*a, **kw):
        res = real(*a, **kw)
        res.engine.outputs[0, 0, 0] += 1
        res.equal, res.max_abs_diff = False, 1
        return res

    monkeypatch.setattr(cli, "verify_against_oracle", broken)
    code, out, _ = run(capsys, "sim", "--n", "8", "--k", "3")
    assert code == 3
    assert "verified=false" in out


def test_compare(capsys, tmp_path):
    csv_path, svg_path = tmp_path / "cmp.csv", tmp_path / "cmp.svg"
    code, out, _ = run(capsys, "compare", "--n", "227", "--out", str(csv_path),
                       "--svg", str(svg_path))
    assert code == 0
    rows = rows_from_csv(csv_path.read_text())
    assert rows == compare_sweep(227)
    assert len(rows) == 9
    r7 = rows[4]
    assert (r7.k, r7.cycles_this, r7.cycles_baseline, r7.classification) == \
           (7, 287_021, 463_761, "fewer")
    assert {r.k for r in rows if r.classification == "fewer"} >= {4, 7, 10}
    assert len(out.splitlines()) == 9 and out.startswith("k=3: more")
    assert svg_path.read_text().startswith("<svg")


def test_compare_stdout_is_pure_csv(capsys):
    code, out, err = run(capsys, "compare", "--n", "227")
    assert code == 0
    assert rows_from_csv(out) == compare_sweep(227)
    assert "k=4: fewer" in err


def test_compare_bad_range(capsys):
    code, _, _ = run(capsys, "compare", "--n", "227", "--kmin", "12")
    assert code == 2


def test_eval(capsys):
    code, out, _ = run(capsys, "eval")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "name,computed_e,paper_e,delta"
    assert lines[1].startswith("PULP,443.07")
    kneron = next(l for l in lines if l.startswith("Kneron,")).split(",")
    assert abs(float(kneron[1]) - 86.86) / 86.86 < 1e-3
    es = [float(l.split(",")[1]) for l in lines[1:]]
    assert es == sorted(es, reverse=True)


def test_eval_normalize_self(capsys):
    code, out, _ = run(capsys, "eval", "--normalize-to", "152")
    assert code == 0
    header = out.splitlines()[0].split(",")
    kneron = dict(zip(header, next(l for l in out.splitlines() if l.startswith("Kneron,")).split(",")))
    assert float(kneron["norm_power_w"]) == 0.35
    assert float(kneron["norm_compute_gops"]) == 152


def test_eval_custom_dataset(capsys, tmp_path):
    path = tmp_path / "ds.csv"
    path.write_text(records_to_csv(builtin_dataset()[:2]))
    code, out, _ = run(capsys, "eval", "--dataset", str(path), "--format", "jsonl")
    assert code == 0
    recs = [json.loads(l) for l in out.splitlines()]
    assert [r["name"] for r in recs] == ["Kneron", "Eyeriss (chip)"]


def test_eval_missing_dataset(capsys, tmp_path):
    code, _, err = run(capsys, "eval", "--dataset", str(tmp_path / "nope.csv"))
    assert code == 2 and "cannot read" in err


def test_schedule_small(capsys):
    code, out, _ = run(capsys, "schedule", "--n", "4", "--k", "3", "--pass", "0")
    assert code == 0
    events = [Event.from_json(l) for l in out.splitlines()]
    assert len(events) == 8
    assert max(e.cycle for e in events) == 3
    assert events == list(build_schedule(4, 3).events(0))


def test_schedule_large(capsys, tmp_path):
    path = tmp_path / "s.jsonl"
    code, _, _ = run(capsys, "schedule", "--n", "227", "--k", "7", "--pass", "0",
                     "--out", str(path))
    assert code == 0
    lines = path.read_text().splitlines()
    assert len(lines) == 81_991
    assert Event.from_json(lines[-1]) == list(build_schedule(227, 7).events(0))[-1]


def test_schedule_csv(capsys):
    code, out, _ = run(capsys, "schedule", "--n", "5", "--k", "3", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "pass,seq,cycle,bus,col,set,row_in_set,global_row"
    assert len(lines) == 1 + 3 * 5


def test_schedule_pass_out_of_range(capsys):
    code, _, _ = run(capsys, "schedule", "--n", "227", "--k", "4", "--pass", "4")
    assert code == 2


def test_schedule_bad_kernel(capsys):
    code, _, _ = run(capsys, "schedule", "--n", "20", "--k", "2")
    assert code == 2


def test_spares(capsys):
    code, out, _ = run(capsys, "spares", "--k", "4")
    assert code == 0
    assert out.splitlines()[1] == "4,11,2,3,0.727273"
    code, out, _ = run(capsys, "spares")
    assert len(out.splitlines()) == 10


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sim", "--k", "notanint"])
    assert exc.value.code == 2
