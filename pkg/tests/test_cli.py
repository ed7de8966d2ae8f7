from __future__ import annotations

import json

from ocelkit import parse_json_ocel, read_ocel_file, validate
from ocelkit.cli import main

ESSENTIAL_16 = {
    "e1", "e3", "e5", "e6", "e7", "e8", "e10", "e14", "e16", "e17",
    "e18", "e19", "e20", "e22", "e23", "e24",
}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestStats:
    def test_headline(self, capsys, o2c_path):
        code, out, _ = run(capsys, "stats", o2c_path)
        assert code == 0
        assert out.splitlines()[0] == "24 events, 15 objects, 5 object types"

    def test_json_output(self, capsys, o2c_path):
        code, out, _ = run(capsys, "stats", o2c_path, "--json")
        assert code == 0
        doc = json.loads(out)
        assert doc["events"] == 24
        assert doc["objects_per_type"]["Items"] == 6

    def test_empty_log(self, capsys, tmp_path):
        path = tmp_path / "empty.jsonocel"
        path.write_text(json.dumps({
            "ocel:global-log": {"ocel:version": "1.0", "ocel:attribute-names": [],
                                "ocel:object-types": []},
            "ocel:events": {}, "ocel:objects": {},
        }))
        code, out, _ = run(capsys, "stats", path)
        assert code == 0
        assert out.startswith("0 events, 0 objects, 0 object types")

    def test_missing_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "stats", tmp_path / "missing.jsonocel")
        assert code == 2
        assert "file not found" in err

    def test_invalid_content(self, capsys, tmp_path):
        path = tmp_path / "broken.jsonocel"
        path.write_text("{definitely not ocel")
        code, _, err = run(capsys, "stats", path)
        assert code == 1
        assert "malformed" in err


class TestFilter:
    def test_core_log_reproduction(self, capsys, o2c_path, tmp_path):
        out_path = tmp_path / "out.jsonocel"
        code, out, _ = run(
            capsys, "filter", o2c_path,
            "--ot-min-objects", 2,
            "--rel-min-unique-ratio", 0.5,
            "--ev-essential",
            "-o", out_path,
        )
        assert code == 0
        filtered = read_ocel_file(out_path)
        assert {e.id for e in filtered.events} == ESSENTIAL_16
        assert "step OTF1(n=2)" in out
        assert "events 24 -> 16 (66%)" in out

    def test_no_steps_is_normalizing_identity(self, capsys, o2c_path, tmp_path):
        first = tmp_path / "first.jsonocel"
        second = tmp_path / "second.jsonocel"
        code, out, _ = run(capsys, "filter", o2c_path, "-o", first)
        assert code == 0
        assert "no filter steps" in out
        code, _, _ = run(capsys, "filter", first, "-o", second)
        assert code == 0
        assert first.read_bytes() == second.read_bytes()

    def test_activity_ratio_drops_weight_classes(self, capsys, o2c_path, tmp_path):
        out_path = tmp_path / "out.jsonocel"
        code, _, _ = run(capsys, "filter", o2c_path,
                         "--ot-min-activity-ratio", 0.3, "-o", out_path)
        assert code == 0
        filtered = read_ocel_file(out_path)
        assert "Weight Classes" not in filtered.object_types
        assert filtered.object_types == frozenset(
            {"Orders", "Items", "Deliveries", "Goods Issues"}
        )

    def test_flag_order_defines_step_order(self, capsys, o2c_path, tmp_path):
        # essential first, then relation pruning: the pick events stay (they
        # are essential while the order references are still present)
        a = tmp_path / "a.jsonocel"
        code, _, _ = run(capsys, "filter", o2c_path,
                         "--ot-min-objects", 2,
                         "--ev-essential",
                         "--rel-min-unique-ratio", 0.5,
                         "-o", a)
        assert code == 0
        # relation pruning first, then essential: the pick events drop
        b = tmp_path / "b.jsonocel"
        code, _, _ = run(capsys, "filter", o2c_path,
                         "--ot-min-objects", 2,
                         "--rel-min-unique-ratio", 0.5,
                         "--ev-essential",
                         "-o", b)
        assert code == 0
        log_a = read_ocel_file(a)
        log_b = read_ocel_file(b)
        assert len(log_a.events) == 24
        assert len(log_b.events) == 16

    def test_essential_and_count_merge_to_union_step(self, capsys, o2c_path, tmp_path):
        out_path = tmp_path / "out.jsonocel"
        code, out, _ = run(capsys, "filter", o2c_path,
                           "--ot-min-objects", 2,
                           "--rel-min-unique-ratio", 0.5,
                           "--ev-min-activity-count", 7,
                           "--ev-essential",
                           "-o", out_path)
        assert code == 0
        assert "OE3" in out
        filtered = read_ocel_file(out_path)
        assert len(filtered.events) == 23  # all but the goods-issue event

    def test_pipeline_file(self, capsys, o2c_path, tmp_path):
        descriptor = {
            "schema": "ocelkit-pipeline/1",
            "steps": [
                {"kind": "OTF1", "params": {"n": 2}},
                {"kind": "OA_RATIO", "params": {"r": 0.5}},
                {"kind": "OE2", "params": {}},
            ],
        }
        pipeline_path = tmp_path / "pipeline.json"
        pipeline_path.write_text(json.dumps(descriptor))
        out_path = tmp_path / "out.jsonocel"
        code, _, _ = run(capsys, "filter", o2c_path,
                         "--pipeline", pipeline_path, "-o", out_path)
        assert code == 0
        assert {e.id for e in read_ocel_file(out_path).events} == ESSENTIAL_16

    def test_cleanup_flags(self, capsys, o2c_path, tmp_path):
        out_path = tmp_path / "out.jsonocel"
        code, _, _ = run(capsys, "filter", o2c_path,
                         "--ot-min-objects", 4,    # keeps Items and Deliveries only
                         "--ev-min-activity-count", 4,
                         "--drop-empty-events",
                         "--drop-orphan-objects",
                         "-o", out_path)
        assert code == 0
        filtered = read_ocel_file(out_path)
        assert all(e.omap for e in filtered.events)
        used = {oid for e in filtered.events for oid in e.omap}
        assert set(filtered.objects) == used

    def test_output_must_differ_from_input(self, capsys, o2c_path):
        code, _, err = run(capsys, "filter", o2c_path, "-o", o2c_path)
        assert code == 2
        assert "must differ" in err

    def test_invalid_threshold(self, capsys, o2c_path, tmp_path):
        code, _, err = run(capsys, "filter", o2c_path,
                           "--ot-min-activity-ratio", 1.5,
                           "-o", tmp_path / "out.jsonocel")
        assert code == 2
        assert "ratio" in err

    def test_json_diff(self, capsys, o2c_path, tmp_path):
        code, out, _ = run(capsys, "filter", o2c_path,
                           "--ot-min-objects", 2, "--json",
                           "-o", tmp_path / "out.jsonocel")
        assert code == 0
        doc = json.loads(out)
        assert doc["steps"][0]["retention_percent"]["objects"] == 86


class TestSample:
    def test_connected_blocks(self, capsys, o2c_path, tmp_path):
        # first produce the type-filtered log, then split it
        filtered = tmp_path / "core_log.jsonocel"
        run(capsys, "filter", o2c_path, "--ot-min-objects", 2, "-o", filtered)
        code, out, _ = run(capsys, "sample", filtered,
                           "--strategy", "connected", "--out-dir", tmp_path / "blocks")
        assert code == 0
        assert "3 connected samples" in out
        manifest = json.loads((tmp_path / "blocks" / "core_log.manifest.json").read_text())
        assert sorted(b["events"] for b in manifest["blocks"]) == [5, 7, 12]
        for entry in manifest["blocks"]:
            block_log = read_ocel_file(tmp_path / "blocks" / entry["file"])
            assert len(block_log.events) == entry["events"]

    def test_connected_on_raw_o2c_log(self, capsys, o2c_path, tmp_path):
        code, out, _ = run(capsys, "sample", o2c_path,
                           "--strategy", "connected", "--out-dir", tmp_path)
        assert code == 0
        assert "1 connected samples" in out

    def test_full_event_sample_identity(self, capsys, o2c_path, tmp_path):
        code, _, _ = run(capsys, "sample", o2c_path, "--strategy", "events",
                         "--k", 24, "--seed", 1, "--out-dir", tmp_path)
        assert code == 0
        sampled = read_ocel_file(tmp_path / "o2c_sample.sample.jsonocel")
        assert len(sampled.events) == 24

    def test_k_required(self, capsys, o2c_path, tmp_path):
        code, _, err = run(capsys, "sample", o2c_path, "--strategy", "events",
                           "--out-dir", tmp_path)
        assert code == 2
        assert "--k is required" in err

    def test_k_out_of_range(self, capsys, o2c_path, tmp_path):
        code, _, err = run(capsys, "sample", o2c_path, "--strategy", "events",
                           "--k", 100, "--out-dir", tmp_path)
        assert code == 2
        assert "out of range" in err

    def test_out_dir_env_var(self, capsys, o2c_path, tmp_path, monkeypatch):
        monkeypatch.setenv("OCELKIT_OUT_DIR", str(tmp_path / "from-env"))
        code, _, _ = run(capsys, "sample", o2c_path, "--strategy", "events",
                         "--k", 5)
        assert code == 0
        assert (tmp_path / "from-env" / "o2c_sample.sample.jsonocel").is_file()


class TestFlatten:
    def test_deliveries_csv(self, capsys, o2c_path, tmp_path):
        out_path = tmp_path / "flat.csv"
        code, out, _ = run(capsys, "flatten", o2c_path,
                           "--type", "Deliveries", "-o", out_path)
        assert code == 0
        assert "4 cases" in out
        lines = out_path.read_text().strip().splitlines()
        assert len(lines) == 1 + 10  # header + summed delivery lifecycles

    def test_orders_json(self, capsys, o2c_path, tmp_path):
        out_path = tmp_path / "flat.json"
        code, out, _ = run(capsys, "flatten", o2c_path, "--type", "Orders",
                           "--format", "jsonocel-flat", "-o", out_path)
        assert code == 0
        assert "3 cases" in out
        doc = json.loads(out_path.read_text())
        assert len(doc["cases"]) == 3

    def test_unknown_type_lists_valid_ones(self, capsys, o2c_path, tmp_path):
        code, _, err = run(capsys, "flatten", o2c_path, "--type", "Foo",
                           "-o", tmp_path / "x.csv")
        assert code == 2
        assert "unknown object type 'Foo'" in err
        assert "Orders" in err and "Deliveries" in err


class TestGenerate:
    def test_deterministic_output(self, capsys, tmp_path):
        a, b = tmp_path / "a.jsonocel", tmp_path / "b.jsonocel"
        assert run(capsys, "gen", "--orders", 3, "--seed", 42, "-o", a)[0] == 0
        assert run(capsys, "gen", "--orders", 3, "--seed", 42, "-o", b)[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_zero_orders(self, capsys, tmp_path):
        path = tmp_path / "empty.jsonocel"
        code, out, _ = run(capsys, "gen", "--orders", 0, "-o", path)
        assert code == 0
        log = read_ocel_file(path)
        assert len(log.events) == 0
        assert validate(log).ok

    def test_thousand_orders_validates(self, capsys, tmp_path):
        path = tmp_path / "big.jsonocel"
        code, _, _ = run(capsys, "gen", "--orders", 1000, "--seed", 1, "-o", path)
        assert code == 0
        log = parse_json_ocel(path.read_bytes())
        assert len(log.objects) >= 1000
        assert validate(log).ok

    def test_bad_range(self, capsys, tmp_path):
        code, _, err = run(capsys, "gen", "--orders", 2, "--items", 3, 1,
                           "-o", tmp_path / "x.jsonocel")
        assert code == 2
        assert "items_per_order" in err
