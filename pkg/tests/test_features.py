import csv
import random

import pytest

from phonefront import (EncodeError, SchemaError, encode, feature_distance,
                        load_schema, make_segment, nearest_segment)
from phonefront.features import FEATURE_COUNT, FeatureVector
from phonefront.resources import (default_diacritic_rules_path,
                                  default_features_path)


def read_raw_rows():
    """Independent read of the shipped table, bypassing load_schema."""
    with open(default_features_path(), encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader)
        rows = {row[0]: [int(c) for c in row[1:]] for row in reader}
    return header[1:], rows


class TestLoadSchema:
    def test_shipped_schema(self, schema):
        assert len(schema.feature_names) == 62
        assert len(schema.base_table) >= 60
        for vec in schema.base_table.values():
            assert len(vec.values) == 62
            assert all(v in (0, 1) for v in vec.values)
        assert "voice" in schema.feature_names
        assert "long" in schema.feature_names

    def test_wrong_column_count(self, tmp_path):
        path = tmp_path / "bad.csv"
        names = [f"f{i}" for i in range(50)]
        path.write_text("segment," + ",".join(names) + "\np," + ",".join("0" * 50))
        with pytest.raises(SchemaError, match="63 columns"):
            load_schema(path, default_diacritic_rules_path())

    def test_non_binary_cell(self, tmp_path):
        path = tmp_path / "bad.csv"
        names = [f"f{i}" for i in range(62)]
        path.write_text("segment," + ",".join(names) + "\np,2," + ",".join("0" * 61))
        with pytest.raises(SchemaError, match="0 or 1"):
            load_schema(path, default_diacritic_rules_path())

    def test_duplicate_segment_row(self, tmp_path):
        path = tmp_path / "bad.csv"
        names = [f"f{i}" for i in range(62)]
        row = "p," + ",".join("0" * 62)
        path.write_text("segment," + ",".join(names) + f"\n{row}\n{row}\n")
        with pytest.raises(SchemaError, match="duplicate segment"):
            load_schema(path, default_diacritic_rules_path())

    def test_rule_with_unknown_feature(self, tmp_path):
        rules = tmp_path / "rules.csv"
        rules.write_text("diacritic,feature,value\nː,no_such_feature,1\n")
        with pytest.raises(SchemaError, match="unknown feature"):
            load_schema(default_features_path(), rules)

    def test_rows_pairwise_distinct(self, schema):
        # distance 0 must imply identical segments, so no two base symbols
        # may share a feature row
        seen = {}
        for symbol, vector in schema.base_table.items():
            assert vector.values not in seen, (symbol, seen[vector.values])
            seen[vector.values] = symbol

    def test_length_rule_flips_only_long(self, table, schema):
        plain = encode(table.segment("p"), schema)
        lengthened = encode(table.segment("p", ["ː"]), schema)
        long_idx = schema.feature_index("long")
        diffs = [i for i in range(62) if plain[i] != lengthened[i]]
        assert diffs == [long_idx]
        assert lengthened[long_idx] == 1


class TestEncode:
    def test_voicing_pair_matches_raw_table(self, table, schema):
        names, rows = read_raw_rows()
        raw_diff = [names[i] for i in range(62) if rows["p"][i] != rows["b"][i]]
        assert raw_diff == ["voice"]
        vp = encode(table.segment("p"), schema)
        vb = encode(table.segment("b"), schema)
        assert [schema.feature_names[i] for i in range(62) if vp[i] != vb[i]] == ["voice"]

    def test_unknown_base(self, schema):
        with pytest.raises(EncodeError, match="@@"):
            encode(make_segment("@@"), schema)

    def test_diacritic_without_rule(self, schema):
        with pytest.raises(EncodeError, match="no feature rule"):
            encode(make_segment("p", ["ı"]), schema)  # not a listed diacritic

    def test_pure_function(self, table, schema):
        seg = table.segment("t͡s", ["ː"])
        assert encode(seg, schema) == encode(seg, schema)

    def test_overrides_touch_only_named_features(self, table, schema):
        names, _ = read_raw_rows()
        with open(default_diacritic_rules_path(), encoding="utf-8", newline="") as f:
            reader = csv.reader(f)
            next(reader)
            rules = {d: (feat, int(v)) for d, feat, v in reader}
        base = encode(table.segment("t"), schema)
        for diacritic, (feat, value) in rules.items():
            modified = encode(table.segment("t", [diacritic]), schema)
            diffs = [schema.feature_names[i] for i in range(62)
                     if base[i] != modified[i]]
            assert diffs in ([], [feat])
            assert modified[schema.feature_index(feat)] == value


class TestDistance:
    def test_identity(self, table, schema):
        v = encode(table.segment("a"), schema)
        assert feature_distance(v, v) == 0.0

    def test_voicing_distance_is_one(self, table, schema):
        vp = encode(table.segment("p"), schema)
        vb = encode(table.segment("b"), schema)
        assert feature_distance(vp, vb) == 1.0

    def test_symmetry_random(self):
        rng = random.Random(99)
        for _ in range(1000):
            a = FeatureVector(tuple(rng.randint(0, 1) for _ in range(FEATURE_COUNT)))
            b = FeatureVector(tuple(rng.randint(0, 1) for _ in range(FEATURE_COUNT)))
            assert feature_distance(a, b) == feature_distance(b, a)

    def test_triangle_inequality_random(self):
        rng = random.Random(7)
        for _ in range(300):
            a, b, c = (FeatureVector(tuple(rng.randint(0, 1) for _ in range(62)))
                       for _ in range(3))
            assert feature_distance(a, c) <= feature_distance(a, b) + feature_distance(b, c)

    def test_weighted(self, table, schema):
        vp = encode(table.segment("p"), schema)
        vb = encode(table.segment("b"), schema)
        weights = [2.0] * 62
        assert feature_distance(vp, vb, weights) == 2.0

    def test_wrong_weight_length(self, table, schema):
        v = encode(table.segment("p"), schema)
        with pytest.raises(SchemaError):
            feature_distance(v, v, [1.0] * 10)

    def test_negative_weight(self, table, schema):
        v = encode(table.segment("p"), schema)
        with pytest.raises(SchemaError):
            feature_distance(v, v, [-1.0] + [1.0] * 61)


class TestNearestSegment:
    def test_target_in_candidates(self, table, schema):
        target = table.segment("p")
        candidates = [table.segment(s) for s in ("p", "b", "m")]
        assert nearest_segment(target, candidates, schema) == (target, 0.0)

    def test_tie_prefers_fewer_diacritics(self, table, schema):
        # pʰ and pʲ are both one override away from p
        target = table.segment("p")
        plain = table.segment("p", ["ʰ"])
        assert nearest_segment(target, [table.segment("p", ["ʰ", "ʲ"]), plain],
                               schema)[0] == plain

    def test_brute_force_scan(self, table, schema):
        target = table.segment("b")
        candidates = [table.segment(s) for s in ("p", "m")]
        got, dist = nearest_segment(target, candidates, schema)
        tv = encode(target, schema)
        scan = min(((feature_distance(tv, encode(c, schema)), len(c.diacritics),
                     c.canonical, c) for c in candidates),
                   key=lambda item: item[:3])
        assert got == scan[3] and dist == scan[0]

    def test_brute_force_over_inventory(self, table, schema):
        rng = random.Random(3)
        pool = [table.segment(s) for s in
                ("p", "b", "t", "d", "k", "m", "n", "s", "z", "a", "i", "u", "ɔ")]
        targets = [table.segment(s) for s in ("ʔ", "q", "œ", "ʃ", "w")]
        for target in targets:
            got, dist = nearest_segment(target, pool, schema)
            tv = encode(target, schema)
            best = min(((feature_distance(tv, encode(c, schema)),
                         len(c.diacritics), c.canonical) for c in pool))
            assert dist == best[0]
            assert got.canonical == best[2]

    def test_empty_candidates(self, table, schema):
        with pytest.raises(EncodeError, match="nonempty"):
            nearest_segment(table.segment("p"), [], schema)
