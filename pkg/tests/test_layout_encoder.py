import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from refkit import (
    BBox,
    EncoderConfig,
    Entity,
    Level,
    Placement,
    PlacedObject,
    ScreenObject,
    bbox_center,
    collect_objects,
    encode_screen,
    group_levels,
    render_parse,
    sort_objects,
)
from refkit.layout_encoder import default_margin

from conftest import REALTOR_GRAB_TEXT, REALTOR_PARSE_TEXT, realtor_datapoint


def obj(text: str, left: float, top: float, w: float = 10, h: float = 2) -> PlacedObject:
    return PlacedObject(text, BBox(left, top, w, h))


def obj_at_center(text: str, cx: float, cy: float) -> PlacedObject:
    return PlacedObject(text, BBox(cx - 5, cy - 1, 10, 2))


def random_objects(rng: random.Random, n: int) -> list[PlacedObject]:
    return [
        PlacedObject(
            f"t{i}",
            BBox(rng.uniform(0, 400), rng.uniform(0, 800), rng.uniform(0, 60), rng.uniform(0, 30)),
        )
        for i in range(n)
    ]


def reference_group_levels(sorted_objects, margin):
    """Independent anchor sweep: slice off the prefix within margin of the
    first remaining object's center, repeat."""
    remaining = list(sorted_objects)
    levels = []
    while remaining:
        anchor = bbox_center(remaining[0].box).y
        taken = []
        while remaining and abs(bbox_center(remaining[0].box).y - anchor) <= margin:
            taken.append(remaining.pop(0))
        levels.append((anchor, taken))
    return levels


class TestCollect:
    def test_single_entity_empty_screen(self):
        entity = Entity(
            "phone number",
            (("value", "555-1234"),),
            display_text="555-1234",
            placement=Placement(BBox(0, 0, 10, 2)),
        )
        [placed] = collect_objects([], [entity])
        assert placed.text == "{{1. 555-1234}}"
        assert placed.entity_index == 1
        assert placed.box == BBox(0, 0, 10, 2)

    def test_realtor_fixture_objects(self):
        dp = realtor_datapoint()
        placed = collect_objects(dp.screen, dp.entities)
        markers = [p for p in placed if p.entity_index is not None]
        assert len(placed) == 11
        assert sorted(m.entity_index for m in markers) == [1, 2]
        # The raw phone strings were replaced by their markers.
        assert "(206) 198 1999" not in {p.text for p in placed}

    def test_duplicate_surrounding_object_appears_once(self):
        shared = ScreenObject("Header", BBox(0, 0, 50, 10))
        entities = [
            Entity(
                "phone number",
                (("value", str(i)),),
                display_text=str(i),
                placement=Placement(BBox(i * 100, 50, 40, 10), (shared,)),
            )
            for i in (1, 2)
        ]
        placed = collect_objects([], entities)
        assert sum(1 for p in placed if p.text == "Header") == 1

    def test_dedup_matches_naive_union(self):
        rng = random.Random(3)
        for _ in range(30):
            screen = [
                ScreenObject(f"s{rng.randint(0, 5)}", BBox(rng.randint(0, 3) * 10, rng.randint(0, 3) * 10, 8, 4))
                for _ in range(rng.randint(0, 6))
            ]
            entities = []
            for i in range(rng.randint(1, 3)):
                surrounding = tuple(rng.sample(screen, rng.randint(0, len(screen))))
                entities.append(
                    Entity(
                        "general text",
                        (),
                        display_text=f"e{i}",
                        placement=Placement(BBox(500 + i * 20, 500, 10, 4), surrounding),
                    )
                )
            placed = collect_objects(screen, entities)
            plain = {(p.text, p.box) for p in placed if p.entity_index is None}
            expected = {(o.text, o.box) for o in screen} | {
                (o.text, o.box) for e in entities for o in e.placement.surrounding
            }
            assert plain == expected

    def test_entity_without_placement_rejected(self):
        with pytest.raises(ValueError, match="placement"):
            collect_objects([], [Entity("person", (("name", "A"),))])

    def test_grab_variant_uses_raw_text(self):
        dp = realtor_datapoint()
        config = EncoderConfig(inject_markers=False)
        placed = collect_objects(dp.screen, dp.entities, config)
        assert all(p.entity_index is None for p in placed)
        texts = {p.text for p in placed}
        assert "(206) 198 1999" in texts and "(206) 198 1699" in texts


class TestSort:
    def test_rows_order(self):
        objects = [obj_at_center("a", 5, 1), obj_at_center("b", 2, 1), obj_at_center("c", 4, 9)]
        assert [o.text for o in sort_objects(objects)] == ["b", "a", "c"]

    def test_identical_centers_keep_input_order(self):
        first = obj("x", 0, 0)
        second = obj("y", 0, 0)
        assert sort_objects([first, second]) == [first, second]
        assert sort_objects([second, first]) == [second, first]

    def test_matches_lexicographic_oracle(self):
        rng = random.Random(11)
        for _ in range(50):
            objects = random_objects(rng, 50)
            expected = [
                o
                for _, _, _, o in sorted(
                    (bbox_center(o.box).y, bbox_center(o.box).x, i, o)
                    for i, o in enumerate(objects)
                )
            ]
            assert sort_objects(objects) == expected

    @given(st.integers(0, 2**32 - 1), st.integers(1, 40))
    def test_oracle_property(self, seed, n):
        rng = random.Random(seed)
        objects = random_objects(rng, n)
        expected = [
            o
            for _, _, _, o in sorted(
                (bbox_center(o.box).y, bbox_center(o.box).x, i, o)
                for i, o in enumerate(objects)
            )
        ]
        assert sort_objects(objects) == expected


class TestGroup:
    def test_clear_gap(self):
        objects = [obj_at_center("a", 0, 10), obj_at_center("b", 5, 10.5), obj_at_center("c", 0, 30)]
        levels = group_levels(sort_objects(objects), margin=1)
        assert [[m.text for m in lvl.members] for lvl in levels] == [["a", "b"], ["c"]]

    def test_no_chaining_past_anchor_margin(self):
        objects = [obj_at_center(t, 0, y) for t, y in (("a", 10), ("b", 11), ("c", 12))]
        levels = group_levels(sort_objects(objects), margin=1)
        assert [[m.text for m in lvl.members] for lvl in levels] == [["a", "b"], ["c"]]

    def test_zero_margin_splits_distinct_rows(self):
        objects = [obj_at_center(t, 0, y) for t, y in (("a", 1), ("b", 2), ("c", 3))]
        levels = group_levels(sort_objects(objects), margin=0)
        assert [len(lvl.members) for lvl in levels] == [1, 1, 1]

    def test_members_satisfy_margin_invariant(self):
        rng = random.Random(5)
        objects = sort_objects(random_objects(rng, 40))
        margin = 12.0
        for level in group_levels(objects, margin):
            for member in level.members:
                assert abs(bbox_center(member.box).y - level.anchor_center_y) <= margin

    def test_matches_reference_sweep(self):
        rng = random.Random(17)
        for _ in range(100):
            objects = sort_objects(random_objects(rng, rng.randint(0, 50)))
            margin = rng.choice([0.0, rng.uniform(0, 40)])
            actual = group_levels(objects, margin)
            expected = reference_group_levels(objects, margin)
            assert [(lvl.anchor_center_y, list(lvl.members)) for lvl in actual] == expected

    def test_partition_and_reading_order(self):
        rng = random.Random(23)
        objects = sort_objects(random_objects(rng, 50))
        levels = group_levels(objects, 15.0)
        flattened = [m for lvl in levels for m in lvl.members]
        assert flattened == objects
        assert [lvl.anchor_center_y for lvl in levels] == sorted(
            lvl.anchor_center_y for lvl in levels
        )


class TestRender:
    def test_two_level_example(self):
        levels = [
            Level(250.0, (obj("Contact Us", 100, 240),)),
            Level(
                400.0,
                (
                    PlacedObject("{{1. (206) 198 1999}}", BBox(40, 390, 120, 20), 1),
                    PlacedObject("{{2. (206) 198 1699}}", BBox(240, 390, 120, 20), 2),
                ),
            ),
        ]
        parse = render_parse(levels)
        assert parse.text == "Contact Us\n{{1. (206) 198 1999}}\t{{2. (206) 198 1699}}"
        expected_spans = {1: "{{1. (206) 198 1999}}", 2: "{{2. (206) 198 1699}}"}
        assert [i for i, _ in parse.marker_spans] == [1, 2]
        for index, (start, end) in parse.marker_spans:
            assert parse.text[start:end] == expected_spans[index]

    def test_empty_levels(self):
        assert render_parse([]).text == ""

    def test_separator_counts(self):
        rng = random.Random(2)
        for _ in range(25):
            objects = sort_objects(random_objects(rng, rng.randint(1, 30)))
            levels = group_levels(objects, rng.uniform(0, 30))
            parse = render_parse(levels)
            assert parse.text.count("\n") == len(levels) - 1
            assert parse.text.count("\t") == sum(len(l.members) - 1 for l in levels)


class TestEncodeScreen:
    def test_realtor_golden(self, realtor):
        parse = encode_screen(realtor.screen, realtor.entities)
        assert parse.text == REALTOR_PARSE_TEXT
        assert parse.text.splitlines()[-1] == "{{1. (206) 198 1999}}\t{{2. (206) 198 1699}}"

    def test_realtor_grab_layout(self, realtor):
        parse = encode_screen(
            realtor.screen, realtor.entities, EncoderConfig(inject_markers=False)
        )
        assert parse.text == REALTOR_GRAB_TEXT
        assert parse.marker_spans == ()

    def test_single_entity(self):
        entity = Entity(
            "url",
            (("value", "NY.gov"),),
            display_text="NY.gov",
            placement=Placement(BBox(5, 5, 30, 8)),
        )
        parse = encode_screen([], [entity])
        assert parse.text == "{{1. NY.gov}}"

    def test_marker_completeness_and_determinism(self, realtor):
        first = encode_screen(realtor.screen, realtor.entities)
        second = encode_screen(realtor.screen, realtor.entities)
        assert first == second
        indexes = sorted(i for i, _ in first.marker_spans)
        assert indexes == list(range(1, len(realtor.entities) + 1))
        for index, (start, end) in first.marker_spans:
            assert first.text[start:end].startswith("{{" + str(index) + ". ")
            assert first.text[start:end].endswith("}}")

    def test_translation_invariance(self, realtor):
        def shift(box, dx, dy):
            return BBox(box.left + dx, box.top + dy, box.width, box.height)

        dx, dy = 137.5, -42.25
        screen = [ScreenObject(o.text, shift(o.box, dx, dy)) for o in realtor.screen]
        entities = [
            Entity(
                e.entity_type,
                e.properties,
                display_text=e.display_text,
                placement=Placement(
                    shift(e.placement.box, dx, dy),
                    tuple(ScreenObject(o.text, shift(o.box, dx, dy)) for o in e.placement.surrounding),
                ),
            )
            for e in realtor.entities
        ]
        assert encode_screen(screen, entities).text == REALTOR_PARSE_TEXT

    def test_custom_markers(self):
        entity = Entity(
            "person",
            (("name", "Ana"),),
            display_text="Ana",
            placement=Placement(BBox(0, 0, 10, 4)),
        )
        config = EncoderConfig(marker_open="[[", marker_close="]]")
        assert encode_screen([], [entity], config).text == "[[1. Ana]]"

    def test_default_margin_is_half_median_height(self):
        objects = [obj("a", 0, 0, h=10), obj("b", 0, 50, h=20), obj("c", 0, 100, h=40)]
        assert default_margin(objects) == 10.0
        assert default_margin([]) == 0.0


class TestConfigValidation:
    def test_empty_separator_rejected(self):
        with pytest.raises(ValueError):
            EncoderConfig(same_line_separator="")
        with pytest.raises(ValueError):
            EncoderConfig(line_separator="")

    def test_equal_markers_rejected(self):
        with pytest.raises(ValueError):
            EncoderConfig(marker_open="%%", marker_close="%%")

    def test_negative_margin_rejected(self):
        with pytest.raises(ValueError):
            EncoderConfig(margin=-1)
