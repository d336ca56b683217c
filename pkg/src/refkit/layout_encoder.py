"""Serialize a screen plus indexed entities into a plain-text layout parse.

The pipeline is collect -> sort -> group -> render: gather every text box,
order them top-to-bottom then left-to-right, partition into visual lines by
a vertical margin, and join lines with tabs/newlines so the output text
preserves the relative spatial arrangement. Entities are injected into the
object set as numbered `{{i. text}}` markers so a downstream model can name
them by index.
"""
from __future__ import annotations

from dataclasses import dataclass
from statistics import median
from typing import Iterable, Sequence

from .screen_model import BBox, Entity, ScreenObject, bbox_center


@dataclass(frozen=True)
class EncoderConfig:
    """Knobs for the layout parse.

    margin=None derives the same-line tolerance from the screen itself
    (half the median object height). inject_markers=False leaves the raw
    entity text in place instead of numbered markers, which reproduces the
    plain screen-grab variant of the encoding.
    """

    margin: float | None = None
    same_line_separator: str = "\t"
    line_separator: str = "\n"
    marker_open: str = "{{"
    marker_close: str = "}}"
    inject_markers: bool = True

    def __post_init__(self) -> None:
        if not self.same_line_separator or not self.line_separator:
            raise ValueError("separators must be non-empty")
        if self.marker_open == self.marker_close:
            raise ValueError("marker_open and marker_close must differ")
        if self.margin is not None and self.margin < 0:
            raise ValueError("margin must be >= 0")


@dataclass(frozen=True)
class PlacedObject:
    """A text box queued for rendering; entity_index marks injected markers."""

    text: str
    box: BBox
    entity_index: int | None = None


@dataclass(frozen=True)
class Level:
    """One rendered line: objects whose centers lie within margin of the anchor."""

    anchor_center_y: float
    members: tuple[PlacedObject, ...]


@dataclass(frozen=True)
class OnscreenParse:
    """The rendered screen text plus where each entity marker landed in it.

    marker_spans maps each entity index to the (start, end) slice of `text`
    covering its full `{{i. display_text}}` marker.
    """

    text: str
    marker_spans: tuple[tuple[int, tuple[int, int]], ...] = ()


def marker_text(index: int, display_text: str, config: EncoderConfig) -> str:
    return f"{config.marker_open}{index}. {display_text}{config.marker_close}"


def collect_objects(
    screen: Sequence[ScreenObject],
    entities: Sequence[Entity],
    config: EncoderConfig | None = None,
) -> list[PlacedObject]:
    """Union the screen and surrounding objects, then inject entity markers.

    Plain objects are deduplicated by (text, box) in first-seen order. Any
    plain object sitting at an entity's own box is dropped and replaced by
    that entity's marker (or its raw display text when markers are off), so
    an entity never appears twice in the parse.
    """
    config = config or EncoderConfig()
    for position, entity in enumerate(entities, 1):
        if entity.placement is None:
            raise ValueError(f"entity {position} has no placement")

    plain: dict[tuple[str, BBox], ScreenObject] = {}
    for obj in list(screen) + [o for e in entities for o in e.placement.surrounding]:
        plain.setdefault((obj.text, obj.box), obj)

    entity_boxes = {entity.placement.box for entity in entities}
    collected = [
        PlacedObject(obj.text, obj.box)
        for obj in plain.values()
        if obj.box not in entity_boxes
    ]
    for index, entity in enumerate(entities, 1):
        if config.inject_markers:
            collected.append(
                PlacedObject(
                    marker_text(index, entity.display_text, config),
                    entity.placement.box,
                    entity_index=index,
                )
            )
        else:
            collected.append(PlacedObject(entity.display_text, entity.placement.box))
    return collected


def sort_objects(objects: Iterable[PlacedObject]) -> list[PlacedObject]:
    """Order objects top-to-bottom, breaking center-y ties left-to-right.

    Two stable passes: sort by center-x first, then by center-y, so the final
    order is lexicographic (center_y, center_x, input position).
    """
    by_x = sorted(objects, key=lambda o: bbox_center(o.box).x)
    return sorted(by_x, key=lambda o: bbox_center(o.box).y)


def group_levels(sorted_objects: Sequence[PlacedObject], margin: float) -> list[Level]:
    """Partition sorted objects into visual lines by a greedy anchor sweep.

    The first unassigned object anchors a level; each following object joins
    while its center-y is within `margin` of the anchor, otherwise it opens
    the next level. Membership does not chain: an object just inside the
    margin does not stretch the level to fit objects beyond it.
    """
    levels: list[Level] = []
    anchor_y: float | None = None
    members: list[PlacedObject] = []
    for obj in sorted_objects:
        center_y = bbox_center(obj.box).y
        if anchor_y is None or abs(center_y - anchor_y) > margin:
            if members:
                levels.append(Level(anchor_y, tuple(members)))
            anchor_y = center_y
            members = [obj]
        else:
            members.append(obj)
    if members:
        levels.append(Level(anchor_y, tuple(members)))
    return levels


def render_parse(
    levels: Sequence[Level], config: EncoderConfig | None = None
) -> OnscreenParse:
    """Join level members with the same-line separator and levels with the
    line separator, recording the span of every entity marker."""
    config = config or EncoderConfig()
    pieces: list[str] = []
    spans: list[tuple[int, tuple[int, int]]] = []
    offset = 0
    for level_index, level in enumerate(levels):
        if level_index:
            pieces.append(config.line_separator)
            offset += len(config.line_separator)
        for member_index, obj in enumerate(level.members):
            if member_index:
                pieces.append(config.same_line_separator)
                offset += len(config.same_line_separator)
            if obj.entity_index is not None:
                spans.append((obj.entity_index, (offset, offset + len(obj.text))))
            pieces.append(obj.text)
            offset += len(obj.text)
    return OnscreenParse("".join(pieces), tuple(spans))


def default_margin(objects: Sequence[PlacedObject]) -> float:
    """Scale-free same-line tolerance: half the median object height."""
    heights = [obj.box.height for obj in objects]
    return 0.5 * median(heights) if heights else 0.0


def encode_screen(
    screen: Sequence[ScreenObject],
    entities: Sequence[Entity],
    config: EncoderConfig | None = None,
) -> OnscreenParse:
    """Full encoding: collect, sort, group by margin, render."""
    config = config or EncoderConfig()
    objects = collect_objects(screen, entities, config)
    margin = config.margin if config.margin is not None else default_margin(objects)
    levels = group_levels(sort_objects(objects), margin)
    return render_parse(levels, config)
