"""Machine-readable layout documents (schema qalam-layout/1).

A layout document is what the shape and justify commands emit and what the
renderer consumes: per line, a list of glyph records with pen positions,
advances, elongations, and nested mark records. Coordinates are logical
(x grows in writing order from the line start); the ``direction`` field
tells renderers to mirror for right-to-left display.
"""

from __future__ import annotations

import json
from typing import Sequence

from .diacritics import PlacedMark
from .errors import Diagnostic, MalformedLayout
from .fontmodel import FontDescription
from .justify import ParagraphLayout
from .shaper import ShapedWord, attachment_root, pen_positions

SCHEMA_ID = "qalam-layout/1"


def _glyph_records(
    font: FontDescription, word: ShapedWord, word_x: int
) -> list[dict]:
    pens = pen_positions(word)
    records: dict[int, dict] = {}
    order: list[int] = []
    for i, pg in enumerate(word.glyphs):
        if pg.is_mark:
            continue
        records[i] = {
            "glyph": pg.glyph,
            "x": word_x + pens[i] + pg.x_offset,
            "y": pg.y_offset,
            "advance": pg.advance,
            "elongation": pg.elongation,
            "marks": [],
        }
        order.append(i)
    for i, pg in enumerate(word.glyphs):
        if not pg.is_mark:
            continue
        root = attachment_root(word, i)
        base = word.glyphs[root]
        records[root]["marks"].append(
            {
                "mark": pg.glyph,
                "dx": pg.x_offset - base.x_offset,
                "dy": pg.y_offset - base.y_offset,
            }
        )
    return [records[i] for i in order]


def _attach_variants(
    line_glyphs: list[dict], marks_per_word: Sequence[Sequence[PlacedMark]], font: FontDescription
) -> None:
    """Rewrite mark records with canonical ids and size variants."""
    flat_marks = [m for marks in marks_per_word for m in marks]
    variant_of = {}
    for m in flat_marks:
        variant_of[font.variant_glyph(m.mark, m.variant)] = (m.mark, m.variant.value)
    for glyph in line_glyphs:
        for mark in glyph["marks"]:
            canonical, variant = variant_of.get(mark["mark"], (mark["mark"], "normal"))
            mark["mark"] = canonical
            mark["variant"] = variant


def shaped_document(
    font: FontDescription,
    words: Sequence[ShapedWord],
    marks_per_word: Sequence[Sequence[PlacedMark]],
    diagnostics: Sequence[Diagnostic] = (),
) -> dict:
    """Document for an unjustified run: one line at natural widths."""
    lines = []
    if words:
        glyphs: list[dict] = []
        x = 0
        for wi, word in enumerate(words):
            if wi:
                x += font.glue.width
            records = _glyph_records(font, word, x)
            _attach_variants(records, [marks_per_word[wi]], font)
            glyphs.extend(records)
            x += word.natural_width
        lines.append({"width": x, "glyphs": glyphs})
    return {
        "schema": SCHEMA_ID,
        "font_id": font.font_id,
        "units_per_em": font.units_per_em,
        "direction": "rtl",
        "measure": None,
        "lines": lines,
        "diagnostics": [d.to_json() for d in diagnostics],
    }


def justified_document(font: FontDescription, layout: ParagraphLayout) -> dict:
    lines = []
    for line in layout.lines:
        glyphs: list[dict] = []
        x = 0
        for wi, word in enumerate(line.words):
            records = _glyph_records(font, word, x)
            _attach_variants(records, [line.marks[wi]], font)
            glyphs.extend(records)
            x += word.natural_width
            if wi < len(line.glue_widths):
                x += line.glue_widths[wi]
        lines.append({"width": line.width, "glyphs": glyphs})
    return {
        "schema": SCHEMA_ID,
        "font_id": font.font_id,
        "units_per_em": font.units_per_em,
        "direction": "rtl",
        "measure": layout.measure,
        "lines": lines,
        "diagnostics": [d.to_json() for d in layout.diagnostics],
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def validate_document(doc) -> dict:
    """Structural check of a layout document; raises MalformedLayout."""
    if not isinstance(doc, dict):
        raise MalformedLayout("layout must be a JSON object")
    if doc.get("schema") != SCHEMA_ID:
        raise MalformedLayout(f"layout must declare schema {SCHEMA_ID!r}")
    for key in ("font_id", "units_per_em", "direction", "lines"):
        if key not in doc:
            raise MalformedLayout(f"layout missing field {key!r}")
    if not isinstance(doc["lines"], list):
        raise MalformedLayout("lines must be an array")
    for li, line in enumerate(doc["lines"]):
        if not isinstance(line, dict) or not isinstance(line.get("glyphs"), list):
            raise MalformedLayout(f"line {li} must be an object with a glyphs array")
        for gi, glyph in enumerate(line["glyphs"]):
            if not isinstance(glyph, dict):
                raise MalformedLayout(f"line {li} glyph {gi} must be an object")
            for key in ("glyph", "x", "y", "advance", "elongation", "marks"):
                if key not in glyph:
                    raise MalformedLayout(
                        f"line {li} glyph {gi} missing field {key!r}"
                    )
            if not isinstance(glyph["glyph"], str):
                raise MalformedLayout(f"line {li} glyph {gi}: glyph id must be a string")
            for key in ("x", "y", "advance", "elongation"):
                if not isinstance(glyph[key], int) or isinstance(glyph[key], bool):
                    raise MalformedLayout(
                        f"line {li} glyph {gi}: {key} must be an integer"
                    )
            if not isinstance(glyph["marks"], list):
                raise MalformedLayout(f"line {li} glyph {gi}: marks must be an array")
            for mi, mark in enumerate(glyph["marks"]):
                if not isinstance(mark, dict):
                    raise MalformedLayout(
                        f"line {li} glyph {gi} mark {mi} must be an object"
                    )
                for key in ("mark", "variant", "dx", "dy"):
                    if key not in mark:
                        raise MalformedLayout(
                            f"line {li} glyph {gi} mark {mi} missing field {key!r}"
                        )
    return doc


def loads(text: str) -> dict:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedLayout(f"layout is not valid JSON: {exc}") from exc
    return validate_document(doc)
