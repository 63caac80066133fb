"""The declarative font description: glyph metrics, anchors, rules.

A font is a UTF-8 JSON document (schema ``qalam-font/1``) holding
everything the engine needs: per-glyph advances and ink boxes, mark
attachment anchors, size variants for the growable vowel marks, stretch
capacities for elongation, the character-to-glyph map per joining form,
substitution and positioning rules, and the tuning tables (size
thresholds, elongation priorities, mass position offsets, inter-word
glue).

All coordinates are integers in font units; the canonical serialization
(sorted keys, no floats) round-trips bit-exactly. See docs/font-format.md
for the schema reference.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .errors import (
    Diagnostic,
    MissingVariant,
    NoGlyph,
    ParseError,
    RangeError,
    RefError,
    SchemaError,
    Severity,
)
from .lookups import LookupRule, rule_from_json, rule_to_json
from .textmodel import (
    DEFAULT_TABLE,
    CharacterTable,
    Form,
    MassClass,
    Placement,
    valid_forms,
)

SCHEMA_ID = "qalam-font/1"


class SizeVariant(enum.Enum):
    NORMAL = "normal"
    MEDIUM = "medium"
    LARGE = "large"


#: Ordering used by monotonicity checks: larger index, larger mark.
VARIANT_ORDER = (SizeVariant.NORMAL, SizeVariant.MEDIUM, SizeVariant.LARGE)


class LigatureKind(enum.Enum):
    LINGUISTIC = "linguistic"
    AESTHETIC = "aesthetic"


@dataclass(frozen=True)
class AnchorPoint:
    x: int
    y: int


@dataclass(frozen=True)
class Rect:
    x_min: int
    y_min: int
    x_max: int
    y_max: int

    def __post_init__(self) -> None:
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise SchemaError(
                f"degenerate ink box ({self.x_min},{self.y_min},{self.x_max},{self.y_max})"
            )

    @property
    def width(self) -> int:
        return self.x_max - self.x_min

    @property
    def height(self) -> int:
        return self.y_max - self.y_min

    @property
    def area(self) -> int:
        return self.width * self.height


@dataclass(frozen=True)
class GlyphMetrics:
    """Metrics of one base glyph."""

    advance: int
    ink: Rect
    anchors: Mapping[Placement, AnchorPoint] = field(default_factory=dict)
    max_extension: int = 0
    mass_class: MassClass = MassClass.MEDIUM
    svg_path: str | None = None

    def __post_init__(self) -> None:
        if self.advance < 0:
            raise SchemaError("glyph advance must be >= 0")
        if self.max_extension < 0:
            raise SchemaError("max_extension must be >= 0")


@dataclass(frozen=True)
class MarkGlyph:
    """Metrics of one mark glyph.

    ``variants`` maps size names to mark glyph ids and is present only on
    growable marks; the normal variant is the mark itself. ``stack_anchor``
    is where a further mark may stack on this one.
    """

    attachment_class: Placement
    anchor: AnchorPoint
    ink: Rect
    variants: Mapping[SizeVariant, str] | None = None
    stack_anchor: AnchorPoint | None = None
    svg_path: str | None = None


@dataclass(frozen=True)
class LigatureEntry:
    """A ligature glyph and the per-component mark anchors it exposes."""

    components: tuple[str, ...]
    glyph: str
    component_anchors: tuple[Mapping[Placement, AnchorPoint], ...]
    kind: LigatureKind

    def __post_init__(self) -> None:
        if len(self.component_anchors) != len(self.components):
            raise SchemaError(
                f"ligature {self.glyph}: {len(self.component_anchors)} anchor sets "
                f"for {len(self.components)} components"
            )


@dataclass(frozen=True)
class SizeThresholds:
    """Free-span widths at which a growable mark switches size."""

    medium: int
    large: int

    def __post_init__(self) -> None:
        if not 0 < self.medium < self.large:
            raise RangeError(
                f"size thresholds must satisfy 0 < medium < large, "
                f"got ({self.medium}, {self.large})"
            )


@dataclass(frozen=True)
class GlueDefaults:
    """Inter-word space: natural width, stretch and shrink allowances."""

    width: int
    stretch: int
    shrink: int

    def __post_init__(self) -> None:
        if min(self.width, self.stretch, self.shrink) < 0:
            raise SchemaError("glue values must be >= 0")
        if self.shrink > self.width:
            raise SchemaError("glue shrink cannot exceed its width")


@dataclass(frozen=True)
class FontDescription:
    font_id: str
    units_per_em: int
    glyphs: Mapping[str, GlyphMetrics]
    marks: Mapping[str, MarkGlyph]
    ligatures: tuple[LigatureEntry, ...]
    cmap: Mapping[tuple[int, Form], str]
    mark_cmap: Mapping[int, str]
    gsub: tuple[LookupRule, ...]
    gpos: tuple[LookupRule, ...]
    size_thresholds: SizeThresholds
    kashida_priority: Mapping[int, int] = field(default_factory=dict)
    mass_positions: Mapping[MassClass, Mapping[Placement, int]] = field(default_factory=dict)
    mass_variants: Mapping[MassClass, SizeVariant] = field(default_factory=dict)
    glue: GlueDefaults = GlueDefaults(250, 125, 80)

    @cached_property
    def ligature_by_glyph(self) -> dict[str, LigatureEntry]:
        return {e.glyph: e for e in self.ligatures}

    def is_mark_glyph(self, glyph_id: str) -> bool:
        return glyph_id in self.marks

    def mass_offset(self, mass: MassClass, side: Placement) -> int:
        return self.mass_positions.get(mass, {}).get(side, 0)

    def mass_variant(self, mass: MassClass) -> SizeVariant:
        return self.mass_variants.get(mass, SizeVariant.NORMAL)

    def variant_glyph(self, mark_id: str, variant: SizeVariant) -> str:
        """Resolve the glyph id of a mark at a given size."""
        mark = self.marks[mark_id]
        if variant is SizeVariant.NORMAL and mark.variants is None:
            return mark_id
        if mark.variants is None or variant not in mark.variants:
            raise MissingVariant(f"{mark_id} has no {variant.value} variant")
        return mark.variants[variant]


def glyph_for(font: FontDescription, letter_cp: int, form: Form) -> str:
    """The glyph mapped for a (letter, joining form) pair."""
    try:
        return font.cmap[(letter_cp, form)]
    except KeyError:
        raise NoGlyph(f"no glyph for U+{letter_cp:04X} in {form.value} form") from None


# --- parsing ---------------------------------------------------------------


def _require(obj: Mapping, key: str, ctx: str):
    if key not in obj:
        raise SchemaError(f"{ctx}: missing required field {key!r}")
    return obj[key]


def _as_int(value, ctx: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(f"{ctx}: expected an integer, got {value!r}")
    return value


def _as_str(value, ctx: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{ctx}: expected a string, got {value!r}")
    return value


def _as_dict(value, ctx: str) -> Mapping:
    if not isinstance(value, dict):
        raise SchemaError(f"{ctx}: expected an object, got {value!r}")
    return value


def _as_list(value, ctx: str) -> list:
    if not isinstance(value, list):
        raise SchemaError(f"{ctx}: expected an array, got {value!r}")
    return value


def _parse_point(value, ctx: str) -> AnchorPoint:
    if not (isinstance(value, list) and len(value) == 2):
        raise SchemaError(f"{ctx}: expected [x, y], got {value!r}")
    return AnchorPoint(_as_int(value[0], ctx), _as_int(value[1], ctx))


def _parse_rect(value, ctx: str) -> Rect:
    if not (isinstance(value, list) and len(value) == 4):
        raise SchemaError(f"{ctx}: expected [x_min, y_min, x_max, y_max], got {value!r}")
    return Rect(*(_as_int(v, ctx) for v in value))


def _parse_anchor_map(value, ctx: str) -> dict[Placement, AnchorPoint]:
    if not isinstance(value, dict):
        raise SchemaError(f"{ctx}: anchors must be an object")
    out = {}
    for key, point in value.items():
        try:
            side = Placement(key)
        except ValueError:
            raise SchemaError(f"{ctx}: unknown attachment class {key!r}") from None
        out[side] = _parse_point(point, f"{ctx}.{key}")
    return out


def _parse_glyph(gid: str, obj) -> GlyphMetrics:
    ctx = f"glyph {gid}"
    obj = _as_dict(obj, ctx)
    mass = obj.get("mass_class", "medium")
    try:
        mass_class = MassClass(mass)
    except (ValueError, TypeError):
        raise SchemaError(f"{ctx}: unknown mass class {mass!r}") from None
    svg_path = obj.get("svg_path")
    if svg_path is not None:
        svg_path = _as_str(svg_path, f"{ctx}.svg_path")
    return GlyphMetrics(
        advance=_as_int(_require(obj, "advance", ctx), ctx),
        ink=_parse_rect(_require(obj, "ink", ctx), ctx),
        anchors=_parse_anchor_map(obj.get("anchors", {}), ctx),
        max_extension=_as_int(obj.get("max_extension", 0), ctx),
        mass_class=mass_class,
        svg_path=svg_path,
    )


def _parse_mark(mid: str, obj) -> MarkGlyph:
    ctx = f"mark {mid}"
    obj = _as_dict(obj, ctx)
    try:
        side = Placement(_require(obj, "class", ctx))
    except (ValueError, TypeError):
        raise SchemaError(f"{ctx}: unknown attachment class") from None
    variants = None
    if "variants" in obj:
        variants = {}
        for key, vid in _as_dict(obj["variants"], f"{ctx}.variants").items():
            try:
                variants[SizeVariant(key)] = _as_str(vid, f"{ctx}.variants")
            except ValueError:
                raise SchemaError(f"{ctx}: unknown size variant {key!r}") from None
    stack_anchor = None
    if obj.get("stack_anchor") is not None:
        stack_anchor = _parse_point(obj["stack_anchor"], f"{ctx}.stack_anchor")
    svg_path = obj.get("svg_path")
    if svg_path is not None:
        svg_path = _as_str(svg_path, f"{ctx}.svg_path")
    return MarkGlyph(
        attachment_class=side,
        anchor=_parse_point(_require(obj, "anchor", ctx), ctx),
        ink=_parse_rect(_require(obj, "ink", ctx), ctx),
        variants=variants,
        stack_anchor=stack_anchor,
        svg_path=svg_path,
    )


def _parse_ligature(obj, index: int) -> LigatureEntry:
    ctx = f"ligature #{index}"
    obj = _as_dict(obj, ctx)
    components = tuple(
        _as_str(c, f"{ctx}.components")
        for c in _as_list(_require(obj, "components", ctx), ctx)
    )
    if len(components) != 2:
        raise SchemaError(
            f"{ctx}: ligatures are single-level, exactly 2 components required, "
            f"got {len(components)}"
        )
    anchors = tuple(
        _parse_anchor_map(a, f"{ctx}.component_anchors[{i}]")
        for i, a in enumerate(_as_list(_require(obj, "component_anchors", ctx), ctx))
    )
    try:
        kind = LigatureKind(obj.get("kind", "aesthetic"))
    except (ValueError, TypeError):
        raise SchemaError(f"{ctx}: unknown ligature kind") from None
    return LigatureEntry(
        components=components,
        glyph=_as_str(_require(obj, "glyph", ctx), ctx),
        component_anchors=anchors,
        kind=kind,
    )


def _rule_glyph_refs(rule: LookupRule):
    from .lookups import LookupKind

    yield from rule.coverage.glyphs
    payload = rule.payload
    if rule.kind is LookupKind.SINGLE_SUB:
        yield from payload.values()
    elif rule.kind in (LookupKind.MULTIPLE_SUB, LookupKind.ALTERNATE_SUB):
        for seq in payload.values():
            yield from seq
    elif rule.kind is LookupKind.LIGATURE_SUB:
        for entry in payload:
            yield from entry.components
            yield entry.ligature
    elif rule.kind is LookupKind.CONTEXTUAL_SUB:
        for entry in payload:
            yield from entry.match
            for _, glyph in entry.substitutions:
                yield glyph
    elif rule.kind is LookupKind.PAIR_ADJ:
        for entry in payload:
            yield entry.first
            yield entry.second
    elif rule.kind in (LookupKind.MARK_TO_BASE, LookupKind.MARK_TO_LIGATURE, LookupKind.MARK_TO_MARK):
        yield from payload.glyphs


def load_font(source) -> FontDescription:
    """Parse and validate a font description.

    ``source`` may be a path, text, bytes, or a readable file object.
    Raises ParseError on malformed text, SchemaError on structural
    problems, RefError on a dangling glyph id, RangeError on out-of-range
    numeric parameters.
    """
    if hasattr(source, "read"):
        raw = source.read()
    else:
        raw = source
    if isinstance(raw, bytes):
        try:
            raw = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"font file is not UTF-8: {exc}") from exc
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"font file is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError("font description must be a JSON object")
    if doc.get("schema") != SCHEMA_ID:
        raise SchemaError(f"font must declare schema {SCHEMA_ID!r}")

    units = _as_int(_require(doc, "units_per_em", "font"), "units_per_em")
    if units <= 0:
        raise RangeError("units_per_em must be positive")

    glyphs = {
        gid: _parse_glyph(gid, obj)
        for gid, obj in _as_dict(_require(doc, "glyphs", "font"), "glyphs").items()
    }
    marks = {
        mid: _parse_mark(mid, obj)
        for mid, obj in _as_dict(_require(doc, "marks", "font"), "marks").items()
    }
    dup = glyphs.keys() & marks.keys()
    if dup:
        raise SchemaError(f"ids defined both as glyph and mark: {sorted(dup)}")

    ligatures = tuple(
        _parse_ligature(obj, i)
        for i, obj in enumerate(_as_list(doc.get("ligatures", []), "ligatures"))
    )

    cmap: dict[tuple[int, Form], str] = {}
    for cp_hex, forms in _as_dict(_require(doc, "cmap", "font"), "cmap").items():
        try:
            cp = int(cp_hex, 16)
        except ValueError:
            raise SchemaError(f"cmap: bad code point key {cp_hex!r}") from None
        for form_name, gid in _as_dict(forms, f"cmap {cp_hex}").items():
            try:
                form = Form(form_name)
            except (ValueError, TypeError):
                raise SchemaError(f"cmap {cp_hex}: unknown form {form_name!r}") from None
            cmap[(cp, form)] = _as_str(gid, f"cmap {cp_hex} {form_name}")

    mark_cmap: dict[int, str] = {}
    for cp_hex, mid in _as_dict(doc.get("mark_cmap", {}), "mark_cmap").items():
        try:
            mark_cmap[int(cp_hex, 16)] = _as_str(mid, f"mark_cmap {cp_hex}")
        except ValueError:
            raise SchemaError(f"mark_cmap: bad code point key {cp_hex!r}") from None

    gsub = tuple(
        rule_from_json(obj) for obj in _as_list(doc.get("gsub", []), "gsub")
    )
    gpos = tuple(
        rule_from_json(obj) for obj in _as_list(doc.get("gpos", []), "gpos")
    )

    thresholds_obj = _as_dict(_require(doc, "size_thresholds", "font"), "size_thresholds")
    thresholds = SizeThresholds(
        medium=_as_int(_require(thresholds_obj, "medium", "size_thresholds"), "size_thresholds"),
        large=_as_int(_require(thresholds_obj, "large", "size_thresholds"), "size_thresholds"),
    )

    kashida_priority = {}
    for k, v in _as_dict(doc.get("kashida_priority", {}), "kashida_priority").items():
        try:
            stretch_class = int(k)
        except (ValueError, TypeError):
            raise SchemaError(f"kashida_priority: bad stretch class {k!r}") from None
        kashida_priority[stretch_class] = _as_int(v, "kashida_priority")

    mass_positions: dict[MassClass, dict[Placement, int]] = {}
    for mass_name, sides in _as_dict(doc.get("mass_positions", {}), "mass_positions").items():
        try:
            mass = MassClass(mass_name)
        except (ValueError, TypeError):
            raise SchemaError(f"mass_positions: unknown class {mass_name!r}") from None
        mass_positions[mass] = {}
        for side, dy in _as_dict(sides, f"mass_positions {mass_name}").items():
            try:
                placement = Placement(side)
            except (ValueError, TypeError):
                raise SchemaError(
                    f"mass_positions {mass_name}: unknown side {side!r}"
                ) from None
            mass_positions[mass][placement] = _as_int(dy, "mass_positions")

    mass_variants: dict[MassClass, SizeVariant] = {}
    for mass_name, variant_name in _as_dict(
        doc.get("mass_variants", {}), "mass_variants"
    ).items():
        try:
            mass_variants[MassClass(mass_name)] = SizeVariant(variant_name)
        except (ValueError, TypeError):
            raise SchemaError(
                f"mass_variants: bad entry {mass_name!r}: {variant_name!r}"
            ) from None

    glue_obj = _as_dict(doc.get("glue", {}), "glue")
    glue = GlueDefaults(
        width=_as_int(glue_obj.get("width", 250), "glue"),
        stretch=_as_int(glue_obj.get("stretch", 125), "glue"),
        shrink=_as_int(glue_obj.get("shrink", 80), "glue"),
    )

    font = FontDescription(
        font_id=_as_str(doc.get("font_id", "unnamed"), "font_id"),
        units_per_em=units,
        glyphs=glyphs,
        marks=marks,
        ligatures=ligatures,
        cmap=cmap,
        mark_cmap=mark_cmap,
        gsub=gsub,
        gpos=gpos,
        size_thresholds=thresholds,
        kashida_priority=kashida_priority,
        mass_positions=mass_positions,
        mass_variants=mass_variants,
        glue=glue,
    )
    _validate_references(font)
    return font


def load_font_path(path) -> FontDescription:
    with open(path, "rb") as fh:
        return load_font(fh)


def _validate_references(font: FontDescription) -> None:
    known = font.glyphs.keys() | font.marks.keys()

    for (cp, form), gid in font.cmap.items():
        if gid not in known:
            raise RefError(gid, f"cmap U+{cp:04X} {form.value}")
        if gid in font.marks:
            raise SchemaError(f"cmap U+{cp:04X} {form.value} maps to mark glyph {gid!r}")
    for cp, mid in font.mark_cmap.items():
        if mid not in font.marks:
            raise RefError(mid, f"mark_cmap U+{cp:04X}")
    for entry in font.ligatures:
        for comp in entry.components:
            if comp not in known:
                raise RefError(comp, f"ligature {entry.glyph}")
        if entry.glyph not in font.glyphs:
            raise RefError(entry.glyph, "ligature result")
    for label, rules in (("gsub", font.gsub), ("gpos", font.gpos)):
        for rule in rules:
            for gid in _rule_glyph_refs(rule):
                if gid not in known:
                    raise RefError(gid, f"{label} {rule.kind.value} rule")
    for mid, mark in font.marks.items():
        if mark.variants is not None:
            normal = mark.variants.get(SizeVariant.NORMAL)
            if normal != mid:
                raise SchemaError(
                    f"mark {mid}: normal variant must be the mark itself, got {normal!r}"
                )
            for vid in mark.variants.values():
                if vid not in font.marks:
                    raise RefError(vid, f"mark {mid} variants")


# --- serialization ---------------------------------------------------------


def _point_json(p: AnchorPoint) -> list[int]:
    return [p.x, p.y]


def _glyph_json(g: GlyphMetrics) -> dict:
    out: dict = {
        "advance": g.advance,
        "ink": [g.ink.x_min, g.ink.y_min, g.ink.x_max, g.ink.y_max],
        "mass_class": g.mass_class.value,
    }
    if g.anchors:
        out["anchors"] = {side.value: _point_json(a) for side, a in sorted(
            g.anchors.items(), key=lambda kv: kv[0].value
        )}
    if g.max_extension:
        out["max_extension"] = g.max_extension
    if g.svg_path is not None:
        out["svg_path"] = g.svg_path
    return out


def _mark_json(m: MarkGlyph) -> dict:
    out: dict = {
        "class": m.attachment_class.value,
        "anchor": _point_json(m.anchor),
        "ink": [m.ink.x_min, m.ink.y_min, m.ink.x_max, m.ink.y_max],
    }
    if m.variants is not None:
        out["variants"] = {v.value: gid for v, gid in sorted(
            m.variants.items(), key=lambda kv: kv[0].value
        )}
    if m.stack_anchor is not None:
        out["stack_anchor"] = _point_json(m.stack_anchor)
    if m.svg_path is not None:
        out["svg_path"] = m.svg_path
    return out


def serialize_font(font: FontDescription) -> str:
    """Canonical JSON text: sorted keys, integers only, newline-terminated."""
    cmap_json: dict[str, dict[str, str]] = {}
    for (cp, form), gid in font.cmap.items():
        cmap_json.setdefault(f"{cp:04X}", {})[form.value] = gid
    doc = {
        "schema": SCHEMA_ID,
        "font_id": font.font_id,
        "units_per_em": font.units_per_em,
        "glyphs": {gid: _glyph_json(g) for gid, g in font.glyphs.items()},
        "marks": {mid: _mark_json(m) for mid, m in font.marks.items()},
        "ligatures": [
            {
                "components": list(e.components),
                "glyph": e.glyph,
                "component_anchors": [
                    {side.value: _point_json(a) for side, a in sorted(
                        anchors.items(), key=lambda kv: kv[0].value
                    )}
                    for anchors in e.component_anchors
                ],
                "kind": e.kind.value,
            }
            for e in font.ligatures
        ],
        "cmap": cmap_json,
        "mark_cmap": {f"{cp:04X}": mid for cp, mid in font.mark_cmap.items()},
        "gsub": [rule_to_json(r) for r in font.gsub],
        "gpos": [rule_to_json(r) for r in font.gpos],
        "size_thresholds": {
            "medium": font.size_thresholds.medium,
            "large": font.size_thresholds.large,
        },
        "kashida_priority": {str(k): v for k, v in font.kashida_priority.items()},
        "mass_positions": {
            mass.value: {side.value: dy for side, dy in sorted(
                sides.items(), key=lambda kv: kv[0].value
            )}
            for mass, sides in sorted(font.mass_positions.items(), key=lambda kv: kv[0].value)
        },
        "mass_variants": {
            mass.value: variant.value
            for mass, variant in sorted(font.mass_variants.items(), key=lambda kv: kv[0].value)
        },
        "glue": {
            "width": font.glue.width,
            "stretch": font.glue.stretch,
            "shrink": font.glue.shrink,
        },
    }
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


# --- lint ------------------------------------------------------------------


def mass_terciles(areas: Mapping[str, int]) -> dict[str, MassClass]:
    """Suggested mass classes: rank glyphs by ink area, split in thirds."""
    ordered = sorted(areas, key=lambda gid: (areas[gid], gid))
    n = len(ordered)
    cut_light = n // 3
    cut_medium = (2 * n) // 3
    out: dict[str, MassClass] = {}
    for rank, gid in enumerate(ordered):
        if rank < cut_light:
            out[gid] = MassClass.LIGHT
        elif rank < cut_medium:
            out[gid] = MassClass.MEDIUM
        else:
            out[gid] = MassClass.HEAVY
    return out


def suggest_mass_classes(font: FontDescription) -> dict[str, MassClass]:
    return mass_terciles({gid: g.ink.area for gid, g in font.glyphs.items()})


def lint_font(
    font: FontDescription, table: CharacterTable | None = None
) -> list[Diagnostic]:
    """Check a structurally valid font against the preparation checklist.

    Every rule has a stable code; see docs/layout-format.md. Severity
    ``error`` marks data the engine will stumble on, ``warn`` marks dead
    data, ``info`` marks advisory findings.
    """
    tbl = table or DEFAULT_TABLE
    findings: list[Diagnostic] = []

    def add(severity: Severity, code: str, message: str) -> None:
        findings.append(Diagnostic(severity=severity, code=code, message=message))

    mark_sides = {m.attachment_class for m in font.marks.values()}
    ligature_glyphs = set(font.ligature_by_glyph)

    for letter in tbl.letters.values():
        for form in valid_forms(letter):
            if (letter.code_point, form) not in font.cmap:
                add(
                    Severity.ERROR,
                    "missing-cmap-entry",
                    f"no glyph mapped for {letter.name} in {form.value} form",
                )

    for gid in sorted(font.glyphs):
        if gid in ligature_glyphs:
            continue
        metrics = font.glyphs[gid]
        for side in sorted(mark_sides, key=lambda s: s.value):
            if side not in metrics.anchors:
                add(
                    Severity.ERROR,
                    "missing-anchor",
                    f"glyph {gid} lacks an {side.value!r} anchor "
                    f"while {side.value} marks exist",
                )

    for cp in sorted(font.mark_cmap):
        mid = font.mark_cmap[cp]
        record = tbl.diacritics.get(cp)
        if record is None:
            continue
        mark = font.marks[mid]
        if record.elongatable:
            have = set(mark.variants or {})
            missing = [v.value for v in VARIANT_ORDER if v not in have]
            if missing:
                add(
                    Severity.ERROR,
                    "missing-variant",
                    f"growable mark {mid} lacks size variants: {', '.join(missing)}",
                )
        elif mark.variants is not None:
            add(
                Severity.WARN,
                "spurious-variants",
                f"mark {mid} has size variants but can never grow",
            )

    for letter in sorted(tbl.letters.values(), key=lambda r: r.code_point):
        if letter.stretch_class <= 0:
            continue
        for form in (Form.INITIAL, Form.MEDIAL):
            gid = font.cmap.get((letter.code_point, form))
            if gid is not None and font.glyphs[gid].max_extension == 0:
                add(
                    Severity.ERROR,
                    "zero-capacity",
                    f"glyph {gid} belongs to stretchable letter {letter.name} "
                    f"but has max_extension 0",
                )

    for (cp, form), gid in sorted(font.cmap.items(), key=lambda kv: (kv[0][0], kv[0][1].value)):
        letter = tbl.letters.get(cp)
        if letter is None:
            continue
        if letter.stretch_class == 0 and font.glyphs[gid].max_extension > 0:
            add(
                Severity.WARN,
                "unreachable-stretch",
                f"glyph {gid} has stretch capacity but letter {letter.name} "
                f"is never elongated",
            )

    for entry in font.ligatures:
        if len(entry.components) != 2:
            add(
                Severity.ERROR,
                "multilevel-ligature",
                f"ligature {entry.glyph} has {len(entry.components)} components; "
                f"only single-level (2) is supported",
            )
        for i, anchors in enumerate(entry.component_anchors):
            for side in sorted(mark_sides, key=lambda s: s.value):
                if side not in anchors:
                    add(
                        Severity.ERROR,
                        "ligature-anchor-gap",
                        f"ligature {entry.glyph} component {i} lacks an "
                        f"{side.value!r} anchor",
                    )

    suggested = suggest_mass_classes(font)
    for gid in sorted(font.glyphs):
        if suggested[gid] is not font.glyphs[gid].mass_class:
            add(
                Severity.INFO,
                "mass-class-mismatch",
                f"glyph {gid} is {font.glyphs[gid].mass_class.value} but its ink "
                f"area suggests {suggested[gid].value}",
            )

    return findings
