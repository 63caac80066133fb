"""Rule-driven glyph substitution and mark positioning.

This is a deliberately small smart-font engine. Substitution rules rewrite
a glyph sequence (ligatures, alternates, contextual swaps); positioning
rules place marks by aligning anchor points and apply simple metric
adjustments.

Rules execute in font order, one left-to-right pass each, with no
recursive re-matching, so a rule set's effect is deterministic and easy to
reason about. A rule flagged ``ignore_marks`` scans past mark glyphs:
marks standing between ligature components neither block the ligature nor
get lost; they are carried over and re-attached to the component they
originally rode on.

Mark positioning is anchor arithmetic: the mark's anchor point is brought
onto the base glyph's attachment point for the mark's class, so the mark's
offset is ``base_origin + base_anchor - mark_anchor``. Ligatures expose
one attachment point per original component; marks may also stack on other
marks through a dedicated stacking anchor.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Callable, Iterable, Mapping, Sequence

from .errors import BadComponent, MissingAnchor, SchemaError
from .textmodel import Placement

if TYPE_CHECKING:
    from .fontmodel import FontDescription, GlyphMetrics, LigatureEntry, MarkGlyph


@dataclass(frozen=True)
class CoverageTable:
    """The set of glyphs a rule applies to."""

    glyphs: frozenset[str]

    @classmethod
    def of(cls, ids: Iterable[str]) -> "CoverageTable":
        return cls(frozenset(ids))

    def covers(self, glyph_id: str) -> bool:
        return glyph_id in self.glyphs

    def __iter__(self):
        return iter(sorted(self.glyphs))

    def __len__(self) -> int:
        return len(self.glyphs)


class LookupKind(enum.Enum):
    SINGLE_SUB = "single_sub"
    MULTIPLE_SUB = "multiple_sub"
    ALTERNATE_SUB = "alternate_sub"
    LIGATURE_SUB = "ligature_sub"
    CONTEXTUAL_SUB = "contextual_sub"
    SINGLE_ADJ = "single_adj"
    PAIR_ADJ = "pair_adj"
    CURSIVE_ATTACH = "cursive_attach"
    MARK_TO_BASE = "mark_to_base"
    MARK_TO_LIGATURE = "mark_to_ligature"
    MARK_TO_MARK = "mark_to_mark"


SUBSTITUTION_KINDS = frozenset(
    {
        LookupKind.SINGLE_SUB,
        LookupKind.MULTIPLE_SUB,
        LookupKind.ALTERNATE_SUB,
        LookupKind.LIGATURE_SUB,
        LookupKind.CONTEXTUAL_SUB,
    }
)

MARK_ATTACH_KINDS = frozenset(
    {LookupKind.MARK_TO_BASE, LookupKind.MARK_TO_LIGATURE, LookupKind.MARK_TO_MARK}
)


@dataclass(frozen=True)
class LigatureSub:
    """One ligature mapping: a component run collapses to one glyph."""

    components: tuple[str, ...]
    ligature: str


@dataclass(frozen=True)
class ContextualSub:
    """Exact-sequence match with single-glyph replacements at offsets."""

    match: tuple[str, ...]
    substitutions: tuple[tuple[int, str], ...]


@dataclass(frozen=True)
class PairAdjustment:
    first: str
    second: str
    delta_advance: int


@dataclass(frozen=True)
class LookupRule:
    """One substitution or positioning rule, gated by a feature tag."""

    kind: LookupKind
    feature: str
    coverage: CoverageTable
    payload: object
    flags: frozenset[str] = frozenset()

    def __post_init__(self) -> None:
        bad = self.flags - {"ignore_marks"}
        if bad:
            raise SchemaError(f"unknown lookup flags {sorted(bad)}")
        self._check_payload()

    def _check_payload(self) -> None:
        kind, payload = self.kind, self.payload
        if kind is LookupKind.SINGLE_SUB:
            ok = isinstance(payload, dict) and all(
                isinstance(k, str) and isinstance(v, str) for k, v in payload.items()
            )
        elif kind in (LookupKind.MULTIPLE_SUB, LookupKind.ALTERNATE_SUB):
            ok = isinstance(payload, dict) and all(
                isinstance(v, tuple) and len(v) > 0 for v in payload.values()
            )
        elif kind is LookupKind.LIGATURE_SUB:
            ok = isinstance(payload, tuple) and all(
                isinstance(e, LigatureSub) and len(e.components) >= 2 for e in payload
            )
        elif kind is LookupKind.CONTEXTUAL_SUB:
            ok = isinstance(payload, tuple) and all(
                isinstance(e, ContextualSub)
                and all(0 <= off < len(e.match) for off, _ in e.substitutions)
                for e in payload
            )
        elif kind is LookupKind.SINGLE_ADJ:
            ok = isinstance(payload, dict) and all(
                isinstance(v, tuple) and len(v) == 3 for v in payload.values()
            )
        elif kind is LookupKind.PAIR_ADJ:
            ok = isinstance(payload, tuple) and all(
                isinstance(e, PairAdjustment) for e in payload
            )
        elif kind is LookupKind.CURSIVE_ATTACH:
            ok = isinstance(payload, dict) and all(
                isinstance(v, tuple) and len(v) == 2 for v in payload.values()
            )
        else:  # mark attachment kinds carry the other side's coverage
            ok = isinstance(payload, CoverageTable)
        if not ok:
            raise SchemaError(f"payload shape does not match kind {kind.value}")

        anchored = self._anchor_glyphs()
        if anchored is not None:
            loose = self.coverage.glyphs - anchored
            if loose:
                raise SchemaError(
                    f"{kind.value} coverage names glyphs without payload data: "
                    f"{sorted(loose)}"
                )

    def _anchor_glyphs(self) -> frozenset[str] | None:
        """Glyphs the payload can actually act on, for keyed rule kinds."""
        kind, payload = self.kind, self.payload
        if kind in (
            LookupKind.SINGLE_SUB,
            LookupKind.MULTIPLE_SUB,
            LookupKind.ALTERNATE_SUB,
            LookupKind.SINGLE_ADJ,
            LookupKind.CURSIVE_ATTACH,
        ):
            return frozenset(payload)
        if kind is LookupKind.LIGATURE_SUB:
            return frozenset(e.components[0] for e in payload)
        if kind is LookupKind.CONTEXTUAL_SUB:
            return frozenset(e.match[0] for e in payload)
        if kind is LookupKind.PAIR_ADJ:
            return frozenset(e.first for e in payload)
        return None  # mark attachment coverage is free-standing


def _json_str(value, ctx: str) -> str:
    if not isinstance(value, str):
        raise SchemaError(f"{ctx}: expected a glyph id string, got {value!r}")
    return value


def _json_dict(value, ctx: str) -> Mapping:
    if not isinstance(value, dict):
        raise SchemaError(f"{ctx}: expected an object, got {value!r}")
    return value


def _json_strs(value, ctx: str) -> list[str]:
    if not isinstance(value, list):
        raise SchemaError(f"{ctx}: expected an array of glyph ids, got {value!r}")
    return [_json_str(v, ctx) for v in value]


def _json_point(value, ctx: str) -> tuple[int, int]:
    ok = (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(v, int) and not isinstance(v, bool) for v in value)
    )
    if not ok:
        raise SchemaError(f"{ctx}: expected [x, y], got {value!r}")
    return (value[0], value[1])


def rule_from_json(obj) -> LookupRule:
    """Parse one rule from its JSON object form."""
    obj = _json_dict(obj, "lookup rule")
    try:
        kind = LookupKind(obj["kind"])
    except (KeyError, ValueError, TypeError) as exc:
        raise SchemaError(f"bad lookup kind in {obj!r}") from exc
    ctx = f"{kind.value} rule"
    feature = obj.get("feature", "")
    if not isinstance(feature, str) or not feature:
        raise SchemaError(f"lookup rule missing feature tag: {obj!r}")
    flags = frozenset(_json_strs(obj.get("flags", []), f"{ctx} flags"))

    if kind is LookupKind.SINGLE_SUB:
        payload: object = {
            _json_str(k, ctx): _json_str(v, ctx)
            for k, v in _json_dict(obj.get("map", {}), ctx).items()
        }
        default_cov = list(payload)
    elif kind in (LookupKind.MULTIPLE_SUB, LookupKind.ALTERNATE_SUB):
        key = "sequences" if kind is LookupKind.MULTIPLE_SUB else "alternates"
        payload = {
            _json_str(k, ctx): tuple(_json_strs(v, ctx))
            for k, v in _json_dict(obj.get(key, {}), ctx).items()
        }
        default_cov = list(payload)
    elif kind is LookupKind.LIGATURE_SUB:
        entries = []
        for e in obj.get("ligatures", []) or []:
            e = _json_dict(e, ctx)
            comps = tuple(_json_strs(e.get("components", []), ctx))
            if len(comps) < 2 or "glyph" not in e:
                raise SchemaError(f"bad ligature mapping {e!r}")
            entries.append(
                LigatureSub(components=comps, ligature=_json_str(e["glyph"], ctx))
            )
        payload = tuple(entries)
        default_cov = [e.components[0] for e in entries]
    elif kind is LookupKind.CONTEXTUAL_SUB:
        entries = []
        for e in obj.get("contexts", []) or []:
            e = _json_dict(e, ctx)
            match = tuple(_json_strs(e.get("match", []), ctx))
            if not match:
                raise SchemaError(f"bad contextual mapping {e!r}")
            subs = []
            for k, v in _json_dict(e.get("replace", {}), ctx).items():
                try:
                    offset = int(k)
                except (ValueError, TypeError):
                    raise SchemaError(f"{ctx}: bad replacement offset {k!r}") from None
                subs.append((offset, _json_str(v, ctx)))
            entries.append(ContextualSub(match=match, substitutions=tuple(sorted(subs))))
        payload = tuple(entries)
        default_cov = [e.match[0] for e in entries]
    elif kind is LookupKind.SINGLE_ADJ:
        payload = {}
        for k, v in _json_dict(obj.get("adjustments", {}), ctx).items():
            ok = (
                isinstance(v, list)
                and len(v) == 3
                and all(isinstance(n, int) and not isinstance(n, bool) for n in v)
            )
            if not ok:
                raise SchemaError(f"{ctx}: expected [dx, dy, d_advance], got {v!r}")
            payload[_json_str(k, ctx)] = tuple(v)
        default_cov = list(payload)
    elif kind is LookupKind.PAIR_ADJ:
        entries = []
        for e in obj.get("pairs", []) or []:
            e = _json_dict(e, ctx)
            try:
                delta = int(e["advance"])
            except (KeyError, ValueError, TypeError):
                raise SchemaError(f"{ctx}: bad pair adjustment {e!r}") from None
            entries.append(
                PairAdjustment(
                    _json_str(e.get("first"), ctx), _json_str(e.get("second"), ctx), delta
                )
            )
        payload = tuple(entries)
        default_cov = [e.first for e in payload]
    elif kind is LookupKind.CURSIVE_ATTACH:
        payload = {}
        for k, v in _json_dict(obj.get("cursive", {}), ctx).items():
            v = _json_dict(v, ctx)
            payload[_json_str(k, ctx)] = (
                _json_point(v.get("entry"), ctx),
                _json_point(v.get("exit"), ctx),
            )
        default_cov = list(payload)
    elif kind is LookupKind.MARK_TO_MARK:
        payload = CoverageTable.of(_json_strs(obj.get("lower", []), ctx))
        default_cov = []
    else:  # mark_to_base, mark_to_ligature
        payload = CoverageTable.of(_json_strs(obj.get("marks", []), ctx))
        default_cov = []

    coverage = CoverageTable.of(
        _json_strs(obj.get("coverage", default_cov), f"{ctx} coverage")
    )
    return LookupRule(kind=kind, feature=feature, coverage=coverage, payload=payload, flags=flags)


def rule_to_json(rule: LookupRule) -> dict:
    out: dict = {"kind": rule.kind.value, "feature": rule.feature}
    if rule.flags:
        out["flags"] = sorted(rule.flags)
    out["coverage"] = sorted(rule.coverage.glyphs)
    kind, payload = rule.kind, rule.payload
    if kind is LookupKind.SINGLE_SUB:
        out["map"] = dict(sorted(payload.items()))
    elif kind is LookupKind.MULTIPLE_SUB:
        out["sequences"] = {k: list(v) for k, v in sorted(payload.items())}
    elif kind is LookupKind.ALTERNATE_SUB:
        out["alternates"] = {k: list(v) for k, v in sorted(payload.items())}
    elif kind is LookupKind.LIGATURE_SUB:
        out["ligatures"] = [
            {"components": list(e.components), "glyph": e.ligature} for e in payload
        ]
    elif kind is LookupKind.CONTEXTUAL_SUB:
        out["contexts"] = [
            {"match": list(e.match), "replace": {str(o): g for o, g in e.substitutions}}
            for e in payload
        ]
    elif kind is LookupKind.SINGLE_ADJ:
        out["adjustments"] = {k: list(v) for k, v in sorted(payload.items())}
    elif kind is LookupKind.PAIR_ADJ:
        out["pairs"] = [
            {"first": e.first, "second": e.second, "advance": e.delta_advance}
            for e in payload
        ]
    elif kind is LookupKind.CURSIVE_ATTACH:
        out["cursive"] = {
            k: {"entry": list(v[0]), "exit": list(v[1])}
            for k, v in sorted(payload.items())
        }
    elif kind is LookupKind.MARK_TO_MARK:
        out["lower"] = sorted(payload.glyphs)
    else:
        out["marks"] = sorted(payload.glyphs)
    return out


@dataclass(frozen=True)
class PlacedGlyph:
    """One glyph with resolved position data.

    Base glyphs advance the pen; their offsets are relative to their own
    pen position. Mark glyphs never advance the pen; their offsets are
    relative to the origin of the glyph they attach to, recorded in
    ``attached_to`` as (glyph index, attachment class).
    """

    glyph: str
    advance: int
    x_offset: int = 0
    y_offset: int = 0
    elongation: int = 0
    attached_to: tuple[int, Placement] | None = None
    is_mark: bool = False

    def __post_init__(self) -> None:
        if self.is_mark and self.advance != 0:
            raise ValueError(f"mark glyph {self.glyph} must have zero advance")
        if self.elongation < 0:
            raise ValueError(f"negative elongation on {self.glyph}")


@dataclass(frozen=True)
class GlyphItem:
    """A glyph id plus the source cluster indices it represents.

    Used to carry cluster attribution through substitution so marks can be
    re-attached to the right ligature component afterwards.
    """

    glyph: str
    clusters: tuple[int, ...]
    is_mark: bool = False


def _matches_run(
    items: Sequence[GlyphItem],
    start: int,
    components: Sequence[str],
    skip_marks: bool,
) -> tuple[list[int], list[int]] | None:
    """Match a component run anchored at start; returns (positions, skipped)."""
    positions = [start]
    skipped: list[int] = []
    j = start + 1
    k = 1
    n = len(items)
    while k < len(components):
        if j >= n:
            return None
        cand = items[j]
        if cand.is_mark:
            if not skip_marks:
                return None
            skipped.append(j)
            j += 1
            continue
        if cand.glyph != components[k]:
            return None
        positions.append(j)
        k += 1
        j += 1
    return positions, skipped


def _apply_rule(rule: LookupRule, items: list[GlyphItem]) -> list[GlyphItem]:
    skip = "ignore_marks" in rule.flags
    out: list[GlyphItem] = []

    if rule.kind in (LookupKind.SINGLE_SUB, LookupKind.MULTIPLE_SUB, LookupKind.ALTERNATE_SUB):
        mapping = rule.payload
        for it in items:
            if (skip and it.is_mark) or not rule.coverage.covers(it.glyph):
                out.append(it)
            elif rule.kind is LookupKind.SINGLE_SUB:
                out.append(replace(it, glyph=mapping[it.glyph]))
            elif rule.kind is LookupKind.MULTIPLE_SUB:
                out.extend(replace(it, glyph=g) for g in mapping[it.glyph])
            else:  # alternate substitution applies its first alternative
                out.append(replace(it, glyph=mapping[it.glyph][0]))
        return out

    if rule.kind is LookupKind.LIGATURE_SUB:
        i = 0
        n = len(items)
        while i < n:
            it = items[i]
            hit = None
            if not it.is_mark and rule.coverage.covers(it.glyph):
                for entry in rule.payload:
                    if entry.components[0] != it.glyph:
                        continue
                    m = _matches_run(items, i, entry.components, skip)
                    if m is not None:
                        hit = (entry, m)
                        break
            if hit is None:
                out.append(it)
                i += 1
                continue
            entry, (positions, skipped) = hit
            clusters = tuple(c for p in positions for c in items[p].clusters)
            out.append(GlyphItem(glyph=entry.ligature, clusters=clusters))
            out.extend(items[s] for s in skipped)
            i = max(positions) + 1
        return out

    if rule.kind is LookupKind.CONTEXTUAL_SUB:
        i = 0
        n = len(items)
        result = list(items)
        while i < n:
            it = result[i]
            advanced = False
            if not it.is_mark and rule.coverage.covers(it.glyph):
                for entry in rule.payload:
                    if entry.match[0] != it.glyph:
                        continue
                    m = _matches_run(result, i, entry.match, skip)
                    if m is None:
                        continue
                    positions, _ = m
                    for off, new_glyph in entry.substitutions:
                        p = positions[off]
                        result[p] = replace(result[p], glyph=new_glyph)
                    i = max(positions) + 1
                    advanced = True
                    break
            if not advanced:
                i += 1
        return result

    raise SchemaError(f"{rule.kind.value} is not a substitution rule")


def apply_gsub_tracked(
    rules: Sequence[LookupRule],
    items: Sequence[GlyphItem],
    enabled_features: frozenset[str] | set[str],
) -> list[GlyphItem]:
    """Run every enabled substitution rule, in order, one pass each."""
    current = list(items)
    for rule in rules:
        if rule.kind not in SUBSTITUTION_KINDS:
            continue
        if rule.feature not in enabled_features:
            continue
        current = _apply_rule(rule, current)
    return current


def apply_gsub(
    rules: Sequence[LookupRule],
    glyphs: Sequence[str],
    enabled_features: frozenset[str] | set[str],
    is_mark: Callable[[str], bool] | None = None,
) -> list[str]:
    """Substitution over a bare glyph id sequence.

    ``is_mark`` tells the scanner which glyph ids are marks (for
    ``ignore_marks`` handling); by default nothing is a mark.
    """
    mark_test = is_mark or (lambda g: False)
    items = [
        GlyphItem(glyph=g, clusters=(i,), is_mark=mark_test(g))
        for i, g in enumerate(glyphs)
    ]
    return [it.glyph for it in apply_gsub_tracked(rules, items, enabled_features)]


# --- mark attachment arithmetic -------------------------------------------


def attach_mark_to_base(
    base: PlacedGlyph,
    base_metrics: "GlyphMetrics",
    mark: "MarkGlyph",
    mark_glyph_id: str,
    base_index: int,
) -> PlacedGlyph:
    """Align the mark's anchor with the base's attachment point."""
    anchor = base_metrics.anchors.get(mark.attachment_class)
    if anchor is None:
        raise MissingAnchor(
            f"{base.glyph} has no {mark.attachment_class.value!r} anchor for {mark_glyph_id}"
        )
    return PlacedGlyph(
        glyph=mark_glyph_id,
        advance=0,
        x_offset=base.x_offset + anchor.x - mark.anchor.x,
        y_offset=base.y_offset + anchor.y - mark.anchor.y,
        attached_to=(base_index, mark.attachment_class),
        is_mark=True,
    )


def attach_mark_to_ligature(
    lig: PlacedGlyph,
    entry: "LigatureEntry",
    mark: "MarkGlyph",
    mark_glyph_id: str,
    component_index: int,
    lig_index: int,
) -> PlacedGlyph:
    """Attach a mark to one component of a ligature glyph."""
    if not 0 <= component_index < len(entry.components):
        raise BadComponent(
            f"component {component_index} out of range for {entry.glyph} "
            f"({len(entry.components)} components)"
        )
    anchor = entry.component_anchors[component_index].get(mark.attachment_class)
    if anchor is None:
        raise MissingAnchor(
            f"{entry.glyph} component {component_index} has no "
            f"{mark.attachment_class.value!r} anchor"
        )
    return PlacedGlyph(
        glyph=mark_glyph_id,
        advance=0,
        x_offset=lig.x_offset + anchor.x - mark.anchor.x,
        y_offset=lig.y_offset + anchor.y - mark.anchor.y,
        attached_to=(lig_index, mark.attachment_class),
        is_mark=True,
    )


def attach_mark_to_mark(
    lower: PlacedGlyph,
    lower_mark: "MarkGlyph",
    upper: "MarkGlyph",
    upper_glyph_id: str,
    lower_index: int,
) -> PlacedGlyph:
    """Stack a mark on an already placed mark via its stacking anchor."""
    if lower_mark.stack_anchor is None:
        raise MissingAnchor(f"{lower.glyph} has no stacking anchor for {upper_glyph_id}")
    return PlacedGlyph(
        glyph=upper_glyph_id,
        advance=0,
        x_offset=lower.x_offset + lower_mark.stack_anchor.x - upper.anchor.x,
        y_offset=lower.y_offset + lower_mark.stack_anchor.y - upper.anchor.y,
        attached_to=(lower_index, upper.attachment_class),
        is_mark=True,
    )


def position_marks(
    font: "FontDescription",
    items: Sequence[GlyphItem],
    enabled_features: frozenset[str] | set[str],
) -> list[PlacedGlyph]:
    """Build placed glyphs from shaped items using the font's positioning rules.

    Metric adjustment rules (single, pair, cursive) run strictly in font
    order first. Mark attachment is then structural: a mark stacks on the
    preceding mark of its cluster and side when a mark-to-mark rule covers
    the pair, attaches to its ligature component when a mark-to-ligature
    rule covers the ligature, and otherwise attaches to its base glyph
    under a mark-to-base rule. A mark no rule covers is an error.
    """
    placed: list[PlacedGlyph | None] = []
    owner_of: list[int | None] = []
    cur_base: int | None = None
    for idx, it in enumerate(items):
        if it.is_mark:
            placed.append(None)
        else:
            metrics = font.glyphs[it.glyph]
            placed.append(PlacedGlyph(glyph=it.glyph, advance=metrics.advance))
            cur_base = idx
        owner_of.append(cur_base if it.is_mark else None)

    active = [r for r in font.gpos if r.feature in enabled_features]

    for rule in active:
        if rule.kind is LookupKind.SINGLE_ADJ:
            for idx, pg in enumerate(placed):
                if pg is not None and not pg.is_mark and rule.coverage.covers(pg.glyph):
                    dx, dy, dadv = rule.payload[pg.glyph]
                    placed[idx] = replace(
                        pg,
                        x_offset=pg.x_offset + dx,
                        y_offset=pg.y_offset + dy,
                        advance=pg.advance + dadv,
                    )
        elif rule.kind is LookupKind.PAIR_ADJ:
            pair_map = {(e.first, e.second): e.delta_advance for e in rule.payload}
            base_idx = [i for i, pg in enumerate(placed) if pg is not None and not pg.is_mark]
            for a, b in zip(base_idx, base_idx[1:]):
                key = (placed[a].glyph, placed[b].glyph)
                if rule.coverage.covers(key[0]) and key in pair_map:
                    placed[a] = replace(placed[a], advance=placed[a].advance + pair_map[key])
        elif rule.kind is LookupKind.CURSIVE_ATTACH:
            base_idx = [i for i, pg in enumerate(placed) if pg is not None and not pg.is_mark]
            for a, b in zip(base_idx, base_idx[1:]):
                ga, gb = placed[a].glyph, placed[b].glyph
                if rule.coverage.covers(ga) and rule.coverage.covers(gb):
                    exit_anchor = rule.payload[ga][1]
                    entry_anchor = rule.payload[gb][0]
                    dy = placed[a].y_offset + exit_anchor[1] - entry_anchor[1]
                    placed[b] = replace(placed[b], y_offset=placed[b].y_offset + dy)

    mark_rules = [r for r in active if r.kind in MARK_ATTACH_KINDS]
    ligature_map = font.ligature_by_glyph
    last_mark: dict[tuple[int, Placement], int] = {}

    for idx, it in enumerate(items):
        if not it.is_mark:
            continue
        mark = font.marks[it.glyph]
        side = mark.attachment_class
        cluster = it.clusters[0]
        owner_idx = owner_of[idx]
        if owner_idx is None:
            raise MissingAnchor(f"mark {it.glyph} has no base glyph before it")
        owner = items[owner_idx]

        prev_idx = last_mark.get((cluster, side))
        attached: PlacedGlyph | None = None
        if prev_idx is not None:
            lower_glyph = items[prev_idx].glyph
            for rule in mark_rules:
                if (
                    rule.kind is LookupKind.MARK_TO_MARK
                    and rule.coverage.covers(it.glyph)
                    and rule.payload.covers(lower_glyph)
                ):
                    attached = attach_mark_to_mark(
                        placed[prev_idx], font.marks[lower_glyph], mark, it.glyph, prev_idx
                    )
                    break
        if attached is None and owner.glyph in ligature_map:
            entry = ligature_map[owner.glyph]
            for rule in mark_rules:
                if (
                    rule.kind is LookupKind.MARK_TO_LIGATURE
                    and rule.coverage.covers(owner.glyph)
                    and rule.payload.covers(it.glyph)
                ):
                    try:
                        component_index = owner.clusters.index(cluster)
                    except ValueError as exc:
                        raise BadComponent(
                            f"mark {it.glyph} belongs to no component of {owner.glyph}"
                        ) from exc
                    attached = attach_mark_to_ligature(
                        placed[owner_idx], entry, mark, it.glyph, component_index, owner_idx
                    )
                    break
        if attached is None:
            for rule in mark_rules:
                if (
                    rule.kind is LookupKind.MARK_TO_BASE
                    and rule.coverage.covers(owner.glyph)
                    and rule.payload.covers(it.glyph)
                ):
                    attached = attach_mark_to_base(
                        placed[owner_idx], font.glyphs[owner.glyph], mark, it.glyph, owner_idx
                    )
                    break
        if attached is None:
            raise MissingAnchor(
                f"no positioning rule attaches {it.glyph} to {owner.glyph}"
            )
        placed[idx] = attached
        last_mark[(cluster, side)] = idx

    return [pg for pg in placed if pg is not None]
