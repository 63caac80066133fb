from __future__ import annotations

import random

from qalam import kashida
from qalam.diacritics import (
    PlacedMark,
    measure_gap,
    place_diacritics,
    resolve_collisions,
    select_size_variant,
    with_marks,
)
from qalam.fontmodel import SizeVariant, VARIANT_ORDER
from qalam.kashida import ElongationPlan, apply_plan
from qalam.textmodel import Placement

from .util import BEH, synth_font, word


def variant_rank(variant: SizeVariant) -> int:
    return VARIANT_ORDER.index(variant)


class TestSelectSizeVariant:
    def test_zero_gap_is_normal(self):
        assert select_size_variant(0, 200, 450) is SizeVariant.NORMAL

    def test_thresholds_inclusive(self):
        assert select_size_variant(199, 200, 450) is SizeVariant.NORMAL
        assert select_size_variant(200, 200, 450) is SizeVariant.MEDIUM
        assert select_size_variant(449, 200, 450) is SizeVariant.MEDIUM
        assert select_size_variant(450, 200, 450) is SizeVariant.LARGE

    def test_saturates(self):
        assert select_size_variant(10_000, 200, 450) is SizeVariant.LARGE

    def test_monotone(self):
        ranks = [variant_rank(select_size_variant(g, 200, 450)) for g in range(0, 1200, 7)]
        assert ranks == sorted(ranks)


class TestMeasureGap:
    def test_bare_glyph_gap_is_ink_width(self, demo_font):
        w = word("س", demo_font)  # seen.isol: ink 20..580
        gap = measure_gap(w, 0, Placement.ABOVE, demo_font)
        assert gap.owner == 0
        assert gap.width == 560

    def test_elongation_adds_to_gap(self, demo_font):
        w = word("س", demo_font)
        stretched = apply_plan(w, ElongationPlan({0: 250}, 0), demo_font)
        assert measure_gap(stretched, 0, Placement.ABOVE, demo_font).width == 560 + 250

    def test_neighbour_mark_subtracts(self):
        font = synth_font(mark_overrides={"damma": {"ink": [0, 0, 800, 140], "anchor": [400, 0]}})
        w = word("دُب", font)  # dal+damma, beh
        # dal ink [0,280]; its damma ink spans [-260, 540]; beh spans [280, 620].
        gap = measure_gap(w, 2, Placement.ABOVE, font)
        assert gap.width == 340 - (540 - 280)

    def test_fully_covered_span_clamps_to_zero(self):
        font = synth_font(mark_overrides={"damma": {"ink": [0, 0, 1200, 140], "anchor": [600, 0]}})
        w = word("دُب", font)
        assert measure_gap(w, 2, Placement.ABOVE, font).width == 0

    def test_below_side_independent(self):
        font = synth_font()
        w = word("دِب", font)  # kasra below on dal
        assert measure_gap(w, 2, Placement.ABOVE, font).width == 340
        assert measure_gap(w, 2, Placement.BELOW, font).width == 340


class TestPlaceDiacritics:
    def test_single_damma_pure_anchor_arithmetic(self):
        font = synth_font(
            anchor_above=(120, 400),
            mark_overrides={"damma": {"anchor": [30, 0]}},
        )
        w = word("بُ", font)
        marks, diags = place_diacritics(w, font)
        assert len(marks) == 1
        assert marks[0].mark == "damma"
        assert marks[0].variant is SizeVariant.NORMAL
        assert marks[0].offset == (90, 400)
        assert marks[0].owner == 0

    def test_middle_glyph_mark_recenters(self):
        font = synth_font(anchor_above=(120, 400))
        lone = word("بُ", font)
        lone_marks, _ = place_diacritics(lone, font)
        assert lone_marks[0].offset[0] == 120 - 60  # anchor kept on last glyph

        pair = word("بُب", font)
        pair_marks, _ = place_diacritics(pair, font)
        # beh.initial ink [0, 340]: center 170, damma anchor x 60.
        assert pair_marks[0].offset[0] == 170 - 60

    def test_growable_mark_resizes_and_recenters(self):
        font = synth_font(thresholds=(400, 700), letter_extensions={BEH: 400})
        base_word = word("بَا", font)  # beh+fatha, alef

        plain_marks, _ = place_diacritics(base_word, font)
        assert plain_marks[0].variant is SizeVariant.NORMAL  # gap 340 < 400

        stretched = apply_plan(base_word, ElongationPlan({0: 250}, 0), font)
        marks, _ = place_diacritics(stretched, font)
        assert marks[0].variant is SizeVariant.MEDIUM  # gap 590
        # Recentered at the midpoint of the extended ink span.
        assert marks[0].offset == ((340 + 250) // 2 - 100, 380)

        wide = apply_plan(base_word, ElongationPlan({0: 400}, 0), font)
        marks, _ = place_diacritics(wide, font)
        assert marks[0].variant is SizeVariant.LARGE  # gap 740

    def test_final_phase_uses_mass_variant(self):
        font = synth_font(mass_variants={"medium": "large"})
        w = word("بَ", font)  # all synth glyphs are medium mass
        marks, _ = place_diacritics(w, font)
        assert marks[0].variant is SizeVariant.LARGE
        # Anchor point preserved: large anchor x 200 at base anchor 170.
        assert marks[0].offset[0] == 170 - 200

    def test_final_phase_leaves_other_marks_alone(self):
        font = synth_font(mass_variants={"medium": "large"})
        w = word("بُ", font)
        marks, _ = place_diacritics(w, font)
        assert marks[0].variant is SizeVariant.NORMAL

    def test_mass_position_table_shifts_default_y(self):
        font = synth_font(mass_positions={"medium": {"above": 55, "below": -40}})
        w = word("بُ", font)
        marks, _ = place_diacritics(w, font)
        assert marks[0].offset[1] == 380 + 55
        below = word("بِ", font)
        marks, _ = place_diacritics(below, font)
        assert marks[0].offset[1] == -80 - 40 - 60  # anchor - dy - mark anchor y

    def test_shadda_stack_rides_along(self):
        font = synth_font(thresholds=(400, 700))
        w = word("بَّب", font)  # beh+shadda+fatha, beh
        marks, _ = place_diacritics(w, font)
        shadda, fatha = marks[0], marks[1]
        assert shadda.mark == "shadda" and fatha.mark == "fatha"
        # Shadda centered over ink span [0, 340]; stack keeps alignment.
        assert shadda.offset[0] == 170 - 75
        assert fatha.variant is SizeVariant.NORMAL  # gap 340 below threshold
        assert fatha.offset[0] == shadda.offset[0] + 75 - 50
        assert fatha.offset[1] == shadda.offset[1] + 150

    def test_stacked_growable_mark_resizes_on_stack(self):
        font = synth_font()  # thresholds (200, 450): gap 340 selects medium
        w = word("بَّب", font)
        marks, _ = place_diacritics(w, font)
        shadda, fatha = marks[0], marks[1]
        assert fatha.variant is SizeVariant.MEDIUM
        # Rides the centered shadda through the stack anchor, medium anchor 100.
        assert fatha.offset[0] == shadda.offset[0] + 75 - 100

    def test_ligature_marks_keep_component_anchor(self, demo_font):
        w = word("لَاب", demo_font)  # lam+fatha+alef then beh
        marks, _ = place_diacritics(w, demo_font)
        entry = demo_font.ligature_by_glyph["lam_alef.isol"]
        anchor_x = entry.component_anchors[0][Placement.ABOVE].x
        fatha = marks[0]
        # Gap over the ligature ink (300 wide) selects the medium variant;
        # the anchor point stays on the component.
        assert fatha.variant is SizeVariant.MEDIUM
        medium = demo_font.marks["fatha.medium"]
        assert fatha.offset[0] == anchor_x - medium.anchor.x

    def test_idempotent_on_corpus(self, demo_font, corpus_words):
        rng = random.Random(4)
        for w in corpus_words:
            sites = kashida.enumerate_sites(w, demo_font)
            if sites and rng.random() < 0.5:
                site = rng.choice(sites)
                plan = ElongationPlan({site.glyph_index: rng.randint(1, site.capacity)}, 0)
                w = apply_plan(w, plan, demo_font)
            first, _ = place_diacritics(w, demo_font)
            replayed, _ = place_diacritics(with_marks(w, first, demo_font), demo_font)
            assert replayed == first

    def test_monotone_in_elongation(self):
        font = synth_font(thresholds=(400, 700), letter_extensions={BEH: 600})
        base_word = word("بَا", font)
        ranks = []
        for e in range(0, 601, 60):
            stretched = apply_plan(base_word, ElongationPlan({0: e} if e else {}, 0), font)
            marks, _ = place_diacritics(stretched, font)
            ranks.append(variant_rank(marks[0].variant))
        assert ranks == sorted(ranks)

    def test_only_growable_marks_resized(self, demo_font, corpus_words):
        for w in corpus_words:
            marks, _ = place_diacritics(w, demo_font)
            for m in marks:
                if m.variant is not SizeVariant.NORMAL:
                    cp = {v: k for k, v in demo_font.mark_cmap.items()}[m.mark]
                    assert cp in (0x064B, 0x064E)

    def test_marks_never_cross_baseline_side(self, demo_font, corpus_words):
        for w in corpus_words:
            marks, _ = place_diacritics(w, demo_font)
            for m in marks:
                mark = demo_font.marks[m.mark]
                glyph_id = demo_font.variant_glyph(m.mark, m.variant)
                ink = demo_font.marks[glyph_id].ink
                if mark.attachment_class is Placement.ABOVE:
                    assert m.offset[1] + ink.y_min >= 0
                else:
                    assert m.offset[1] + ink.y_max <= 0

    def test_resized_vowel_pushes_next_glyph_mark(self):
        # An oversized large variant spills over the neighbour's damma, so
        # the damma must give way by overlap + clearance.
        font = synth_font(
            letter_extensions={BEH: 400},
            mark_overrides={"fatha.large": {"ink": [0, 0, 900, 80], "anchor": [450, 0]}},
        )
        w = word("بَبُ", font)  # beh+fatha, beh+damma
        stretched = apply_plan(w, ElongationPlan({0: 200}, 0), font)
        marks, diags = place_diacritics(stretched, font)
        assert diags == []
        fatha, damma = marks
        assert fatha.variant is SizeVariant.LARGE  # gap 540 over threshold 450
        # Large fatha centered at (0+340+200)//2 = 270 spans [-180, 720];
        # the damma sits at offset 650 (ink [650, 770]), overlapped by 70.
        assert fatha.offset[0] == 270 - 450
        assert damma.offset[0] == 650 + 70 + 10

    def test_space_available_annotation(self, demo_font):
        w = word("س", demo_font)  # bare seen: 560 free units above
        _, diags = place_diacritics(w, demo_font)
        assert any(d.code == "space-available" for d in diags)

    def test_no_annotation_when_marked(self, demo_font):
        w = word("سَ", demo_font)
        _, diags = place_diacritics(w, demo_font)
        assert not any(d.code == "space-available" for d in diags)


def _mark_entries(w):
    return [i for i, g in enumerate(w.glyphs) if g.is_mark]


class TestResolveCollisions:
    def build(self, font, text):
        return word(text, font)

    def manual_marks(self, w, offsets):
        marks = []
        for (idx, offset), owner in zip(
            zip(_mark_entries(w), offsets), [0, 2]
        ):
            marks.append(
                PlacedMark(
                    mark=w.glyphs[idx].glyph,
                    variant=SizeVariant.NORMAL,
                    offset=offset,
                    owner=owner,
                    glyph_index=idx,
                )
            )
        return marks

    def test_disjoint_marks_unchanged(self):
        font = synth_font()
        w = self.build(font, "بَبَ")
        marks = self.manual_marks(w, [(0, 380), (400, 380)])
        resolved, diags = resolve_collisions(marks, w, font)
        assert resolved == marks and diags == []

    def test_overlap_shifts_later_mark(self):
        font = synth_font()
        w = self.build(font, "بَبَ")
        # fatha ink is 100 wide: [0,100] and [80,180] overlap by 20.
        marks = self.manual_marks(w, [(0, 380), (80, 380)])
        resolved, diags = resolve_collisions(marks, w, font, gap_epsilon=10)
        assert diags == []
        assert resolved[0].offset == (0, 380)
        assert resolved[1].offset == (80 + 30, 380)

    def test_immovable_later_shifts_earlier_left(self):
        font = synth_font()
        w = self.build(font, "بَبَّ")
        entries = _mark_entries(w)  # fatha, shadda, fatha
        marks = [
            PlacedMark("fatha", SizeVariant.NORMAL, (80, 380), 0, entries[0]),
            PlacedMark("shadda", SizeVariant.NORMAL, (150, 380), 2, entries[1]),
            PlacedMark("fatha", SizeVariant.NORMAL, (150, 530), 2, entries[2]),
        ]
        resolved, diags = resolve_collisions(marks, w, font, gap_epsilon=10)
        assert diags == []
        # Earlier fatha moved left: overlap 180-150=30, shift 40.
        assert resolved[0].offset == (80 - 40, 380)
        assert resolved[1].offset == (150, 380)  # shadda pinned

    def test_two_pinned_stacks_report_unresolvable(self):
        font = synth_font()
        w = self.build(font, "بَّبَّ")
        entries = _mark_entries(w)
        marks = [
            PlacedMark("shadda", SizeVariant.NORMAL, (100, 380), 0, entries[0]),
            PlacedMark("fatha", SizeVariant.NORMAL, (100, 530), 0, entries[1]),
            PlacedMark("shadda", SizeVariant.NORMAL, (180, 380), 3, entries[2]),
            PlacedMark("fatha", SizeVariant.NORMAL, (180, 530), 3, entries[3]),
        ]
        resolved, diags = resolve_collisions(marks, w, font)
        assert [d.code for d in diags] == ["unresolvable-overlap"]
        assert resolved == marks

    def test_shift_beyond_owner_span_reports(self):
        font = synth_font()
        w = self.build(font, "بَبَ")
        # Demand a shift larger than the owner ink span (340).
        marks = self.manual_marks(w, [(0, 380), (-340, 380)])
        resolved, diags = resolve_collisions(marks, w, font)
        assert [d.code for d in diags] == ["unresolvable-overlap"]
        assert resolved == marks

    def test_no_overlaps_remain_on_corpus(self, demo_font, corpus_words):
        for w in corpus_words:
            marks, diags = place_diacritics(w, demo_font)
            reported = {d.code for d in diags}
            by_side = {}
            for m in marks:
                side = demo_font.marks[m.mark].attachment_class
                glyph_id = demo_font.variant_glyph(m.mark, m.variant)
                ink = demo_font.marks[glyph_id].ink
                lo, hi = m.offset[0] + ink.x_min, m.offset[0] + ink.x_max
                root = m.glyph_index
                while w.glyphs[root].attached_to is not None and w.glyphs[
                    w.glyphs[root].attached_to[0]
                ].is_mark:
                    root = w.glyphs[root].attached_to[0]
                by_side.setdefault(side, []).append((lo, hi, root))
            overlap_found = False
            for intervals in by_side.values():
                units = {}
                for lo, hi, root in intervals:
                    units.setdefault(root, []).append((lo, hi))
                merged = [
                    (min(l for l, _ in spans), max(h for _, h in spans))
                    for _, spans in sorted(units.items())
                ]
                for (a_lo, a_hi), (b_lo, b_hi) in zip(merged, merged[1:]):
                    if min(a_hi, b_hi) - max(a_lo, b_lo) > 0:
                        overlap_found = True
            assert not overlap_found or "unresolvable-overlap" in reported
