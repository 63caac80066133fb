"""Character-level model of Arabic text.

Classifies code points into letters, combining marks, the explicit
elongation character (U+0640), and spaces; groups a letter with its marks
into clusters; and computes the contextual joining form of every letter in
a word (isolated, initial, medial, final).

Joining follows the usual two-sided rule: a dual-joining letter connects
to both neighbours, a right-joining letter connects only to the letter
before it in logical order, and a non-joining letter connects to nothing.
A letter is rendered medial only when both neighbours join toward it.

The built-in table covers U+0621..U+0652 (the classical letter repertoire
plus the eight standard marks). Extension letters for other languages can
be registered by loading a property table from JSON (schema qalam-chars/1,
see docs/font-format.md).
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import (
    DuplicateMark,
    EmptyWord,
    LeadingMark,
    ParseError,
    SchemaError,
    UnsupportedCharacter,
)

TATWEEL_CP = 0x0640
SPACE_CP = 0x0020
FATHATAN_CP = 0x064B
FATHA_CP = 0x064E
SHADDA_CP = 0x0651

#: Code points whose marks may grow to fill space.
ELONGATABLE_MARKS = frozenset({FATHA_CP, FATHATAN_CP})


class CharClass(enum.Enum):
    LETTER = "letter"
    DIACRITIC = "diacritic"
    TATWEEL = "tatweel"
    SPACE = "space"
    OTHER = "other"


class JoiningClass(enum.Enum):
    DUAL = "dual"
    RIGHT = "right"
    NONE = "none"


class DotPosition(enum.Enum):
    ABOVE = "above"
    BELOW = "below"
    NONE = "none"


class Placement(enum.Enum):
    ABOVE = "above"
    BELOW = "below"
    THROUGH = "through"


class MarkCategory(enum.Enum):
    LANGUAGE = "language"
    AESTHETIC = "aesthetic"
    EXPLANATORY = "explanatory"


class MassClass(enum.Enum):
    LIGHT = "light"
    MEDIUM = "medium"
    HEAVY = "heavy"


class Form(enum.Enum):
    ISOLATED = "isolated"
    INITIAL = "initial"
    MEDIAL = "medial"
    FINAL = "final"


@dataclass(frozen=True, slots=True)
class LetterRecord:
    """Linguistic and typographic properties of one base letter."""

    code_point: int
    name: str
    joining_class: JoiningClass
    dot_count: int
    dot_position: DotPosition
    skeleton_family: str
    stretch_class: int
    default_mass_class: MassClass

    def __post_init__(self) -> None:
        if (self.dot_count == 0) != (self.dot_position is DotPosition.NONE):
            raise ValueError(
                f"{self.name}: dot_count {self.dot_count} inconsistent with "
                f"dot_position {self.dot_position.value}"
            )
        if self.stretch_class < 0:
            raise ValueError(f"{self.name}: stretch_class must be >= 0")


@dataclass(frozen=True, slots=True)
class DiacriticRecord:
    """Properties of one combining mark."""

    code_point: int
    name: str
    placement: Placement
    category: MarkCategory

    @property
    def elongatable(self) -> bool:
        return self.code_point in ELONGATABLE_MARKS


@dataclass(frozen=True, slots=True)
class Cluster:
    """A base letter plus the marks that ride on it, in input order.

    ``stretch_hint`` counts explicit elongation characters typed after the
    letter; the elongation planner may honour or ignore the hint.
    """

    base: LetterRecord
    marks: tuple[DiacriticRecord, ...] = ()
    stretch_hint: int = 0

    def __post_init__(self) -> None:
        seen: set[int] = set()
        vowel_slots = 0
        for mark in self.marks:
            if mark.code_point in seen:
                raise DuplicateMark(
                    f"mark {mark.name} repeated on letter {self.base.name}"
                )
            seen.add(mark.code_point)
            if mark.category is MarkCategory.LANGUAGE and mark.code_point != SHADDA_CP:
                vowel_slots += 1
        if vowel_slots > 1:
            raise DuplicateMark(
                f"letter {self.base.name} carries {vowel_slots} vowel marks"
            )


# One row per letter: code point, name, joining, dots, dot side, skeleton
# family (letters sharing a family differ only in their dot pattern),
# stretch class (0 = never elongated), default mass class.
_LETTER_ROWS = [
    (0x0621, "hamza", "none", 0, "none", "hamza", 0, "light"),
    (0x0622, "alef_madda", "right", 0, "none", "alef_madda", 0, "medium"),
    (0x0623, "alef_hamza_above", "right", 0, "none", "alef_hamza_above", 0, "medium"),
    (0x0624, "waw_hamza_above", "right", 0, "none", "waw_hamza_above", 0, "medium"),
    (0x0625, "alef_hamza_below", "right", 0, "none", "alef_hamza_below", 0, "medium"),
    (0x0626, "yeh_hamza_above", "dual", 0, "none", "yeh_hamza_above", 2, "light"),
    (0x0627, "alef", "right", 0, "none", "alef", 0, "medium"),
    (0x0628, "beh", "dual", 1, "below", "beh", 2, "light"),
    (0x0629, "teh_marbuta", "right", 2, "above", "teh_marbuta", 0, "medium"),
    (0x062A, "teh", "dual", 2, "above", "beh", 2, "light"),
    (0x062B, "theh", "dual", 3, "above", "beh", 2, "light"),
    (0x062C, "jeem", "dual", 1, "below", "hah", 1, "medium"),
    (0x062D, "hah", "dual", 0, "none", "hah", 1, "medium"),
    (0x062E, "khah", "dual", 1, "above", "hah", 1, "medium"),
    (0x062F, "dal", "right", 0, "none", "dal", 0, "medium"),
    (0x0630, "thal", "right", 1, "above", "dal", 0, "medium"),
    (0x0631, "reh", "right", 0, "none", "reh", 0, "medium"),
    (0x0632, "zain", "right", 1, "above", "reh", 0, "medium"),
    (0x0633, "seen", "dual", 0, "none", "seen", 3, "heavy"),
    (0x0634, "sheen", "dual", 3, "above", "seen", 3, "heavy"),
    (0x0635, "sad", "dual", 0, "none", "sad", 3, "heavy"),
    (0x0636, "dad", "dual", 1, "above", "sad", 3, "heavy"),
    (0x0637, "tah", "dual", 0, "none", "tah", 1, "heavy"),
    (0x0638, "zah", "dual", 1, "above", "tah", 1, "heavy"),
    (0x0639, "ain", "dual", 0, "none", "ain", 1, "medium"),
    (0x063A, "ghain", "dual", 1, "above", "ain", 1, "medium"),
    (0x0641, "feh", "dual", 1, "above", "feh", 2, "light"),
    (0x0642, "qaf", "dual", 2, "above", "qaf", 2, "medium"),
    (0x0643, "kaf", "dual", 0, "none", "kaf", 2, "heavy"),
    (0x0644, "lam", "dual", 0, "none", "lam", 1, "heavy"),
    (0x0645, "meem", "dual", 0, "none", "meem", 1, "medium"),
    (0x0646, "noon", "dual", 1, "above", "noon", 2, "light"),
    (0x0647, "heh", "dual", 0, "none", "heh", 1, "medium"),
    (0x0648, "waw", "right", 0, "none", "waw", 0, "medium"),
    (0x0649, "alef_maksura", "dual", 0, "none", "yeh", 2, "light"),
    (0x064A, "yeh", "dual", 2, "below", "yeh", 2, "light"),
]

_DIACRITIC_ROWS = [
    (0x064B, "fathatan", "above", "language"),
    (0x064C, "dammatan", "above", "language"),
    (0x064D, "kasratan", "below", "language"),
    (0x064E, "fatha", "above", "language"),
    (0x064F, "damma", "above", "language"),
    (0x0650, "kasra", "below", "language"),
    (0x0651, "shadda", "above", "language"),
    (0x0652, "sukun", "above", "language"),
]


class CharacterTable:
    """Registry of letters and marks the engine understands."""

    def __init__(
        self,
        letters: Iterable[LetterRecord],
        diacritics: Iterable[DiacriticRecord],
    ):
        self.letters: dict[int, LetterRecord] = {r.code_point: r for r in letters}
        self.diacritics: dict[int, DiacriticRecord] = {
            r.code_point: r for r in diacritics
        }
        overlap = self.letters.keys() & self.diacritics.keys()
        if overlap:
            raise ValueError(f"code points registered twice: {sorted(overlap)}")

    def classify(self, cp: int) -> CharClass:
        if cp in self.letters:
            return CharClass.LETTER
        if cp in self.diacritics:
            return CharClass.DIACRITIC
        if cp == TATWEEL_CP:
            return CharClass.TATWEEL
        if cp == SPACE_CP:
            return CharClass.SPACE
        return CharClass.OTHER

    def letter(self, cp: int) -> LetterRecord:
        return self.letters[cp]

    def diacritic(self, cp: int) -> DiacriticRecord:
        return self.diacritics[cp]

    @classmethod
    def from_json(cls, text: str) -> "CharacterTable":
        """Load a property table (schema qalam-chars/1) from JSON text."""
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"character table is not valid JSON: {exc}") from exc
        if not isinstance(doc, dict) or doc.get("schema") != "qalam-chars/1":
            raise SchemaError("character table must declare schema qalam-chars/1")
        letter_rows = doc.get("letters", [])
        diacritic_rows = doc.get("diacritics", [])
        if not isinstance(letter_rows, list) or not isinstance(diacritic_rows, list):
            raise SchemaError("letters and diacritics must be arrays")
        letters = []
        for row in letter_rows:
            if not isinstance(row, dict):
                raise SchemaError(f"bad letter row {row!r}")
            try:
                name = row["name"]
                family = row["family"]
                if not isinstance(name, str) or not isinstance(family, str):
                    raise ValueError("name and family must be strings")
                letters.append(
                    LetterRecord(
                        code_point=int(row["code_point"], 16),
                        name=name,
                        joining_class=JoiningClass(row["joining"]),
                        dot_count=int(row.get("dots", 0)),
                        dot_position=DotPosition(row.get("dot_position", "none")),
                        skeleton_family=family,
                        stretch_class=int(row.get("stretch_class", 0)),
                        default_mass_class=MassClass(row.get("mass", "medium")),
                    )
                )
            except (KeyError, ValueError, TypeError) as exc:
                raise SchemaError(f"bad letter row {row!r}: {exc}") from exc
        diacritics = []
        for row in diacritic_rows:
            if not isinstance(row, dict):
                raise SchemaError(f"bad diacritic row {row!r}")
            try:
                name = row["name"]
                if not isinstance(name, str):
                    raise ValueError("name must be a string")
                diacritics.append(
                    DiacriticRecord(
                        code_point=int(row["code_point"], 16),
                        name=name,
                        placement=Placement(row["placement"]),
                        category=MarkCategory(row.get("category", "language")),
                    )
                )
            except (KeyError, ValueError, TypeError) as exc:
                raise SchemaError(f"bad diacritic row {row!r}: {exc}") from exc
        try:
            return cls(letters, diacritics)
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc


def _default_table() -> CharacterTable:
    letters = [
        LetterRecord(
            code_point=cp,
            name=name,
            joining_class=JoiningClass(joining),
            dot_count=dots,
            dot_position=DotPosition(dot_pos),
            skeleton_family=family,
            stretch_class=stretch,
            default_mass_class=MassClass(mass),
        )
        for cp, name, joining, dots, dot_pos, family, stretch, mass in _LETTER_ROWS
    ]
    diacritics = [
        DiacriticRecord(
            code_point=cp,
            name=name,
            placement=Placement(placement),
            category=MarkCategory(category),
        )
        for cp, name, placement, category in _DIACRITIC_ROWS
    ]
    return CharacterTable(letters, diacritics)


DEFAULT_TABLE = _default_table()


def classify_codepoint(cp: int, table: CharacterTable | None = None) -> CharClass:
    """Classify any code point; total, never raises."""
    return (table or DEFAULT_TABLE).classify(cp)


def decompose(
    text: str | Iterable[int], table: CharacterTable | None = None
) -> list[list[Cluster]]:
    """Group a code point sequence into words of clusters.

    Every letter opens a cluster, following marks attach to it, an
    elongation character records a stretch hint on the open cluster, and
    spaces close the current word. Runs of spaces and leading or trailing
    spaces produce no empty words.

    Raises LeadingMark when a mark or elongation character has no letter
    before it, DuplicateMark on conflicting vowel marks, and
    UnsupportedCharacter on anything outside the registered repertoire.
    """
    tbl = table or DEFAULT_TABLE
    cps = [ord(c) for c in text] if isinstance(text, str) else list(text)

    words: list[list[Cluster]] = []
    word: list[Cluster] = []
    base: LetterRecord | None = None
    marks: list[DiacriticRecord] = []
    hint = 0

    def close_cluster() -> None:
        nonlocal base, marks, hint
        if base is not None:
            word.append(Cluster(base=base, marks=tuple(marks), stretch_hint=hint))
        base, marks, hint = None, [], 0

    def close_word() -> None:
        nonlocal word
        close_cluster()
        if word:
            words.append(word)
        word = []

    for pos, cp in enumerate(cps):
        cls = tbl.classify(cp)
        if cls is CharClass.LETTER:
            close_cluster()
            base = tbl.letter(cp)
        elif cls is CharClass.DIACRITIC:
            if base is None:
                raise LeadingMark(f"mark U+{cp:04X} at position {pos} has no base letter")
            marks.append(tbl.diacritic(cp))
        elif cls is CharClass.TATWEEL:
            if base is None:
                raise LeadingMark(
                    f"elongation character at position {pos} has no base letter"
                )
            hint += 1
        elif cls is CharClass.SPACE:
            close_word()
        else:
            raise UnsupportedCharacter(f"U+{cp:04X} at position {pos}")
    close_word()
    return words


def flatten(words: Sequence[Sequence[Cluster]]) -> list[int]:
    """Inverse of decompose: emit code points, single spaces between words."""
    out: list[int] = []
    for wi, word in enumerate(words):
        if wi:
            out.append(SPACE_CP)
        for cluster in word:
            out.append(cluster.base.code_point)
            out.extend(m.code_point for m in cluster.marks)
            out.extend([TATWEEL_CP] * cluster.stretch_hint)
    return out


def _joins_forward(letter: LetterRecord) -> bool:
    return letter.joining_class is JoiningClass.DUAL


def _joins_backward(letter: LetterRecord) -> bool:
    return letter.joining_class in (JoiningClass.DUAL, JoiningClass.RIGHT)


def analyze_joining(letters: Sequence[LetterRecord]) -> list[Form]:
    """Assign isolated/initial/medial/final forms within one word."""
    if not letters:
        raise EmptyWord("cannot analyze joining of an empty word")
    n = len(letters)
    forms: list[Form] = []
    for i, letter in enumerate(letters):
        joins_prev = i > 0 and _joins_forward(letters[i - 1]) and _joins_backward(letter)
        joins_next = i < n - 1 and _joins_forward(letter) and _joins_backward(letters[i + 1])
        if joins_prev and joins_next:
            forms.append(Form.MEDIAL)
        elif joins_prev:
            forms.append(Form.FINAL)
        elif joins_next:
            forms.append(Form.INITIAL)
        else:
            forms.append(Form.ISOLATED)
    return forms


def valid_forms(letter: LetterRecord) -> tuple[Form, ...]:
    """The joining forms a letter can take given its joining class."""
    if letter.joining_class is JoiningClass.DUAL:
        return (Form.ISOLATED, Form.INITIAL, Form.MEDIAL, Form.FINAL)
    if letter.joining_class is JoiningClass.RIGHT:
        return (Form.ISOLATED, Form.FINAL)
    return (Form.ISOLATED,)
