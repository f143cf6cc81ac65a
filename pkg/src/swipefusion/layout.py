"""Keyboard layouts: key geometry, JSON persistence and key adjacency."""
from __future__ import annotations

import json
import string
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

LETTERS = string.ascii_lowercase
ALPHABET = LETTERS + "'"
DEFAULT_ADJACENCY_RADIUS = 1.2


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class Key:
    label: str
    cx: float
    cy: float
    w: float = 1.0
    h: float = 1.0

    def __post_init__(self):
        if len(self.label) != 1 or self.label not in ALPHABET:
            raise LayoutError(f"invalid key label {self.label!r}")
        if not (self.w > 0 and self.h > 0):
            raise LayoutError(f"key {self.label!r} must have positive size")

    @property
    def center(self) -> tuple[float, float]:
        return (self.cx, self.cy)


class KeyboardLayout:
    """An immutable set of keys with a bounding box over the letter region."""

    def __init__(self, keys, name: str = "layout"):
        self.name = name
        self.keys: tuple[Key, ...] = tuple(keys)
        labels = [k.label for k in self.keys]
        if len(set(labels)) != len(labels):
            raise LayoutError("duplicate key labels")
        missing = set(LETTERS) - set(labels)
        if missing:
            raise LayoutError(f"layout is missing letters: {''.join(sorted(missing))}")
        self._by_label = {k.label: k for k in self.keys}
        letters = [self._by_label[c] for c in LETTERS]
        self.bounds = (
            min(k.cx - k.w / 2 for k in letters),
            min(k.cy - k.h / 2 for k in letters),
            max(k.cx + k.w / 2 for k in letters),
            max(k.cy + k.h / 2 for k in letters),
        )
        self._check_overlap()

    def _check_overlap(self):
        ks = self.keys
        for i in range(len(ks)):
            for j in range(i + 1, len(ks)):
                a, b = ks[i], ks[j]
                ox = (a.w + b.w) / 2 - abs(a.cx - b.cx)
                oy = (a.h + b.h) / 2 - abs(a.cy - b.cy)
                if ox > 1e-9 and oy > 1e-9:
                    raise LayoutError(f"keys {a.label!r} and {b.label!r} overlap")

    def __contains__(self, label):
        return label in self._by_label

    def __getitem__(self, label) -> Key:
        try:
            return self._by_label[label]
        except KeyError:
            raise LayoutError(f"no key for character {label!r}") from None

    @property
    def labels(self) -> list[str]:
        return [k.label for k in self.keys]

    def center(self, label) -> np.ndarray:
        k = self[label]
        return np.array([k.cx, k.cy])

    def centers(self, labels=LETTERS) -> np.ndarray:
        return np.array([[self[c].cx, self[c].cy] for c in labels], dtype=float)

    @property
    def key_size(self) -> float:
        """Largest key dimension in the letter region."""
        return max(max(self[c].w, self[c].h) for c in LETTERS)

    @property
    def key_width(self) -> float:
        return float(np.median([self[c].w for c in LETTERS]))

    @property
    def key_height(self) -> float:
        return float(np.median([self[c].h for c in LETTERS]))

    def to_dict(self):
        return {
            "name": self.name,
            "keys": [{"label": k.label, "cx": k.cx, "cy": k.cy, "w": k.w, "h": k.h} for k in self.keys],
        }

    @classmethod
    def from_dict(cls, d):
        try:
            keys = [Key(k["label"], float(k["cx"]), float(k["cy"]), float(k.get("w", 1.0)), float(k.get("h", 1.0)))
                    for k in d["keys"]]
        except (KeyError, TypeError) as e:
            raise LayoutError(f"malformed layout: {e}") from None
        return cls(keys, name=d.get("name", "layout"))

    def __repr__(self):
        return f"KeyboardLayout({self.name!r}, {len(self.keys)} keys)"


def load_layout(path) -> KeyboardLayout:
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise LayoutError(f"{path}:{e.lineno}: invalid JSON ({e.msg})") from None
    return KeyboardLayout.from_dict(data)


def save_layout(layout: KeyboardLayout, path):
    Path(path).write_text(json.dumps(layout.to_dict(), indent=1) + "\n")


def _packaged(name):
    return resources.files("swipefusion") / "data" / name


def default_layout() -> KeyboardLayout:
    """Canonical QWERTY geometry in key-width units."""
    with resources.as_file(_packaged("qwerty.json")) as p:
        return load_layout(p)


def mobile_layout() -> KeyboardLayout:
    """A phone-style layout with taller keys, a different bottom-row shift and an apostrophe key."""
    with resources.as_file(_packaged("mobile.json")) as p:
        return load_layout(p)


def qwerty(row_offsets=(0.0, 0.5, 1.5), key_w=1.0, key_h=1.0, gap=0.0, apostrophe=False, name="qwerty"):
    """Build a staggered QWERTY layout. Offsets are in key widths."""
    rows = ["qwertyuiop", "asdfghjkl", "zxcvbnm" + ("'" if apostrophe else "")]
    pitch_x, pitch_y = key_w + gap, key_h + gap
    keys = []
    for r, (row, off) in enumerate(zip(rows, row_offsets)):
        for c, label in enumerate(row):
            keys.append(Key(label, (off + c) * pitch_x + key_w / 2, r * pitch_y + key_h / 2, key_w, key_h))
    return KeyboardLayout(keys, name=name)


def adjacency(layout: KeyboardLayout, radius: float = DEFAULT_ADJACENCY_RADIUS) -> frozenset:
    """Unordered adjacent label pairs: centers within ``radius`` times the larger key dimension."""
    pairs = set()
    ks = layout.keys
    for i in range(len(ks)):
        for j in range(i + 1, len(ks)):
            a, b = ks[i], ks[j]
            limit = radius * max(a.w, a.h, b.w, b.h)
            if np.hypot(a.cx - b.cx, a.cy - b.cy) <= limit + 1e-12:
                pairs.add(frozenset((a.label, b.label)))
    return frozenset(pairs)


def is_adjacent(adj: frozenset, a: str, b: str) -> bool:
    return a != b and frozenset((a, b)) in adj
