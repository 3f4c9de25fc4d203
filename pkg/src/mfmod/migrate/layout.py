"""Fixed-width record layouts derived from copybook-style data fragments."""

from __future__ import annotations

from dataclasses import dataclass

from mfmod.frontend.nodes import DataItem
from mfmod.frontend.parser import parse_data_fragment
from mfmod.frontend.picture import PictureSpec
from mfmod.frontend.source import SourceUnit


class LayoutError(ValueError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    name: str
    picture: PictureSpec
    offset: int
    width: int

    @property
    def end(self) -> int:
        return self.offset + self.width


@dataclass(frozen=True)
class RecordLayout:
    fields: tuple[FieldSpec, ...]
    record_width: int
    key_field: str | None = None

    def __post_init__(self):
        if not self.fields:
            raise LayoutError("layout has no fields")
        pos = 0
        names = set()
        for f in self.fields:
            if f.offset != pos or f.width != f.picture.record_width or f.width < 1:
                raise LayoutError(f"field {f.name} does not tile the record at offset {pos}")
            if f.name in names:
                raise LayoutError(f"duplicate field {f.name}")
            names.add(f.name)
            pos = f.end
        if pos != self.record_width:
            raise LayoutError(f"fields cover {pos} bytes, record width is {self.record_width}")
        if self.key_field is not None and self.key_field not in names:
            raise LayoutError(f"key field {self.key_field} is not in the layout")

    def field(self, name: str) -> FieldSpec:
        for f in self.fields:
            if f.name == name:
                return f
        raise KeyError(name)

    @property
    def names(self) -> list[str]:
        return [f.name for f in self.fields]


def layout_from_items(items: list[DataItem], key_field: str | None = None) -> RecordLayout:
    """Lay elementary items end to end in declaration order."""
    fields = []
    offset = 0
    for item in items:
        width = item.picture.record_width
        fields.append(FieldSpec(item.name, item.picture, offset, width))
        offset += width
    if key_field is not None:
        key_field = key_field.upper()
    return RecordLayout(tuple(fields), offset, key_field)


def load_layout(text: str, path: str = "<layout>", key_field: str | None = None) -> RecordLayout:
    """Parse a layout fragment; raises FrontendError on bad syntax."""
    items = parse_data_fragment(SourceUnit(path, text))
    return layout_from_items(items, key_field)
