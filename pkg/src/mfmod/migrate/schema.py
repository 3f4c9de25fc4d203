"""Schema mapping from legacy pictures to target column types."""

from __future__ import annotations

from mfmod.frontend.picture import PictureSpec, parse_picture
from mfmod.migrate.layout import RecordLayout
from mfmod.transform.ir import DecimalType, StringType, Type


def map_picture(pic: PictureSpec | str) -> Type:
    """9(n)V9(m) -> decimal(n+m, m), S9 adds a sign, X(n) -> string(n).

    A picture string outside the subset raises UnsupportedPicture.
    """
    if isinstance(pic, str):
        pic = parse_picture(pic)
    if pic.is_numeric:
        return DecimalType(pic.precision, pic.scale, pic.signed)
    return StringType(pic.width)


def type_text(t: Type) -> str:
    if isinstance(t, StringType):
        return f"string({t.width})"
    return f"decimal({t.precision}, {t.scale}{', signed' if t.signed else ''})"


def map_schema(layout: RecordLayout) -> list[tuple[str, Type]]:
    return [(f.name, map_picture(f.picture)) for f in layout.fields]
