"""File-format versioning shared by every artifact this package writes."""

FORMAT_VERSION = "1.0"


class SchemaError(Exception):
    """A record is missing a required field or has the wrong shape."""


def check_format_version(value: str, what: str) -> None:
    """Reject unknown major versions; minor drift is tolerated."""
    if not isinstance(value, str) or "." not in value:
        raise SchemaError(f"{what}: bad format_version {value!r}")
    major = value.split(".", 1)[0]
    if major != FORMAT_VERSION.split(".", 1)[0]:
        raise SchemaError(f"{what}: unsupported format_version {value!r} (expected major {FORMAT_VERSION.split('.', 1)[0]})")
