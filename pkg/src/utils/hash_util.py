import hashlib
from collections.abc import Iterable


def generate_stream_hash(lines: Iterable[str]) -> str:
    """sha256 over newline-terminated lines, matching what the CLI writes to stdout."""
    digest = hashlib.sha256()
    for line in lines:
        digest.update(line.encode())
        digest.update(b"\n")
    return digest.hexdigest()
