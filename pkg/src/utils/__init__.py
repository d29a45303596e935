from utils.hash_util import generate_stream_hash

__all__ = [
    "generate_stream_hash",
]
