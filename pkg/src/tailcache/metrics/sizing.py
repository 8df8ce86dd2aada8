"""KV-cache memory sizing."""

from __future__ import annotations

from pydantic import BaseModel, ConfigDict, Field

from tailcache.exceptions import InvalidArgumentError

GIB = 1024**3


class ModelShape(BaseModel):
    """Attention geometry that determines KV-cache bytes per token."""

    model_config = ConfigDict(frozen=True)

    name: str = Field(..., description="Model name")
    layers: int = Field(..., ge=1)
    kv_heads: int = Field(..., ge=1, description="Key/value heads (fewer with GQA)")
    head_size: int = Field(..., ge=1)
    bytes_per_value: int = Field(default=2, ge=1, description="2 for fp16/bf16, 4 for fp32")

    @property
    def bytes_per_token(self) -> int:
        return kv_bytes_per_token(self.layers, self.kv_heads, self.head_size, self.bytes_per_value)


VICUNA_7B = ModelShape(name="vicuna-7b", layers=32, kv_heads=32, head_size=128, bytes_per_value=2)


def kv_bytes_per_token(layers: int, kv_heads: int, head_size: int, bytes_per_value: int) -> int:
    """2 (keys and values) x layers x heads x head size x value width.

    Example:
        >>> kv_bytes_per_token(32, 32, 128, 2)
        524288
    """
    for argument, value in (
        ("layers", layers),
        ("kv_heads", kv_heads),
        ("head_size", head_size),
        ("bytes_per_value", bytes_per_value),
    ):
        if value < 1:
            raise InvalidArgumentError(f"{argument} must be positive", argument, value)
    return 2 * layers * kv_heads * head_size * bytes_per_value


def kv_cache_bytes(tokens: int, shape: ModelShape = VICUNA_7B) -> int:
    """Bytes needed to cache `tokens` tokens of one model."""
    if tokens < 0:
        raise InvalidArgumentError("token count must be non-negative", "tokens", tokens)
    return tokens * shape.bytes_per_token


def bytes_to_gib(n_bytes: int | float) -> float:
    return n_bytes / GIB


def capacity_blocks_for_memory(
    memory_bytes: int,
    block_size: int,
    shape: ModelShape = VICUNA_7B,
) -> int:
    """Blocks of `block_size` tokens that fit in `memory_bytes`.

    Example:
        >>> capacity_blocks_for_memory(40 * GIB, 16)
        5120
    """
    if block_size < 1:
        raise InvalidArgumentError("block size must be positive", "block_size", block_size)
    if memory_bytes < 0:
        raise InvalidArgumentError("memory must be non-negative", "memory_bytes", memory_bytes)
    return memory_bytes // (block_size * shape.bytes_per_token)
