from xindex.provider.base import Provider, ProviderConfig, modal_field
from xindex.provider.cache import CacheEntry, ResponseCache
from xindex.provider.fixture import FixtureProvider, GraphProvider, write_fixture
from xindex.provider.openalex import OpenAlexProvider
from xindex.provider.ratelimit import RateLimiter

__all__ = [
    "CacheEntry",
    "FixtureProvider",
    "GraphProvider",
    "OpenAlexProvider",
    "Provider",
    "ProviderConfig",
    "RateLimiter",
    "ResponseCache",
    "modal_field",
    "write_fixture",
]
