from typing import Dict, Iterable, List, Type

from schemes.base import BaseScheme, SchemeContext, SchemeResult
from schemes.ca3d import Ca3dScheme
from schemes.fixed import FixedScheme
from schemes.greedy import GreedyScheme
from schemes.random_scheme import RandomScheme
from utils.errors import ConfigError

SCHEMES: Dict[str, Type[BaseScheme]] = {
    "ca3d": Ca3dScheme,
    "random": RandomScheme,
    "fixed": FixedScheme,
    "greedy": GreedyScheme,
}


def build_schemes(names: Iterable[str]) -> List[BaseScheme]:
    unknown = [n for n in names if n not in SCHEMES]
    if unknown:
        raise ConfigError(f"Unknown schemes {unknown}; choose from {sorted(SCHEMES)}")
    return [SCHEMES[n](n) for n in names]


__all__ = ["BaseScheme", "SchemeContext", "SchemeResult", "SCHEMES", "build_schemes"]
