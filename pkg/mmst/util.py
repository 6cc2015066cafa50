import json
import re
from fractions import Fraction
from itertools import chain, combinations
from typing import Iterable, Dict

RATIONAL = re.compile(r'\d+(/\d+)?', re.ASCII)


def json_load(path: str):
    """ load json object

    @param path: path to load
    @return: object
    """
    with open(path, 'r') as f:
        return json.load(f)


def json_save(obj, path: str):
    """ save as canonical json object (sorted keys, fixed indent)

    @param obj: object
    @param path: path to save
    """
    with open(path, 'w') as f:
        f.write(canonical_json(obj))


def canonical_json(obj) -> str:
    """ serialize with sorted keys so that equal objects give byte-identical text """
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + '\n'


def parse_rational(value) -> Fraction:
    """ parse an integer or a "p/q" string into an exact rational

    @param value: int or str
    @return: Fraction
    """
    if isinstance(value, bool) or not isinstance(value, (int, str)) or \
            (isinstance(value, str) and not RATIONAL.fullmatch(value)):
        raise ValueError(f'expected integer or "p/q" string, got {value!r}')
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    """ "p/q" (or "p" when integral) """
    return str(Fraction(value))


def powerset(iterable: Iterable, min_size: int = 0):
    """ all subsets as tuples, by increasing size then lexicographically """
    s = list(iterable)
    return chain.from_iterable(combinations(s, r) for r in range(min_size, len(s) + 1))


def vector_sum(x: Dict, keys: Iterable) -> Fraction:
    """ x(keys) """
    return sum((x[k] for k in keys), Fraction(0))
