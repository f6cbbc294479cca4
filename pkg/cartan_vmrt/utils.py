"""
Miscellaneous utilities for parsing and rendering
"""
import json
import logging
import os
import re
from collections import OrderedDict
from functools import lru_cache

import yaml
from sympy import Rational
from typing import List, Optional, Sequence, Tuple

from cartan_vmrt.exceptions import UsageError

EXPECTED_PATH = os.path.join(os.path.dirname(__file__), 'data', 'expected.yaml')

root_term_re = re.compile(r'\s*([+-]?)\s*(\d*)\s*a(\d+)\s*')
verbosity_levels = {
    0: logging.ERROR,
    1: logging.WARNING,
    2: logging.INFO,
    3: logging.DEBUG,
}


def set_verbosity_logger(logger: logging.Logger, verbosity: int):
    """
    Install a console handler on the logger with a level based on the verbosity.

    :param logger: The logger to configure
    :param verbosity: The verbosity level, 0 is quiet and 3 shows debug messages
    """
    level = verbosity_levels.get(verbosity, logging.DEBUG if verbosity > 3 else logging.ERROR)

    if not any(getattr(handler, 'cartan_vmrt', False) for handler in logger.handlers):
        console = logging.StreamHandler()
        console.setFormatter(logging.Formatter('%(asctime)s [%(levelname)s] %(name)s: %(message)s'))
        console.cartan_vmrt = True
        logger.addHandler(console)

    logger.setLevel(level)


def format_root(coeffs: Sequence[int]) -> str:
    """
    Write a coefficient vector as a sum of simple roots, highest node first.

    :param coeffs: The coefficients over the simple roots
    :return: A string like "a6+2a5+2a4+a3+a2"
    """
    terms = []
    for node in range(len(coeffs), 0, -1):
        coeff = coeffs[node - 1]
        if not coeff:
            continue

        sign = '-' if coeff < 0 else '+'
        size = '' if abs(coeff) == 1 else str(abs(coeff))
        terms.append('{}{}a{}'.format(sign, size, node))

    if not terms:
        return '0'

    out = ''.join(terms)
    return out[1:] if out.startswith('+') else out


def parse_root(expr: str, rank: int) -> Tuple[int, ...]:
    """
    Parse a sum of simple roots into a coefficient vector.

    :param expr: A string like "a6+2a5+2a4+a3+a2"
    :param rank: The rank of the diagram the expression refers to
    :return: The coefficient vector
    """
    expr = expr.strip()
    if expr == '0':
        return (0,) * rank

    coeffs = [0] * rank
    pos = 0
    while pos < len(expr):
        match = root_term_re.match(expr, pos)
        if not match or match.end() == pos or (pos and not match.group(1)):
            raise UsageError("Cannot parse root expression {!r} at position {}, "
                             "expected terms like 2a4".format(expr, pos))

        sign, size, node = match.groups()
        node = int(node)
        if not 1 <= node <= rank:
            raise UsageError("Root expression {!r} refers to node {} "
                             "but the diagram has rank {}".format(expr, node, rank))

        coeffs[node - 1] += (-1 if sign == '-' else 1) * (int(size) if size else 1)
        pos = match.end()

    return tuple(coeffs)


def parse_matrix(text: str) -> List[List[Rational]]:
    """
    Parse a matrix written as rows separated by ";" and entries separated by ",".

    :param text: A string like "1,2;3/2,4"
    :return: The rows of rationals
    """
    rows = []
    for row_text in text.split(';'):
        try:
            rows.append([Rational(entry.strip()) for entry in row_text.split(',')])
        except (TypeError, ValueError, SyntaxError):
            raise UsageError("Cannot parse matrix row {!r}, expected entries like 3/2".format(row_text))

    if len({len(row) for row in rows}) != 1:
        raise UsageError("Matrix {!r} has rows of different lengths".format(text))

    return rows


def render_report(report: dict, as_json: bool = False) -> str:
    """
    Show a report as JSON or as YAML for reading in a terminal.

    :param report: The report, usually an OrderedDict
    :param as_json: Emit JSON instead of YAML
    :return: The rendered text
    """
    report_json = json.dumps(report, indent=2)
    if as_json:
        return report_json

    return yaml.dump(json.loads(report_json, object_pairs_hook=OrderedDict),
                     default_flow_style=False)


@lru_cache(maxsize=None)
def load_expected() -> dict:
    """
    The golden values shipped with the package.

    :return: The parsed data file
    """
    with open(EXPECTED_PATH) as data_file:
        return yaml.safe_load(data_file)


def load_report(text: str) -> Optional[OrderedDict]:
    """
    Read a JSON report back in, keeping the key order.

    :param text: The JSON string
    :return: The report
    """
    if not text:
        return None

    return json.loads(text, object_pairs_hook=OrderedDict)


# Proper representation of OrderedDict
yaml.add_representer(OrderedDict,
                     lambda self, data: self.represent_mapping('tag:yaml.org,2002:map', data.items()))
