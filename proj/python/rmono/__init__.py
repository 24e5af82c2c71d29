"""Real monodromy of parameterized polynomial systems.

Every stage returns the same JSON document the CLI writes, parsed into a dict.
"""

import json

from ._rmono import NumericalError, ParseError, __version__, builtins, evaluate, print_system
from ._rmono import Session as _Session
from ._rmono import strip_timing as _strip_timing

__all__ = [
    "NumericalError",
    "ParseError",
    "Session",
    "__version__",
    "builtins",
    "cgroup",
    "evaluate",
    "print_system",
    "regions",
    "rstruct",
    "solve",
    "strip_timing",
]


def _csv(values):
    return [] if values is None else list(values)


class Session:
    """Lazily computed pipeline over one configuration; stages run once."""

    def __init__(self, system="ex21", base=None, window=None, res=None, seed=7, tol_real=None,
                 tol_sing=None, tol_match=None, labels="", loops=""):
        if isinstance(res, int):
            res = [res]
        self._s = _Session(str(system), _csv(base), _csv(window), _csv(res), int(seed), tol_real,
                           tol_sing, tol_match, str(labels), str(loops))

    @property
    def system_name(self):
        return self._s.system_name

    @property
    def config(self):
        return json.loads(self._s.config)

    def solve(self):
        return json.loads(self._s.solve_json())

    def cgroup(self):
        return json.loads(self._s.cgroup_json())

    def regions(self):
        return json.loads(self._s.regions_json())

    def rstruct(self):
        return json.loads(self._s.rstruct_json())

    def regions_svg(self):
        return self._s.regions_svg()

    def rstruct_text(self):
        return self._s.rstruct_text()


def solve(system="ex21", **kw):
    return Session(system, **kw).solve()


def cgroup(system="ex21", **kw):
    return Session(system, **kw).cgroup()


def regions(system="ex21", **kw):
    return Session(system, **kw).regions()


def rstruct(system="ex21", **kw):
    return Session(system, **kw).rstruct()


def strip_timing(doc):
    """Drops the wall-time field so reruns compare equal."""
    return json.loads(_strip_timing(json.dumps(doc)))
