# coding: utf-8

def __init__():
    """
    Name:

        config

    Purpose:

        Resolve the numeric tolerances and enumeration budget used by the
        Markov checks. Values come from, in increasing priority:
            - the hardcoded defaults
            - a JSON settings file (markov_dsep.json in the working directory)
            - the MARKOV_DSEP_TOL environment variable (tolerance only)
            - command line flags (applied by the cli module)

    Dependencies:

        - json_tricks (through load_utils)
        - dataclasses

    Needed Files:

      markov_dsep.json (optional)
    """
    pass


import logging
import os
from dataclasses import dataclass, fields, replace

log = logging.getLogger(__name__)

settings_filename = 'markov_dsep.json'
tolerance_env = 'MARKOV_DSEP_TOL'


@dataclass(frozen=True)
class Settings:
    tol: float = 1e-9
    build_tol: float = 1e-12
    load_tol: float = 1e-9
    exhaustive_max: int = 10
    sample_size: int = 10000
    seed: int = 0
    workers: int = 1

    def updated(self, **changes):
        'Return a copy with the non-None entries of changes applied'
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


DEFAULT_SETTINGS = Settings()


def read_settings_file(filename):
    """
    Read a JSON settings file holding a dict of Settings fields.
    Unknown keys are an error so typos do not pass silently.
    """
    from .load_utils import load_from_json
    d = load_from_json(filename)
    known = {f.name: f.type for f in fields(Settings)}
    unknown = sorted(set(d) - set(known))
    if unknown:
        raise ValueError('unknown settings: {}'.format(', '.join(unknown)))
    cast = {'float': float, 'int': int, float: float, int: int}
    return {k: cast[known[k]](v) for k, v in d.items()}


def get_default_settings(filename=None, environ=None):
    """
    Purpose:

        Build the Settings used by a run. Tries the settings file, falling
        back to the defaults when it is missing or unreadable, then applies
        the MARKOV_DSEP_TOL override.

    Input:

        filename: settings file to read (defaults to markov_dsep.json)
        environ: mapping used in place of os.environ (for tests)

    Output:

        Settings instance
    """
    environ = os.environ if environ is None else environ
    settings = DEFAULT_SETTINGS
    filename = filename or settings_filename
    if os.path.isfile(filename):
        try:
            settings = settings.updated(**read_settings_file(filename))
        except Exception as e:
            log.warning('**Error reading settings file %s, using defaults: %s', filename, e)
    tol = environ.get(tolerance_env)
    if tol:
        try:
            settings = settings.updated(tol=float(tol))
        except ValueError:
            log.warning('**Ignoring %s=%r, not a number', tolerance_env, tol)
    return settings
