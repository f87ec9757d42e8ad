"""
Library and command line tool for generalized causal models drawn as string
diagrams: categorical and classical d-separation, the conditional
independences a model implies, and causal compatibility of finite stochastic
and linear Gaussian kernels.

The command line program is markovdsep.main, installed as markov-dsep.
"""

__all__ = ['hypergraph', 'diagram', 'normalize', 'dsep', 'markov', 'finstoch', 'gauss',
           'catalog', 'config', 'errors', 'load_utils', 'write_utils', 'cli']
from .version import __version__
from .cli import main
