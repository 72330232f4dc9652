"""Total stream processors as trees: reader trees nested inside a coinductive
layer structure, with evaluators, representation extraction, and lazy and
greedy composition."""

from .streams import EndOfSource, Stream, cons, from_function, head, tail, take_prefix
from .tree import EatResult, FuelExhausted, Rd, Ret, Tree, eat, fold, rd, ret, tbind, tmap
from .processor import Proc, eat_inf, mealy, out, unfold
from .represent import BudgetExceeded, Determined, NeedsMore, probe, rep, rep_inf, rho, tau
from .compose import CompState, chi, chi_greedy, compose_greedy, compose_lazy

__version__ = "0.1.0"
