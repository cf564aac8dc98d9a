"""Permutation routing on POPS(d, g) networks."""

from .bounds import BoundReport, is_derangement, is_group_collapsing, lower_bound
from .edgecolor import (BipartiteMultigraph, Factorization, check_regular, one_factorize,
                        pad_to_regular)
from .fairdist import (FairDistribution, ListSystem, find_fair_distribution, is_proper,
                       verify_fair)
from .model import (Coupler, NetworkConfig, Permutation, PopsError, group_of, local_index,
                    validate_permutation)
from .permgen import PermSpec, generate, is_bpc_closed_check
from .router import (Reception, Schedule, Slot, Transmission, build_list_system, route,
                     single_slot_route_if_possible)
from .simulator import SimState, Verdict, execute, one_slot_fair_check, validate_slot

__version__ = "0.1.0"
