from ._config import get_config, set_config, config_context
from .topology import (Network, TopologyClass, LocalView, parse_network,
                       load_network, classify, canonical_three_user,
                       local_view, diameter, global_horizon)
from .schedule import ScheduleMultiset, CodedSchedule
from .det_channel import (shift_down, receive, transmit, SlotTranscript,
                          simulate_and_decode, verify_schedule)
from .scheduler import (conflict_graph, is_independent_subgraph,
                        MIGScheduler, optimize_mig, fractional_coloring,
                        mis_optimality_predicate)
from .coded_sets import (build_constraint_matrix, feasible_gf2,
                         feasible_real, cs_value, cyclic_chain_schedule,
                         CodedSetSearch, search_best_cs)
from .capacity import (AlphaResult, alpha, outer_bound_recipe,
                       binary_symcap_bounds, alpha_curve)
from .zchain import (ZChainDet, ZChainGauss, zchain_det_achievable,
                     zchain_gauss_outer, zchain_gauss_achievable)

__version__ = '0.1.0'

__all__ = ['get_config', 'set_config', 'config_context',
           'Network', 'TopologyClass', 'LocalView', 'parse_network',
           'load_network', 'classify', 'canonical_three_user', 'local_view',
           'diameter', 'global_horizon',
           'ScheduleMultiset', 'CodedSchedule',
           'shift_down', 'receive', 'transmit', 'SlotTranscript',
           'simulate_and_decode', 'verify_schedule',
           'conflict_graph', 'is_independent_subgraph', 'MIGScheduler',
           'optimize_mig', 'fractional_coloring', 'mis_optimality_predicate',
           'build_constraint_matrix', 'feasible_gf2', 'feasible_real',
           'cs_value', 'cyclic_chain_schedule', 'CodedSetSearch',
           'search_best_cs',
           'AlphaResult', 'alpha', 'outer_bound_recipe',
           'binary_symcap_bounds', 'alpha_curve',
           'ZChainDet', 'ZChainGauss', 'zchain_det_achievable',
           'zchain_gauss_outer', 'zchain_gauss_achievable']
