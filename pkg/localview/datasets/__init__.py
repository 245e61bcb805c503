from .topologies import (make_z_network, make_chain, make_cyclic_chain,
                         make_d_to_many, make_many_to_d,
                         make_fully_connected, make_isolated, make_z_chain,
                         load_three_user_classes, load_worked_example)

__all__ = ['make_z_network', 'make_chain', 'make_cyclic_chain',
           'make_d_to_many', 'make_many_to_d', 'make_fully_connected',
           'make_isolated', 'make_z_chain', 'load_three_user_classes',
           'load_worked_example']
