from .dks import DksInstance, Reduction, reduce_dks, den_kappa_oracle, random_dks_instance

__all__ = ['DksInstance', 'Reduction', 'reduce_dks', 'den_kappa_oracle', 'random_dks_instance']
