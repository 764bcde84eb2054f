from dissiflow.network.utils import (ValidationReport, validate, ensure_valid, residuals,
                                     cycle_law_check, cycle_basis_residuals)

__all__ = ['ValidationReport', 'validate', 'ensure_valid', 'residuals',
           'cycle_law_check', 'cycle_basis_residuals']
