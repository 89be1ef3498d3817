"""Pathway lasso: sparse selection of mediation pathways.

The main entry points are :func:`standardize` and :func:`fit` /
:func:`fit_path` for estimation, :func:`cross_validate` for tuning,
:func:`bootstrap_ci` for post-selection inference, and the generators in
:mod:`pathlasso.simulate`.
"""

from .admm import (AdmmState, FitResult, PathResult, SolverOptions, fit, fit_path,
                   lambda_grid, make_grid)
from .baselines import bh_select, bk_fit, sobel_test, tslasso_path
from .core import (MediationDataset, PathwayCoefficients, PenaltySpec, StandardizedDataset,
                   loss, objective, pathway_effects, penalty_p1, penalty_p2, standardize,
                   total_effect)
from .evaluation import (cross_validate, f1_score, jaccard, l2_difference, matched_curves,
                         mse_ab, roc_curve, select_pathways)
from .prox import ProxParams, ProxSolution, penalty_v, prox_pair, soft_threshold
from .refit import bootstrap_ci, proportion_mediated, refit_selected
from .simulate import (FullModelDesign, SimulationDesign, default_design, gen_full,
                       gen_proposed, influence_transform, make_sigma1)

__version__ = "0.1.0"
