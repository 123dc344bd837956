from .tail import HillCurve, QQData, freedman_diaconis_histogram, hill, hill_curve, qq_data
from .metrics import (
    TailCorrGrid,
    mean_map_shift,
    orthogonal_projection,
    run_sweep,
    similarity_r,
    support_recovery,
    tail_corr_coordinates,
    tail_corr_grid,
    tail_corr_x,
    tail_corr_y,
)
