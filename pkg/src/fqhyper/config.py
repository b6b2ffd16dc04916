"""Resource caps and acceptance tolerances.

The tolerances below are engineering choices: the underlying theorems are
asymptotic statements with no explicit error terms.
"""

FIELD_CAP = 2**20
BRUTE_FORCE_CAP = 2500

# float -> exact integer rounding
ROUNDING_RESIDUAL = 1e-4
GAUSS_NORM_RTOL = 1e-6
JACOBI_PATH_ATOL = 1e-6

# convergence experiments at p = 20011
MOMENT_TOL = {
    ("f21", 2): 0.05,
    ("f21", 4): 0.15,
    ("f32", 2): 0.05,
    ("f32", 4): 0.25,
}
KS_TOL = {"f21": 0.03, "f32": 0.05}

# class-number sums at q ~ 1e5, relative to the limiting constant
CLASS_SUM_RTOL = 0.10

BATMAN_MOMENT_RTOL = 1e-6
BATMAN_NORM_ATOL = 1e-8
CDF_GRID_POINTS = 10_000

TOLERANCE_NAMES = ("residual", "ks_f21", "ks_f32", "class_sum_rtol")
