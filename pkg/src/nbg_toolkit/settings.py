# Tolerances and defaults shared by every solver in the package.
# Exact (rational) computations ignore the float tolerances and compare exactly.

# Distribution validation: |sum(x) - r| allowed in float mode
G_TAU_MASS = 1e-9
# Equilibrium verdict: worst cost gap allowed in float mode
G_TAU_EQ = 1e-9
# A vertex is charged when its mass is above this (float mode only)
G_TAU_CHARGE = 1e-9
# Projected gradient stops when a step moves less than this
G_TAU_OPT = 1e-10

# Size limits
G_SUPPORT_N_MAX = 16
G_KERNEL_N_MAX = 24
G_MATCH_N_MAX = 10
G_KKT_N_MAX = 12

# Multistart descent
G_DEFAULT_STARTS = 8
G_DEFAULT_SEED = 0
G_SEED_ENV_VAR = "NBG_SEED"
G_DESCENT_MAX_ITERS = 10000
G_DEDUP_RADIUS = 1e-6
G_ARMIJO_C = 1e-4
G_ARMIJO_BACKTRACK = 0.5
G_ARMIJO_INITIAL_STEP = 1.0
G_ESCAPE_PROBE = 1e-4

# Egalitarian search
G_SMOOTH_MAX_BETA = 1e4
G_EGALITARIAN_MAX_ITERS = 500

# delta-strong sampling for non-affine games
G_STRONG_GRID_POINTS = 33

# Opaque vertex-cost spot-check
G_OPAQUE_GRID_POINTS = 101

# Best-response dynamics
G_DYNAMICS_MAX_ITERS = 10000
G_OSCILLATION_WINDOW = 10

# Line scan used for two-vertex optima
G_LINE_SCAN_POINTS = 10000
