import os


DEBUG = False
LOG_LEVEL = 'INFO'  # CRITICAL / ERROR / WARNING / INFO / DEBUG

BASE_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))

# Benchmark.
SEED = 42
OUTER_FOLDS = 5
N_JOBS = 1
OUTPUT_DIR = os.path.join(BASE_DIR, 'output')
MANIFEST_PATH = os.path.join(BASE_DIR, 'softlearn', 'datasets', 'manifests',
                             'desk.json')
FULL_MANIFEST_PATH = os.path.join(BASE_DIR, 'softlearn', 'datasets',
                                  'manifests', 'full.json')
LIBRARY = 'default'
METHODS = [
    'soft_learning',
    'logistic_ridge',
    'random_forest',
    'gradient_boosting',
    'kan_like',
    'basic_mlp',
    'best_of_3'
]
REFERENCE_METHOD = 'soft_learning'
RESULT_FORMAT_VERSION = 1

# Inner cross-validation (weight optimisation).
INNER_FOLDS = None  # None applies the size rule below.
INNER_FOLDS_SMALL = 5
INNER_FOLDS_LARGE = 3
INNER_FOLD_THRESHOLD = 2000

# Forests and boosting switch from 100 to 200 rounds above this size.
ESTIMATOR_SIZE_THRESHOLD = 2000

# Numerics.
SCALE_FLOOR = 1e-12
PROBA_FLOOR = 1e-12
SOLVER_MAX_ITER = 10000
SOLVER_TOL = 1e-8
KKT_TOL = 1e-6
WEIGHT_FLOOR = 1e-10
SUPPORT_TOL = 1e-8
RANK_TOL = 1e-8

# Analytics.
TIE_MARGIN = 0.001
NEMENYI_ALPHA = 0.05
# Zero differences: 'wilcox' drops them, 'pratt' ranks then drops them.
WILCOXON_ZERO_METHOD = 'wilcox'
IMMUNITY_EPSILON = 1e-6
IMMUNITY_TRIALS = 100
UNCERTAINTY_PASS_RATE = 0.8
SELECTIVE_STRICT_RATE = 0.5
RELATIVE_TOP2_RATE = 0.6

# Reporting, size buckets by number of samples.
SIZE_BUCKETS = {
    'small': (0, 500),
    'medium': (500, 5001),
    'large': (5001, None)
}

# Specialist library. Each entry is (variant id, family, kind, params).
SPECIALIST_LIBRARY = {
    'classification': [
        ('logreg_c1', 'linear', 'logistic',
         {'C': 1.0, 'max_iter': 1000, 'tol': 1e-4}),
        ('logreg_c01', 'linear', 'logistic',
         {'C': 0.1, 'max_iter': 1000, 'tol': 1e-4}),
        ('knn_5', 'instance', 'knn',
         {'n_neighbors': 5, 'weights': 'distance'}),
        ('knn_15', 'instance', 'knn',
         {'n_neighbors': 15, 'weights': 'uniform'}),
        ('decision_tree', 'tree', 'decision_tree',
         {'max_depth': 10, 'min_samples_leaf': 5}),
        ('random_forest', 'tree', 'random_forest',
         {'n_estimators': 'auto', 'max_features': 'sqrt'}),
        ('extra_trees', 'tree', 'extra_trees',
         {'n_estimators': 'auto', 'max_features': 'sqrt'}),
        ('hist_gradient_boosting', 'tree', 'hist_gradient_boosting',
         {'max_iter': 'auto', 'max_depth': 6, 'learning_rate': 0.1,
          'max_bins': 255}),
        ('kernel_features', 'kernel_feature', 'kernel_features',
         {'n_components': 200, 'gamma': 'scale', 'C': 1.0,
          'max_iter': 1000}),
        ('mlp', 'neural', 'mlp',
         {'hidden_layer_sizes': (64, 32), 'learning_rate_init': 1e-3,
          'batch_size': 32, 'n_iter_no_change': 10,
          'validation_fraction': 0.15, 'max_iter': 200}),
        ('gaussian_nb', 'generative', 'gaussian_nb',
         {'var_smoothing': 1e-9}),
        ('spline_logreg', 'spline', 'spline',
         {'n_knots': 4, 'degree': 3, 'C': 1.0, 'max_iter': 1000})
    ],
    'regression': [
        ('ridge', 'linear', 'ridge', {'alpha': 1.0}),
        ('lasso', 'linear', 'lasso', {'alpha': 0.01, 'max_iter': 10000}),
        ('knn_5', 'instance', 'knn',
         {'n_neighbors': 5, 'weights': 'distance'}),
        ('knn_15', 'instance', 'knn',
         {'n_neighbors': 15, 'weights': 'uniform'}),
        ('decision_tree', 'tree', 'decision_tree',
         {'max_depth': 10, 'min_samples_leaf': 5}),
        ('random_forest', 'tree', 'random_forest',
         {'n_estimators': 'auto', 'max_features': 'sqrt'}),
        ('extra_trees', 'tree', 'extra_trees',
         {'n_estimators': 'auto', 'max_features': 'sqrt'}),
        ('hist_gradient_boosting', 'tree', 'hist_gradient_boosting',
         {'max_iter': 'auto', 'max_depth': 6, 'learning_rate': 0.1,
          'max_bins': 255}),
        ('kernel_features', 'kernel_feature', 'kernel_features',
         {'n_components': 200, 'gamma': 'scale', 'alpha': 1.0}),
        ('mlp', 'neural', 'mlp',
         {'hidden_layer_sizes': (64, 32), 'learning_rate_init': 1e-3,
          'batch_size': 32, 'n_iter_no_change': 10,
          'validation_fraction': 0.15, 'max_iter': 200}),
        ('spline_ridge', 'spline', 'spline',
         {'n_knots': 4, 'degree': 3, 'alpha': 1.0}),
        ('mean', 'baseline', 'dummy', {})
    ]
}

# Competing methods evaluated next to Soft Learning.
BASELINE_METHODS = {
    'logistic_ridge': ('linear', 'logistic_or_ridge',
                       {'C': 1.0, 'alpha': 1.0, 'max_iter': 1000,
                        'tol': 1e-4}),
    'random_forest': ('tree', 'random_forest',
                      {'n_estimators': 100, 'max_features': 'sqrt'}),
    'gradient_boosting': ('tree', 'hist_gradient_boosting',
                          {'max_iter': 200, 'max_depth': 6,
                           'learning_rate': 0.1, 'max_bins': 255}),
    'kan_like': ('spline', 'spline',
                 {'n_knots': 4, 'degree': 3, 'C': 1.0, 'alpha': 1.0,
                  'max_iter': 1000}),
    'basic_mlp': ('neural', 'mlp',
                  {'hidden_layer_sizes': (64, 32),
                   'learning_rate_init': 1e-3, 'batch_size': 32,
                   'n_iter_no_change': 10, 'validation_fraction': 0.15,
                   'max_iter': 200}),
    'tuned_mlp': ('neural', 'mlp',
                  {'hidden_layer_sizes': (256, 128, 64),
                   'learning_rate_init': 1e-3, 'batch_size': 256,
                   'n_iter_no_change': 10, 'validation_fraction': 0.15,
                   'max_iter': 300}),
    'neurosym': ('neural', 'neurosym',
                 {'tree_depth': 6, 'hidden_layer_sizes': (64, 32),
                  'learning_rate_init': 1e-3, 'batch_size': 32,
                  'n_iter_no_change': 10, 'validation_fraction': 0.15,
                  'max_iter': 200})
}

BEST_OF_3 = ['logistic_ridge', 'random_forest', 'gradient_boosting']

# Nemenyi studentized-range values divided by sqrt(2), k = 2..20.
NEMENYI_Q = {
    0.05: [1.959964233, 2.343700476, 2.569032073, 2.727774717,
           2.849705382, 2.948319908, 3.030878867, 3.101730260,
           3.163683420, 3.218653901, 3.268003591, 3.312738701,
           3.353617959, 3.391230382, 3.426041249, 3.458424619,
           3.488684546, 3.517072762, 3.543799277],
    0.10: [1.644853410, 2.052292580, 2.291341341, 2.459516082,
           2.588520643, 2.692731919, 2.779883537, 2.854606339,
           2.919888558, 2.977768077, 3.029694463, 3.076733328,
           3.119693349, 3.159198916, 3.195743642, 3.229723658,
           3.261461439, 3.291221820, 3.319224628]
}
