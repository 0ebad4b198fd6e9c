import configparser
import os
import sys

config = configparser.ConfigParser()

if getattr(sys, 'frozen', False) and hasattr(sys, '_MEIPASS'):
    os.chdir(sys._MEIPASS)
    curr_dir = os.path.dirname(sys.executable)
else:
    curr_dir = sys.path[0]

# fall back to the copy shipped next to the package (tests, installed use)
pkg_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
config.read([os.path.join(pkg_dir, 'configs.ini'),
             os.path.join(curr_dir, 'configs.ini')])

ACTIVE_LOGGERS = [x.strip() for x in config['LIBRARY'].get('active_loggers').split(',') if x.strip()]

# default scenario (numerical settings of the reference study)
RADIUS_M = config['SCENARIO'].getfloat('radius_m')
PATHLOSS_EXP = config['SCENARIO'].getfloat('pathloss_exp')
P_GB_DBM = config['SCENARIO'].getfloat('p_gb_dbm')
P_GF_DBM = config['SCENARIO'].getfloat('p_gf_dbm')
NOISE_DBM = config['SCENARIO'].getfloat('noise_dbm')
FADING_MEAN_GB = config['SCENARIO'].getfloat('fading_mean_gb')
FADING_MEAN_GF = config['SCENARIO'].getfloat('fading_mean_gf')
SIC_THRESHOLD = config['SCENARIO'].getfloat('sic_threshold')

# Chebyshev-Gauss orders
N_OUTER = config['QUADRATURE'].getint('n_outer')
N_INNER = config['QUADRATURE'].getint('n_inner')

# nested adaptive quadrature
ORACLE_ABS_TOL = config['ORACLE'].getfloat('abs_tol')
ORACLE_REL_TOL = config['ORACLE'].getfloat('rel_tol')
ORACLE_MAX_DEPTH = config['ORACLE'].getint('max_depth')
ORACLE_U_CLIP = config['ORACLE'].getfloat('u_clip')

# Monte Carlo
MC_TRIALS = config['MONTECARLO'].getint('trials')
MC_SEED = config['MONTECARLO'].getint('seed')
MC_BLOCK_SIZE = config['MONTECARLO'].getint('block_size')
MC_N_JOBS = config['MONTECARLO'].getint('n_jobs')

# special functions
EI_SERIES_LIMIT = config['SPECFUN'].getfloat('ei_series_limit')
HYP2F1_SERIES_LIMIT = config['SPECFUN'].getfloat('hyp2f1_series_limit')
SINGULAR_REL_TOL = config['SPECFUN'].getfloat('singular_rel_tol')
SINGULAR_PERTURBATION = config['SPECFUN'].getfloat('singular_perturbation')

# compare report
ANALYTIC_REL_TOL = config['REPORT'].getfloat('analytic_rel_tol')
MC_SIGMAS = config['REPORT'].getfloat('mc_sigmas')
