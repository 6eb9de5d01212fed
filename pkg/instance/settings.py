LOG_LEVEL = 'INFO'
N_JOBS = 1
