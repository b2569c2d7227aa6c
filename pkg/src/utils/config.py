"""
Configuration settings for emforge
"""
import os

from dotenv import load_dotenv

load_dotenv()


def _env_bool(name: str, default: str) -> bool:
    return os.environ.get(name, default).lower() == 'true'


class Config:
    """Base configuration class"""

    # Logging
    LOG_LEVEL = os.environ.get('EMFORGE_LOG_LEVEL', 'WARNING')
    LOG_FILE = os.environ.get('EMFORGE_LOG_FILE')

    # Enumeration guard: largest level order that may be listed element by element
    ENUMERATION_CAP = int(os.environ.get('EMFORGE_CAP', 1 << 20))

    # Sampling
    DEFAULT_SEED = int(os.environ.get('EMFORGE_SEED', 0))
    DEFAULT_SAMPLES = int(os.environ.get('EMFORGE_SAMPLES', 200))

    # Linear families are checked on every basis tensor up to this many tuples
    EXHAUSTIVE_BASIS_LIMIT = 4096

    # Terms per random tensor and coefficient range for sampled linear checks
    SAMPLE_TENSOR_TERMS = 3
    SAMPLE_COEFFICIENT_BOUND = 5

    # Verifier workers (joblib n_jobs); 1 keeps evaluation in-process
    N_JOBS = int(os.environ.get('EMFORGE_N_JOBS', 1))

    # Reports
    REPORT_SCHEMA = 'emforge/1'
    REPORT_TIMING = _env_bool('EMFORGE_REPORT_TIMING', 'True')

    # Re-verify U*M*V = D and unimodularity after every Smith normal form
    CHECK_SNF = _env_bool('EMFORGE_CHECK_SNF', 'False')


class DevelopmentConfig(Config):
    """Development configuration"""
    LOG_LEVEL = os.environ.get('EMFORGE_LOG_LEVEL', 'INFO')


class ProductionConfig(Config):
    """Production configuration"""
    N_JOBS = int(os.environ.get('EMFORGE_N_JOBS', -1))


class TestingConfig(Config):
    """Testing configuration"""
    TESTING = True
    ENUMERATION_CAP = 1 << 16
    REPORT_TIMING = False
    CHECK_SNF = True


# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': Config
}


def get_config(name: str = None) -> Config:
    """
    Return the active configuration instance

    Args:
        name: Configuration key; defaults to EMFORGE_CONFIG or 'default'

    Returns:
        Instance of the selected configuration class
    """
    name = name or os.environ.get('EMFORGE_CONFIG', 'default')
    if name not in config:
        raise KeyError(f"Unknown configuration: {name}")
    return config[name]()
