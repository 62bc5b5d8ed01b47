"""Default configuration values, used when no config/config.yaml is present."""

DEFAULT_CONFIG = {
    "kernel": {
        "max_order": 64,
    },
    "solver": {
        "grid_points": 2000,
        "tol": 1e-10,
        "threshold_epsilon": 1e-9,
        "refine_factor": 10,
        "workers": 1,
    },
    "wavefunction": {
        "tail_decades": 14.0,
        "max_tail_radius": 500.0,
        "quad_abs_tol": 1e-10,
        "quad_limit": 200,
        "n_points": 512,
    },
    "oracle": {
        "start_offset": 1e-4,
        "rtol": 1e-11,
        "atol": 1e-14,
        "scan_points": 200,
        "max_steps": 200000,
        "tol": 1e-7,
        "reorthogonalize_ratio": 1e8,
    },
    "output": {
        "default_format": "csv",
        "decimals": 2,
    },
    "logging": {
        "level": "WARNING",
        "format": "text",
        "log_file": None,
        "max_file_size_mb": 10,
        "backup_count": 5,
    },
}
