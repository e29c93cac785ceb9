import logging
import os
from datetime import datetime
from typing import Any, Optional

from dotenv import load_dotenv


class Ca3dLogger:
    """Process-wide logging for simulations, sweeps and the service"""

    _instance: Optional["Ca3dLogger"] = None
    _logger: Optional[logging.Logger] = None

    def __new__(cls) -> "Ca3dLogger":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self) -> None:
        if self._logger is None:
            self._setup_logger()

    def _setup_logger(self) -> None:
        """Setup centralized logging configuration"""
        load_dotenv()
        log_dir = os.getenv("CA3D_LOG_DIR", "logs")
        level = getattr(logging, os.getenv("LOG_LEVEL", "INFO").upper(), logging.INFO)

        os.makedirs(log_dir, exist_ok=True)

        logger = logging.getLogger("ca3d")
        logger.setLevel(level)

        # Prevent duplicate handlers
        if not logger.handlers:
            file_handler = logging.FileHandler(
                os.path.join(log_dir, f'ca3d_{datetime.now().strftime("%Y%m%d")}.log')
            )
            file_handler.setLevel(level)

            console_handler = logging.StreamHandler()
            console_handler.setLevel(logging.WARNING)

            formatter = logging.Formatter(
                "%(asctime)s - %(name)s - %(levelname)s - [%(filename)s:%(lineno)d] - %(message)s"
            )
            file_handler.setFormatter(formatter)
            console_handler.setFormatter(formatter)

            logger.addHandler(file_handler)
            logger.addHandler(console_handler)

        self._logger = logger

    def get_logger(self) -> logging.Logger:
        """Get the configured logger instance"""
        assert self._logger is not None
        return self._logger

    def log_scheme_run(
        self, scheme: str, num_uavs: int, seed: int, metrics: dict[str, Any], elapsed: float
    ) -> None:
        """Log a finished deployment scheme run with its headline metrics"""
        self.get_logger().info(
            f"Scheme '{scheme}' (M={num_uavs}, seed={seed}) finished in {elapsed:.3f}s",
            extra={"scheme": scheme, "num_uavs": num_uavs, "seed": seed, "metrics": metrics, "elapsed": elapsed},
        )

    def log_sweep_cell(self, sweep: str, key: tuple[Any, ...], status: str) -> None:
        """Log the outcome of one sweep cell"""
        self.get_logger().info(
            f"Sweep '{sweep}' cell {key} -> {status}",
            extra={"sweep": sweep, "cell": key, "status": status},
        )


def setup_logger() -> logging.Logger:
    """Setup and return logger instance"""
    return Ca3dLogger().get_logger()
