"""日志配置工具"""

import os
import sys
from loguru import logger
from config.settings import get_settings

CONSOLE_FORMAT = (
    "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <8}</level> | "
    "<cyan>{name}</cyan>:<cyan>{line}</cyan> - <level>{message}</level>"
)
FILE_FORMAT = "{time:YYYY-MM-DD HH:mm:ss.SSS} | {level: <8} | {name}:{function}:{line} - {message}"

# (文件名, 级别, 轮转, 保留)
FILE_SINKS = (
    ("boostkit.log", "DEBUG", "10 MB", 10),
    ("error.log", "ERROR", "10 MB", 5),
)


def setup_logger():
    """配置 loguru：控制台 + 运行日志 + 错误日志，调试模式额外写 debug.log"""
    settings = get_settings()
    level = "DEBUG" if settings.debug else settings.log_level.upper()

    logger.remove()
    os.makedirs(settings.log_dir, exist_ok=True)

    logger.add(sys.stderr, level=level, format=CONSOLE_FORMAT, colorize=True)

    sinks = list(FILE_SINKS)
    if settings.debug:
        sinks.append(("debug.log", "TRACE", "50 MB", 2))

    for filename, sink_level, rotation, retention in sinks:
        logger.add(
            os.path.join(settings.log_dir, filename),
            level=sink_level,
            format=FILE_FORMAT,
            rotation=rotation,
            retention=retention,
            encoding="utf-8",
        )

    logger.debug(f"日志目录: {os.path.abspath(settings.log_dir)}")
    logger.info(f"日志系统已初始化，级别: {level}")
    return logger
