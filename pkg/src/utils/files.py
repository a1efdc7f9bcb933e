"""文件读写工具：CSV 输入、确定性 JSON 报告、原子写入"""

import json
import math
import os
import tempfile
from typing import Any, Iterable, List, Sequence

import numpy as np
from loguru import logger

from config.settings import get_settings
from src.models.particles import ChargedParticle, ParticleSystem, StaticCurrentLoop
from src.utils.exceptions import ScenarioValidationError
from src.utils.validators import validate_csv_header

PARTICLE_COLUMNS = ("mass", "charge", "t", "x", "y", "z", "vx", "vy", "vz")
LOOP_COLUMNS = ("mx", "my", "mz", "dlx", "dly", "dlz", "current")
SPECTRUM_COLUMNS = ("index", "re", "im", "branch")


def _load_table(path: str, columns: Sequence[str]) -> np.ndarray:
    check = validate_csv_header(path, columns)
    if not check["valid"]:
        raise ScenarioValidationError(f"{path}: " + "; ".join(check["errors"]))
    table = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    if table.shape[0] == 0:
        raise ScenarioValidationError(f"{path}: 文件没有数据行")
    if table.shape[1] != len(columns):
        raise ScenarioValidationError(f"{path}: 每行应有 {len(columns)} 列，实际 {table.shape[1]} 列")
    return table


def load_particles_csv(path: str) -> ParticleSystem:
    """读取粒子 CSV，表头必须为 mass,charge,t,x,y,z,vx,vy,vz"""
    table = _load_table(path, PARTICLE_COLUMNS)
    particles = [ChargedParticle.from_dict(dict(zip(PARTICLE_COLUMNS, row))) for row in table]
    logger.debug(f"读取 {len(particles)} 个粒子: {path}")
    return ParticleSystem(tuple(particles))


def load_loop_csv(path: str) -> StaticCurrentLoop:
    """读取回路线段 CSV，表头必须为 mx,my,mz,dlx,dly,dlz,current"""
    table = _load_table(path, LOOP_COLUMNS)
    logger.debug(f"读取 {len(table)} 条回路线段: {path}")
    return StaticCurrentLoop(midpoints=table[:, 0:3], dl=table[:, 3:6], currents=table[:, 6])


def format_float(value: float, digits: int) -> str:
    """固定有效位数；非有限值输出为字符串"""
    if math.isnan(value):
        return '"nan"'
    if math.isinf(value):
        return '"inf"' if value > 0 else '"-inf"'
    return format(value, f".{digits}g")


def render_json(value: Any, indent: int = 2, digits: int = 17, level: int = 0) -> str:
    """按插入顺序渲染 JSON，浮点数固定有效位数，复数写成 {re, im}"""
    pad = " " * (indent * (level + 1))
    close = " " * (indent * level)

    if value is None:
        return "null"
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_float(float(value), digits)
    if isinstance(value, (complex, np.complexfloating)):
        value = {"re": float(value.real), "im": float(value.imag)}
    if isinstance(value, str):
        return json.dumps(value, ensure_ascii=False)
    if isinstance(value, np.ndarray):
        value = value.tolist()
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f"{pad}{json.dumps(str(key), ensure_ascii=False)}: {render_json(item, indent, digits, level + 1)}"
            for key, item in value.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{close}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{pad}{render_json(item, indent, digits, level + 1)}" for item in value]
        return "[\n" + ",\n".join(items) + f"\n{close}]"
    raise TypeError(f"无法序列化类型 {type(value).__name__}")


def atomic_write_text(path: str, text: str) -> str:
    """先写同目录临时文件再 os.replace，失败时不留下半成品"""
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp_path = tempfile.mkstemp(prefix=".boostkit-", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write(text)
        os.replace(tmp_path, path)
    except Exception:
        if os.path.exists(tmp_path):
            os.remove(tmp_path)
        raise
    return path


def write_json_report(path: str, payload: dict) -> str:
    settings = get_settings()
    text = render_json(payload, indent=settings.report.indent, digits=settings.report.significant_digits)
    atomic_write_text(path, text + "\n")
    logger.debug(f"报告已写入: {path}")
    return path


def spectrum_csv_text(values: Iterable[complex], branches: Iterable[str]) -> str:
    digits = get_settings().report.significant_digits
    lines: List[str] = [",".join(SPECTRUM_COLUMNS)]
    for index, (value, branch) in enumerate(zip(values, branches)):
        value = complex(value)
        lines.append(f"{index},{value.real:.{digits}g},{value.imag:.{digits}g},{branch}")
    return "\n".join(lines) + "\n"


def write_spectrum_csv(path: str, values: Sequence[complex], branches: Sequence[str]) -> str:
    """谱 CSV，列为 index,re,im,branch"""
    if len(values) != len(branches):
        raise ValueError(f"本征值数 {len(values)} 与分支标签数 {len(branches)} 不一致")
    atomic_write_text(path, spectrum_csv_text(values, branches))
    logger.debug(f"谱已写入: {path}（{len(values)} 行）")
    return path
