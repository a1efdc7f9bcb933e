"""数据验证工具"""

import json
import os
from typing import Any, Dict, Sequence

import yaml
from loguru import logger

SCENARIO_KINDS = ("algebra-check", "moments", "splitting", "dirac1d", "compare-nonrel")
SCENARIO_EXTENSIONS = (".json", ".yaml", ".yml")


def _result() -> Dict[str, Any]:
    return {"valid": False, "errors": [], "warnings": []}


def validate_scenario_data(data: Any) -> Dict[str, Any]:
    """场景顶层结构检查，字段级检查交给 pydantic 模型"""
    result = _result()

    if not isinstance(data, dict):
        result["errors"].append("场景文件顶层必须是对象")
        return result

    kind = data.get("kind")
    if kind is None:
        result["errors"].append("缺少必填字段: kind")
    elif kind not in SCENARIO_KINDS:
        result["errors"].append(f"未知的场景类型: {kind}（可选: {', '.join(SCENARIO_KINDS)}）")

    for key, value in data.items():
        if key.endswith("tolerance") and isinstance(value, (int, float)) and value <= 0:
            result["errors"].append(f"容差必须为正: {key} = {value}")

    if "output_path" not in data:
        result["warnings"].append("未指定 output_path，报告写入默认输出目录")

    result["valid"] = len(result["errors"]) == 0
    return result


def load_scenario_data(path: str) -> Any:
    """按扩展名读取 JSON 或 YAML；解析失败抛出原始异常"""
    extension = os.path.splitext(path)[1].lower()
    with open(path, "r", encoding="utf-8") as f:
        if extension == ".json":
            return json.load(f)
        return yaml.safe_load(f)


def validate_scenario_file(path: str) -> Dict[str, Any]:
    """验证场景文件"""
    result = _result()

    if not os.path.exists(path):
        result["errors"].append(f"场景文件不存在: {path}")
        return result

    extension = os.path.splitext(path)[1].lower()
    if extension not in SCENARIO_EXTENSIONS:
        result["errors"].append(f"不支持的文件类型: {extension}")
        return result

    try:
        data = load_scenario_data(path)
    except json.JSONDecodeError as e:
        result["errors"].append(f"JSON解析错误: {e}")
        return result
    except yaml.YAMLError as e:
        result["errors"].append(f"YAML解析错误: {e}")
        return result

    structure = validate_scenario_data(data)
    result["errors"].extend(structure["errors"])
    result["warnings"].extend(structure["warnings"])
    result["valid"] = len(result["errors"]) == 0
    return result


def validate_csv_header(path: str, columns: Sequence[str]) -> Dict[str, Any]:
    """CSV 表头必须与给定列名逐一相同"""
    result = _result()

    if not os.path.exists(path):
        result["errors"].append(f"文件不存在: {path}")
        return result

    with open(path, "r", encoding="utf-8") as f:
        header = f.readline().strip()

    found = [name.strip() for name in header.split(",")] if header else []
    expected = list(columns)
    if found != expected:
        missing = [name for name in expected if name not in found]
        detail = f"，缺少列: {', '.join(missing)}" if missing else ""
        result["errors"].append(f"表头应为 {','.join(expected)}，实际为 {header or '(空)'}{detail}")
    elif header != ",".join(expected):
        result["warnings"].append("表头包含多余空白")

    result["valid"] = len(result["errors"]) == 0
    if not result["valid"]:
        logger.debug(f"CSV 表头检查失败: {path}")
    return result
