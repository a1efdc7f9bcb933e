"""boostkit 主程序"""

import sys
import os
from typing import List, Optional

import click
from loguru import logger
from rich.console import Console
from rich.table import Table

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from src.utils.logger import setup_logger
from src.services.clifford import run_algebra_suite
from src.services.scenario_runner import EXIT_INVALID, RunOutcome, ScenarioRunner, worst_exit_code
from src.utils.exceptions import ScenarioParseError
from config.settings import get_settings, ensure_directories

STATUS_STYLES = {"pass": "green", "fail": "red", "error": "red", "invalid": "yellow"}


def _summary_table(outcomes: List[RunOutcome]) -> Table:
    table = Table(title="场景运行结果")
    table.add_column("场景", style="cyan")
    table.add_column("类型")
    table.add_column("状态")
    table.add_column("检查数", justify="right")
    table.add_column("说明")
    for outcome in outcomes:
        style = STATUS_STYLES.get(outcome.status, "white")
        if outcome.report is not None:
            kind = outcome.report.kind
            count = str(len(outcome.report.residuals))
            note = ", ".join(check.name for check in outcome.report.failed_checks)
        else:
            kind, count, note = "-", "-", outcome.error or ""
        table.add_row(outcome.name, kind, f"[{style}]{outcome.status}[/{style}]", count, note)
    return table


@click.group()
@click.option('--debug', is_flag=True, help='启用调试模式')
def cli(debug: bool):
    """boostkit - 相对论旋量与电磁矩数值工具"""
    if debug:
        settings = get_settings()
        settings.debug = True
        settings.log_level = "DEBUG"

    ensure_directories()
    setup_logger()


@cli.command()
@click.argument('scenario', type=click.Path(dir_okay=False))
@click.option('--output-dir', type=str, help='报告输出目录')
@click.pass_context
def run(ctx: click.Context, scenario: str, output_dir: Optional[str]):
    """运行单个场景文件"""
    outcome = ScenarioRunner(output_dir=output_dir).run(scenario)
    console = Console()
    if outcome.report_path:
        console.print(f"报告: {outcome.report_path}")
    if outcome.error:
        console.print(f"[red]{outcome.error}[/red]")
    console.print(f"状态: {outcome.status}")
    ctx.exit(outcome.exit_code)


@cli.command(name="run-all")
@click.argument('directory', type=str, required=False)
@click.option('--output-dir', type=str, help='报告输出目录')
@click.pass_context
def run_all(ctx: click.Context, directory: Optional[str], output_dir: Optional[str]):
    """按文件名顺序运行目录下的全部场景"""
    directory = directory or get_settings().scenario_dir
    runner = ScenarioRunner(output_dir=output_dir)
    try:
        outcomes, exit_code = runner.run_all(directory)
    except ScenarioParseError as e:
        logger.error(str(e))
        ctx.exit(EXIT_INVALID)
        return

    console = Console()
    if not outcomes:
        console.print(f"[yellow]没有场景文件: {directory}[/yellow]")
    else:
        console.print(_summary_table(outcomes))
    aggregate = "pass" if exit_code == 0 else "fail"
    console.print(f"汇总: {len(outcomes)} 个场景，状态 {aggregate}")
    ctx.exit(worst_exit_code(outcomes))


@cli.command()
@click.option('--representation', type=click.Choice(['dirac', 'weyl']), default='dirac', help='gamma 矩阵表示')
@click.option('--samples', type=int, default=100, help='随机 rapidity 样本数')
@click.pass_context
def check(ctx: click.Context, representation: str, samples: int):
    """运行内置的 Clifford 代数检查"""
    checks, extras = run_algebra_suite(representation=representation, samples=samples)

    table = Table(title=f"代数检查（{representation} 表示）")
    table.add_column("检查项", style="cyan")
    table.add_column("残差", justify="right")
    table.add_column("容差", justify="right")
    table.add_column("结果")
    for item in checks:
        verdict = "[green]通过[/green]" if item.passed else "[red]失败[/red]"
        table.add_row(item.name, f"{item.value:.3e}", f"{item.tolerance:.0e}", verdict)

    console = Console()
    console.print(table)
    console.print(f"boost 旋量最大非幺正度: {extras['max_boost_non_unitarity']:.3e}")
    ctx.exit(0 if all(item.passed for item in checks) else 1)


if __name__ == "__main__":
    cli()
