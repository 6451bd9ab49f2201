import argparse
import logging
import sys
import textwrap
from pathlib import Path
from typing import Optional, Sequence

from .config import preset_manager
from .config.config_loader import parse_number
from .config.config_models import OutputOptions
from .destination import SeriesExporter, SnapshotExporter, emit_snapshot
from .errors import WpfpError
from .executor import Executor
from .experiments import (check_report, check_verdict, convergence_study, steady_state_run, write_report,
                          write_verdict)
from .log_setup import setup_logging
from .oracle import reference_field

logger = logging.getLogger(__name__)


def _number_list(raw: str) -> list[float]:
    try:
        return [float(parse_number(item)) for item in raw.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a list of numbers, got {raw!r}") from None


def _samples(raw: list[list[float]]) -> list[float]:
    return [v for item in raw for v in item]


def build_parser() -> argparse.ArgumentParser:
    p_list = [f"{p['id']} - {p['description']}" for p in preset_manager.get_available_presets()]

    # 创建命令行参数解析器
    parser = argparse.ArgumentParser(
        prog="wpfp-tssp",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=textwrap.dedent('''\
        一维 Wigner-(Poisson-)Fokker-Planck 方程的时间分裂傅里叶谱方法求解器。
        子命令:
            simulate   运行配置或预设, 输出快照与观测量序列
            converge   收敛阶测试 (M, N 或 dt)
            steady     稳态实验
            reference  输出谐振势解析参考解
            presets    列出预设
        可选预设:
        ''') + "\n".join(f"    {p}" for p in p_list),
    )
    parser.add_argument('--log-level', type=str, default=None, help='日志级别 (默认 WPFP_LOG_LEVEL 或 WARNING)')
    parser.add_argument('--quiet', action='store_true', help='不显示进度条')
    sub = parser.add_subparsers(dest='command', required=True)

    simulate = sub.add_parser('simulate', help='运行一次模拟')
    simulate.add_argument('config', help='预设 ID 或 INI 配置文件')
    simulate.add_argument('--out', default='out', help='输出目录')
    simulate.add_argument('--snapshots', type=int, default=None, help='等间隔快照数 K')
    simulate.add_argument('--snapshot-times', type=_number_list, default=None, help='快照时间, 例如 0,2,4')
    simulate.add_argument('--heatmap', action='store_true', help='同时输出热图与局部矩 CSV')

    converge = sub.add_parser('converge', help='收敛阶测试')
    converge.add_argument('config', help='预设 ID 或 INI 配置文件')
    converge.add_argument('--axis', choices=['M', 'N', 'dt'], required=True)
    converge.add_argument('--samples', nargs='+', type=_number_list, default=None, help='样本, 例如 2^-4 2^-5 或 16,32,64')
    converge.add_argument('--friction', choices=['collocation', 'galerkin'], default=None)
    converge.add_argument('--out', default='out', help='报告输出目录')
    converge.add_argument('--check', action='store_true', help='未达到验收阈值时返回非零')

    steady = sub.add_parser('steady', help='稳态实验')
    steady.add_argument('config', help='预设 ID 或 INI 配置文件')
    steady.add_argument('--tmax', type=float, default=None, help='终止时间')
    steady.add_argument('--threshold', type=float, default=None, help='残差阈值')
    steady.add_argument('--window', type=int, default=None, help='连续低于阈值的记录数')
    steady.add_argument('--out', default='out', help='输出目录')
    steady.add_argument('--check', action='store_true', help='未达到验收阈值时返回非零')

    reference = sub.add_parser('reference', help='输出解析参考解')
    reference.add_argument('preset', help='谐振势预设 ID 或 INI 配置文件')
    reference.add_argument('--out', default='out', help='输出目录')

    sub.add_parser('presets', help='列出预设')
    return parser


def _simulate(args: argparse.Namespace) -> int:
    preset = preset_manager.resolve(args.config)
    config = preset.config
    output = config.output
    if args.snapshots is not None or args.snapshot_times is not None or args.heatmap:
        output = OutputOptions(
            snapshots=args.snapshots if args.snapshots is not None else output.snapshots,
            snapshot_times=tuple(args.snapshot_times) if args.snapshot_times is not None else output.snapshot_times,
            heatmap=args.heatmap or output.heatmap,
            every=output.every,
        )
        config = config.with_changes(output=output)
    print(f"开始模拟 {preset.id}, 输出目录: {args.out}")
    result = Executor(config, args.out).run(show_progress=not args.quiet)
    last = result.series.records[-1]
    print(f"完成: t={last.t:.6g}, N={last.N:.12g}, J={last.J:.12g}, E={last.E:.12g}")
    return 0


def _converge(args: argparse.Namespace) -> int:
    preset = preset_manager.resolve(args.config)
    samples = _samples(args.samples) if args.samples else None
    report = check_report(convergence_study(preset, args.axis, samples, friction=args.friction,
                                            show_progress=not args.quiet))
    path = write_report(report, args.out)
    for s, l2, linf in zip(report.samples, report.l2_errors, report.linf_errors):
        print(f"{args.axis}={s:<12g} L2={l2:.3e}  Linf={linf:.3e}")
    print(f"orders L2: {[round(o, 3) for o in report.l2_orders]}")
    print(f"orders Linf: {[round(o, 3) for o in report.linf_orders]}")
    print(f"报告: {path}")
    if args.check and not report.passed:
        for failure in report.failures:
            print(f"FAIL: {failure}", file=sys.stderr)
        return 1
    return 0


def _steady(args: argparse.Namespace) -> int:
    preset = preset_manager.resolve(args.config)
    out = Path(args.out)
    sinks = [SnapshotExporter(str(out / 'snapshots'), heatmap=preset.config.output.heatmap),
             SeriesExporter(str(out))]
    _, verdict = steady_state_run(preset, args.tmax, args.threshold, args.window, sinks=sinks,
                                  show_progress=not args.quiet)
    verdict = check_verdict(verdict)
    path = write_verdict(verdict, out)
    if verdict.steady_reached:
        print(f"{preset.id}: 稳态 t_steady={verdict.t_steady:.4g}, mass drift={verdict.mass_drift:.3e}")
    else:
        print(f"{preset.id}: 未达到稳态, 最小残差={verdict.min_residual:.3e}")
    print(f"结论: {path}")
    if args.check and not verdict.passed:
        for failure in verdict.failures:
            print(f"FAIL: {failure}", file=sys.stderr)
        return 1
    return 0


def _reference(args: argparse.Namespace) -> int:
    preset = preset_manager.resolve(args.preset)
    W = reference_field(preset.config)
    path = emit_snapshot(W, Path(args.out) / f"reference_{preset.id}.wpfp")
    print(f"参考解 t={W.time:.6g}: {path}")
    return 0


def _presets(args: argparse.Namespace) -> int:
    for p in preset_manager.get_available_presets():
        kind = "steady" if p['steady'] else p['reference']
        print(f"{p['id']:<6}{kind:<26}{p['description']}")
    return 0


_COMMANDS = {
    'simulate': _simulate,
    'converge': _converge,
    'steady': _steady,
    'reference': _reference,
    'presets': _presets,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """主函数：解析命令行并执行子命令, 返回退出码"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return _COMMANDS[args.command](args)
    except WpfpError as e:
        logger.error(f"{type(e).__name__}: {e}")
        print(f"错误: {e}", file=sys.stderr)
        return 2


def run_cli():
    sys.exit(main())
