"""
cornerlab 命令行入口

子命令：corners / uniformity / spectrum / increment / partition / hunt / verify。
报告以单行 JSON 写到标准输出，轨迹与频谱写 CSV。
退出码：0 成功，1 验证失败，2 输入错误。
"""

import argparse
import csv
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict, List, Optional, TextIO

from .core.config import settings, tolerances
from .core.profiles import PROFILES, PowerLaw, get_profile
from .exceptions import CornerLabError, InvalidInputError
from .models import (
    Box,
    CornerMode,
    GridSet,
    LineSet,
    Normalization,
    RunConfig,
    dump_report,
)
from .services import fourier
from .services.corners import (
    ANTIDIAGONAL_RULE,
    TRANSLATION_RULE,
    behrend_construct,
    count_corners,
    embed_corner_free,
)
from .services.driver import corner_hunt
from .services.energy import energy_increment_run
from .services.graphview import gram_spectrum, spectrum_payload
from .services.increment import find_density_increment
from .services.partition import ap_partition, check_ap_partition, check_square_family, right_square_partition
from .services.set_io import read_set_file, write_set_file
from .services.uniformity import set_uniformity, uniformity_payload
from .services.verify import format_line, run_verify

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INPUT_ERROR = 2

ENERGY_TRACE_COLUMNS = ["iteration", "cells", "energy", "badMass", "refinedCells"]
HUNT_TRACE_COLUMNS = ["step", "branch", "size1", "size2", "density", "beta1", "beta2", "profile"]


def _parse_tolerance(text: str) -> Dict[str, float]:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"容差覆盖应为 name=value: {text!r}")
    try:
        return {name.strip(): float(value)}
    except ValueError:
        raise argparse.ArgumentTypeError(f"容差值不是数: {value!r}")


def _parse_pair(text: str) -> List[int]:
    try:
        r1, r2 = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"频率应为 r1,r2: {text!r}")
    return [r1, r2]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="输出 DEBUG 日志")
    common.add_argument("--one-based", action="store_true", help="集合文件与输出坐标使用 {1..N}")
    common.add_argument("--profile", choices=sorted(PROFILES), default=settings.cornerlab_profile)
    common.add_argument("--tol", action="append", type=_parse_tolerance, default=[], metavar="NAME=VALUE")

    parser = argparse.ArgumentParser(prog="cornerlab", description=settings.description)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.app_version}")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    corners = sub.add_parser("corners", help="角计数与无角构造")
    corner_sub = corners.add_subparsers(dest="action", required=True)
    p = corner_sub.add_parser("count", parents=[common])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--mode", choices=[m.value for m in CornerMode], default=CornerMode.GRID.value)
    p = corner_sub.add_parser("behrend", parents=[common])
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--n-grid", type=int, help="同时嵌入 {1..N}² 并穷举验证无角")
    p.add_argument("--rule", choices=[TRANSLATION_RULE, ANTIDIAGONAL_RULE], default=TRANSLATION_RULE)
    p = corner_sub.add_parser("embed", parents=[common])
    p.add_argument("--in", dest="input", required=True, help="一维集合文件")
    p.add_argument("--N", dest="n", type=int, required=True)
    p.add_argument("--rule", choices=[TRANSLATION_RULE, ANTIDIAGONAL_RULE], default=TRANSLATION_RULE)
    p.add_argument("--out", help="写出嵌入后的集合文件")

    p = sub.add_parser("uniformity", parents=[common], help="α-一致性泛函")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--normalization", choices=[n.value for n in Normalization], default=None)
    p.add_argument("--spectrum-csv", help="写出 r[,r2],re,im 频谱")

    p = sub.add_parser("spectrum", parents=[common], help="T = MM′ 的谱")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--box", choices=["full"], default="full")

    p = sub.add_parser("increment", parents=[common], help="密度增量搜索")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--alpha", type=float, required=True)

    partition = sub.add_parser("partition", help="数列划分与能量增量")
    part_sub = partition.add_subparsers(dest="action", required=True)
    p = part_sub.add_parser("ap", parents=[common])
    p.add_argument("--N", dest="n", type=int, required=True)
    p.add_argument("--r1", type=int, required=True)
    p.add_argument("--r2", type=int, required=True)
    p.add_argument("--s", type=int, required=True)
    p.add_argument("--seed", type=int, default=settings.cornerlab_seed)
    p = part_sub.add_parser("refine", parents=[common])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--freq", type=_parse_pair, required=True, metavar="R1,R2")
    p.add_argument("--max-cells", type=int)
    p = part_sub.add_parser("energy-run", parents=[common])
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--K", dest="k", type=float, default=None)
    p.add_argument("--rho", type=int, default=None)
    p.add_argument("--max-iters", type=int, default=8)
    p.add_argument("--trace", help="写出每轮状态 CSV")

    p = sub.add_parser("hunt", parents=[common], help="密度增量驱动的角搜索")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--max-steps", type=int, default=settings.cornerlab_max_steps)
    p.add_argument("--trace", help="写出每步记录 CSV")

    p = sub.add_parser("verify", parents=[common], help="运行不等式与恒等式验证套件")
    p.add_argument("--seed", type=int, default=settings.cornerlab_seed)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--only", nargs="+", metavar="CHECK")

    return parser


def to_run_config(args: argparse.Namespace) -> RunConfig:
    overrides: Dict[str, float] = {}
    for item in args.tol:
        overrides.update(item)
    options = {
        k: v
        for k, v in vars(args).items()
        if k not in {"subcommand", "action", "input", "profile", "tol", "seed", "verbose"}
    }
    return RunConfig(
        subcommand=args.subcommand,
        action=getattr(args, "action", None),
        inputs=[args.input] if getattr(args, "input", None) else [],
        profile=args.profile,
        seed=getattr(args, "seed", settings.cornerlab_seed),
        output_format="csv" if options.get("trace") or options.get("spectrum_csv") else "json",
        tolerance_overrides=overrides,
        options=options,
    )


# ---------------------------------------------------------------- 处理函数

def _read_grid(config: RunConfig) -> GridSet:
    obj = read_set_file(config.inputs[0], one_based=bool(config.options.get("one_based")))
    if not isinstance(obj, GridSet):
        raise InvalidInputError(f"{config.inputs[0]} 是一维集合，此处需要二维集合")
    return obj


def _read_line(config: RunConfig) -> LineSet:
    obj = read_set_file(config.inputs[0], one_based=bool(config.options.get("one_based")))
    if not isinstance(obj, LineSet):
        raise InvalidInputError(f"{config.inputs[0]} 是二维集合，此处需要一维集合")
    return obj


def _write_csv(path: str, header: List[str], rows: List[List[object]]) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)
    logger.info(f"✓ 已写出 {path} ({len(rows)} 行)")


def _corners(config: RunConfig, out: TextIO) -> int:
    opts = config.options
    shift = 1 if opts.get("one_based") else 0
    if config.action == "count":
        A = _read_grid(config)
        result = count_corners(A, CornerMode(opts["mode"]))
        payload = result.model_dump(mode="python")
        if result.witness is not None:
            payload["points"] = [(k + shift, m + shift) for k, m in result.witness.points(A.modulus if result.mode == CornerMode.CYCLIC else None)]
        out.write(dump_report(payload, "corners-count") + "\n")
        return EXIT_OK

    if config.action == "behrend":
        result = behrend_construct(opts["k"])
        payload = result.model_dump(mode="python")
        n_grid = opts.get("n_grid")
        if n_grid is not None:
            if n_grid != 3 * result.bound:
                raise InvalidInputError(f"--n-grid 必须等于 3K = {3 * result.bound}: {n_grid}")
            embedded = embed_corner_free(result.members, n_grid, opts["rule"])
            payload["embedding"] = {
                "N": n_grid,
                "rule": opts["rule"],
                "size": len(embedded),
                "density": float(embedded.density),
                "corners": count_corners(embedded).count,
            }
        out.write(dump_report(payload, "behrend") + "\n")
        return EXIT_OK

    A1 = _read_line(config)
    n = opts["n"]
    if n < 3 or n % 3 != 0:
        raise InvalidInputError(f"N 必须是 3 的正倍数: {n}")
    if A1.modulus != n // 3:
        A1 = LineSet(modulus=n // 3, members=A1.members)
    embedded = embed_corner_free(A1, n, opts["rule"])
    if opts.get("out"):
        write_set_file(opts["out"], embedded, one_based=bool(opts.get("one_based")))
    payload = {
        "N": n,
        "rule": opts["rule"],
        "size": len(embedded),
        "density": float(embedded.density),
        "corners": count_corners(embedded).count,
    }
    out.write(dump_report(payload, "corners-embed") + "\n")
    return EXIT_OK


def _uniformity(config: RunConfig, out: TextIO) -> int:
    obj = read_set_file(config.inputs[0], one_based=bool(config.options.get("one_based")))
    requested = config.options.get("normalization")
    field, report = set_uniformity(obj, Normalization(requested) if requested else None)
    if config.options.get("spectrum_csv"):
        spectrum = fourier.dft(field)
        header = ["r", "re", "im"] if spectrum.arity == 1 else ["r1", "r2", "re", "im"]
        _write_csv(config.options["spectrum_csv"], header, [list(row) for row in spectrum.csv_rows()])
    out.write(dump_report(uniformity_payload(report), "uniformity") + "\n")
    return EXIT_OK


def _spectrum(config: RunConfig, out: TextIO) -> int:
    A = _read_grid(config)
    rep = gram_spectrum(A, Box.full(A.modulus))
    out.write(dump_report(spectrum_payload(rep), "spectrum") + "\n")
    return EXIT_OK


def _increment(config: RunConfig, out: TextIO) -> int:
    A = _read_grid(config)
    alpha = config.options["alpha"]
    if not 0 < alpha < 1:
        raise InvalidInputError(f"α 必须在 (0, 1) 内: {alpha}")
    result = find_density_increment(A, None, alpha, get_profile(config.profile))
    out.write(dump_report(result, "increment") + "\n")
    return EXIT_OK


def _partition(config: RunConfig, out: TextIO) -> int:
    opts = config.options
    profile = get_profile(config.profile)
    if config.action == "ap":
        result = ap_partition(opts["n"], opts["r1"], opts["r2"], opts["s"], seed=config.seed)
        problems = check_ap_partition(result)
        payload = result.model_dump(mode="python")
        payload["problems"] = problems
        out.write(dump_report(payload, "partition-ap") + "\n")
        return EXIT_OK if not problems else EXIT_CHECK_FAILED

    A = _read_grid(config)
    if config.action == "refine":
        report = right_square_partition(A, tuple(opts["freq"]), max_cells=opts.get("max_cells"))
        payload = report.model_dump(mode="python")
        payload["problems"] = check_square_family(report.family)
        out.write(dump_report(payload, "partition-refine") + "\n")
        return EXIT_OK if not payload["problems"] else EXIT_CHECK_FAILED

    law = profile.power_law
    if opts.get("k") is not None or opts.get("rho") is not None:
        law = PowerLaw(
            K=Fraction(str(opts["k"])) if opts.get("k") is not None else law.K,
            rho=opts["rho"] if opts.get("rho") is not None else law.rho,
        )
    result = energy_increment_run(A, opts["eps"], law, profile, max_iters=opts["max_iters"])
    if opts.get("trace"):
        rows = [
            [s.iteration, len(s.squares), str(s.energy), s.bad_mass, s.refined_cells] for s in result.trace
        ]
        _write_csv(opts["trace"], ENERGY_TRACE_COLUMNS, rows)
    out.write(dump_report(result, "partition-energy-run") + "\n")
    return EXIT_OK


def _hunt(config: RunConfig, out: TextIO) -> int:
    A = _read_grid(config)
    result = corner_hunt(A, get_profile(config.profile), max_steps=config.options["max_steps"])
    if config.options.get("trace"):
        rows = [
            [r.step, r.branch.value, r.box_sizes[0], r.box_sizes[1], str(r.density), str(r.beta1), str(r.beta2), r.profile]
            for r in result.trace
        ]
        _write_csv(config.options["trace"], HUNT_TRACE_COLUMNS, rows)
    payload = result.model_dump(mode="python")
    if result.witness is not None:
        shift = 1 if config.options.get("one_based") else 0
        payload["points"] = [(k + shift, m + shift) for k, m in result.witness.points()]
    out.write(dump_report(payload, "hunt") + "\n")
    return EXIT_OK


def _verify(config: RunConfig, out: TextIO) -> int:
    lines = run_verify(config.seed, quick=bool(config.options.get("quick")), only=config.options.get("only"))
    if config.options.get("only") and not lines:
        raise InvalidInputError(f"没有匹配的检查: {', '.join(config.options['only'])}")
    for line in lines:
        out.write(format_line(line) + "\n")
    failed = [line.check for line in lines if not line.passed]
    if failed:
        logger.error(f"✗ {len(failed)} 项检查失败: {', '.join(failed)}")
        return EXIT_CHECK_FAILED
    logger.info(f"✓ 全部 {len(lines)} 项检查通过")
    return EXIT_OK


HANDLERS: Dict[str, Callable[[RunConfig, TextIO], int]] = {
    "corners": _corners,
    "uniformity": _uniformity,
    "spectrum": _spectrum,
    "increment": _increment,
    "partition": _partition,
    "hunt": _hunt,
    "verify": _verify,
}


def run(config: RunConfig, out: Optional[TextIO] = None) -> int:
    """
    执行一次运行

    Args:
        config: 运行配置
        out: 报告输出流，默认标准输出

    Returns:
        int: 退出码
    """
    out = out if out is not None else sys.stdout
    try:
        if config.tolerance_overrides:
            tolerances.apply_overrides(config.tolerance_overrides)
        return HANDLERS[config.subcommand](config, out)
    except CornerLabError as e:
        logger.debug(f"输入错误: {e.detail}")
        print(f"cornerlab: 错误: {e.detail}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except ValueError as e:
        print(f"cornerlab: 错误: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR


def main(argv: Optional[List[str]] = None) -> int:
    """主入口点函数"""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR
    level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    try:
        config = to_run_config(args)
    except ValueError as e:
        print(f"cornerlab: 错误: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    logger.debug(f"运行配置: {config.model_dump()}")
    return run(config)


if __name__ == "__main__":
    sys.exit(main())
