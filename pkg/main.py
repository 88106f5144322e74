#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
bayeslens 主程序

命令行入口：模型检查与推断、复合定理与透镜定律的随机验证、性质检查，以及 JSON 导入导出。

退出码：0 成功，1 语法错误，2 校验错误，3 观测的预测质量为 0，4 验证失败。
"""

import argparse
import sys
from typing import List, Optional

import yaml

from analyzers.law_checker import cmd_laws
from analyzers.property_checker import cmd_props
from analyzers.verifier import cmd_verify
from delivery.report_writer import ReportWriter
from dsl.evaluator import inversion, run_query
from dsl.parser import parse_file
from dsl.printer import print_model
from dsl.validator import BoundModel, validate_model
from models.errors import (BayesLensError, DuplicateName, EmptyPushforward,
                           ForwardReference, ModelSyntaxError, ValidationError)
from models.report import Report
from models.run_config import RunConfig
from storage.json_store import JsonStore, import_check, model_to_dict
from utils.config import DEFAULT_CONFIG_PATH, build_run_config, load_config
from utils.logger import get_logger, setup_logger

EXIT_OK = 0
EXIT_SYNTAX = 1
EXIT_VALIDATION = 2
EXIT_ZERO_MASS = 3
EXIT_VERIFY_FAILED = 4

logger = get_logger(__name__)


def _common_options() -> argparse.ArgumentParser:
    """所有子命令共用的参数"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', default=DEFAULT_CONFIG_PATH, help='配置文件路径')
    common.add_argument('--seed', type=int, help='随机种子（64 位无符号整数）')
    common.add_argument('--trials', type=int, help='随机试验次数')
    common.add_argument('--max-dim', type=int, dest='max_dim', help='随机空间的最大维数（2-16）')
    common.add_argument('--numeric', choices=['rational', 'float'], dest='numeric_mode', help='数值模式')
    common.add_argument('--tolerance', type=float, help='浮点模式的比较容差')
    common.add_argument('--format', choices=['text', 'json'], help='输出格式')
    common.add_argument('--workers', type=int, help='并行进程数')
    common.add_argument('--sparse', action='store_true', default=None, help='生成部分支撑的先验')
    common.add_argument('--deterministic', action='store_true', default=None, help='只生成确定性信道')
    common.add_argument('--output', help='同时把 JSON 结果写入该文件')
    common.add_argument('--verbose', '-v', action='store_true', help='输出 INFO 级日志')
    # 负对照：故意破坏反演，不出现在帮助中
    common.add_argument('--corrupt', action='store_true', default=None, help=argparse.SUPPRESS)
    return common


def build_parser() -> argparse.ArgumentParser:
    common = _common_options()
    parser = argparse.ArgumentParser(prog='bayeslens', description='精确的组合式贝叶斯推断与贝叶斯透镜验证')
    commands = parser.add_subparsers(dest='command', required=True)

    check = commands.add_parser('check', parents=[common], help='解析并校验模型文件')
    check.add_argument('file', help='.blens 模型文件')

    infer = commands.add_parser('infer', parents=[common], help='执行模型文件中的查询')
    infer.add_argument('file', help='.blens 模型文件')
    infer.add_argument('--query', type=int, help='只执行第 N 个查询（从 1 开始）')

    commands.add_parser('verify', parents=[common], help='随机验证复合定理与密度路线')

    laws = commands.add_parser('laws', parents=[common], help='检查 GetPut / PutGet / PutPut')
    laws.add_argument('file', nargs='?', help='可选的模型文件，其中的 laws 查询一并执行')

    commands.add_parser('props', parents=[common], help='检查结构律与几乎相等性质')

    export = commands.add_parser('export', parents=[common], help='导出已校验的模型')
    export.add_argument('file', help='.blens 模型文件')

    importer = commands.add_parser('import-check', parents=[common], help='校验信道 JSON 文件')
    importer.add_argument('file', help='信道 JSON 文件')
    return parser


def load_model(path: str, config: RunConfig) -> BoundModel:
    """解析并校验模型文件"""
    ast = parse_file(path)
    return validate_model(ast, config.numeric_mode)


def _save_output(args, data):
    if args.output:
        JsonStore().save(data, args.output)


def _finish_report(args, report: Report, writer: ReportWriter) -> int:
    writer.write_report(report)
    _save_output(args, report.to_dict())
    if not report.ok:
        if report.witnesses:
            logger.error(f"{report.command} 失败，第一个见证: {report.witnesses[0]}")
        return EXIT_VERIFY_FAILED
    return EXIT_OK


def cmd_check(args, config: RunConfig, writer: ReportWriter) -> int:
    model = load_model(args.file, config)
    writer.write_message(
        "OK",
        spaces=len(model.spaces), priors=len(model.priors),
        channels=len(model.channels), lets=len(model.lets), queries=len(model.queries),
    )
    return EXIT_OK


def _query_failed(result) -> bool:
    if isinstance(result, Report):
        return not result.ok
    if isinstance(result, list):
        # 只有 GetPut 与预测观测处的 PutGet 是必须成立的
        return not (result[0].holds and result[1].holds)
    return False


def cmd_infer(args, config: RunConfig, writer: ReportWriter) -> int:
    model = load_model(args.file, config)
    queries = model.queries
    if args.query is not None:
        if not 1 <= args.query <= len(queries):
            raise ValidationError(BayesLensError(f"没有第 {args.query} 个查询（共 {len(queries)} 个）"))
        queries = [queries[args.query - 1]]
    if not queries:
        logger.warning(f"{args.file} 中没有查询")

    status = EXIT_OK
    outputs = []
    for query in queries:
        try:
            result = run_query(model, query, config)
        except EmptyPushforward as e:
            logger.error(f"第 {query.query.line} 行: {e}")
            if e.predicted is not None:
                writer.write_dist(e.predicted, label='predicted')
            return EXIT_ZERO_MASS
        writer.write_result(result)
        entry = _result_to_dict(result)
        if args.output and query.kind == 'infer':
            # 输出文件中附带完整反演，零支撑观测见 zero_support
            entry = {'posterior': entry, 'inversion': inversion(query).to_dict()}
        outputs.append(entry)
        if _query_failed(result):
            status = EXIT_VERIFY_FAILED
    _save_output(args, {'results': outputs})
    return status


def _result_to_dict(result):
    if isinstance(result, list):
        return {'laws': [r.to_dict() for r in result]}
    return result.to_dict()


def cmd_export(args, config: RunConfig, writer: ReportWriter) -> int:
    model = load_model(args.file, config)
    data = model_to_dict(model)
    if writer.is_json:
        writer.write_json(data)
    else:
        writer.write_message(print_model(model.ast))
    _save_output(args, data)
    return EXIT_OK


def cmd_import_check(args, config: RunConfig, writer: ReportWriter) -> int:
    channel = import_check(args.file)
    if writer.is_json:
        writer.write_json({'message': 'OK', 'channel': channel.to_dict()})
    else:
        writer.write_message(f"OK\n{channel}")
    return EXIT_OK


def _fail(writer: ReportWriter, message: str, code: int, **fields) -> int:
    """错误写到日志（stderr）；JSON 模式下同时在 stdout 给出机器可读的错误"""
    logger.error(message)
    if writer.is_json:
        writer.write_json({'error': message, 'exit_code': code, **fields})
    return code


def dispatch(args, config: RunConfig, writer: ReportWriter) -> int:
    if args.command == 'check':
        return cmd_check(args, config, writer)
    if args.command == 'infer':
        return cmd_infer(args, config, writer)
    if args.command == 'verify':
        return _finish_report(args, cmd_verify(config), writer)
    if args.command == 'laws':
        model = load_model(args.file, config) if args.file else None
        return _finish_report(args, cmd_laws(config, model), writer)
    if args.command == 'props':
        return _finish_report(args, cmd_props(config), writer)
    if args.command == 'export':
        return cmd_export(args, config, writer)
    return cmd_import_check(args, config, writer)


def main(argv: Optional[List[str]] = None) -> int:
    """主函数，返回退出码"""
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        file_config = load_config(args.config)
    except (yaml.YAMLError, ValueError, OSError) as e:
        parser.error(f"无法读取配置文件 {args.config}: {e}")
    logging_config = dict(file_config.get('logging') or {})
    if args.verbose:
        logging_config['level'] = 'INFO'
    setup_logger(logging_config, force=True)

    try:
        config = build_run_config(
            file_config,
            seed=args.seed, trials=args.trials, max_dim=args.max_dim,
            numeric_mode=args.numeric_mode, tolerance=args.tolerance, format=args.format,
            workers=args.workers, sparse=args.sparse, deterministic=args.deterministic,
            corrupt=args.corrupt,
        )
    except ValueError as e:
        parser.error(str(e))
    logger.debug(f"运行配置: {config.to_dict()}")
    writer = ReportWriter(config.format)

    try:
        return dispatch(args, config, writer)
    except ModelSyntaxError as e:
        return _fail(writer, f"语法错误: {e}", EXIT_SYNTAX, line=e.line, column=e.column, expected=e.expected)
    except (ValidationError, DuplicateName, ForwardReference) as e:
        return _fail(writer, f"校验失败: {e}", EXIT_VALIDATION)
    except FileNotFoundError as e:
        return _fail(writer, f"文件不存在: {e.filename}", EXIT_VALIDATION)
    except BayesLensError as e:
        return _fail(writer, f"{type(e).__name__}: {e}", EXIT_VALIDATION)


if __name__ == "__main__":
    sys.exit(main())
