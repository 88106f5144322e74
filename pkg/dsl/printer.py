#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
模型打印器

把语法树输出为规范格式的 .blens 源码：声明在前、查询在后，各自保持原顺序；
数字按 p/q（整数不带分母）输出。打印一次之后再解析、再打印，结果逐字节不变。
"""

from typing import List

from dsl.ast_nodes import (ChannelDecl, Compose, DistEntries, Expr, LetDecl,
                           ModelAST, PriorDecl, Query, Ref, SpaceDecl, Tensor)
from utils.numeric import format_number

HEADER = (
    "# bayeslens model\n"
    "# c >> d: 先经过 c 再经过 d，即复合 d∘c；c | d: 张量积；>> 比 | 结合得更紧\n"
)


def format_dist(entries: DistEntries) -> str:
    return "{" + ", ".join(f"{e}: {format_number(v)}" for e, v in entries) + "}"


def format_expr(expr: Expr) -> str:
    """最少括号：>> 左结合且比 | 紧，| 左结合"""
    if isinstance(expr, Ref):
        return expr.name
    if isinstance(expr, Compose):
        left = format_expr(expr.left)
        if isinstance(expr.left, Tensor):
            left = f"({left})"
        right = format_expr(expr.right)
        if not isinstance(expr.right, Ref):
            right = f"({right})"
        return f"{left} >> {right}"
    left = format_expr(expr.left)
    right = format_expr(expr.right)
    if isinstance(expr.right, Tensor):
        right = f"({right})"
    return f"{left} | {right}"


def _declaration(node) -> List[str]:
    if isinstance(node, SpaceDecl):
        return [f"space {node.name} = {{{', '.join(node.elements)}}}"]
    if isinstance(node, PriorDecl):
        return [f"prior {node.name} : {node.space} = {format_dist(node.masses)}"]
    if isinstance(node, ChannelDecl):
        lines = [f"channel {node.name} : {node.dom} -> {node.cod} = {{"]
        lines += [f"  {x} -> {format_dist(masses)}" for x, masses in node.rows]
        lines.append("}")
        return lines
    if isinstance(node, LetDecl):
        return [f"let {node.name} = {format_expr(node.expr)}"]
    raise TypeError(f"未知的声明节点: {node!r}")


def _query(query: Query) -> str:
    text = f"{query.kind} {format_expr(query.expr)} prior {query.prior}"
    if query.observation is not None:
        text += f" observe {query.observation}"
    return text


def print_model(ast: ModelAST) -> str:
    """
    输出规范格式的源码

    Args:
        ast: 模型语法树

    Returns:
        str: 以头部注释开始、以换行结束的源码
    """
    lines = []
    for node in ast.declarations:
        lines.extend(_declaration(node))
    if ast.queries:
        lines.append("")
        lines.extend(_query(q) for q in ast.queries)
    return HEADER + "\n" + "\n".join(lines) + "\n"
