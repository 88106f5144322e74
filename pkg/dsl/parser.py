#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
模型文件解析器

使用 lark（LALR）把 .blens 源码解析为语法树，并检查名字重复与前向引用。
数字在语法树中一律保存为精确分数，数值模式在校验阶段才应用。
"""

from fractions import Fraction
from pathlib import Path
from typing import Dict, Iterable, Tuple

from lark import Lark, Token, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, VisitError

from dsl.ast_nodes import (ChannelDecl, Compose, LetDecl, ModelAST, PriorDecl,
                           Query, Ref, SpaceDecl, Tensor, referenced_names)
from models.errors import DuplicateName, ForwardReference, ModelSyntaxError
from utils.logger import get_logger

logger = get_logger(__name__)

GRAMMAR_FILE = Path(__file__).with_name('grammar.lark')

_parser = Lark.open(str(GRAMMAR_FILE), parser='lalr', propagate_positions=True)


def _number(token: Token) -> Fraction:
    try:
        return Fraction(str(token))
    except ZeroDivisionError:
        raise ModelSyntaxError(f"分母为 0: {token}", token.line, token.column)
    except ValueError:
        raise ModelSyntaxError(f"无法解析的数字: {token}", token.line, token.column)


@v_args(meta=True)
class _ToAst(Transformer):
    """把 lark 语法树转换为不可变的语法树节点"""

    def element(self, meta, children):
        if len(children) == 1:
            return str(children[0])
        return f"({children[0]},{children[1]})"

    def entry(self, meta, children):
        element, number = children
        return element, _number(number)

    def dist_lit(self, meta, children):
        return tuple(children)

    def space_ref(self, meta, children):
        return "*".join(str(c) for c in children)

    def row(self, meta, children):
        element, masses = children
        return element, masses

    def space_decl(self, meta, children):
        name, *elements = children
        return SpaceDecl(str(name), tuple(str(e) for e in elements), meta.line, meta.column)

    def prior_decl(self, meta, children):
        name, space, masses = children
        return PriorDecl(str(name), str(space), masses, meta.line, meta.column)

    def channel_decl(self, meta, children):
        name, dom, cod, *rows = children
        return ChannelDecl(str(name), str(dom), str(cod), tuple(rows), meta.line, meta.column)

    def let_decl(self, meta, children):
        name, expr = children
        return LetDecl(str(name), expr, meta.line, meta.column)

    def ref(self, meta, children):
        token = children[0]
        return Ref(str(token), token.line, token.column)

    def compose(self, meta, children):
        left, op, right = children
        return Compose(left, right, op.line, op.column)

    def tensor(self, meta, children):
        left, op, right = children
        return Tensor(left, right, op.line, op.column)

    def _query(self, kind, meta, children, observation=None):
        expr, prior = children[0], children[1]
        return Query(kind, expr, str(prior), observation, meta.line, meta.column)

    def infer(self, meta, children):
        return self._query('infer', meta, children[:2], children[2])

    def predict(self, meta, children):
        return self._query('predict', meta, children)

    def verify(self, meta, children):
        return self._query('verify', meta, children)

    def laws(self, meta, children):
        return self._query('laws', meta, children)

    def start(self, meta, children):
        return list(children)


def _expected_names(names: Iterable[str]) -> Tuple[str, ...]:
    """把终结符名换成可读的形式（关键字与符号显示其字面值）"""
    readable = set()
    for name in names or ():
        try:
            pattern = _parser.get_terminal(name).pattern
        except KeyError:
            readable.add(name)
            continue
        readable.add(pattern.value if pattern.type == 'str' else name)
    return tuple(sorted(readable))


def _syntax_error(e: UnexpectedInput, text: str) -> ModelSyntaxError:
    line, column = getattr(e, 'line', -1), getattr(e, 'column', -1)
    if line is None or line < 1:
        lines = text.splitlines() or ['']
        line, column = len(lines), len(lines[-1]) + 1
    if isinstance(e, UnexpectedCharacters):
        message = f"无法识别的字符 {text[e.pos_in_stream]!r}"
        expected = e.allowed
    elif isinstance(e, UnexpectedEOF):
        message = "文件意外结束"
        expected = e.expected
    else:
        token = getattr(e, 'token', None)
        message = f"意外的记号 {str(token)!r}"
        expected = getattr(e, 'expected', None) or getattr(e, 'accepts', None)
    return ModelSyntaxError(message, line, column, _expected_names(expected))


def _check_names(statements) -> ModelAST:
    """按语句顺序检查名字唯一与无前向引用，拆分声明与查询"""
    spaces: Dict[str, SpaceDecl] = {}
    priors: Dict[str, PriorDecl] = {}
    pipelines: Dict[str, object] = {}
    declarations, queries = [], []

    def unique(table, node, kind):
        if node.name in table:
            first = table[node.name]
            raise DuplicateName(
                f"第 {node.line} 行第 {node.column} 列: {kind} {node.name!r} 重复声明"
                f"（第一次在第 {first.line} 行）"
            )
        table[node.name] = node

    def declared(table, name, kind, node):
        if kind == "空间":
            for factor in name.split("*"):
                if factor not in table:
                    raise ForwardReference(
                        f"第 {node.line} 行第 {node.column} 列: 空间 {factor!r} 在使用前没有声明"
                    )
            return
        if name not in table:
            raise ForwardReference(
                f"第 {node.line} 行第 {node.column} 列: {kind} {name!r} 在使用前没有声明"
            )

    def check_expr(expr):
        for ref in referenced_names(expr):
            declared(pipelines, ref.name, "信道", ref)

    for node in statements:
        if isinstance(node, SpaceDecl):
            unique(spaces, node, "空间")
            if len(set(node.elements)) != len(node.elements):
                raise DuplicateName(f"第 {node.line} 行第 {node.column} 列: 空间 {node.name!r} 的元素标签重复")
            declarations.append(node)
        elif isinstance(node, PriorDecl):
            declared(spaces, node.space, "空间", node)
            unique(priors, node, "先验")
            declarations.append(node)
        elif isinstance(node, ChannelDecl):
            declared(spaces, node.dom, "空间", node)
            declared(spaces, node.cod, "空间", node)
            unique(pipelines, node, "信道")
            declarations.append(node)
        elif isinstance(node, LetDecl):
            check_expr(node.expr)
            unique(pipelines, node, "信道")
            declarations.append(node)
        else:
            check_expr(node.expr)
            declared(priors, node.prior, "先验", node)
            queries.append(node)
    return ModelAST(tuple(declarations), tuple(queries))


def parse_model(text: str) -> ModelAST:
    """
    解析模型源码

    Args:
        text: .blens 源码

    Returns:
        ModelAST: 语法树（声明与查询分开保存，各自保持源码顺序）

    Raises:
        ModelSyntaxError: 语法错误，带行列号与期望的记号
        DuplicateName: 同一类名字重复
        ForwardReference: 引用了之后才声明（或从未声明）的名字
    """
    try:
        tree = _parser.parse(text)
    except UnexpectedInput as e:
        raise _syntax_error(e, text) from e
    try:
        statements = _ToAst().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ModelSyntaxError):
            raise e.orig_exc from e
        raise
    model = _check_names(statements)
    logger.debug(f"解析完成: {len(model.declarations)} 条声明，{len(model.queries)} 个查询")
    return model


def parse_file(path) -> ModelAST:
    with open(path, 'r', encoding='utf-8') as f:
        return parse_model(f.read())
