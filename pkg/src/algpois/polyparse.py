"""Recursive-descent parser for polynomial Hamiltonians and section
coefficients over the variables z1, z2, ... and xi1, xi2, ...

Grammar (the only parser in the package):
    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' unary)?            # right-associative
    atom   := NUMBER | VARIABLE | '(' expr ')'

Numbers are integers or decimals; rationals are spelled with '/'.  '^' takes
nonnegative integer exponents.  The compiled evaluator runs on floats or dual
numbers alike.
"""

import re

from .errors import ConfigError

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)|([a-zA-Z_][a-zA-Z_0-9]*)|(.))")


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            break
        pos = m.end()
        num, name, sym = m.groups()
        if num is not None:
            out.append(("num", float(num)))
        elif name is not None:
            out.append(("var", name))
        elif sym.strip():
            if sym not in "+-*/^()":
                raise ConfigError(f"unexpected character {sym!r} in expression")
            out.append(("op", sym))
    out.append(("end", None))
    return out


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, sym):
        kind, val = self.take()
        if kind != "op" or val != sym:
            raise ConfigError(f"expected {sym!r}, found {val!r}")

    def parse(self):
        node = self.expr()
        if self.peek()[0] != "end":
            raise ConfigError(f"trailing input near {self.peek()[1]!r}")
        return node

    def expr(self):
        node = self.term()
        while self.peek() == ("op", "+") or self.peek() == ("op", "-"):
            _, op = self.take()
            rhs = self.term()
            node = ("add" if op == "+" else "sub", node, rhs)
        return node

    def term(self):
        node = self.unary()
        while self.peek() == ("op", "*") or self.peek() == ("op", "/"):
            _, op = self.take()
            rhs = self.unary()
            node = ("mul" if op == "*" else "div", node, rhs)
        return node

    def unary(self):
        if self.peek() == ("op", "-"):
            self.take()
            return ("neg", self.unary())
        if self.peek() == ("op", "+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek() == ("op", "^"):
            self.take()
            exp = _const_fold(self.unary())
            if exp is None or exp != int(exp) or exp < 0:
                raise ConfigError("'^' needs a nonnegative integer exponent")
            return ("pow", base, int(exp))
        return base

    def atom(self):
        kind, val = self.take()
        if kind == "num":
            return ("const", val)
        if kind == "var":
            m = re.fullmatch(r"(z|xi)([1-9]\d*)", val)
            if not m:
                raise ConfigError(
                    f"unknown variable {val!r}: use z1, z2, ... and xi1, xi2, ...")
            return ("var", m.group(1), int(m.group(2)) - 1)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ConfigError(f"unexpected token {val!r}")


def _const_fold(node):
    """Value of a variable-free subtree, or None."""
    used = set()
    _variables(node, used)
    if used:
        return None
    return _eval(node, [], [])


def _variables(node, out):
    if node[0] == "var":
        out.add((node[1], node[2]))
    elif node[0] in ("add", "sub", "mul", "div"):
        _variables(node[1], out)
        _variables(node[2], out)
    elif node[0] == "neg":
        _variables(node[1], out)
    elif node[0] == "pow":
        _variables(node[1], out)


def _eval(node, z, xi):
    op = node[0]
    if op == "const":
        return node[1]
    if op == "var":
        vec = z if node[1] == "z" else xi
        return vec[node[2]]
    if op == "add":
        return _eval(node[1], z, xi) + _eval(node[2], z, xi)
    if op == "sub":
        return _eval(node[1], z, xi) - _eval(node[2], z, xi)
    if op == "mul":
        return _eval(node[1], z, xi) * _eval(node[2], z, xi)
    if op == "div":
        return _eval(node[1], z, xi) / _eval(node[2], z, xi)
    if op == "neg":
        return -_eval(node[1], z, xi)
    if op == "pow":
        return _eval(node[1], z, xi) ** node[2]
    raise ConfigError(f"bad node {op!r}")


def parse_hamiltonian(text):
    """Compile an expression in z1.., xi1.. into a function H(z, xi).

    Returns (H, n_z, n_xi) where the counts are the highest variable indices
    used (callers check them against the structure's dimensions).
    """
    tree = _Parser(_tokenize(text)).parse()
    used = set()
    _variables(tree, used)
    n_z = max((i + 1 for v, i in used if v == "z"), default=0)
    n_xi = max((i + 1 for v, i in used if v == "xi"), default=0)

    def H(z, xi):
        return _eval(tree, list(z), list(xi))

    return H, n_z, n_xi


def parse_section_coeffs(texts):
    """Compile a list of z-only expressions into one coefficient function
    z -> (r,) for building sections from config (polynomial, degree <= 4)."""
    trees = []
    for t in texts:
        tree = _Parser(_tokenize(t)).parse()
        used = set()
        _variables(tree, used)
        if any(v == "xi" for v, _ in used):
            raise ConfigError("section coefficients may not use xi variables")
        trees.append(tree)

    def coeffs(z):
        return [_eval(tr, list(z), []) for tr in trees]

    return coeffs
