"""Tokenizer for scenario files. Total: any input produces a token stream,
with unrecognized characters surfacing as ERROR tokens for the parser."""

from __future__ import annotations

from dataclasses import dataclass

_PUNCT = {
    "{": "LBRACE",
    "}": "RBRACE",
    "(": "LPAREN",
    ")": "RPAREN",
    "[": "LBRACKET",
    "]": "RBRACKET",
    ",": "COMMA",
    ";": "SEMI",
    ":": "COLON",
    "=": "EQUALS",
    ".": "DOT",
    "+": "PLUS",
    "-": "MINUS",
}


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    offset: int


def _is_ident_start(ch: str) -> bool:
    return ch.isascii() and (ch.isalpha() or ch == "_")


def _is_ident_char(ch: str) -> bool:
    return ch.isascii() and (ch.isalnum() or ch == "_")


def tokenize(text: str) -> list:
    tokens = []
    i = 0
    line = 1
    col = 1
    n = len(text)

    def emit(kind: str, start: int, start_line: int, start_col: int) -> None:
        tokens.append(Token(kind, text[start:i], start_line, start_col, start))

    while i < n:
        ch = text[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r\f\v":
            i += 1
            col += 1
            continue
        if ch == "#":
            skipped = i
            while i < n and text[i] != "\n":
                i += 1
            col += i - skipped
            continue
        start, start_line, start_col = i, line, col
        if _is_ident_start(ch):
            while i < n and _is_ident_char(text[i]):
                i += 1
            emit("IDENT", start, start_line, start_col)
        elif ch.isdigit():
            while i < n and text[i].isdigit():
                i += 1
            is_int = True
            if i < n and text[i] == "." and i + 1 < n and text[i + 1].isdigit():
                is_int = False
                i += 1
                while i < n and text[i].isdigit():
                    i += 1
            if i < n and text[i] in "eE":
                j = i + 1
                if j < n and text[j] in "+-":
                    j += 1
                if j < n and text[j].isdigit():
                    is_int = False
                    i = j
                    while i < n and text[i].isdigit():
                        i += 1
            if i < n and text[i] == "i" and (i + 1 >= n or not _is_ident_char(text[i + 1])):
                i += 1
                emit("IMAG", start, start_line, start_col)
            else:
                emit("INT" if is_int else "NUMBER", start, start_line, start_col)
        elif ch == "-" and i + 1 < n and text[i + 1] == ">":
            i += 2
            emit("ARROW", start, start_line, start_col)
        elif ch in _PUNCT:
            i += 1
            emit(_PUNCT[ch], start, start_line, start_col)
        else:
            i += 1
            emit("ERROR", start, start_line, start_col)
        col = start_col + (i - start)
    tokens.append(Token("EOF", "", line, col, i))
    return tokens
