"""Command-line entry point and the line-oriented text format.

Every serialized value is a block of ``key<TAB>value`` lines whose first
line is ``kind<TAB><name>``.  ``parse`` inverts ``serialize`` exactly.
"""

from __future__ import annotations

import argparse
import random
import sys
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .exact_series import NAMED_SERIES, SeriesError, format_rational, named_series, parse_rational
from .expansion import TruncatedAutomorphism, exponential_expansion, make_symplectic
from .free_group_ring import (
    PANTS,
    SURFACE,
    ClassCombo,
    ConjClass,
    GroupWord,
    WordSyntaxError,
    format_letters,
    parse_letter,
)
from .jacobi_diagrams import GLUE_SYMBOL, DiagramCombo, _sort_key, diagram_string, reduce
from .tensor_lie import TensorElement, TensorError, format_tensor, letter_label, parse_tensor, parse_tensor_letter
from .twist_factorization import TwistWord

KINDS = ("word", "classes", "tensor", "automorphism", "diagrams", "twist-word")


class ParseError(ValueError):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UsageError(ValueError):
    pass


# ---------------------------------------------------------------------------
# serialization


def _letters_text(w, alphabet) -> str:
    return format_letters(w, alphabet)


def serialize(value) -> str:
    if isinstance(value, GroupWord):
        lines = [("kind", "word"), ("alphabet", value.alphabet), ("letters", str(value))]
    elif isinstance(value, ClassCombo):
        alphabet = next((k.alphabet for k in value.terms), SURFACE)
        lines = [("kind", "classes"), ("alphabet", alphabet)]
        for k, c in sorted(value.terms.items(), key=lambda t: (len(t[0].letters), t[0].letters)):
            lines.append(("term", f"{format_rational(c)}\t{_letters_text(k.letters, k.alphabet)}"))
    elif isinstance(value, TensorElement):
        lines = [("kind", "tensor"), ("trunc", str(value.N)), ("value", format_tensor(value))]
    elif isinstance(value, TruncatedAutomorphism):
        lines = [("kind", "automorphism"), ("genus", str(value.genus)), ("trunc", str(value.N))]
        for i, y in enumerate(value.logs):
            lines.append(("log", f"{letter_label(i)}\t{format_tensor(y)}"))
    elif isinstance(value, DiagramCombo):
        lines = [("kind", "diagrams"), ("colors", str(value.q))]
        for d in sorted(value.parts):
            for k in sorted(value.parts[d], key=_sort_key):
                lines.append(("term", f"{format_rational(value.parts[d][k])}\t{diagram_string(k)}"))
    elif isinstance(value, TwistWord):
        lines = [("kind", "twist-word")]
        for r, w in value.factors:
            lines.append(("factor", f"{format_rational(r)}\t{format_letters(w, SURFACE)}"))
    else:
        raise TypeError(f"cannot serialize {type(value).__name__}")
    return "\n".join(f"{k}\t{v}" for k, v in lines) + "\n"


class _Lines:
    """Tokenized ``key<TAB>field<TAB>...`` lines with positions for errors."""

    def __init__(self, text: str):
        self.rows: List[Tuple[int, str, List[Tuple[int, str]]]] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            if not raw.strip():
                continue
            fields, col = [], 1
            for part in raw.split("\t"):
                fields.append((col, part))
                col += len(part) + 1
            key = fields[0][1].strip()
            self.rows.append((lineno, key, fields[1:]))
        if not self.rows:
            raise ParseError(1, 1, "empty input")

    def kind(self) -> str:
        lineno, key, fields = self.rows[0]
        if key != "kind" or len(fields) != 1:
            raise ParseError(lineno, 1, "first line must be 'kind<TAB>name'")
        col, name = fields[0]
        if name.strip() not in KINDS:
            raise ParseError(lineno, col, f"unknown kind {name.strip()!r}")
        return name.strip()

    def header(self, key: str, conv: Callable[[str], object] = str):
        for lineno, k, fields in self.rows[1:]:
            if k == key:
                if len(fields) != 1:
                    raise ParseError(lineno, 1, f"'{key}' takes one field")
                col, text = fields[0]
                try:
                    return conv(text.strip())
                except ValueError as exc:
                    raise ParseError(lineno, col, str(exc)) from None
        raise ParseError(self.rows[-1][0] + 1, 1, f"missing '{key}' line")

    def entries(self, key: str, width: int):
        for lineno, k, fields in self.rows[1:]:
            if k != key:
                continue
            if len(fields) != width:
                raise ParseError(lineno, 1, f"'{key}' takes {width} fields, found {len(fields)}")
            yield lineno, fields

    def check_keys(self, allowed: Sequence[str]):
        for lineno, k, _ in self.rows[1:]:
            if k not in allowed:
                raise ParseError(lineno, 1, f"unexpected key {k!r}")


def _int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ValueError(f"malformed integer {text!r}") from None


def _rational_at(lineno: int, field: Tuple[int, str]) -> Fraction:
    col, text = field
    try:
        return parse_rational(text)
    except SeriesError:
        raise ParseError(lineno, col, f"malformed rational {text.strip()!r}") from None


def _word_at(lineno: int, field: Tuple[int, str], alphabet: str):
    """Letters of a space-separated word, reporting the column of a bad token."""
    col, text = field
    letters = []
    pos = 0
    for tok in text.split(" "):
        if tok and tok != "1":
            try:
                x, alpha = parse_letter(tok)
            except WordSyntaxError:
                raise ParseError(lineno, col + pos, f"malformed letter {tok!r}") from None
            if alpha != alphabet:
                raise ParseError(lineno, col + pos, f"letter {tok!r} is not in alphabet {alphabet!r}")
            letters.append(x)
        pos += len(tok) + 1
    return tuple(letters)


def _tensor_at(lineno: int, field: Tuple[int, str], N: int) -> TensorElement:
    col, text = field
    try:
        return parse_tensor(text, N)
    except (TensorError, SeriesError) as exc:
        raise ParseError(lineno, col, str(exc)) from None


def _alphabet(text: str) -> str:
    if text not in (SURFACE, PANTS):
        raise ValueError(f"unknown alphabet {text!r}")
    return text


class _DiagramReader:
    """Recursive descent for ``(C—T)`` with T a letter or ``[T,T]``."""

    def __init__(self, text: str, lineno: int, col: int):
        self.s, self.i, self.lineno, self.col = text, 0, lineno, col

    def fail(self, msg):
        raise ParseError(self.lineno, self.col + self.i, msg)

    def expect(self, ch):
        if self.s[self.i:self.i + 1] != ch:
            self.fail(f"expected {ch!r}")
        self.i += 1

    def letter(self) -> int:
        j = self.i
        while j < len(self.s) and self.s[j].isalnum():
            j += 1
        tok = self.s[self.i:j]
        try:
            x = parse_tensor_letter(tok)
        except TensorError:
            self.fail(f"malformed tensor letter {tok!r}")
        self.i = j
        return x

    def tree(self):
        if self.s[self.i:self.i + 1] == "[":
            self.i += 1
            a = self.tree()
            self.expect(",")
            b = self.tree()
            self.expect("]")
            return (a, b)
        return self.letter()

    def diagram(self):
        self.expect("(")
        c = self.letter()
        self.expect(GLUE_SYMBOL)
        t = self.tree()
        self.expect(")")
        if self.i != len(self.s):
            self.fail("trailing characters after diagram")
        return c, t


def parse(text: str):
    rows = _Lines(text)
    kind = rows.kind()
    if kind == "word":
        rows.check_keys(("alphabet", "letters"))
        alphabet = rows.header("alphabet", _alphabet)
        for lineno, fields in rows.entries("letters", 1):
            return GroupWord(_word_at(lineno, fields[0], alphabet), alphabet)
        raise ParseError(rows.rows[-1][0] + 1, 1, "missing 'letters' line")
    if kind == "classes":
        rows.check_keys(("alphabet", "term"))
        alphabet = rows.header("alphabet", _alphabet)
        terms: Dict[ConjClass, Fraction] = {}
        for lineno, (cf, wf) in rows.entries("term", 2):
            k = ConjClass(_word_at(lineno, wf, alphabet), alphabet)
            terms[k] = terms.get(k, 0) + _rational_at(lineno, cf)
        return ClassCombo(terms)
    if kind == "tensor":
        rows.check_keys(("trunc", "value"))
        N = rows.header("trunc", _int)
        for lineno, fields in rows.entries("value", 1):
            return _tensor_at(lineno, fields[0], N)
        raise ParseError(rows.rows[-1][0] + 1, 1, "missing 'value' line")
    if kind == "automorphism":
        rows.check_keys(("genus", "trunc", "log"))
        g, N = rows.header("genus", _int), rows.header("trunc", _int)
        logs: Dict[int, TensorElement] = {}
        for lineno, (lf, vf) in rows.entries("log", 2):
            try:
                i = parse_tensor_letter(lf[1])
            except TensorError as exc:
                raise ParseError(lineno, lf[0], str(exc)) from None
            logs[i] = _tensor_at(lineno, vf, N)
        if sorted(logs) != list(range(2 * g)):
            raise ParseError(rows.rows[-1][0], 1, f"expected one 'log' line per generator, genus {g}")
        return TruncatedAutomorphism(g, [logs[i] for i in range(2 * g)])
    if kind == "diagrams":
        rows.check_keys(("colors", "term"))
        q = rows.header("colors", _int)
        raw = []
        for lineno, (cf, df) in rows.entries("term", 2):
            raw.append((_rational_at(lineno, cf), _DiagramReader(df[1].strip(), lineno, df[0]).diagram()))
        return reduce(raw, q)
    # twist-word
    rows.check_keys(("factor",))
    factors = []
    for lineno, (rf, wf) in rows.entries("factor", 2):
        factors.append((_rational_at(lineno, rf), _word_at(lineno, wf, SURFACE)))
    return TwistWord(tuple(factors))


# ---------------------------------------------------------------------------
# run configuration


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    genus: int = 1
    boundary: int = 1
    trunc: int = 5
    curve: Optional[str] = None
    x: Optional[str] = None
    y: Optional[str] = None
    r: str = "1/2"
    order: int = 3
    target: int = 2
    seed: int = 7
    name: Optional[str] = None
    input: Optional[str] = None
    output: Optional[str] = None

    def validate(self) -> "RunConfig":
        if self.genus < 0 or self.boundary < 1:
            raise UsageError("genus must be >= 0 and boundary >= 1")
        if self.genus == 0 and self.boundary != 3:
            raise UsageError("genus 0 is supported as the pair of pants (--boundary 3)")
        if self.trunc < 2:
            raise UsageError("--trunc must be at least 2")
        if self.order < 0:
            raise UsageError("--order must be non-negative")
        return self


def _surface(cfg: RunConfig):
    from .surface_loops import build_pants, build_surface
    if cfg.genus == 0:
        return build_pants()
    return build_surface(cfg.genus, cfg.boundary)


def _word_arg(text: Optional[str], flag: str, S) -> Tuple[int, ...]:
    if text is None:
        raise UsageError(f"{flag} is required")
    letters = []
    for tok in text.replace(",", " ").split():
        if tok == "1":
            continue
        try:
            x, alpha = parse_letter(tok)
        except WordSyntaxError:
            raise UsageError(f"{flag}: malformed letter {tok!r}") from None
        if alpha != S.alphabet or abs(x) > (4 if S.alphabet == PANTS else S.n_petals):
            raise UsageError(f"{flag}: letter {tok!r} is not a generator of this surface")
        letters.append(x)
    return tuple(letters)


def _rational_arg(text: str, flag: str) -> Fraction:
    try:
        return parse_rational(text)
    except SeriesError:
        raise UsageError(f"{flag}: malformed rational {text!r}") from None


def _need_one_boundary(cfg: RunConfig):
    if cfg.genus < 1 or cfg.boundary != 1:
        raise UsageError("this subcommand needs a surface with genus >= 1 and one boundary component")


# ---------------------------------------------------------------------------
# subcommands


def cmd_series(cfg: RunConfig) -> Tuple[int, str]:
    if cfg.name not in NAMED_SERIES:
        raise UsageError(f"--name must be one of {', '.join(NAMED_SERIES)}; got {cfg.name!r}")
    return 0, "\n".join(named_series(cfg.name, cfg.order).format_lines())


def cmd_expansion(cfg: RunConfig) -> Tuple[int, str]:
    _need_one_boundary(cfg)
    S = _surface(cfg)
    w = _word_arg(cfg.curve, "--curve", S)
    theta = exponential_expansion(cfg.genus, cfg.trunc)
    if cfg.name == "symplectic":
        theta = make_symplectic(theta)
    return 0, serialize(theta.log_of_word(w)).rstrip("\n")


def cmd_eta(cfg: RunConfig) -> Tuple[int, str]:
    from .surface_loops import eta_pairing
    S = _surface(cfg)
    return 0, str(eta_pairing(S, _word_arg(cfg.x, "--x", S), _word_arg(cfg.y, "--y", S)))


def cmd_sigma(cfg: RunConfig) -> Tuple[int, str]:
    from .surface_loops import sigma_action
    S = _surface(cfg)
    loop = ConjClass(_word_arg(cfg.x, "--x", S), S.alphabet)
    return 0, str(sigma_action(S, loop, _word_arg(cfg.y, "--y", S)))


def cmd_goldman(cfg: RunConfig) -> Tuple[int, str]:
    from .surface_loops import goldman_bracket
    S = _surface(cfg)
    x = ConjClass(_word_arg(cfg.x, "--x", S), S.alphabet)
    y = ConjClass(_word_arg(cfg.y, "--y", S), S.alphabet)
    return 0, serialize(goldman_bracket(S, x, y)).rstrip("\n")


def cmd_classical_twist(cfg: RunConfig) -> Tuple[int, str]:
    from .surface_loops import classical_twist_images
    _need_one_boundary(cfg)
    S = _surface(cfg)
    C = _word_arg(cfg.curve, "--curve", S)
    images = classical_twist_images(S, C)
    lines = [f"image\t{format_letters((i + 1,))}\t{format_letters(w)}" for i, w in enumerate(images)]
    return 0, "\n".join(lines)


def cmd_twist(cfg: RunConfig) -> Tuple[int, str]:
    from .twist_engine import generalized_twist
    _need_one_boundary(cfg)
    S = _surface(cfg)
    C = _word_arg(cfg.curve, "--curve", S)
    u = generalized_twist(S, C, _rational_arg(cfg.r, "--r"), cfg.trunc)
    return 0, serialize(u).rstrip("\n")


def cmd_diagram_log(cfg: RunConfig) -> Tuple[int, str]:
    from .twist_engine import diagram_log, generalized_twist
    _need_one_boundary(cfg)
    S = _surface(cfg)
    C = _word_arg(cfg.curve, "--curve", S)
    u = generalized_twist(S, C, _rational_arg(cfg.r, "--r"), cfg.trunc)
    theta = make_symplectic(exponential_expansion(cfg.genus, cfg.trunc))
    dl = diagram_log(u, theta, cfg.order)
    combo = DiagramCombo(2 * cfg.genus, {d: v.parts.get(d, {}) for d, v in dl.items()})
    return 0, serialize(combo).rstrip("\n")


def _read_input(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"--input: cannot read {path!r}: {exc.strerror}") from None
    try:
        return parse(text)
    except ParseError as exc:
        raise UsageError(f"--input {path}: {exc}") from None


def cmd_factorize(cfg: RunConfig) -> Tuple[int, str]:
    from .twist_factorization import approximate_by_twists
    _need_one_boundary(cfg)
    S = _surface(cfg)
    if cfg.input:
        value = _read_input(cfg.input)
        if isinstance(value, TwistWord):
            u = value.evaluate(S, cfg.trunc)
        elif isinstance(value, TruncatedAutomorphism):
            u = value
        else:
            raise UsageError("--input must hold a twist-word or an automorphism")
    elif cfg.curve:
        u = TwistWord(((_rational_arg(cfg.r, "--r"), _word_arg(cfg.curve, "--curve", S)),)).evaluate(S, cfg.trunc)
    else:
        from .acceptance import random_loop
        rng = random.Random(cfg.seed)
        factors = tuple((Fraction(rng.choice([-2, -1, 1, 2]), rng.randint(1, 4)), random_loop(cfg.genus, 4, rng))
                        for _ in range(3))
        u = TwistWord(factors).evaluate(S, cfg.trunc)
    word, report = approximate_by_twists(S, u, cfg.target)
    return 0, str(report) + "\n" + serialize(word).rstrip("\n")


def cmd_figure_eight(cfg: RunConfig) -> Tuple[int, str]:
    from .skein_shadow import figure_eight_report
    rep = figure_eight_report(cfg.order)
    return (0 if rep.all() else 1), str(rep)


def cmd_trace_check(cfg: RunConfig) -> Tuple[int, str]:
    from .skein_shadow import chebyshev_trace_check
    tc = chebyshev_trace_check(cfg.order)
    return (0 if tc.all() else 1), str(tc)


def cmd_verify_all(cfg: RunConfig) -> Tuple[int, str]:
    from .acceptance import AcceptanceConfig, run_all
    results = run_all(AcceptanceConfig(seed=cfg.seed, trunc=cfg.trunc))
    return (0 if all(r.ok for r in results) else 1), "\n".join(r.line() for r in results)


COMMANDS: Dict[str, Callable[[RunConfig], Tuple[int, str]]] = {
    "series": cmd_series,
    "expansion": cmd_expansion,
    "eta": cmd_eta,
    "sigma": cmd_sigma,
    "goldman": cmd_goldman,
    "classical-twist": cmd_classical_twist,
    "twist": cmd_twist,
    "diagram-log": cmd_diagram_log,
    "factorize": cmd_factorize,
    "figure-eight": cmd_figure_eight,
    "trace-check": cmd_trace_check,
    "verify-all": cmd_verify_all,
}


def run(cfg: RunConfig) -> Tuple[int, str]:
    """Exit status and report text; usage problems give status 2."""
    try:
        cfg.validate()
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        return 2, f"usage error: {exc}"
    except ValueError as exc:
        return 1, f"error: {type(exc).__name__}: {exc}"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gentwist", description="Generalized Dehn twists with exact arithmetic.")
    p.add_argument("subcommand", choices=sorted(COMMANDS))
    p.add_argument("--genus", type=int, default=1)
    p.add_argument("--boundary", type=int, default=1)
    p.add_argument("--trunc", type=int, default=5)
    p.add_argument("--curve")
    p.add_argument("--x")
    p.add_argument("--y")
    p.add_argument("--r", default="1/2")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--target", type=int, default=2)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--name")
    p.add_argument("--input")
    p.add_argument("--output")
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(**vars(args))
    status, text = run(cfg)
    if cfg.output and status != 2:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        stream = sys.stderr if status == 2 else sys.stdout
        stream.write(text + "\n")
    return status


if __name__ == "__main__":
    sys.exit(main())
