"""Plain-text instance and ranking files.

Instance layout::

    # comment lines start with '#'
    d n g k
    groups: <d group ids>
    alpha: <g rationals, decimal or p/q>
    beta: <g rationals>
    <n rankings, one per line, top first>
"""

from __future__ import annotations

from pathlib import Path

from .core import FairnessSpec, GroupedUniverse, Instance, InvalidInput, Ranking


def _content_lines(text: str) -> list[str]:
    out = []
    for line in text.splitlines():
        s = line.strip()
        if s and not s.startswith("#"):
            out.append(s)
    return out


def _tagged(line: str, tag: str) -> list[str]:
    head, sep, rest = line.partition(":")
    if not sep or head.strip() != tag:
        raise InvalidInput(f"expected '{tag}:' line, got {line!r}")
    return rest.split()


def parse_instance(text: str) -> Instance:
    lines = _content_lines(text)
    if len(lines) < 4:
        raise InvalidInput("instance file needs a header, groups, alpha and beta lines")
    try:
        d, n, g, k = (int(x) for x in lines[0].split())
        groups = [int(x) for x in _tagged(lines[1], "groups")]
    except ValueError as exc:
        raise InvalidInput(f"bad header: {exc}") from exc
    alphas = _tagged(lines[2], "alpha")
    betas = _tagged(lines[3], "beta")
    if len(groups) != d:
        raise InvalidInput(f"expected {d} group ids, got {len(groups)}")
    if len(alphas) != g or len(betas) != g:
        raise InvalidInput(f"expected {g} alpha and beta values")
    rows = lines[4:]
    if len(rows) != n:
        raise InvalidInput(f"header promises {n} rankings, found {len(rows)}")
    rankings = tuple(Ranking.parse(r) for r in rows)
    u = GroupedUniverse(tuple(groups), g)
    return Instance(u, FairnessSpec(tuple(alphas), tuple(betas), k), rankings)


def format_instance(inst: Instance, comment: str | None = None) -> str:
    u, spec = inst.universe, inst.spec
    lines = []
    if comment:
        lines.extend(f"# {c}" for c in comment.splitlines())
    lines.append(f"{u.d} {inst.n} {u.g} {spec.k}")
    lines.append("groups: " + " ".join(map(str, u.group_of)))
    lines.append("alpha: " + " ".join(map(str, spec.alphas)))
    lines.append("beta: " + " ".join(map(str, spec.betas)))
    lines.extend(str(r) for r in inst.rankings)
    return "\n".join(lines) + "\n"


def read_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


def write_instance(inst: Instance, path, comment: str | None = None) -> None:
    Path(path).write_text(format_instance(inst, comment))


def read_ranking(path) -> Ranking:
    lines = _content_lines(Path(path).read_text())
    if len(lines) != 1:
        raise InvalidInput(f"{path}: expected exactly one ranking, found {len(lines)} lines")
    return Ranking.parse(lines[0])
