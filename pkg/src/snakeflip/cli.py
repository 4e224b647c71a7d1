"""Command-line surface: construction, enumeration, verification, export."""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass
from itertools import product
from time import monotonic
from typing import Optional, Tuple

from .circuits import all_circuits, circuits_brute, word_context
from .flips import (apply_flip, canonical_of, cayley_check, explore_flip_graph,
                    find_flips, triangulation_hash)
from .polytope import is_unimodular
from .regularity import (RegularityError, conjecture_suite, folding_form,
                         height_function, is_regular, verify_local_folding)
from .posets import adjoin_bounds, build_snake_poset, filter_lattice, meet_irreducibles
from .twists import (TwistError, all_twists, commuting_square_check,
                     compose_twists, elementary_twist, identity_twist,
                     twist_circuit, twist_triangulation)
from .volumes import catalan, volume_brute, volume_recursive, volume_skew
from .words import (SnakeWord, WordError, connected_induced_subgraphs,
                    count_subgraphs_recursive, is_in_V, parse_word, word_graph)

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_BUDGET = 3


class UsageError(ValueError):
    """Raised for bad flags, config-file keys, or argument values."""


@dataclass(frozen=True)
class RunConfig:
    """One resolved invocation: command, inputs, budgets, output, threads."""

    command: str
    word: Optional[SnakeWord] = None
    conjecture: Optional[str] = None
    n: Optional[int] = None
    twist: Optional[Tuple[int, ...]] = None
    node: Optional[str] = None
    budget_nodes: int = 100000
    max_depth: Optional[int] = None
    time_budget: Optional[float] = None
    budget_steps: int = 2_000_000
    exhaustive: Optional[bool] = None
    max_len: int = 5
    format: str = 'text'
    output: Optional[str] = None
    threads: int = 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


_FORMATS = {
    'poset': ('text', 'json'),
    'volume': ('text', 'json'),
    'circuits': ('text', 'json'),
    'triangulate': ('text', 'json'),
    'flipgraph': ('text', 'json', 'dot'),
    'twist': ('text', 'json'),
    'regularity': ('text', 'json'),
    'conjectures': ('text', 'json'),
    'verify-all': ('text', 'json'),
}

_CONFIG_KEYS = {
    'word': str,
    'id': str,
    'n': int,
    'twist': str,
    'node': str,
    'budget_nodes': int,
    'max_depth': int,
    'time_budget': float,
    'budget_steps': int,
    'exhaustive': bool,
    'max_len': int,
    'format': str,
    'output': str,
    'threads': int,
}


def build_parser() -> _Parser:
    """Argument parser for the snakeflip command."""
    parser = _Parser(prog='snakeflip', description=__doc__)
    sub = parser.add_subparsers(dest='command', metavar='command')

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, add_help=True)
        p.error = parser.error
        p.add_argument('--config', help='key=value file; flags override it')
        p.add_argument('--format', choices=_FORMATS[name], default=None)
        p.add_argument('--output', default=None, help='write the artifact here')
        return p

    def add_word(p, required=False):
        p.add_argument('--word', default=None, required=required,
                       help="letters L/R; 'eps' for the empty word")

    def add_budgets(p):
        p.add_argument('--budget-nodes', type=int, default=None)
        p.add_argument('--max-depth', type=int, default=None)
        p.add_argument('--time-budget', type=float, default=None,
                       help='seconds; checked between search levels')

    def add_threads(p):
        p.add_argument('--threads', type=int, default=None)

    add_word(add('poset', 'poset, meet-irreducibles, ladder count'))
    add_word(add('volume', 'normalized volume of the order polytope'))
    add_word(add('circuits', 'oriented circuits of the vertex configuration'))
    add_word(add('triangulate', 'canonical triangulation'))
    p = add('flipgraph', 'breadth-first flip-graph exploration')
    add_word(p)
    add_budgets(p)
    add_threads(p)
    p = add('twist', 'twist group, or one twist applied to the canonical')
    add_word(p)
    p.add_argument('--twist', default=None, help='ladder indices, e.g. 1,3')
    p = add('regularity', 'regularity certificate for a triangulation')
    add_word(p)
    p.add_argument('--twist', default=None, help='ladder indices, e.g. 1,3')
    p.add_argument('--node', default=None, help='hash prefix within the component')
    add_budgets(p)
    add_threads(p)
    p = add('conjectures', 'experiment runner')
    add_word(p)
    p.add_argument('--id', dest='conjecture', default=None,
                   help='experiment id: 6.1, 6.2, 6.3, or 6.4')
    p.add_argument('--n', type=int, default=None)
    p.add_argument('--budget-nodes', type=int, default=None)
    p.add_argument('--budget-steps', type=int, default=None)
    p.add_argument('--exhaustive', action=argparse.BooleanOptionalAction, default=None)
    add_threads(p)
    p = add('verify-all', 'run every theorem check and print a summary table')
    p.add_argument('--max-len', type=int, default=None)
    add_threads(p)
    return parser


def _parse_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError('cannot read config file: %s' % exc)
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise UsageError('%s:%d: expected key=value' % (path, lineno))
        key, _, value = line.partition('=')
        key = key.strip().replace('-', '_')
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise UsageError('%s:%d: unknown key %r' % (path, lineno, key))
        kind = _CONFIG_KEYS[key]
        try:
            if kind is bool:
                if value.lower() not in ('true', 'false'):
                    raise ValueError(value)
                values[key] = value.lower() == 'true'
            else:
                values[key] = kind(value)
        except ValueError:
            raise UsageError('%s:%d: bad value %r for %s' % (path, lineno, value, key))
    return values


def _parse_mask(text: str) -> Tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(','))
    except ValueError:
        raise UsageError('twist mask must be comma-separated integers, got %r' % text)


def parse(argv) -> RunConfig:
    """Resolve argv, an optional config file, and the environment."""
    ns = build_parser().parse_args(argv)
    if ns.command is None:
        raise UsageError('a command is required')
    file_values = _parse_config_file(ns.config) if ns.config else {}

    def pick(key, default=None):
        flag = getattr(ns, key, None)
        if flag is not None:
            return flag
        if key in file_values:
            return file_values[key]
        return default

    threads = pick('threads')
    if threads is None:
        env = os.environ.get('SNAKEFLIP_THREADS')
        if env is not None:
            try:
                threads = int(env)
            except ValueError:
                raise UsageError('SNAKEFLIP_THREADS must be an integer, got %r' % env)
        else:
            threads = 1
    if threads < 1:
        raise UsageError('threads must be positive')

    word_text = pick('word')
    try:
        word = parse_word(word_text) if word_text is not None else None
    except WordError as exc:
        raise UsageError(str(exc))
    mask_value = pick('twist')
    mask = _parse_mask(mask_value) if isinstance(mask_value, str) else mask_value
    fmt = pick('format', 'text')
    if fmt not in _FORMATS[ns.command]:
        raise UsageError('format %r is not valid for %s' % (fmt, ns.command))
    config = RunConfig(
        command=ns.command,
        word=word,
        conjecture=pick('conjecture'),
        n=pick('n'),
        twist=mask,
        node=pick('node'),
        budget_nodes=pick('budget_nodes', 100000),
        max_depth=pick('max_depth'),
        time_budget=pick('time_budget'),
        budget_steps=pick('budget_steps', 2_000_000),
        exhaustive=pick('exhaustive'),
        max_len=pick('max_len', 5),
        format=fmt,
        output=pick('output'),
        threads=threads,
    )
    for name in ('budget_nodes', 'budget_steps', 'max_len'):
        if getattr(config, name) < 0:
            raise UsageError('%s must be nonnegative' % name)
    if config.max_depth is not None and config.max_depth < 0:
        raise UsageError('max_depth must be nonnegative')
    if config.time_budget is not None and config.time_budget <= 0:
        raise UsageError('time_budget must be positive')
    return config


def _emit(config: RunConfig, text: str) -> None:
    data = text if text.endswith('\n') else text + '\n'
    if config.output:
        with open(config.output, 'w') as fh:
            fh.write(data)
    else:
        sys.stdout.write(data)


def _emit_json(config: RunConfig, payload: dict) -> None:
    payload = dict(payload)
    payload['schema_version'] = SCHEMA_VERSION
    _emit(config, json.dumps(payload, indent=2, sort_keys=True))


def _require_word(config: RunConfig) -> SnakeWord:
    if config.word is None:
        raise UsageError('%s requires --word' % config.command)
    return config.word


def _twist_of(w: SnakeWord, mask: Tuple[int, ...]):
    tau = identity_twist(w)
    try:
        for i in mask:
            tau = compose_twists(tau, elementary_twist(w, i))
    except TwistError as exc:
        raise UsageError(str(exc))
    return tau


def _deadline(config: RunConfig) -> Optional[float]:
    if config.time_budget is None:
        return None
    return monotonic() + config.time_budget


def _cmd_poset(config: RunConfig) -> int:
    w = _require_word(config)
    phat = adjoin_bounds(build_snake_poset(w))
    q = meet_irreducibles(phat)
    vertices = len(filter_lattice(q).filters)
    ladders = max(1, len(w.runs()))
    if config.format == 'json':
        _emit_json(config, {
            'word': str(w),
            'phat': {'size': phat.size, 'covers': [list(c) for c in phat.covers]},
            'meet_irreducible': {'size': q.size, 'covers': [list(c) for c in q.covers]},
            'ladders': ladders,
            'vertices': vertices,
        })
    else:
        lines = [
            'word %s' % (str(w) or 'eps'),
            'phat size %d' % phat.size,
            'meet-irreducible size %d' % q.size,
            'ladders %d' % ladders,
            'vertices %d' % vertices,
        ]
        _emit(config, '\n'.join(lines))
    return EXIT_OK


def _cmd_volume(config: RunConfig) -> int:
    w = _require_word(config)
    volume = volume_recursive(w)
    if config.format == 'json':
        _emit_json(config, {'word': str(w), 'volume': volume})
    else:
        _emit(config, str(volume))
    return EXIT_OK


def _cmd_circuits(config: RunConfig) -> int:
    w = _require_word(config)
    circuits = all_circuits(w)
    if config.format == 'json':
        _emit_json(config, {
            'word': str(w),
            'count': len(circuits),
            'circuits': [{'plus': list(z.plus), 'minus': list(z.minus)}
                         for z in circuits],
        })
    else:
        lines = ['%d circuits' % len(circuits)]
        lines += ['+%s -%s' % (','.join(map(str, z.plus)), ','.join(map(str, z.minus)))
                  for z in circuits]
        _emit(config, '\n'.join(lines))
    return EXIT_OK


def _cmd_triangulate(config: RunConfig) -> int:
    w = _require_word(config)
    tri = canonical_of(w)
    digest = triangulation_hash(tri)
    unimodular = is_unimodular(tri)
    if config.format == 'json':
        _emit_json(config, {
            'word': str(w),
            'hash': digest,
            'simplex_count': len(tri.simplices),
            'simplices': [list(s) for s in tri.simplices],
            'unimodular': unimodular,
        })
    else:
        lines = ['hash %s' % digest,
                 'simplices %d' % len(tri.simplices),
                 'unimodular %s' % ('yes' if unimodular else 'no')]
        lines += [' '.join(map(str, s)) for s in tri.simplices]
        _emit(config, '\n'.join(lines))
    return EXIT_VERIFICATION if not unimodular else EXIT_OK


def _node_names(hashes):
    # prefixes stay stable across runs because they come from content hashes
    k = 12
    while len({h[:k] for h in hashes}) < len(hashes):
        k += 4
    return [h[:k] for h in hashes]


def _cmd_flipgraph(config: RunConfig) -> int:
    w = _require_word(config)
    graph = explore_flip_graph(canonical_of(w), all_circuits(w),
                               budget=config.budget_nodes, workers=config.threads,
                               max_depth=config.max_depth, deadline=_deadline(config))
    hashes = [triangulation_hash(t) for t in graph.nodes]
    if config.format == 'json':
        _emit_json(config, {
            'word': str(w),
            'node_count': len(graph.nodes),
            'edge_count': len(graph.edges),
            'partial': graph.partial,
            'nodes': hashes,
            'edges': [[a, b] for a, b, _ in graph.edges],
            'depths': list(graph.depths),
        })
    elif config.format == 'dot':
        names = _node_names(hashes)
        lines = ['graph flipgraph {']
        lines += ['  "%s";' % name for name in names]
        lines += ['  "%s" -- "%s";' % (names[a], names[b]) for a, b, _ in graph.edges]
        lines.append('}')
        _emit(config, '\n'.join(lines))
    else:
        lines = ['nodes %d' % len(graph.nodes),
                 'edges %d' % len(graph.edges),
                 'partial %s' % ('yes' if graph.partial else 'no')]
        _emit(config, '\n'.join(lines))
    return EXIT_BUDGET if graph.partial else EXIT_OK


def _cmd_twist(config: RunConfig) -> int:
    w = _require_word(config)
    if config.twist is None:
        twists = all_twists(w)
        if config.format == 'json':
            _emit_json(config, {
                'word': str(w),
                'ladders': max(1, len(w.runs())),
                'order': len(twists),
                'twists': [{'mask': sorted(t.ladder_mask),
                            'column_permutation': list(t.column_permutation)}
                           for t in twists],
            })
        else:
            lines = ['%d twists' % len(twists)]
            lines += ['mask %s perm %s'
                      % (','.join(map(str, sorted(t.ladder_mask))) or '-',
                         ' '.join(map(str, t.column_permutation)))
                      for t in twists]
            _emit(config, '\n'.join(lines))
        return EXIT_OK
    tau = _twist_of(w, config.twist)
    image = twist_triangulation(tau, canonical_of(w))
    payload = {
        'word': str(w),
        'mask': sorted(tau.ladder_mask),
        'column_permutation': list(tau.column_permutation),
        'valid': image.valid,
        'hash': triangulation_hash(image.triangulation),
        'simplices': [list(s) for s in image.triangulation.simplices],
    }
    if config.format == 'json':
        _emit_json(config, payload)
    else:
        lines = ['mask %s' % (','.join(map(str, payload['mask'])) or '-'),
                 'valid %s' % ('yes' if image.valid else 'no'),
                 'hash %s' % payload['hash']]
        lines += [' '.join(map(str, s)) for s in image.triangulation.simplices]
        _emit(config, '\n'.join(lines))
    return EXIT_OK if image.valid else EXIT_VERIFICATION


def _cmd_regularity(config: RunConfig) -> int:
    w = _require_word(config)
    tau = _twist_of(w, config.twist) if config.twist is not None else None
    if config.node is not None:
        graph = explore_flip_graph(canonical_of(w), all_circuits(w),
                                   budget=config.budget_nodes, workers=config.threads,
                                   max_depth=config.max_depth,
                                   deadline=_deadline(config))
        matches = [t for t in graph.nodes
                   if triangulation_hash(t).startswith(config.node)]
        if not matches:
            raise UsageError('no explored node has hash prefix %r' % config.node)
        if len(matches) > 1:
            raise UsageError('hash prefix %r is ambiguous' % config.node)
        tri = matches[0]
        certificate = None
    else:
        tri = canonical_of(w)
        certificate = True
    if tau is not None:
        image = twist_triangulation(tau, tri)
        if not image.valid:
            _emit(config, 'twist image is not a triangulation')
            return EXIT_VERIFICATION
        tri = image.triangulation
    folding = None
    if certificate is not None:
        folding = verify_local_folding(tri, height_function(w, tau))
    result = is_regular(tri, verify=True)
    payload = {
        'word': str(w),
        'mask': sorted(tau.ladder_mask) if tau is not None else [],
        'node': triangulation_hash(tri),
        'regular': result.regular,
        'slack': str(result.slack) if result.slack is not None else None,
        'constraints': result.constraints,
        'heights': [str(h) for h in result.heights.heights] if result.regular else None,
        'certificate': None if folding is None else
        {'verdict': folding.verdict, 'walls': len(folding.walls)},
    }
    if config.format == 'json':
        _emit_json(config, payload)
    else:
        lines = ['node %s' % payload['node'],
                 'regular %s' % ('yes' if result.regular else 'no')]
        if result.regular:
            lines.append('slack %s' % payload['slack'])
        if folding is not None:
            lines.append('certificate %s (%d walls)'
                         % ('yes' if folding.verdict else 'NO', len(folding.walls)))
        _emit(config, '\n'.join(lines))
    if folding is not None and not folding.verdict:
        return EXIT_VERIFICATION
    return EXIT_OK


def _flatten(prefix: str, value, out):
    if isinstance(value, dict):
        for key, inner in value.items():
            _flatten('%s%s.' % (prefix, key) if prefix else key + '.', inner, out)
        return
    out.append('%s %s' % (prefix.rstrip('.'), value))


def _cmd_conjectures(config: RunConfig) -> int:
    if config.conjecture is None:
        raise UsageError('conjectures requires --id')
    try:
        report = conjecture_suite(config.conjecture, word=config.word, n=config.n,
                                  budget_nodes=config.budget_nodes,
                                  workers=config.threads,
                                  exhaustive=config.exhaustive,
                                  budget_steps=config.budget_steps)
    except RegularityError as exc:
        raise UsageError(str(exc))
    payload = asdict(report)
    payload['id'] = config.conjecture
    if 'word' in payload:
        payload['word'] = str(payload['word'])
    if config.format == 'json':
        _emit_json(config, payload)
    else:
        lines = []
        _flatten('', payload, lines)
        _emit(config, '\n'.join(sorted(lines)))
    return EXIT_BUDGET if getattr(report, 'partial', False) else EXIT_OK


def _v_words(max_len: int):
    for n in range(max_len + 1):
        for letters in product('LR', repeat=n):
            w = SnakeWord(letters)
            if is_in_V(w):
                yield w


def _check_volumes(max_len: int) -> Tuple[str, int, bool]:
    bound = min(max_len, 8)
    ok = True
    cases = 0
    for n in range(bound + 1):
        for letters in product('LR', repeat=n):
            w = SnakeWord(letters)
            cases += 1
            ok = ok and volume_recursive(w) == volume_brute(w) == volume_skew(w)
    pell = [2, 5]
    while len(pell) <= bound:
        pell.append(2 * pell[-1] + pell[-2])
    for n in range(bound + 1):
        for first in 'LR':
            second = 'R' if first == 'L' else 'L'
            snake = SnakeWord(tuple((first if i % 2 == 0 else second)
                                    for i in range(n)))
            ladder = SnakeWord((first,) * n)
            ok = ok and volume_recursive(snake) == pell[n]
            ok = ok and volume_recursive(ladder) == catalan(n + 2)
    return 'all words len <= %d' % bound, cases, ok


def _check_circuits(max_len: int) -> Tuple[str, int, bool]:
    bound = min(max_len, 6)
    ok = True
    cases = 0
    for w in _v_words(bound):
        cases += 1
        ctx = word_context(w)
        gamma = all_circuits(w)
        ok = ok and set(gamma) == set(circuits_brute(ctx.config))
        graph = word_graph(w)
        ok = ok and len(gamma) == len(connected_induced_subgraphs(graph))
        ok = ok and len(gamma) == count_subgraphs_recursive(w)
    return 'V words len <= %d' % bound, cases, ok


def _check_flip_counts(max_len: int) -> Tuple[str, int, bool]:
    ok = True
    cases = 0
    for w in _v_words(max_len):
        cases += 1
        tri = canonical_of(w)
        moves = find_flips(tri, all_circuits(w))
        ok = ok and len(moves) == len(w) + 1
        for move in moves:
            image = apply_flip(tri, move)
            ok = ok and is_unimodular(image)
    return 'V words len <= %d' % max_len, cases, ok


def _check_cayley(max_len: int) -> Tuple[str, int, bool]:
    ns = [n for n in (2, 3, 4) if n - 1 <= max_len]
    ok = all(cayley_check(n) for n in ns)
    scope = 'ladders n in {%s}' % ','.join(map(str, ns)) if ns else 'skipped'
    return scope, len(ns), ok


def _check_twist_laws(max_len: int) -> Tuple[str, int, bool]:
    ok = True
    cases = 0
    for w in _v_words(max_len):
        cases += 1
        twists = all_twists(w)
        ladders = max(1, len(w.runs()))
        ok = ok and len(twists) == 2 ** ladders
        ok = ok and len({t.column_permutation for t in twists}) == len(twists)
        identity = identity_twist(w)
        circuits = all_circuits(w)
        circuit_set = set(circuits)
        for tau in twists:
            ok = ok and compose_twists(tau, tau) == identity
            ok = ok and {twist_circuit(tau, z) for z in circuits} == circuit_set
        for a in twists:
            for b in twists:
                ok = ok and compose_twists(a, b) == compose_twists(b, a)
    return 'V words len <= %d' % max_len, cases, ok


def _check_commuting_squares(max_len: int, threads: int) -> Tuple[str, int, bool]:
    words = [w for w in (parse_word(''), parse_word('LL'), parse_word('LR'))
             if len(w) <= max_len]
    ok = all(bool(commuting_square_check(w, workers=threads)) for w in words)
    scope = ', '.join(str(w) or 'eps' for w in words)
    return scope, len(words), ok


def _check_folding(max_len: int) -> Tuple[str, int, bool]:
    ok = True
    cases = 0
    for w in _v_words(max_len):
        cases += 1
        tri = canonical_of(w)
        for tau in all_twists(w):
            image = twist_triangulation(tau, tri)
            ok = ok and image.valid
            report = verify_local_folding(image.triangulation, height_function(w, tau))
            ok = ok and report.verdict
    base = parse_word('')
    tri = canonical_of(base)
    omega = height_function(base)
    s1, s2 = tri.simplices
    ok = ok and folding_form(tri.config, s1, 3, omega) == 6
    ok = ok and folding_form(tri.config, s2, 2, omega) == 6
    return 'V words len <= %d' % max_len, cases, ok


def _cmd_verify_all(config: RunConfig) -> int:
    max_len = config.max_len
    checks = [
        ('volume-agreement',) + _check_volumes(max_len),
        ('circuit-bijection',) + _check_circuits(max_len),
        ('flip-count',) + _check_flip_counts(max_len),
        ('cayley-graph',) + _check_cayley(max_len),
        ('twist-laws',) + _check_twist_laws(max_len),
        ('commuting-square',) + _check_commuting_squares(max_len, config.threads),
        ('folding-certificates',) + _check_folding(max_len),
    ]
    passed = all(ok for _, _, _, ok in checks)
    if config.format == 'json':
        _emit_json(config, {
            'max_len': max_len,
            'checks': [{'name': name, 'scope': scope, 'cases': cases, 'ok': ok}
                       for name, scope, cases, ok in checks],
            'passed': passed,
        })
    else:
        lines = ['%-22s %-22s %6s  %s' % ('check', 'scope', 'cases', 'status')]
        for name, scope, cases, ok in checks:
            lines.append('%-22s %-22s %6d  %s'
                         % (name, scope, cases, 'ok' if ok else 'FAIL'))
        lines.append('all checks passed' if passed else 'FAILED')
        _emit(config, '\n'.join(lines))
    return EXIT_OK if passed else EXIT_VERIFICATION


_COMMANDS = {
    'poset': _cmd_poset,
    'volume': _cmd_volume,
    'circuits': _cmd_circuits,
    'triangulate': _cmd_triangulate,
    'flipgraph': _cmd_flipgraph,
    'twist': _cmd_twist,
    'regularity': _cmd_regularity,
    'conjectures': _cmd_conjectures,
    'verify-all': _cmd_verify_all,
}


def run(config: RunConfig) -> int:
    """Execute one resolved invocation and return its exit code."""
    handler = _COMMANDS.get(config.command)
    if handler is None:
        raise UsageError('unknown command %r' % config.command)
    return handler(config)


def main(argv=None) -> int:
    """Console entry point."""
    try:
        config = parse(sys.argv[1:] if argv is None else argv)
        return run(config)
    except UsageError as exc:
        print('snakeflip: %s' % exc, file=sys.stderr)
        return EXIT_USAGE
    except (WordError, TwistError, RegularityError) as exc:
        print('snakeflip: %s' % exc, file=sys.stderr)
        return EXIT_USAGE
