"""
Command-line front end.

    python main.py [global flags] COMMAND ...

Results go to stdout (plain text, or one JSON document with
--format structured); status lines go to stderr through logging.  Exit code
0 on success, 1 on a domain error (one `error: <reason>` line on stderr), 2
on a usage error.
"""

import argparse
import logging
import sys

import config
import formats
from automata import (compare_bounded, evaluate, find_negative_word, parse_word, word_str)
from constructions import (hat, hat_family, nfa_to_gamma, nfa_to_urk_family, star_extend, tilde,
                           tilde_family)
from counter_machines import (Halted, OutOfBudget, Stuck, build_checker, decode_word, encode_trace_word,
                              reduction_pipeline, run, validate)
from oracle import (brute_jsr_trunc, brute_min_word, brute_rho, brute_urk_set, make_rng,
                    random_automaton, random_family, random_matrix)
from semigroup_jsr import (certify_jsr_negative, closure_graph, jsr_exact_finite,
                           jsr_upper_bound_witness, jsr_witness_finite, normalized_closure,
                           urk_exact_finite, urk_upper_bound)
from spectral import critical_graph, growth_sequence, spectral_radius, ultimate_rank_matrix
from tropical_core import TropicalError, rational_str

logger = logging.getLogger("main")

COMMANDS = ("eval", "rho", "critical-graph", "urk", "jsr", "closure", "construct", "cm",
            "compare", "find-negative")

RUN_STATUS = {Halted: "halted", OutOfBudget: "out-of-budget", Stuck: "stuck"}


# ── output ────────────────────────────────────────────────────

def emit(args, text, data):
    if args.format == config.FORMAT_STRUCTURED:
        print(formats.dumps(data))
    else:
        print(text)


def emit_document(args, doc):
    """Documents go to -o when given, otherwise to stdout."""
    if getattr(args, "output", None):
        formats.write_json(doc, args.output)
        logger.info("WROTE: %s", args.output)
    else:
        print(formats.dumps(doc))


def _gen_word(word):
    return " ".join(f"g{i}" for i in word)


# ── per-matrix commands ───────────────────────────────────────

def cmd_rho(args):
    m = formats.load_matrix(args.file)
    rho = spectral_radius(m)
    if args.growth:
        seq = growth_sequence(m, args.growth)
        lines = [rational_str(rho)] + [f"{k}: {rational_str(v)}" for k, v in seq]
        emit(args, "\n".join(lines), {"rho": rational_str(rho),
                                      "growth": [[k, rational_str(v)] for k, v in seq]})
    else:
        emit(args, rational_str(rho), {"rho": rational_str(rho)})


def cmd_critical_graph(args):
    crit = critical_graph(formats.load_matrix(args.file))
    lines = [f"rho {rational_str(crit.rho)}"]
    lines += [f"{u + 1} -> {v + 1} {w}" for u, v, w in crit.edges]
    for k, (comp, c) in enumerate(crit.components, 1):
        members = ", ".join(str(v + 1) for v in sorted(comp))
        lines.append(f"scc {k}: {{{members}}} cyclicity {c}")
    emit(args, "\n".join(lines), {
        "rho": rational_str(crit.rho),
        "edges": [[u + 1, v + 1, w] for u, v, w in crit.edges],
        "components": [{"vertices": [v + 1 for v in sorted(comp)], "cyclicity": c}
                       for comp, c in crit.components],
    })


def cmd_urk(args):
    if args.exact or args.bound is not None:
        family = formats.load_family(args.file)
        if args.exact:
            value = urk_exact_finite(family, args.max_elements)
        else:
            value = urk_upper_bound(family, args.bound, args.max_elements)
    else:
        value = ultimate_rank_matrix(formats.load_matrix(args.file))
    emit(args, str(value), {"urk": value})


# ── semigroup commands ────────────────────────────────────────

def cmd_jsr(args):
    family = formats.load_family(args.file)
    if args.exact:
        value = jsr_exact_finite(family, args.max_elements)
        emit(args, rational_str(value), {"jsr": rational_str(value), "exact": True})
    elif args.witness:
        word, value = jsr_witness_finite(family, args.max_elements)
        emit(args, f"{rational_str(value)}\nwitness {_gen_word(word)}",
             {"jsr": rational_str(value), "witness": list(word)})
    elif args.bound is not None:
        value, word = jsr_upper_bound_witness(family, args.bound, args.max_elements)
        emit(args, f"<= {rational_str(value)}\nwitness {_gen_word(word)}",
             {"upper": rational_str(value), "witness": list(word), "max_len": args.bound})
    else:
        found = certify_jsr_negative(family, args.certify_negative, args.max_elements)
        if found is None:
            emit(args, f"no certificate up to length {args.certify_negative}",
                 {"certificate": None, "max_len": args.certify_negative})
        else:
            word, value = found
            emit(args, f"negative: rho(W)/|W| = {rational_str(value)}\nwitness {_gen_word(word)}",
                 {"certificate": list(word), "value": rational_str(value)})


def cmd_closure(args):
    family = formats.load_family(args.file)
    limit = args.max or args.max_elements
    if args.orbit:
        graph = closure_graph(family, limit)
        lines = [f"states {len(graph.states)}"]
        lines += [f"{k}: {' '.join(map(str, s))}" for k, s in enumerate(graph.states)]
        lines += [f"{s} -g{g}-> {t} offset {c}" for s, g, t, c in graph.edges]
        emit(args, "\n".join(lines), {"states": [list(s) for s in graph.states],
                                      "edges": [list(e) for e in graph.edges]})
        return
    closure = normalized_closure(family, limit)
    lines = [f"elements {len(closure)}"]
    for m, word in closure.elements.items():
        lines.append(f"{_gen_word(word)}: " + " ; ".join(formats.matrix_text(m).splitlines()))
    emit(args, "\n".join(lines), {
        "size": len(closure),
        "elements": [{"word": list(word), "matrix": formats.matrix_to_json(m)}
                     for m, word in closure.elements.items()],
    })


# ── automata commands ─────────────────────────────────────────

def cmd_eval(args):
    a = formats.load_automaton(args.automaton)
    value = evaluate(a, parse_word(args.word, a.alphabet))
    emit(args, rational_str(value), {"value": formats.dump_value(value)})


def cmd_find_negative(args):
    a = formats.load_automaton(args.automaton)
    found = find_negative_word(a, args.max_len_search, args.bottom_negative)
    if found is None:
        emit(args, f"none up to length {args.max_len_search}", {"word": None})
    else:
        word, value = found
        emit(args, f"{word_str(word)} {rational_str(value)}",
             {"word": list(word), "value": formats.dump_value(value)})


def cmd_compare(args):
    a = formats.load_automaton(args.a)
    b = formats.load_automaton(args.b)
    found = compare_bounded(a, b, args.max_len_search)
    if found is None:
        emit(args, f"f_A <= f_B up to length {args.max_len_search}", {"counterexample": None})
    else:
        word, fa, fb = found
        emit(args, f"{word_str(word)} {rational_str(fa)} > {rational_str(fb)}",
             {"counterexample": list(word), "a": formats.dump_value(fa), "b": formats.dump_value(fb)})


# ── constructions ─────────────────────────────────────────────

def cmd_construct(args):
    kind = args.kind
    if kind == "star":
        emit_document(args, formats.automaton_to_json(star_extend(formats.load_automaton(args.file))))
    elif kind in ("hat", "tilde"):
        lift, lift_family = (hat, hat_family) if kind == "hat" else (tilde, tilde_family)
        if formats.is_family_document(args.file):
            emit_document(args, formats.family_to_json(lift_family(formats.load_family(args.file))))
        else:
            emit_document(args, formats.matrix_to_json(lift(formats.load_matrix(args.file))))
    elif kind == "nfa-gamma":
        family = nfa_to_gamma(formats.load_nfa(args.file), args.minus_one)
        emit_document(args, formats.family_to_json(family))
    else:
        emit_document(args, formats.family_to_json(nfa_to_urk_family(formats.load_nfa(args.file))))


# ── counter machines ──────────────────────────────────────────

def _trace_lines(trace):
    conf = trace.initial
    lines = [f"{conf.state} ({conf.c1}, {conf.c2})"]
    for step in trace.steps:
        c = step.config
        lines.append(f"  {step.action} -> {c.state} ({c.c1}, {c.c2})")
    return lines


def _trace_json(trace):
    confs = [trace.initial] + [s.config for s in trace.steps]
    return {"actions": [s.action for s in trace.steps],
            "configurations": [[c.state, c.c1, c.c2] for c in confs]}


def cmd_cm(args):
    action = args.action
    if action == "decode":
        blocks = decode_word(parse_word(args.word, config.CHECKER_ALPHABET))
        emit(args, "\n".join(f"a^{na} b^{nb} {t}" for na, nb, t in blocks),
             {"blocks": [[na, nb, t] for na, nb, t in blocks]})
        return

    machine = formats.load_machine(args.file)
    if action == "validate":
        violations = validate(machine)
        emit(args, "\n".join(violations) if violations else "ok", {"violations": violations})
        if violations:
            raise TropicalError(f"{len(violations)} violation(s)")
    elif action == "run":
        result = run(machine, args.n1, args.n2, args.max_steps)
        status = RUN_STATUS[type(result)]
        trace = result.trace
        emit(args, "\n".join([status] + _trace_lines(trace)), {"status": status, **_trace_json(trace)})
    elif action == "encode":
        result = run(machine, args.n1, 0, args.max_steps)
        if not isinstance(result, Halted):
            raise TropicalError(f"machine does not halt from ({args.n1}, 0) within {args.max_steps} steps")
        word = encode_trace_word(result.trace)
        emit(args, " ".join(word), {"word": list(word)})
    elif action == "compile":
        emit_document(args, formats.automaton_to_json(build_checker(machine, args.n)))
    else:
        gamma7, gamma_hat = reduction_pipeline(machine, args.n)
        emit_document(args, formats.family_to_json(gamma7))
        if args.hat_output:
            formats.write_json(formats.family_to_json(gamma_hat), args.hat_output)
            logger.info("WROTE: %s", args.hat_output)


# ── oracle (debugging) ────────────────────────────────────────

def cmd_oracle(args):
    kind = args.kind
    rng = make_rng(args.seed)
    if kind == "rho":
        value = brute_rho(formats.load_matrix(args.file))
        emit(args, rational_str(value), {"rho": rational_str(value)})
    elif kind == "jsr-trunc":
        upper, per_length = brute_jsr_trunc(formats.load_family(args.file), args.length, args.budget)
        lines = [f"<= {rational_str(upper)}"]
        lines += [f"{k}: norm {rational_str(n)} rho {rational_str(r)}" for k, n, r in per_length]
        emit(args, "\n".join(lines), {
            "upper": rational_str(upper),
            "per_length": [[k, rational_str(n), rational_str(r)] for k, n, r in per_length]})
    elif kind == "min-word":
        a = formats.load_automaton(args.file)
        word, value = brute_min_word(a, args.length, args.bottom_negative, args.budget)
        emit(args, f"{word_str(word)} {rational_str(value)}",
             {"word": list(word), "value": formats.dump_value(value)})
    elif kind == "urk-set":
        value = brute_urk_set(formats.load_family(args.file), args.length, args.budget)
        emit(args, str(value), {"urk": value})
    elif kind == "random-matrix":
        m = random_matrix(rng, args.dim, -args.bound, args.bound, args.bottom_prob)
        emit(args, formats.matrix_text(m), formats.matrix_to_json(m))
    elif kind == "random-family":
        family = random_family(rng, args.dim, args.size, args.bound, args.bottom_prob)
        emit_document(args, formats.family_to_json(family))
    else:
        alphabet = tuple(args.alphabet.split(","))
        a = random_automaton(rng, alphabet, args.dim, -args.bound, args.bound, args.bottom_prob)
        emit_document(args, formats.automaton_to_json(a))


# ── parser ────────────────────────────────────────────────────

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="maxplus", description="Max-plus matrices, automata and semigroups.")
    parser.add_argument("--format", choices=(config.FORMAT_TEXT, config.FORMAT_STRUCTURED),
                        default=config.FORMAT_TEXT)
    parser.add_argument("--max-elements", type=int, default=config.DEFAULT_MAX_ELEMENTS,
                        help="closure / level size before giving up")
    parser.add_argument("--max-len", type=int, default=config.DEFAULT_MAX_LEN,
                        help="default length for bounded word searches")
    parser.add_argument("--budget", type=int, default=config.BRUTE_BUDGET,
                        help="enumeration budget of the oracle commands")
    parser.add_argument("--seed", type=int, default=config.DEFAULT_SEED)
    parser.add_argument("-v", "--verbose", action="count", default=0)
    sub = parser.add_subparsers(dest="command", metavar="{" + ",".join(COMMANDS) + "}")
    sub.required = True

    p = sub.add_parser("eval", help="f_A(w)")
    p.add_argument("-a", "--automaton", required=True)
    p.add_argument("-w", "--word", required=True)
    p.set_defaults(handler=cmd_eval)

    p = sub.add_parser("rho", help="spectral radius of a matrix")
    p.add_argument("file")
    p.add_argument("--growth", type=int, metavar="N", help="also print ||M^k||/k for k <= N")
    p.set_defaults(handler=cmd_rho)

    p = sub.add_parser("critical-graph", help="critical graph, SCCs and cyclicities")
    p.add_argument("file")
    p.set_defaults(handler=cmd_critical_graph)

    p = sub.add_parser("urk", help="ultimate rank of a matrix, or of a family with --exact/--bound")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--exact", action="store_true")
    group.add_argument("--bound", type=int, metavar="L")
    p.set_defaults(handler=cmd_urk)

    p = sub.add_parser("jsr", help="joint spectral radius of a family")
    p.add_argument("file")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--exact", action="store_true")
    group.add_argument("--witness", action="store_true")
    group.add_argument("--bound", type=int, metavar="L")
    group.add_argument("--certify-negative", type=int, metavar="L")
    p.set_defaults(handler=cmd_jsr)

    p = sub.add_parser("closure", help="normalized semigroup of a family")
    p.add_argument("file")
    p.add_argument("--max", type=int, metavar="N")
    p.add_argument("--orbit", action="store_true", help="orbit graph of the zero vector instead")
    p.set_defaults(handler=cmd_closure)

    p = sub.add_parser("construct", help="star / hat / tilde / nfa-gamma / nfa-urk")
    p.add_argument("kind", choices=("star", "hat", "tilde", "nfa-gamma", "nfa-urk"))
    p.add_argument("file")
    p.add_argument("--minus-one", action="store_true", help="nfa-gamma: replace -inf by -1")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_construct)

    p = sub.add_parser("cm", help="two-counter machines")
    cm = p.add_subparsers(dest="action")
    cm.required = True
    q = cm.add_parser("validate")
    q.add_argument("file")
    q = cm.add_parser("run")
    q.add_argument("file")
    q.add_argument("--n1", type=int, default=0)
    q.add_argument("--n2", type=int, default=0)
    q.add_argument("--max-steps", type=int, default=1000)
    q = cm.add_parser("encode")
    q.add_argument("file")
    q.add_argument("--n1", type=int, default=0)
    q.add_argument("--max-steps", type=int, default=1000)
    q = cm.add_parser("compile")
    q.add_argument("file")
    q.add_argument("--n", type=int, default=0)
    q.add_argument("-o", "--output")
    q = cm.add_parser("pipeline")
    q.add_argument("file")
    q.add_argument("--n", type=int, default=0)
    q.add_argument("-o", "--output")
    q.add_argument("--hat-output", metavar="FILE", help="also write the hat-lifted family")
    q = cm.add_parser("decode")
    q.add_argument("word")
    p.set_defaults(handler=cmd_cm)

    p = sub.add_parser("compare", help="first word with f_A(w) > f_B(w)")
    p.add_argument("-a", required=True)
    p.add_argument("-b", required=True)
    p.add_argument("-L", dest="max_len_search", type=int)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("find-negative", help="shortest word with f_A(w) < 0")
    p.add_argument("-a", "--automaton", required=True)
    p.add_argument("-L", dest="max_len_search", type=int)
    p.add_argument("--bottom-negative", action="store_true")
    p.set_defaults(handler=cmd_find_negative)

    # brute-force references for debugging; not listed in the usage line
    p = sub.add_parser("oracle")
    p.add_argument("kind", choices=("rho", "jsr-trunc", "min-word", "urk-set",
                                    "random-matrix", "random-family", "random-automaton"))
    p.add_argument("file", nargs="?")
    p.add_argument("-L", dest="length", type=int, default=4)
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--size", type=int, default=2)
    p.add_argument("--bound", type=int, default=2)
    p.add_argument("--bottom-prob", type=float, default=0.0)
    p.add_argument("--alphabet", default="a,b")
    p.add_argument("--bottom-negative", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=cmd_oracle)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 0 if e.code is None else e.code

    level = logging.WARNING if args.verbose == 0 else logging.INFO if args.verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(message)s", force=True)
    if getattr(args, "max_len_search", 0) is None:
        args.max_len_search = args.max_len

    if args.command == "oracle" and args.kind in ("rho", "jsr-trunc", "min-word", "urk-set") \
            and args.file is None:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: oracle {args.kind} needs a file", file=sys.stderr)
        return 2

    try:
        args.handler(args)
    except TropicalError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
