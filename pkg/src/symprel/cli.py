"""Command-line surface: deterministic JSON in, deterministic JSON out.

Exit codes: 0 success, 2 invalid input, 3 negative analytic verdict
(inequivalent pairs/relations, failed selftest), 4 undecided classification.
Output keys are sorted and scalars are exact strings, so identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys

from .canonical import (
    CanonicalRelation,
    Equivalent,
    Inequivalent,
    Undecided,
    block_normal_form,
    compose_canonical,
    decide_equivalence,
    factorize,
)
from .coiso import (
    CoisoPair,
    InvariantError,
    build_equivalence,
    canonical_invariants,
    elementary_invariants,
    is_elementary_type,
    normal_form_pair,
    pairs_equivalent,
)
from .linalg import LinalgError, Subspace
from .poly import poly_str
from .relations import Relation, compose, towber_signature
from .serial import (
    DocumentError,
    canonical_relation_doc,
    encode,
    map_doc,
    mat_to_lists,
    pair_doc,
    parse_document,
    relation_doc,
    scalar_to_str,
    subspace_doc,
)
from .symplectic import (
    SympSpace,
    SymplecticError,
    classify,
    darboux_basis,
    sp_rank,
    witt_artin,
)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NEGATIVE = 3
EXIT_UNDECIDED = 4


def _load(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"malformed JSON in {path}: {exc.msg}") from None


def _signature_json(sig) -> dict:
    return {
        "tau": {str(n): m for n, m in sig.tau_plain},
        "tau_plus": {str(n): m for n, m in sig.tau_plus},
        "plus_tau": {str(n): m for n, m in sig.plus_tau},
        "plus_tau_plus": {str(n): m for n, m in sig.plus_tau_plus},
        "invariant_factors": [[scalar_to_str(c) for c in p]
                              for p in sig.nonsingular_part],
        "invariant_factors_pretty": [poly_str(p) for p in sig.nonsingular_part],
    }


def _cmd_classify(args) -> tuple[dict, int]:
    first = parse_document(_load(args.input[0]))
    if isinstance(first, CoisoPair):
        out = {}
        for name, sub in (("a", first.a), ("b", first.b)):
            out[name] = {"class": classify(first.space, sub),
                         "rank": sp_rank(first.space, sub)}
        out["elementary_type"] = is_elementary_type(first)
        return out, EXIT_OK
    if isinstance(first, SympSpace):
        if len(args.input) != 2:
            raise DocumentError("classify needs a pair, or a space plus a subspace")
        sub = parse_document(_load(args.input[1]), "subspace")
        return {"class": classify(first, sub),
                "rank": sp_rank(first, sub)}, EXIT_OK
    raise DocumentError("classify expects a pair document or space + subspace")


def _cmd_invariants(args) -> tuple[dict, int]:
    value = parse_document(_load(args.input[0]))
    if isinstance(value, CanonicalRelation):
        from .canonical import coiso_pair_of

        value = coiso_pair_of(value)
    if not isinstance(value, CoisoPair):
        raise DocumentError("invariants expects a pair or canonical_relation")
    k = canonical_invariants(value)
    return {"k": list(k), "n": list(elementary_invariants(value)),
            "elementary_type": is_elementary_type(value)}, EXIT_OK


def _cmd_normal_form(args) -> tuple[dict, int]:
    value = parse_document(_load(args.input[0]))
    if isinstance(value, CoisoPair):
        n = elementary_invariants(value)
        model = normal_form_pair(n)
        return {"n": list(n), "normal_form": pair_doc(model)}, EXIT_OK
    if isinstance(value, CanonicalRelation):
        bnf = block_normal_form(value)
        dims = value.source.dim
        return {
            "lambda_block": mat_to_lists(bnf.lambda_rows),
            "delta_block": mat_to_lists(bnf.delta_rows),
            "l0_block": mat_to_lists(bnf.l0_rows),
            "phi0": mat_to_lists(bnf.phi0),
            "phi0_is_normal_form": bnf.phi0_is_normal_form,
            "ambient_dim": dims,
        }, EXIT_OK
    raise DocumentError("normal-form expects a pair or canonical_relation")


def _cmd_equivalence(args) -> tuple[dict, int]:
    left = parse_document(_load(args.input[0]))
    right = parse_document(_load(args.input[1]))
    if isinstance(left, CoisoPair) and isinstance(right, CoisoPair):
        if left.space.dim == right.space.dim and pairs_equivalent(left, right):
            s = build_equivalence(left, right)
            return {"equivalent": True, "map": map_doc(s)}, EXIT_OK
        return {"equivalent": False, "witness": "canonical_invariants",
                "left": list(canonical_invariants(left)),
                "right": list(canonical_invariants(right))}, EXIT_NEGATIVE
    if isinstance(left, CanonicalRelation) and isinstance(right, CanonicalRelation):
        verdict = decide_equivalence(left, right)
        if isinstance(verdict, Equivalent):
            return {"verdict": "equivalent", "map": map_doc(verdict.map)}, EXIT_OK
        if isinstance(verdict, Inequivalent):
            return {"verdict": "inequivalent", "witness": verdict.invariant,
                    "left": _json_ready(verdict.left),
                    "right": _json_ready(verdict.right)}, EXIT_NEGATIVE
        problem = verdict.problem
        return {"verdict": "undecided",
                "reduced_problem": {
                    "phi": mat_to_lists(problem.phi.matrix),
                    "phi_hat": mat_to_lists(problem.phi_hat.matrix),
                    "blocks": [mat_to_lists(m) for m in problem.blocks],
                    "blocks_hat": [mat_to_lists(m) for m in problem.blocks_hat],
                    "towber": _signature_json(problem.towber),
                    "towber_hat": _signature_json(problem.towber_hat),
                }}, EXIT_UNDECIDED
    raise DocumentError("equivalence expects two pairs or two canonical_relations")


def _json_ready(value):
    if isinstance(value, tuple):
        return [_json_ready(v) for v in value]
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


def _cmd_compose(args) -> tuple[dict, int]:
    outer = parse_document(_load(args.input[0]))
    inner = parse_document(_load(args.input[1]))
    if isinstance(outer, CanonicalRelation) and isinstance(inner, CanonicalRelation):
        return canonical_relation_doc(compose_canonical(outer, inner)), EXIT_OK
    if isinstance(outer, Relation) and isinstance(inner, Relation):
        return relation_doc(compose(outer, inner)), EXIT_OK
    raise DocumentError("compose expects two relations or two canonical_relations")


def _cmd_factorize(args) -> tuple[dict, int]:
    value = parse_document(_load(args.input[0]), "canonical_relation")
    fact = factorize(value)
    return {
        "domain": subspace_doc(fact.a),
        "range": subspace_doc(fact.b),
        "reduced_dim": fact.reduced_a.dim,
        "induced_matrix": mat_to_lists(fact.induced.matrix),
        "rho_a": mat_to_lists(fact.rho_a.rho),
        "rho_b": mat_to_lists(fact.rho_b.rho),
    }, EXIT_OK


def _cmd_towber(args) -> tuple[dict, int]:
    value = parse_document(_load(args.input[0]), "relation")
    return _signature_json(towber_signature(value)), EXIT_OK


def _cmd_witt_artin(args) -> tuple[dict, int]:
    space = parse_document(_load(args.input[0]), "space")
    sub = parse_document(_load(args.input[1]), "subspace")
    wa = witt_artin(space, sub)
    return {name: subspace_doc(part) for name, part in
            (("w", wa.w), ("e", wa.e), ("f", wa.f), ("k", wa.k),
             ("kprime", wa.kprime))}, EXIT_OK


def _cmd_darboux(args) -> tuple[dict, int]:
    space = parse_document(_load(args.input[0]), "space")
    basis = darboux_basis(space)
    return {"q": [[scalar_to_str(x) for x in v] for v in basis.q_vectors()],
            "p": [[scalar_to_str(x) for x in v] for v in basis.p_vectors()]},\
        EXIT_OK


def _cmd_gen(args) -> tuple[dict, int]:
    from .testkit import (
        Rng,
        random_canonical_relation,
        random_coisotropic_pair,
        random_relation_sum,
        random_symplectic_map,
    )
    from .symplectic import standard_space

    params = _load(args.input[0])
    if not isinstance(params, dict) or params.get("kind") != "gen":
        raise DocumentError("gen expects a parameter document of kind 'gen'")
    what = params.get("what")
    rng = Rng(args.seed)
    if what == "pair":
        draw = random_coisotropic_pair(_int_list(params, "n", 5), rng)
        return {"document": pair_doc(draw.pair),
                "ground_truth": {"n": list(draw.invariants)}}, EXIT_OK
    if what == "canonical_relation":
        draw = random_canonical_relation(_int_list(params, "n", 5), rng)
        return {"document": canonical_relation_doc(draw.relation),
                "ground_truth": {"n": list(draw.invariants),
                                 "phi0": mat_to_lists(draw.phi0)}}, EXIT_OK
    if what == "relation_sum":
        blocks = params.get("blocks")
        if not isinstance(blocks, list) or any(
                not isinstance(b, list) or len(b) != 2 for b in blocks):
            raise DocumentError("blocks must be a list of [kind, n] pairs")
        from .serial import scalar_from_str

        factors = tuple(tuple(scalar_from_str(c) for c in f)
                        for f in params.get("factors", []))
        draw = random_relation_sum([(b[0], b[1]) for b in blocks], factors, rng)
        return {"document": relation_doc(draw.relation),
                "ground_truth": _signature_json(draw.signature)}, EXIT_OK
    if what == "symplectic_map":
        dim = params.get("dim")
        if not isinstance(dim, int) or dim < 0 or dim % 2:
            raise DocumentError("symplectic_map generation needs an even dim")
        steps = params.get("steps", dim + 2)
        if not isinstance(steps, int) or steps < 0:
            raise DocumentError("steps must be a nonnegative integer")
        s = random_symplectic_map(standard_space(dim // 2), rng, steps)
        return {"document": map_doc(s), "ground_truth": {"steps": steps}}, EXIT_OK
    raise DocumentError(f"unknown generation target: {what!r}")


def _int_list(params, key, length) -> tuple:
    v = params.get(key)
    if not isinstance(v, list) or len(v) != length or any(
            not isinstance(x, int) or isinstance(x, bool) or x < 0 for x in v):
        raise DocumentError(f"{key!r} must be a list of {length} nonnegative ints")
    return tuple(v)


def _cmd_selftest(args) -> tuple[dict, int]:
    from .selftest import run_selftest

    report = run_selftest(args.seed, args.size)
    return report, EXIT_OK if report["ok"] else EXIT_NEGATIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="symprel",
        description="Exact symplectic linear algebra: coisotropic pairs, "
                    "linear relations and canonical relations.")
    parser.add_argument("--output", help="write the JSON result to this path")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, handler, nargs, help_text):
        p = sub.add_parser(name, help=help_text)
        if nargs:
            p.add_argument("input", nargs=nargs,
                           help="input document path(s); '-' reads stdin")
        p.set_defaults(handler=handler)
        return p

    add("classify", _cmd_classify, "+",
        "classify subspaces (pair document, or space + subspace)")
    add("invariants", _cmd_invariants, 1,
        "canonical and elementary invariants of a pair")
    add("normal-form", _cmd_normal_form, 1,
        "normal form of a pair, or block form of a canonical relation")
    add("equivalence", _cmd_equivalence, 2,
        "decide equivalence of two pairs or two canonical relations")
    add("compose", _cmd_compose, 2,
        "compose two relations (first argument is applied second)")
    add("factorize", _cmd_factorize, 1,
        "reduction / symplectomorphism / coreduction factorization")
    add("towber", _cmd_towber, 1,
        "complete conjugation invariants of an endo relation")
    add("witt-artin", _cmd_witt_artin, 2,
        "Witt-Artin decomposition (space + subspace)")
    add("darboux", _cmd_darboux, 1, "deterministic symplectic basis")
    gen = add("gen", _cmd_gen, 1, "generate seeded instances (parameter doc)")
    gen.add_argument("--seed", type=int, required=True)
    st = add("selftest", _cmd_selftest, None, "run the seeded property battery")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--size", choices=("small", "medium"), default="small")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, code = args.handler(args)
    except (DocumentError, LinalgError, SymplecticError, InvariantError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    text = json.dumps(result, sort_keys=True, separators=(",", ":")) + "\n"
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
