"""``ndotp`` command line.

Exit status: 0 on success, 1 for usage, I/O or format errors, 2 when a
ciphertext fails its integrity checks.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import experiments
from .envelope import (
    CipherEnvelope,
    PipelineParams,
    decrypt_message,
    encrypt_message,
    key_from_bytes,
    key_to_bytes,
    keygen,
)
from .errors import IntegrityFailure, NdotpError
from .perm import SeededStream
from .precondition import make_config, max_block_size
from .radix import BitMessage, capacity_bits

log = logging.getLogger("ndotp")

EXIT_OK, EXIT_USAGE, EXIT_INTEGRITY = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path):
    with open(path, "rb") as fh:
        return fh.read()


def _write(path, data):
    with open(path, "wb") as fh:
        fh.write(data)


def cmd_keygen(args):
    if args.seed is not None:
        log.warning("--seed makes the key reproducible by anyone who knows the seed; use it for tests only")
        entropy = SeededStream(bytes.fromhex(args.seed))
    else:
        entropy = os.urandom
    _write(args.out, key_to_bytes(keygen(args.nu, entropy)))
    return EXIT_OK


def cmd_encrypt(args):
    marker = args.key + ".used"
    if os.path.exists(marker) and not args.i_know_this_breaks_secrecy:
        log.error("key %s was already used for encryption; refusing to reuse a one-time pad", args.key)
        return EXIT_USAGE
    key = key_from_bytes(_read(args.key))
    params = PipelineParams(args.nu_plain, args.redundancy)
    env = encrypt_message(BitMessage.from_bytes(_read(args.inp)), key, params)
    _write(args.out, env.to_bytes())
    with open(marker, "w") as fh:
        fh.write("used\n")
    return EXIT_OK


def cmd_decrypt(args):
    key = key_from_bytes(_read(args.key))
    env = CipherEnvelope.from_bytes(_read(args.inp))
    _write(args.out, decrypt_message(env, key).to_bytes())
    return EXIT_OK


def params_rows(nu_max, every=False):
    """``(n, nu, s_max, factors)`` for each order where ``s_max`` first reaches a new value."""
    best = 0
    for nu in range(2, nu_max + 1):
        s = max_block_size(nu)
        if s and (every or s > best):
            yield capacity_bits(nu), nu, s, make_config(nu, s).factors
        best = max(best, s)


def cmd_params(args):
    out = sys.stdout
    out.write("n\tnu\ts_max\tfactors\n")
    for n, nu, s, factors in params_rows(args.nu_max, args.all):
        out.write(f"{n}\t{nu}\t{s}\t{','.join(map(str, factors))}\n")
    return EXIT_OK


def cmd_experiment(args):
    if args.name == "diff-metric":
        h = experiments.diff_metric_experiment(args.nu, args.samples, args.seed, args.workers, digit=args.digit)
        summary = f"mean distance {h.mean():.4f} over {h.total} samples (random pairs: {experiments.expected_random_distance(args.nu):.4f})"
        svg_kw = {"title": f"Cayley distance after re-drawing derivative digit {args.digit}, nu={args.nu}"}
    else:
        h = experiments.pfi_penetration_experiment(
            args.n, args.k, args.plaintexts, args.triples, args.seed, args.workers, args.dedup
        )
        surv = h.survival()
        summary = " ".join(f"depth>={d}:{r:.3g}" for d, r in zip(h.bins, surv))
        svg_kw = {
            "title": f"penetration depth, n={args.n} k={args.k}",
            "log60": True,
            "baseline": experiments.random_baseline_rates(args.n, args.k),
        }
    experiments.emit_csv(h, args.csv)
    if args.svg:
        experiments.emit_svg(h, args.svg, **svg_kw)
    print(summary)
    return EXIT_OK


def build_parser():
    p = _Parser(prog="ndotp", description="Non-degenerate one-time pad with permutation redundancy")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    kg = sub.add_parser("keygen", help="generate a single-use key file")
    kg.add_argument("--nu", type=int, required=True)
    kg.add_argument("--out", required=True)
    kg.add_argument("--seed", help="hex seed for a deterministic TEST key")
    kg.set_defaults(func=cmd_keygen)

    enc = sub.add_parser("encrypt")
    enc.add_argument("--key", required=True)
    enc.add_argument("--nu-plain", type=int, required=True)
    enc.add_argument("--redundancy", type=int, required=True)
    enc.add_argument("--in", dest="inp", required=True)
    enc.add_argument("--out", required=True)
    enc.add_argument("--i-know-this-breaks-secrecy", action="store_true", help="allow reusing a key")
    enc.set_defaults(func=cmd_encrypt)

    dec = sub.add_parser("decrypt")
    dec.add_argument("--key", required=True)
    dec.add_argument("--in", dest="inp", required=True)
    dec.add_argument("--out", required=True)
    dec.set_defaults(func=cmd_decrypt)

    par = sub.add_parser("params", help="print admissible preconditioning parameters as TSV")
    par.add_argument("--nu-max", type=int, required=True)
    par.add_argument("--all", action="store_true", help="one row per order instead of one per new s_max")
    par.set_defaults(func=cmd_params)

    ex = sub.add_parser("experiment")
    exsub = ex.add_subparsers(dest="name", required=True, parser_class=_Parser)
    dm = exsub.add_parser("diff-metric")
    dm.add_argument("--nu", type=int, default=95)
    dm.add_argument("--samples", type=int, default=10_000)
    dm.add_argument("--digit", type=int, default=0, help="derivative digit to re-draw")
    pf = exsub.add_parser("pfi-depth")
    pf.add_argument("--n", type=int, default=50)
    pf.add_argument("--k", type=int, default=10)
    pf.add_argument("--plaintexts", type=int, default=1000)
    pf.add_argument("--triples", default="sampled:10000")
    pf.add_argument("--dedup", action="store_true", help="one ordered triple per 3-cycle in exhaustive mode")
    for e in (dm, pf):
        e.add_argument("--seed", type=int, default=0)
        e.add_argument("--workers", type=int, default=1)
        e.add_argument("--csv", required=True)
        e.add_argument("--svg")
        e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    try:
        return args.func(args)
    except IntegrityFailure as exc:
        log.error("integrity check failed (%s): %s", exc.stage, exc)
        return EXIT_INTEGRITY
    except (NdotpError, ValueError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
