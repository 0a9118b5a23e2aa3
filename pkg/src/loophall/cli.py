"""Batch front end: canonical basis dumps, verification suites, and
finite field counting oracles.

Commands:
  canon   --class r,d --window n        write a canonical basis file
  verify  SUITE                         run one of the check suites
  oracle  {hall,coproduct,aut} ...      raw counting tables

Suites: relations, psi, coproduct, positivity, bar, appendix,
principal.  The principal suite is report-only and always exits 0;
every other suite exits 1 on a failed check.

Exit codes: 0 success, 1 failed required check, 2 usage error,
3 budget exhaustion.  Identical arguments always produce byte
identical output.
"""

import argparse
import csv
import io
import json
import sys

from .canonical import (bar_window, canonical_basis, closed_form_rank1,
                        closed_form_rank2, transition_matrix)
from .gfq import QSqrt
from .laurent import LaurentRat, q_int
from .loopalg import (KClass, e_element, multiply, pbw_sort_key, theta,
                      torsion_element)
from .principal import conjecture_report
from .quiver import (BudgetError, char_fn as quiver_char_fn, check_in_EH,
                     coproduct_bruteforce, e_fn, hall_product_bruteforce,
                     Multisegment, one_fn, u_sequence, zeta)
from .sheaves import (ClosedPoint, HallFn, SheafIso, aut_count, char_fn,
                      e_image, enumerate_sheaves, green_coproduct,
                      hall_number, hall_product, load_calibration,
                      psi_image, xi_image)
from .symfunc import schur

DEFAULT_Q = 4
DEFAULT_SEED = 0


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# argument and descriptor parsing


def _parse_class(text):
    try:
        r, d = (int(p) for p in text.split(','))
    except (ValueError, AttributeError):
        raise UsageError(f'bad class {text!r}: expected "r,d"')
    if r < 0:
        raise UsageError('rank must be nonnegative')
    return KClass(r, d)


def parse_sheaf(text, q):
    """Parse a sheaf descriptor: "+"-joined summands, each "O",
    "O(n)", or "T[pt:parts]" with pt either "inf" or the comma list of
    monic polynomial coefficients and parts a comma list."""
    vb = []
    torsion = []
    for part in text.replace(' ', '').split('+'):
        if part == 'O':
            vb.append(0)
        elif part.startswith('O(') and part.endswith(')'):
            try:
                vb.append(int(part[2:-1]))
            except ValueError:
                raise UsageError(f'bad twist in {part!r}')
        elif part.startswith('T[') and part.endswith(']'):
            try:
                ptdesc, parts = part[2:-1].split(':')
                lam = tuple(int(p) for p in parts.split(','))
                if ptdesc == 'inf':
                    pt = ClosedPoint(q, 'inf')
                else:
                    pt = ClosedPoint(q, tuple(int(c)
                                              for c in ptdesc.split(',')))
            except ValueError:
                raise UsageError(f'bad torsion summand {part!r}')
            torsion.append((pt, lam))
        else:
            raise UsageError(f'bad sheaf summand {part!r}')
    try:
        return SheafIso(vb, torsion)
    except ValueError as exc:
        raise UsageError(str(exc))


def _parse_split(text):
    try:
        a, b = text.split('/')
    except ValueError:
        raise UsageError(f'bad split {text!r}: expected "r,d/r,d"')
    return _parse_class(a), _parse_class(b)


# ---------------------------------------------------------------------------
# serialization


def _qsqrt_json(x):
    return [str(x.a), str(x.b)]


def _laurent_str(c):
    return repr(c)


def _emit(payload, table, fields, args):
    if args.format == 'csv':
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator='\n')
        writer.writeheader()
        for row in table:
            writer.writerow(row)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + '\n'
    if args.out:
        with open(args.out, 'w', newline='') as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# canon


def cmd_canon(args):
    if args.klass is None or args.window is None:
        raise UsageError('canon requires --class and --window')
    kclass = _parse_class(args.klass)
    basis = canonical_basis(kclass, args.window)
    monos, rows = transition_matrix(basis)
    payload = {
        'class': [kclass.rank, kclass.degree],
        'window': args.window,
        'basis': [ce.to_json() for ce in basis],
        'transition': {
            'monomials': [[list(m.e_part), list(m.torsion)] for m in monos],
            'rows': [[c.to_json() for c in row] for row in rows],
        },
    }
    table = []
    for i, ce in enumerate(basis):
        for m, c in ce.element.sorted_terms():
            table.append({'element': i,
                          'e_part': ';'.join(f'{t}^{d}' for t, d in m.e_part),
                          'torsion': ';'.join(str(p) for p in m.torsion),
                          'coefficient': _laurent_str(c)})
    _emit(payload, table, ['element', 'e_part', 'torsion', 'coefficient'],
          args)
    return 0


# ---------------------------------------------------------------------------
# verify suites


def _check(name, ok, detail=''):
    return {'name': name, 'status': 'PASS' if ok else 'FAIL',
            'detail': detail if not ok else ''}


def _suite_relations(args):
    q = args.q or DEFAULT_Q
    checks = []
    v2 = QSqrt.v_power(q, 2)
    for t1 in range(-3, 2):
        for t2 in range(-2, 2):
            lhs = (hall_product(e_image(q, t1 + 1), e_image(q, t2)).scale(v2)
                   - hall_product(e_image(q, t2), e_image(q, t1 + 1)))
            rhs = (hall_product(e_image(q, t1), e_image(q, t2 + 1))
                   - hall_product(e_image(q, t2 + 1),
                                  e_image(q, t1)).scale(v2))
            checks.append(_check(f'quadratic t1={t1} t2={t2} q={q}',
                                 lhs == rhs, f'lhs={lhs!r} rhs={rhs!r}'))
    two = QSqrt.from_laurent(q_int(2), q)
    for t in range(-2, 2):
        diff = (hall_product(xi_image(q, 1), e_image(q, t))
                - hall_product(e_image(q, t), xi_image(q, 1)))
        want = e_image(q, t + 1).scale(two)
        checks.append(_check(f'heisenberg t={t} q={q}', diff == want,
                             f'got={diff!r} want={want!r}'))
    return checks


def _psi_constant_value(x, q):
    """The common value of the image on its class, or None if the
    image is not a constant multiple of the full class indicator."""
    img = psi_image(x, q)
    vals = set(img.values.values())
    if len(vals) != 1:
        return None
    bound = max(max((s.torsion_degree() for s in img.values), default=1), 1)
    supp = set(enumerate_sheaves(x.kclass, q, bound, window=x.window))
    if set(img.values) != supp:
        return None
    return vals.pop()


def _suite_psi(args):
    q = args.q or DEFAULT_Q
    checks = []
    pairs = [(e_element(0, -2), e_element(1, -2)),
             (e_element(0, -2), torsion_element(schur((1,)), -2)),
             (torsion_element(schur((2,)), -2), e_element(-1, -2))]
    for i, (x, y) in enumerate(pairs):
        lhs = psi_image(multiply(x, y), q)
        rhs = hall_product(psi_image(x, q), psi_image(y, q))
        checks.append(_check(f'algebra-map pair {i} q={q}', lhs == rhs,
                             f'lhs={lhs!r} rhs={rhs!r}'))
    for t, w in [(0, -2), (1, -1)]:
        val = _psi_constant_value(closed_form_rank1(t, w), q)
        checks.append(_check(f'rank1 constant t={t} window={w} q={q}',
                             val is not None, 'image not constant'))
    val = _psi_constant_value(closed_form_rank2(-1, 'adjacent', -2), q)
    checks.append(_check(f'rank2 constant t=-1 window=-2 q={q}',
                         val is not None, 'image not constant'))
    return checks


def _suite_coproduct(args):
    q = args.q or DEFAULT_Q
    checks = []
    cop = green_coproduct(e_image(q, 0), split=(KClass(1, 0), KClass(0, 0)))
    want = {(s, SheafIso()): c for s, c in e_image(q, 0).values.items()}
    checks.append(_check(f'E0 (x) 1 term q={q}', cop == want,
                         f'got={cop!r}'))
    for l in range(0, 3):
        cop = green_coproduct(e_image(q, 0),
                              split=(KClass(0, l), KClass(1, -l)))
        th = psi_image(theta(l), q)
        el = e_image(q, -l)
        want = {(A, B): a * b for A, a in th.values.items()
                for B, b in el.values.items()}
        want = {k: c for k, c in want.items() if not c.is_zero()}
        checks.append(_check(f'theta_{l} (x) E_-{l} term q={q}',
                             cop == want, f'got={cop!r} want={want!r}'))
    return checks


def _small_bases(window):
    out = {}
    for kclass in [KClass(0, 1), KClass(0, 2), KClass(1, 0), KClass(1, -1)]:
        out[kclass] = canonical_basis(kclass, window)
    return out


def _expand_in_basis(x, basis):
    """Coefficients of x on the canonical elements, by unitriangular
    back substitution over the leading monomials."""
    by_lead = {ce.index: ce for ce in basis}
    coeffs = {}
    rem = x
    while not rem.is_zero():
        m = max(rem.coeffs, key=pbw_sort_key)
        ce = by_lead[m]
        c = rem.coeffs[m]
        coeffs[m] = c
        rem = rem - ce.element.scale(c)
    return coeffs


def _suite_positivity(args):
    window = -3
    max_rank = args.max_rank or 2
    bases = _small_bases(window)
    checks = []
    histogram = {}
    for k1, b1 in bases.items():
        for k2, b2 in bases.items():
            if k1.rank + k2.rank > max_rank:
                continue
            target = canonical_basis(k1 + k2, window)
            for ce1 in b1:
                for ce2 in b2:
                    prod = multiply(ce1.element, ce2.element)
                    coeffs = _expand_in_basis(prod, target)
                    ok = True
                    for c in coeffs.values():
                        for e, co in c.terms.items():
                            histogram[e] = histogram.get(e, 0) + 1
                            if co != int(co) or co < 0:
                                ok = False
                    checks.append(_check(
                        f'product {ce1.index} * {ce2.index}', ok,
                        f'coefficients {list(coeffs.values())!r}'))
    checks.append({'name': 'coefficient exponent histogram',
                   'status': 'PASS',
                   'detail': json.dumps(histogram, sort_keys=True)})
    return checks


def _suite_bar(args):
    window = -3
    checks = []
    for kclass in [KClass(0, 2), KClass(1, -1), KClass(1, 0), KClass(2, -3)]:
        basis = canonical_basis(kclass, window)
        for ce in basis:
            x = ce.element
            checks.append(_check(f'bar fixes {ce.index}',
                                 bar_window(x) == x, repr(x)))
        if basis:
            y = basis[0].element.scale(LaurentRat({1: 1, -2: 3}))
            checks.append(_check(f'involution on {kclass}',
                                 bar_window(bar_window(y)) == y, repr(y)))
    return checks


def _suite_appendix(args):
    q, n = 2, 2
    checks = []
    for r in (1, 2):
        f = one_fn(q, n, (r,) * n) - zeta(q, n, r)
        checks.append(_check(f'1_{r} - zeta_{r} in sum E_i H', check_in_EH(f),
                             repr(f)))
    u1, u2 = u_sequence(q, n, 2)
    cop = coproduct_bruteforce(u2, split=((1, 1), (1, 1)))
    w = quiver_char_fn(q, Multisegment(n, {(0, 2): 1})) - zeta(q, n, 1)
    want = {(a, b): va * vb for a, va in u1.values.items()
            for b, vb in w.values.items()}
    checks.append(_check('Delta(u_2) = u_1 (x) u_1-factor', cop == want,
                         f'got={cop!r}'))
    v = QSqrt.v_power(q, 1)
    comm = (hall_product_bruteforce(e_fn(q, n, 1), e_fn(q, n, 0))
            - hall_product_bruteforce(e_fn(q, n, 0), e_fn(q, n, 1))).scale(v)
    checks.append(_check('second factor is an E-commutator', w == comm,
                         f'got={w!r} want={comm!r}'))
    return checks


def _suite_principal(args):
    classes = [KClass(1, d) for d in range(-3, 0)]
    classes += [KClass(2, d) for d in (-5, -4)]
    rows = conjecture_report(classes, args.window
                             if args.window is not None else -5)
    return [{'name': 'class {},{} window {}'.format(*row['class'],
                                                    row['window']),
             'status': 'PASS',
             'detail': json.dumps(row, sort_keys=True)} for row in rows]


SUITES = {
    'relations': _suite_relations,
    'psi': _suite_psi,
    'coproduct': _suite_coproduct,
    'positivity': _suite_positivity,
    'bar': _suite_bar,
    'appendix': _suite_appendix,
    'principal': _suite_principal,
}


def cmd_verify(args):
    if args.suite not in SUITES:
        raise UsageError(f'unknown suite {args.suite!r}')
    load_calibration()
    checks = SUITES[args.suite](args)
    payload = {'suite': args.suite, 'checks': checks,
               'seed': args.seed if args.seed is not None else DEFAULT_SEED}
    table = [{'suite': args.suite, **c} for c in checks]
    _emit(payload, table, ['suite', 'name', 'status', 'detail'], args)
    if args.suite == 'principal':
        return 0
    return 0 if all(c['status'] == 'PASS' for c in checks) else 1


# ---------------------------------------------------------------------------
# oracle


def cmd_oracle(args):
    q = args.q or 2
    if args.sub == 'hall':
        if not (args.C and args.A and args.B):
            raise UsageError('oracle hall requires --C, --A and --B')
        C = parse_sheaf(args.C, q)
        A = parse_sheaf(args.A, q)
        B = parse_sheaf(args.B, q)
        if C.kclass() != A.kclass() + B.kclass():
            raise UsageError('class of C must be the sum of the classes '
                             'of A and B')
        n = hall_number(C, A, B, q)
        payload = {'oracle': 'hall', 'q': q, 'C': args.C, 'A': args.A,
                   'B': args.B, 'count': n}
        table = [{'oracle': 'hall', 'q': q, 'count': n}]
        _emit(payload, table, ['oracle', 'q', 'count'], args)
        return 0
    if args.sub == 'aut':
        if not args.sheaf:
            raise UsageError('oracle aut requires --sheaf')
        S = parse_sheaf(args.sheaf, q)
        n = aut_count(S, q)
        payload = {'oracle': 'aut', 'q': q, 'sheaf': args.sheaf, 'count': n}
        table = [{'oracle': 'aut', 'q': q, 'count': n}]
        _emit(payload, table, ['oracle', 'q', 'count'], args)
        return 0
    if args.sub == 'coproduct':
        if not (args.sheaf and args.split):
            raise UsageError('oracle coproduct requires --sheaf and --split')
        S = parse_sheaf(args.sheaf, q)
        split = _parse_split(args.split)
        if split[0] + split[1] != S.kclass():
            raise UsageError('split classes must sum to the sheaf class')
        cop = green_coproduct(char_fn(q, S), split)
        rows = sorted(((A.sort_key(), B.sort_key(), A, B, c)
                       for (A, B), c in cop.items()))
        payload = {'oracle': 'coproduct', 'q': q, 'sheaf': args.sheaf,
                   'split': args.split,
                   'terms': [[A.to_json(), B.to_json(), _qsqrt_json(c)]
                             for _, _, A, B, c in rows]}
        table = [{'oracle': 'coproduct', 'q': q, 'left': repr(A),
                  'right': repr(B), 'coefficient': repr(c)}
                 for _, _, A, B, c in rows]
        _emit(payload, table,
              ['oracle', 'q', 'left', 'right', 'coefficient'], args)
        return 0
    raise UsageError(f'unknown oracle {args.sub!r}')


# ---------------------------------------------------------------------------
# driver


def build_parser():
    parser = argparse.ArgumentParser(
        prog='loophall', description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest='command')

    def common(p):
        p.add_argument('--config', help='JSON file with default flags')
        p.add_argument('--format', choices=('json', 'csv'), default='json')
        p.add_argument('--out', help='output path (default stdout)')
        p.add_argument('--seed', type=int, default=None)
        p.add_argument('--q', type=int, default=None)
        p.add_argument('--budget', type=int, default=None)
        p.add_argument('--window', type=int, default=None)
        p.add_argument('--class', dest='klass', default=None,
                       help='K-class as "r,d"')

    p = sub.add_parser('canon', help='canonical basis of a class')
    common(p)
    p.set_defaults(func=cmd_canon)

    p = sub.add_parser('verify', help='run a verification suite')
    p.add_argument('suite', choices=sorted(SUITES))
    p.add_argument('--max-rank', type=int, default=None)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser('oracle', help='finite field counting tables')
    p.add_argument('sub', choices=('hall', 'coproduct', 'aut'))
    p.add_argument('--C', help='target sheaf descriptor')
    p.add_argument('--A', help='sub sheaf descriptor')
    p.add_argument('--B', help='quotient sheaf descriptor')
    p.add_argument('--sheaf', help='sheaf descriptor')
    p.add_argument('--split', help='coproduct split as "r,d/r,d"')
    common(p)
    p.set_defaults(func=cmd_oracle)
    return parser


def _apply_config(args):
    if not getattr(args, 'config', None):
        return
    with open(args.config) as fh:
        data = json.load(fh)
    if not isinstance(data, dict):
        raise UsageError('config file must hold a JSON object')
    alias = {'class': 'klass', 'max_rank': 'max_rank'}
    for key, val in data.items():
        dest = alias.get(key, key)
        if not hasattr(args, dest):
            raise UsageError(f'unknown config key {key!r}')
        if getattr(args, dest) is None:
            setattr(args, dest, val)


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        _apply_config(args)
        return args.func(args)
    except UsageError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f'error: {exc}', file=sys.stderr)
        return 2
    except BudgetError as exc:
        print(f'budget exhausted: {exc}', file=sys.stderr)
        return 3


if __name__ == '__main__':
    sys.exit(main())
