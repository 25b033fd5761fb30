"""Print oracle results next to the published benchmark values."""
import argparse

import numpy as np

from qlinsolve.benchmarks import (
    CONDITION_NUMBERS,
    EXACT_DIVISION_BOTH_SIGNS,
    ITERATED_DIVISION,
    ROUNDED_DIVISION,
    THREE_BY_THREE,
    TWO_BY_TWO,
)
from qlinsolve.division import DivisionProblem, iterate_division, solve_division
from qlinsolve.fixtures import get_fixture
from qlinsolve.linear_system import condition_number, solve_linear


def exact_division():
    print("exact division: y m | bits energy | quoted")
    for y, m, bits, e in EXACT_DIVISION_BOTH_SIGNS:
        r = solve_division(DivisionProblem(m, y))
        print(f"{y:6.2f} {m:5.2f} | {''.join(map(str, r.bits))} {r.scaled_energy:10.6f} | {''.join(map(str, bits))} {e}")


def rounded_division():
    print("rounded division: y m | x energy | quoted x energy")
    for y, m, x, quoted, _ in ROUNDED_DIVISION:
        r = solve_division(DivisionProblem(m, y))
        print(f"{y:6.2f} {m:4.1f} | {r.x:6.2f} {r.scaled_energy:10.6f} | {x:6.2f} {quoted}")


def iterated_division():
    print("iterated division: y m | quotient iterations | quoted")
    for y, m, q, n in ITERATED_DIVISION:
        t = iterate_division(y, m)
        print(f"{y:6.2f} {m:4.1f} | {t.solution:.7f} {len(t.records):3d} | {q:.7f} {n}")


def systems():
    print("linear systems: name | x scaled raw | quoted x energy")
    for name, (x, _, quoted, _) in TWO_BY_TWO.items():
        s = solve_linear(get_fixture(name).problem())
        print(f"{name} | {s.x} {s.scaled_energy:.6f} {s.raw_energy:.6f} | {x} {quoted}")
    for name, (x, quoted) in THREE_BY_THREE.items():
        s = solve_linear(get_fixture(name).problem())
        print(f"{name} | {s.x} {s.scaled_energy:.6f} {s.raw_energy:.6f} | {x} {quoted}")


def conditioning():
    print("condition numbers: name | singular-value ratio eigenvalue ratio | quoted")
    for name, k in CONDITION_NUMBERS.items():
        M = get_fixture(name).M
        print(f"{name} | {condition_number(M):.4f} {condition_number(M, 'eigen'):.4f} | {k}")


TABLES = {"exact": exact_division, "rounded": rounded_division, "iterated": iterated_division,
          "systems": systems, "kappa": conditioning}

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("tables", nargs="*", help=f"any of {', '.join(TABLES)} (default: all)")
    args = ap.parse_args()
    unknown = set(args.tables) - set(TABLES)
    if unknown:
        ap.error(f"unknown tables: {', '.join(sorted(unknown))}")
    np.set_printoptions(precision=4, suppress=True)
    for name in args.tables or TABLES:
        TABLES[name]()
        print()
