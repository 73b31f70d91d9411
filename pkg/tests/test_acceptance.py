"""End-to-end acceptance matrix. Each test prints one PASS/FAIL line."""

import re
import time

import pytest

from ltlfrag.fastcheck import Label, classify_problem
from ltlfrag.formula import AND, NOT, OR, XOR
from ltlfrag.gadgets import exp_family
from ltlfrag.selftest import (
    ENGINE_FRAGMENTS,
    exhaustive_cnfs,
    random_cnfs,
    suite_automaton,
    suite_clones,
    suite_engine,
    suite_gadgets,
    suite_since,
)
from ltlfrag.semantics import minimal_witness

pytestmark = pytest.mark.slow

COLUMNS = "I N E V M L BF".split()
# One column per clone; "-" is a blank cell. NL/L/NP/PS mean NL-complete, in L, NP-hard, PSPACE-hard.
TABLE_TEXT = """
X      NL10 NL10 NL12 NL11 NP2  NL14 NPS
G      NL10 NL10 NL12 NL13 NP2  -    NPS
F      NL10 NL10 NP5  NL11 NP2  -    NPS
FG     NL10 NL10 NPc  NL13 NPc  -    NPS
FX     NL10 NL10 NPc  NL11 NPc  -    PST
GX     NL10 NL10 NL12 NP6  PS3  -    PST
FGX    NL10 NL10 NPc  NPc  PS1  -    PST
S      L15  L15  L15  L15  L15  L15  L15
SX     NP8  NP8  NP8  NP8  NP8  NP8  NP8
SG     NP8  NP8  NP8  NP8  PS4  NP8  PS4
SF     NL16 NP9  NP9  NL16 PS4  NP9  PS4
SFG    NPc  NPc  NPc  NPc  PSc  NPc  PSS
SFX    NPc  NPc  NPc  NPc  PSc  NPc  PST
SGX    NPc  NPc  NPc  NPc  PSc  NPc  PST
SFGX   NPc  NPc  NPc  NPc  PSc  NPc  PST
U      NP7  NPc  NPc  NPc  PS3  NPc  PST
"""
LABELS = {"NL": Label.NLComplete, "L": Label.InL, "NP": Label.NPHard, "PS": Label.PSpaceHard}
BASE_OF = {"I": [], "N": [NOT], "E": [AND], "V": [OR], "M": [AND, OR], "L": [XOR], "BF": [AND, NOT]}


def expected_table():
    out = {}
    for line in TABLE_TEXT.strip().splitlines():
        row, *cells = line.split()
        for col, cell in zip(COLUMNS, cells, strict=True):
            if cell == "-":
                out[row, col] = (Label.Open, None)
            else:
                head, source = re.fullmatch(r"(NL|L|NP|PS)(\w+)", cell).groups()
                out[row, col] = (LABELS[head], source)
    return out


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail, seconds):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {number} ({title}): {detail} [{seconds:.1f}s]")
    return emit


def test_1_table(report):
    t0 = time.perf_counter()
    expected = expected_table()
    wrong = []
    for (row, col), want in expected.items():
        # T = {U} and T = {U, S, X, F, G} both land on the last row
        rows = [set(row)] if row != "U" else [{"U"}, set("UXFGS")]
        for temporal in rows:
            got = classify_problem(temporal, BASE_OF[col])
            if (got.label, got.source) != want:
                wrong.append((row, col, str(got)))
    populated = sum(v[0] != Label.Open for v in expected.values())
    blank = len(expected) - populated
    secs = time.perf_counter() - t0
    ok = not wrong and populated == 106 and blank == 6 and secs < 1
    report(1, "table", ok, f"{populated} populated + {blank} open cells, {len(wrong)} mismatches", secs)
    assert ok, wrong[:5]


@pytest.mark.parametrize("engine", list(ENGINE_FRAGMENTS))
def test_2_engines_agree_with_oracle(engine, report):
    res = suite_engine(engine, 1000, seed=0)
    ok = res.ok and res.total >= 1000 and res.seconds < 60
    report(2, f"engine {engine}", ok, f"{res.total - len(res.failures)}/{res.total} agree", res.seconds)
    assert ok, res.failures[:3]


def test_3_reductions(report):
    cnfs = exhaustive_cnfs(3, 3) + random_cnfs(200, seed=0, max_vars=4)
    res = suite_gadgets(cnfs)
    ok = res.ok and res.seconds < 120
    report(3, "reductions", ok, f"{len(cnfs)} CNFs, {res.total - len(res.failures)}/{res.total} agree", res.seconds)
    assert ok, res.failures[:3]


def test_4_clones(report):
    res = suite_clones(500, seed=0)
    ok = res.ok and res.seconds < 10
    report(4, "clone classifier", ok, f"{res.total - len(res.failures)}/{res.total} checks", res.seconds)
    assert ok, res.failures[:3]


def test_5_exponential_witnesses(report):
    t0 = time.perf_counter()
    lengths = []
    for i in (1, 2, 3):
        g = exp_family(i)
        w = minimal_witness(g.formula, g.structure, g.start, cap=200)
        lengths.append(None if w is None else len(w))
    secs = time.perf_counter() - t0
    ok = (None not in lengths and lengths[0] < lengths[1] < lengths[2]
          and lengths[2] >= 2 * lengths[1] and secs < 120)
    report(5, "exponential witnesses", ok, f"minimal lengths {lengths}", secs)
    assert ok
    assert lengths == [3, 9, 21]


def test_6_since_at_start(report):
    res = suite_since(500, seed=0)
    ok = res.ok and res.seconds < 10
    report(6, "since triviality", ok, f"{res.total - len(res.failures)}/{res.total} agree", res.seconds)
    assert ok, res.failures[:3]


def test_7_normal_form_automaton(report):
    res = suite_automaton(500, seed=0)
    ok = res.ok and res.seconds < 10
    report(7, "normal-form automaton", ok, f"{res.total - len(res.failures)}/{res.total} {res.detail}", res.seconds)
    assert ok, res.failures[:3]
