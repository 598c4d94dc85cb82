from __future__ import annotations

import os
from contextlib import contextmanager
from pathlib import Path

import pytest

from kgaug.corpus import load_dataset
from kgaug.wordpiece import default_vocabulary

FIXTURES = Path(__file__).parent / "fixtures"

# Reference benchmark directories (not shipped; see README for layout).
DATA_ROOT = Path(os.environ.get("KGAUG_DATA_DIR", Path(__file__).parent.parent / "data"))


def reference_dataset(name: str) -> Path:
    path = DATA_ROOT / name
    if not path.is_dir():
        pytest.skip(
            f"reference dataset {name!r} not found under {DATA_ROOT} "
            "(set KGAUG_DATA_DIR; see README 'Reference datasets')"
        )
    return path


@pytest.fixture(scope="session")
def vocab():
    return default_vocabulary()


TINYKG_ENTITIES = [
    ("b1", "bank-NN-1", "sloping land beside a body of water"),
    ("b2", "bank-NN-2", "a financial institution that accepts deposits"),
    ("b3", "bank-VB-1", "tip laterally"),
    ("f1", "frock-NN-1", "a one-piece garment for a woman or girl"),
    ("f2", "frock-VB-1", "put a frock on"),
    ("q1", "quilt", "stitch or sew together; quilt the skirt"),
    ("r1", "raise", "move upwards; lift one's eyes"),
    ("t1", "tinsel-VB-2", "adorn with tinsel; snow flakes tinseled the trees"),
    ("n1", "nameonly", ""),
    ("d1", "delta point", "flat land where a river divides"),
]

TINYKG_RELATIONS = [
    ("hypernym", "hypernym of"),
    ("similar", "similar to"),
    ("derives", "derives from"),
]

TINYKG_SPLITS = {
    "train.txt": [
        ("b1", "hypernym", "d1"),
        ("b2", "similar", "b1"),
        ("f1", "hypernym", "d1"),
        ("q1", "derives", "f2"),
        ("r1", "similar", "t1"),
        ("n1", "hypernym", "b3"),
    ],
    "valid.txt": [
        ("b3", "similar", "r1"),
        ("f2", "derives", "q1"),
    ],
    "test.txt": [
        ("t1", "similar", "r1"),
        ("d1", "hypernym", "b1"),
    ],
}


def write_tinykg(target: Path) -> Path:
    target.mkdir(parents=True, exist_ok=True)
    with open(target / "entity2text.txt", "w", encoding="utf-8", newline="\n") as fh:
        for ident, name, desc in TINYKG_ENTITIES:
            fh.write(f"{ident}\t{name}, {desc}\n" if desc else f"{ident}\t{name}\n")
    with open(target / "relation2text.txt", "w", encoding="utf-8", newline="\n") as fh:
        for ident, text in TINYKG_RELATIONS:
            fh.write(f"{ident}\t{text}\n")
    for fname, rows in TINYKG_SPLITS.items():
        with open(target / fname, "w", encoding="utf-8", newline="\n") as fh:
            for h, r, t in rows:
                fh.write(f"{h}\t{r}\t{t}\n")
    return target


@pytest.fixture(scope="session")
def tinykg_dir(tmp_path_factory) -> Path:
    return write_tinykg(tmp_path_factory.mktemp("tinykg"))


@pytest.fixture(scope="session")
def tinykg(tinykg_dir):
    return load_dataset(tinykg_dir, "wn18rr")


@pytest.fixture(scope="session")
def pipeline50_dir() -> Path:
    return FIXTURES / "pipeline50"


@pytest.fixture(scope="session")
def pipeline50(pipeline50_dir):
    return load_dataset(pipeline50_dir, "generic")


# --- acceptance reporting ----------------------------------------------------

_ACCEPTANCE: list[tuple[str, str, str]] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL/SKIP line per acceptance criterion."""

    @contextmanager
    def runner(name: str):
        try:
            yield
        except pytest.skip.Exception as exc:
            _ACCEPTANCE.append((name, "SKIP", str(exc).split("\n")[0]))
            raise
        except BaseException as exc:
            _ACCEPTANCE.append((name, "FAIL", str(exc).split("\n")[0][:120]))
            raise
        else:
            _ACCEPTANCE.append((name, "PASS", ""))

    return runner


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status, detail in _ACCEPTANCE:
        line = f"{status:4s} {name}"
        if detail:
            line += f"  [{detail}]"
        terminalreporter.write_line(line)
