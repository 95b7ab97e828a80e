"""Regenerate the golden instance files in tests/golden from the CLI generators."""
from pathlib import Path

from herdisc.cli import run_command

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"

CASES = {
    "triangle.json": ["gen", "triangle"],
    "palvolgyi_2_2.json": ["gen", "palvolgyi", "--k", "2", "--l", "2"],
    "hoffman_2.json": ["gen", "hoffman", "--k", "2"],
    "hadamard_4.json": ["gen", "hadamard", "--order", "4"],
}


def main():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for name, argv in CASES.items():
        _, code = run_command(argv + ["--out", str(GOLDEN / name)], write=True)
        assert code == 0, name
        print(f"wrote {GOLDEN / name}")


if __name__ == "__main__":
    main()
