"""Derivation size against input length, before and after repair."""

from redos_repair.matcher import time
from redos_repair.parser import parse

cases = {
    "(?:a*)*": lambda n: "a" * n + "b",
    r"(a*)\1": lambda n: "a" * n + "b",
    ".*.*=.*": lambda n: "=" * n,
    "[^=]*=.*": lambda n: "=" * n,
    "(a|aa)*c": lambda n: "a" * n,
}

sizes = [4, 8, 12, 16]
print(f"{'regex':<12}" + "".join(f"{n:>12}" for n in sizes))
for text, gen in cases.items():
    r = parse(text)
    row = []
    for n in sizes:
        row.append(time(r, gen(n)))
    print(f"{text:<12}" + "".join(f"{x:>12}" for x in row))

print("\nper character at n=128 and n=1024 for [^=]*=.*:")
r = parse("[^=]*=.*")
for n in (128, 1024):
    w = "=" * n
    print(n, time(r, w) / n)
