"""Write the first N zeta-zero ordinates in the plain one-per-line table layout.

Uses Arb (via python-flint) for certified zeros; only needed to regenerate
tests/data/zeros_1e5.txt.gz.  Ordinates are written with 9 decimals, matching
the precision of the commonly distributed tables.

    python scripts/make_zero_table.py 100000 tests/data/zeros_1e5.txt.gz
"""
import gzip
import sys

from flint import acb, ctx


def main(count, path, chunk=5000):
    ctx.prec = 64
    opener = gzip.open if path.endswith(".gz") else open
    with opener(path, "wt", encoding="ascii") as fh:
        fh.write(f"# first {count} ordinates of nontrivial zeros of zeta(s), Arb zeta_zeros\n")
        n = 1
        while n <= count:
            m = min(chunk, count - n + 1)
            for z in acb.zeta_zeros(n, m):
                fh.write(f"{float(z.imag.mid()):.9f}\n")
            n += m
            print(f"{n - 1} zeros", file=sys.stderr, flush=True)


if __name__ == "__main__":
    main(int(sys.argv[1]), sys.argv[2])
