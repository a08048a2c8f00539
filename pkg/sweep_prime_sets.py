import argparse
import json
import os
from typing import Dict, Iterable, Set, Tuple

from ips.constructions import prime_set
from ips.dmatrix import realizable_dim
from ips.errors import IpsError


Key = Tuple[int, int, int, bool]


def grid(m_max: int, n_max: int, d_max: int, unique_min: bool) -> Iterable[Key]:
    for m in range(3, m_max + 1):
        for n in range(m + 1, n_max + 1):
            for d in range(1, d_max + 1):
                yield m, n, d, unique_min


def check(m: int, n: int, d: int, unique_min: bool) -> Dict[str, object]:
    ps = prime_set(m, n, d, unique_min=unique_min)
    dm = ps.matrix
    problems = []
    if dm.n != n:
        problems.append(f"{dm.n} points")
    if dm.gcd() != 1:
        problems.append(f"gcd {dm.gcd()}")
    if d not in dm.distance_multiset():
        problems.append("distance d missing")
    if realizable_dim(dm).dimension != m:
        problems.append("wrong dimension")
    if unique_min and n - m + 2 > 3 and not ps.min_unique:
        problems.append("d is not the unique minimum")
    return {"m": m, "n": n, "d": d, "unique_min": unique_min, "k": ps.k, "ok": not problems, "problems": problems}


def load_done(path: str) -> Set[Key]:
    done: Set[Key] = set()
    if not os.path.exists(path):
        return done
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError:
                print(f"Warn: skipping unreadable line in {path}", flush=True)
                continue
            done.add((row["m"], row["n"], row["d"], row["unique_min"]))
    return done


def main():
    ap = argparse.ArgumentParser(description="Check prime sets over a parameter grid; reruns skip finished rows")
    ap.add_argument("--m-max", type=int, default=5)
    ap.add_argument("--n-max", type=int, default=12)
    ap.add_argument("--d-max", type=int, default=10)
    ap.add_argument("--out", default="prime_sweep.jsonl", help="JSON lines progress file")
    args = ap.parse_args()

    done = load_done(args.out)
    print(f"Resuming with {len(done)} finished rows", flush=True)
    checked = failed = 0
    with open(args.out, "a", encoding="utf-8") as out:
        for unique_min in (False, True):
            for key in grid(args.m_max, args.n_max, args.d_max, unique_min):
                if key in done:
                    continue
                try:
                    row = check(*key)
                except IpsError as e:
                    print(f"Warn: m={key[0]} n={key[1]} d={key[2]} unique_min={key[3]}: {e}", flush=True)
                    row = {"m": key[0], "n": key[1], "d": key[2], "unique_min": key[3], "ok": False, "problems": [str(e)]}
                out.write(json.dumps(row, sort_keys=True) + "\n")
                out.flush()
                checked += 1
                if not row["ok"]:
                    failed += 1
                    print(f"FAIL {row}", flush=True)
                if checked % 50 == 0:
                    print(f"{checked} checked, {failed} failed", flush=True)
    print(f"Done: {checked} checked, {failed} failed", flush=True)
    return 0 if failed == 0 else 1


if __name__ == "__main__":
    raise SystemExit(main())
