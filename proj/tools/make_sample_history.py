"""Writes the synthetic hourly wave history bundled as data/cdip139_sample.csv."""
import datetime as dt
import math
import random
import sys


def main(path, seed=139):
    rng = random.Random(seed)
    t0 = dt.datetime(2019, 1, 1)
    log_h = 0.0
    rows = ["timestamp,hm0_m,te_s"]
    for k in range(8760):
        season = 0.35 * math.cos(2.0 * math.pi * k / 8760.0)
        log_h = 0.97 * log_h + rng.gauss(0.0, 0.08)
        hm0 = math.exp(math.log(1.9) + season + log_h)
        te = 5.2 + 2.9 * math.sqrt(hm0) + rng.gauss(0.0, 0.7)
        stamp = (t0 + dt.timedelta(hours=k)).strftime("%Y-%m-%dT%H:%M:%SZ")
        if k % 1500 == 777:
            rows.append(f"{stamp},,")
            continue
        rows.append(f"{stamp},{hm0:.2f},{max(te, 3.0):.2f}")
    with open(path, "w", newline="\n") as f:
        f.write("\n".join(rows) + "\n")


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "data/cdip139_sample.csv")
