import sys

import numpy as np
import pandas as pd
from scipy import stats

# Usage: python scripts/analysis.py bench.csv [--plot]

df = pd.read_csv(sys.argv[1], comment="#")
plot = "--plot" in sys.argv[2:]

if "successors" in df:
    n = df["vertices"]
    inside = ((df["successors"] >= n + 1) & (df["successors"] <= 2 * n - 1)) | (n == 1)
    print(f"{inside.sum()}/{len(df)} FDAGs within [n+1, 2n-1] successors")
    print(df.groupby("vertices")["successors"].agg(["min", "mean", "max"]))
    xcol = "vertices"
    ycol = "successors"
elif "total_ns" in df:
    # amortized is total_ns / (#D·deg(D))², so the size is recovered from the ratio
    fit = df[df["amortized"] > 0].copy()
    fit["size"] = np.rint(np.sqrt(fit["total_ns"] / fit["amortized"]))
    fit = fit[fit["size"] > 1]
    slope = stats.linregress(np.log(fit["size"]), np.log(fit["total_ns"]))
    print(f"log-log slope of successor construction time against #D·deg(D): {slope.slope:.3f} (r={slope.rvalue:.3f})")
    print(fit.groupby("size")[["total_ns", "amortized"]].mean())
    df = fit
    xcol = "size"
    ycol = "total_ns"
elif "Q" in df:
    print(df.groupby("vertices")["Q"].agg(["min", "mean", "max"]))
    xcol = "vertices"
    ycol = "Q"
else:
    raise RuntimeError(f"Unknown benchmark columns {list(df.columns)}")

if plot:
    import matplotlib.pylab as plt

    df.plot.scatter(x=xcol, y=ycol, logx=ycol == "total_ns", logy=ycol == "total_ns")
    plt.show()
