import sys
import argparse
from fractions import Fraction
from pathlib import Path
import pandas as pd
import numpy as np
from tqdm import tqdm

# Add project root to path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from src.coins.matrix import CPhiParams
from src.coins.periodicity import detect_period, rational_period
from src.coins.sequence import CoinSequence
from src.state.topology import Topology
from src.utils.logging import setup_logger

logger = setup_logger("scan_periods")


def scan(max_q: int, theta: float, tol: float) -> pd.DataFrame:
    """Detected vs exact period for every phi = (p/q) pi in [0, 2pi) with q <= max_q."""
    ratios = sorted({Fraction(p, q) for q in range(1, max_q + 1) for p in range(0, 2 * q)})
    rows = []
    for ratio in tqdm(ratios, desc="phi/pi"):
        params = CPhiParams(theta, float(ratio) * np.pi)
        coins = CoinSequence.cphi(params, Topology.line(0))
        detected = detect_period(coins, max_q, tol=tol)
        exact = rational_period(ratio.numerator, ratio.denominator, theta, tol)
        rows.append({"phi_over_pi": str(ratio), "detected": detected, "exact": exact, "match": detected == exact})
    return pd.DataFrame(rows)


def main():
    parser = argparse.ArgumentParser(description="Compare detected C_phi periods with the rational oracle")
    parser.add_argument("--max-q", type=int, default=12)
    parser.add_argument("--theta", type=float, default=np.pi / 4)
    parser.add_argument("--tol", type=float, default=1e-9)
    args = parser.parse_args()

    results = scan(args.max_q, args.theta, args.tol)
    mismatches = results[~results["match"]]

    print(f"\nScanned {len(results)} rational phases, {len(mismatches)} mismatches")
    if len(mismatches):
        print(mismatches.to_string(index=False))
    else:
        logger.info("Every detected period matches the exact denominator")


if __name__ == "__main__":
    main()
