import sys
import argparse
from pathlib import Path
import pandas as pd
import numpy as np
from tqdm import tqdm

# Add project root to path
project_root = Path(__file__).resolve().parent.parent
sys.path.append(str(project_root))

from src.coins.matrix import CPhiParams
from src.coins.sequence import CoinSequence
from src.evolve.stepper import EvolutionOperator, iterate
from src.state.measure import gamma_measure, uniformity_defect
from src.state.topology import Topology
from src.transfer.eigenstate import build_eigenstate, cycle_product, eigen_residual
from src.utils.logging import setup_logger

logger = setup_logger("verify_theorems")

TWO_PI = 2 * np.pi


def verify(n_samples: int, window: int, steps: int, seed: int) -> pd.DataFrame:
    rng = np.random.default_rng(seed)
    rows = []
    for _ in tqdm(range(n_samples), desc="Grid"):
        theta = rng.uniform(0.05, TWO_PI - 0.05)
        if abs(np.cos(theta)) < np.sin(0.05):
            continue
        N = int(rng.integers(1, 13))
        params = CPhiParams(theta, rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI))
        coins = CoinSequence.cphi(params, Topology.line(window))
        lam = params.eigenvalue

        # Line: eigenstate, then evolve and check the interior
        psi = build_eigenstate(coins, lam)
        evolved = iterate(psi, EvolutionOperator(coins), steps)

        # Cycle: same theta and omega0 with phi = pi/N on C_{2N}
        cyc_params = CPhiParams(theta, np.pi / N, params.omega0)
        cyc = CoinSequence.cphi(cyc_params, Topology.cycle(2 * N))
        product = cycle_product(cyc, cyc_params.eigenvalue)

        rows.append({
            "theta": theta,
            "phi": params.phi,
            "omega0": params.omega0,
            "eigen_residual": eigen_residual(psi, coins, lam),
            "evolved_residual": eigen_residual(evolved, coins, lam),
            "interior_uniformity": uniformity_defect(gamma_measure(evolved), evolved.interior_sites()),
            "cycle_N": N,
            "cycle_product_defect": float(np.max(np.abs(product - np.eye(2)))),
        })
    return pd.DataFrame(rows)


def main():
    parser = argparse.ArgumentParser(description="Randomized check of the uniform-measure and cycle identities")
    parser.add_argument("--samples", type=int, default=50)
    parser.add_argument("--window", type=int, default=200)
    parser.add_argument("--steps", type=int, default=50)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--output", type=str, default=None, help="Optional CSV path")
    args = parser.parse_args()

    logger.info(f"Checking {args.samples} random C_phi walks (L={args.window}, steps={args.steps})")
    results = verify(args.samples, args.window, args.steps, args.seed)

    print("\n" + "=" * 60)
    print("WORST CASES")
    print("=" * 60)
    for col in ("eigen_residual", "evolved_residual", "interior_uniformity", "cycle_product_defect"):
        print(f"{col:<24}: {results[col].max():.3e}")
    print("=" * 60 + "\n")

    if args.output:
        output_path = Path(args.output)
        output_path.parent.mkdir(parents=True, exist_ok=True)
        results.to_csv(output_path, index=False, float_format="%.17g")
        logger.info(f"Results saved to {output_path}")


if __name__ == "__main__":
    main()
