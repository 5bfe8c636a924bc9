"""Order dependence of chained spin measurements.

Measurements are interactions that change the wave function, so the
statistics of a second measurement depend on what was measured first:

* z then z: the first stage leaves the packet in a definite branch, so
  the second stage repeats the outcome in every single trial;
* z then x: the collapsed z-eigenstate has equal weights along x, so
  the second stage comes out 50/50;
* z, x, z: the intermediate x-stage destroys the z-definiteness that the
  first stage had produced.

Run:  python demos/sequential_spins.py
"""

import numpy as np

from bohmlab import experiments
from bohmlab.config import default_config


def show(axes, alpha, beta, n_trials=1500):
    cfg = default_config("sequential", axes=axes, alpha=alpha, beta=beta,
                         n_trials=n_trials, n_frames=32)
    result = experiments.sequential(cfg)
    print(f"axes {' -> '.join(axes)}, initial state ({alpha:.3f}, {beta:.3f}), "
          f"{n_trials} trials")
    for i, stats in enumerate(result.stage_statistics):
        print(f"  stage {i + 1} ({axes[i]}): f_up = {stats.frequencies[0]:.4f} "
              f"(Born {stats.born_probabilities[0]:.4f} "
              f"+- {stats.three_sigma_halfwidths[0]:.4f})")
    return result


print("=" * 64)
result = show(("z", "z"), complex(1 / np.sqrt(2)), complex(1 / np.sqrt(2)))
repeat = float(np.mean(result.outcomes[:, 0] == result.outcomes[:, 1]))
print(f"  stage-2 outcome equals stage-1 outcome in {100 * repeat:.1f}% of trials")

print("=" * 64)
show(("z", "x"), complex(1.0), complex(0.0))

print("=" * 64)
show(("z", "x", "z"), complex(1.0), complex(0.0))
print("  the final z-stage is 50/50 although the state began as a z-eigenstate:")
print("  the x-stage in between rewrote the wave function.")
