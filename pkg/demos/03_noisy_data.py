"""Knot placement for noisy data through an implicit smooth proxy.

The Gaussian filter tied to the grid spacing damps the flat noise tail of
the spectrum; chaining it in front of the derivative filter differentiates
a smoothed proxy that is never materialized.  The resulting knots reach
the noise-floor RMS with a fraction of the knots uniform placement needs.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from fourierknots import (
    SignalSpec,
    apply_filter,
    choose_knots,
    fft_forward,
    fit_least_squares,
    frequency_vector,
    generate,
    smoothing_filter,
)

OUT = __import__("pathlib").Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

m, q, scale = 600, 4, 1e-2
spec = SignalSpec.noisy(SignalSpec.smooth("narrow_peak"), scale, seed=102)
g = generate(spec, m)

raw = fft_forward(g)
smoothed = apply_filter(raw, smoothing_filter(frequency_vector(m, 1.0), g.h))

counts = [8, 12, 16, 20, 26, 32, 40, 52, 64, 80, 104, 128, 160, 200]
curves = {}
for method in ("uniform", "di_fs"):
    curves[method] = [
        fit_least_squares(g, choose_knots(g, n, q, method))[1].rms_error
        for n in counts
    ]
floor = 2 * scale
first = {
    k: next((n for n, e in zip(counts, v) if e <= floor), None)
    for k, v in curves.items()
}
print(f"noise scale {scale:g}: uniform reaches {floor:g} at n={first['uniform']}, "
      f"smoothed derivative knots at n={first['di_fs']}")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
half = m // 2
ax1.semilogy(np.abs(raw.coeffs[:half]), lw=0.6, label="noisy spectrum")
ax1.semilogy(np.abs(smoothed.coeffs[:half]) + 1e-18, lw=0.6, label="after smoothing filter")
ax1.set_xlabel("mode")
ax1.set_ylabel("|coefficient|")
ax1.legend()
ax1.set_title("the filtered spectrum decays; the raw one does not")
ax2.loglog(counts, curves["uniform"], "s-", label="uniform")
ax2.loglog(counts, curves["di_fs"], "o-", label="smoothed derivative knots")
ax2.axhline(scale, color="gray", ls=":", label="noise level")
ax2.set_xlabel("control points")
ax2.set_ylabel("RMS error")
ax2.legend()
fig.tight_layout()
fig.savefig(OUT / "03_noisy_data.png", dpi=120)
print(f"wrote {OUT / '03_noisy_data.png'}")
