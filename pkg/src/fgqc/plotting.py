"""BER/FER curves rendered to image files."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .channel import BerReport, uncoded_ber  # noqa: E402


def plot_ber(reports: list[BerReport], path, title: str = "") -> None:
    """Semilog BER and FER against Eb/N0, with the uncoded BPSK curve for reference.

    Zero error rates cannot be drawn on a log axis and are left out.
    """
    fig, (ax_ber, ax_fer) = plt.subplots(1, 2, figsize=(10, 4), sharex=True)
    snrs = sorted({pt.ebn0_db for r in reports for pt in r.points})
    if snrs:
        grid = np.linspace(min(snrs), max(snrs), 50)
        ax_ber.semilogy(grid, [uncoded_ber(x) for x in grid], "k--", label="uncoded")
    for r in reports:
        name = r.label or f"{r.max_iterations} iterations"
        x = np.array([pt.ebn0_db for pt in r.points])
        ber = np.array(r.ber())
        fer = np.array(r.fer())
        ax_ber.semilogy(x[ber > 0], ber[ber > 0], "o-", label=name)
        ax_fer.semilogy(x[fer > 0], fer[fer > 0], "s-", label=name)
    for ax, ylabel in ((ax_ber, "BER"), (ax_fer, "FER")):
        ax.set_xlabel("Eb/N0 (dB)")
        ax.set_ylabel(ylabel)
        ax.grid(True, which="both", alpha=0.3)
        ax.legend(fontsize="small")
    if title:
        fig.suptitle(title)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
