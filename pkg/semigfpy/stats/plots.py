from typing import Optional

import matplotlib.pyplot as plt
import pandas as pd

# (column, label, linestyle, marker) per curve
_CURVES = [
    ('rate_gb_analytic', 'GB analytic', '-', None),
    ('rate_gb_oracle', 'GB oracle', 'none', 'o'),
    ('rate_gb_mc', 'GB Monte Carlo', 'none', 'x'),
    ('rate_gf_analytic', 'GF analytic', '-', None),
    ('rate_gf_approx', 'GF approximation', '--', None),
    ('rate_gf_oracle', 'GF oracle', 'none', 's'),
    ('rate_gf_mc', 'GF Monte Carlo', 'none', '+'),
]


def plot_rates(df: pd.DataFrame,
               axis: str,
               title: str,
               filename: Optional[str]) -> None:
    """Plot the rate curves of a sweep, one line per method that produced values.

    Args:
        df (pd.DataFrame): The sweep results (one row per axis value).
        axis (str): The name of the swept parameter.
        title (str): The plot title.
        filename (Optional[str]): Where to save the figure (format from the extension); shown if None.
    """
    fig, ax = plt.subplots(figsize=(8, 5))
    for col, label, ls, marker in _CURVES:
        if col in df and df[col].notna().any():
            ax.plot(df['axis_value'], df[col],
                    linestyle=ls, marker=marker, label=label)
            err = col + '_stderr'
            if err in df and df[err].notna().any():
                ax.errorbar(df['axis_value'], df[col], yerr=3 * df[err],
                            fmt='none', ecolor='gray', capsize=3)
    ax.set_xlabel(axis)
    ax.set_ylabel('Ergodic rate (BPCU)')
    ax.set_title(title)
    ax.grid(True, alpha=0.3)
    ax.legend(loc='best')
    fig.tight_layout()
    if filename:
        fig.savefig(filename, metadata={'Date': None})
        plt.close(fig)
    else:
        plt.show()
