import matplotlib
from matplotlib import pyplot as plt


def setup_matplotlib(type3_fix: bool = True,
                     headless: bool = True):
    """Setup Matplotlib.

    Args:
        type3_fix (bool, optional): Ensures no Type3 font is used. Defaults to `True`.
        headless (bool, optional): Use the non-interactive Agg backend. Defaults to `True`.
    """
    if headless:
        plt.switch_backend('Agg')
    if type3_fix:
        matplotlib.rcParams['pdf.fonttype'] = 42
        matplotlib.rcParams['ps.fonttype'] = 42
    # keep text as text in SVG output, and the output byte-stable
    matplotlib.rcParams['svg.fonttype'] = 'none'
    matplotlib.rcParams['svg.hashsalt'] = 'semigfpy'
