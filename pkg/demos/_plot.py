"""Optional matplotlib support shared by the demos."""

from pathlib import Path


def pyplot():
    """Return matplotlib.pyplot with a file backend, or None when unavailable."""
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError:
        return None
    return plt


def save(fig, outdir, name):
    path = Path(outdir) / name
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, dpi=120, bbox_inches="tight")
    print(f"  wrote {path}")
