"""
Benchmark plots
Circuit depth and two-qudit gate count against N for each topology family
"""

import sys
from pathlib import Path
from typing import Union

import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt
import pandas as pd
import seaborn as sns

# Set style
sns.set_theme(style="whitegrid")
plt.rcParams['figure.figsize'] = (12, 6)


def _family_kind(label: str) -> str:
    return label.split('(')[0]


def plot_benchmark(df: pd.DataFrame, path: Union[str, Path]) -> Path:
    """Depth vs N (log x) and count vs the qubit-only reference, one line per family"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    data = df.copy()
    data['kind'] = data['family'].map(_family_kind)

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(16, 6))

    sns.lineplot(data=data, x='n', y='depth', hue='kind', marker='o', ax=ax1)
    ax1.set_xscale('log', base=2)
    ax1.set_title('Circuit Depth of C$^{N-1}$Z', fontsize=14, fontweight='bold')
    ax1.set_xlabel('N (qudits)', fontsize=12)
    ax1.set_ylabel('Depth', fontsize=12)

    counts = data.drop_duplicates('n').sort_values('n')
    ax2.plot(counts['n'], counts['two_qudit_count'], marker='o', color='#3498db', label='tree synthesis (2N-3)')
    ax2.plot(counts['n'], counts['lowered_count'], marker='s', color='#2ecc71', label='CZθ lowered (2N-2)')
    ax2.plot(counts['n'], counts['reference_qubit_count'], linestyle='--', color='#e74c3c', label='qubit-only (12N-23)')
    ax2.set_title('Two-Qudit Gate Count', fontsize=14, fontweight='bold')
    ax2.set_xlabel('N (qudits)', fontsize=12)
    ax2.set_ylabel('Gates', fontsize=12)
    ax2.legend(frameon=True)
    ax2.grid(axis='y', alpha=0.3)

    plt.tight_layout()
    plt.savefig(path, dpi=150, bbox_inches='tight')
    plt.close(fig)
    return path


def main(csv_path: str = 'outputs/bench.csv', out_path: str = 'outputs/visualizations/bench.png'):
    df = pd.read_csv(csv_path)
    if df.empty:
        print("⚠ No bench rows to visualize")
        return
    plot_benchmark(df, out_path)
    print(f"✓ Benchmark plot saved: {out_path}")


if __name__ == "__main__":
    main(*sys.argv[1:3])
