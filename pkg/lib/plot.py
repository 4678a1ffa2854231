from pathlib import Path
import matplotlib
matplotlib.use('Agg')
import matplotlib.pyplot as plt

# SVG panels, one curve per preparation
# glyphs are written as paths so the files need no external fonts,
# and the fixed hash salt / missing date keep the output byte-stable

plt.rcParams['svg.fonttype'] = 'path'
plt.rcParams['svg.hashsalt'] = 'pseudomode-witness'

# line coding per preparation: a solid, b dotted, c dashed, d dash-dot
STYLES = {
    'a': '-',
    'b': ':',
    'c': '--',
    'd': '-.',
    'b=d': ':',
}

LABELS = {
    'a': r'$\rho_a$',
    'b': r'$\rho_b$',
    'c': r'$\rho_c$',
    'd': r'$\rho_d$',
    'b=d': r'$\rho_b = \rho_d$',
}


# plot curves {label: values} against omega*t and save as SVG
def panel(path, times, curves: dict, ylabel: str, title: str = ''):
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.set_title(title)
    ax.set_xlabel('Ωt')
    ax.set_ylabel(ylabel)

    for label, values in curves.items():
        ax.plot(times, values, STYLES.get(label, '-'), label=LABELS.get(label, label), linewidth=1.5)

    ax.ticklabel_format(useOffset=False)
    ax.legend(loc='best')
    fig.tight_layout()
    fig.savefig(Path(path), format='svg', metadata={'Date': None})
    plt.close(fig)
