"""Result serialization: macro/per-phase CSV series and plot-data extracts.

Components are written as plain tensor components (the Mandel shear scaling is
removed), full double precision, fixed column order, and atomically
(write-then-rename) so repeated runs with the same input produce byte-identical
files.
"""
from __future__ import annotations

import os
import tempfile

import numpy as np

from .solver import REVState
from .tensors import COMPONENT_LABELS, SQRT2

_UNSCALE = np.array([1.0, 1.0, 1.0, 1.0 / SQRT2, 1.0 / SQRT2, 1.0 / SQRT2])


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _components(vec: np.ndarray) -> list[str]:
    return [_fmt(x) for x in np.asarray(vec) * _UNSCALE]


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp_", text=True)
    try:
        with os.fdopen(fd, "w", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _header(prefix: str) -> list[str]:
    return [f"{prefix}_{c}" for c in COMPONENT_LABELS]


def write_macro_csv(states: list[REVState], path: str) -> None:
    """Macroscopic series: step, strain, stress, plastic strain, active count."""
    cols = ["step"] + _header("eps") + _header("sig") + _header("epsp") + ["n_active"]
    lines = [",".join(cols)]
    for st in states:
        row = ([str(st.step)] + _components(st.macro_strain)
               + _components(st.macro_stress) + _components(st.macro_plastic)
               + [str(sum(st.active))])
        lines.append(",".join(row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_phase_csv(states: list[REVState], phase_names: list[str], path: str) -> None:
    """Per-phase series in long format: one row per (step, phase)."""
    cols = (["step", "phase"] + _header("eps") + _header("epsp") + _header("sig")
            + ["active"])
    lines = [",".join(cols)]
    for st in states:
        for a, name in enumerate(phase_names):
            row = ([str(st.step), name] + _components(st.strain[a])
                   + _components(st.plastic_strain[a]) + _components(st.stress[a])
                   + ["1" if st.active[a] else "0"])
            lines.append(",".join(row))
    _atomic_write(path, "\n".join(lines) + "\n")


def write_plot_data(states: list[REVState], prefix: str) -> list[str]:
    """Two-column extracts: |axial stress| against axial and lateral strain."""
    axial = ["eps_33,abs_sig_33"]
    lateral = ["eps_11,abs_sig_33"]
    for st in states:
        s33 = abs(st.macro_stress[2])
        axial.append(f"{_fmt(st.macro_strain[2])},{_fmt(s33)}")
        lateral.append(f"{_fmt(st.macro_strain[0])},{_fmt(s33)}")
    paths = [f"{prefix}_axial.csv", f"{prefix}_lateral.csv"]
    _atomic_write(paths[0], "\n".join(axial) + "\n")
    _atomic_write(paths[1], "\n".join(lateral) + "\n")
    return paths
