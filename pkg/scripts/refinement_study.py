#!/usr/bin/env python3
"""Increment-refinement study on the built-in compression scenario.

Reruns the load program with 1x, 2x, 4x and 8x the increment counts and
reports how the final axial stress converges.
"""
import numpy as np

from revplast.mean_field import assemble_operators
from revplast.scenario import default_scenario
from revplast.solver import LoadProgram, LoadSegment, drive


def scaled_program(program, factor):
    return LoadProgram(tuple(
        LoadSegment(targets=s.targets, modes=s.modes, increments=factor * s.increments)
        for s in program.segments))


def main():
    scenario = default_scenario()
    ops = assemble_operators(scenario.phases())
    results = []
    for factor in (1, 2, 4, 8):
        states = drive(ops, scaled_program(scenario.program, factor),
                       scenario.settings)
        results.append((factor, states[-1].macro_stress[2]))
    print("increments  final sig33 (MPa)   change vs previous")
    prev = None
    for factor, sig in results:
        n = factor * scenario.program.total_increments
        change = "" if prev is None else f"{abs(sig - prev) / abs(sig):.3e}"
        print(f"{n:10d}  {sig: .12f}   {change}")
        prev = sig


if __name__ == "__main__":
    main()
