"""Floating-point accuracy analysis by abstract execution.

The toolchain parses a small C subset with accuracy assertions, places
split/merge sections around unstable floating-point tests, and runs the
program over an abstract domain that tracks the float value, the exact
real value and the rounding error of every floating-point variable.
"""

__version__ = "0.1.0"
