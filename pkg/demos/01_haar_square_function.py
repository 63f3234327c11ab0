"""Haar analysis and the dyadic square function
=============================================

A grid function on [0,1) is decomposed into its Haar coefficients, put
back together, and compared with its square function.  The running
example is the depth-2 function with cells (1, 2, 3, 4).
"""

import numpy as np

from bsq.dyadic import (
    GridFunction,
    haar_analyze,
    haar_synthesize,
    integral,
    project,
    square_function,
    truncated_square_function,
)

f = GridFunction([1.0, 2.0, 3.0, 4.0])
print("cells:", f.values)

# analysis: the mean plus one detail per dyadic interval
c = haar_analyze(f)
print("mean:", c.mean)
for level, d in enumerate(c.details):
    print(f"level {level} details:", d)

# Parseval with the (1/|I|) normalization: mean^2 + sum a_I^2 |I| = |f|^2
print("parseval sum:", c.parseval_sum(), "= |f|^2 =", integral(GridFunction(f.values**2)))

# synthesis inverts analysis exactly
assert haar_synthesize(c) == f

# projections are conditional expectations onto coarser grids
print("averages on halves:", project(f, 1).values)
print("global average:    ", project(f, 0).values)

# the square function stacks every coefficient whose support covers x
s = square_function(f)
print("S(f) cells:", s.values, " (sqrt(7.5) =", np.sqrt(7.5), ")")
print("integral S^2:", integral(GridFunction(s.values**2)), " (isometry)")

# truncations grow monotonically to the full square function
for n in range(3):
    print(f"S_{n}(f):", truncated_square_function(f, n).values)
