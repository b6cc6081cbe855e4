#!/usr/bin/env python3
"""The built-in validation battery.

Five independent cross-checks of the dynamics, none of which reuse the
code paths they test:

  1. expansion residual      - the general RHS against a long-hand
                               polynomial expansion of the governing
                               equation in the first/second fundamental
                               form coefficients;
  2. conformal agreement     - fast conformal RHS vs the general solve
                               on every conformal catalog surface;
  3. sphere intrinsic oracle - the adaptive integrator vs a separate
                               fixed-step RK4 on the sphere's intrinsic
                               (Christoffel) form of the equation;
  4. kappa residual          - accelerations plugged back into the
                               defining curvature equation;
  5. speed drift             - conservation of |gamma'|^2 on a long run.

Also exposed as ``magsurf validate`` on the command line (exit 1 on any
failure), so a pipeline can gate on it.
"""

import sys

from magsurf.validate import run_battery

results = run_battery()
for r in results:
    print(r.line())

sys.exit(0 if all(r.passed for r in results) else 1)
