"""Exact straightedge-and-compass construction engine.

Subpackages and modules:

- `field`: arithmetic in towers of real quadratic extensions with exact
  sign decisions.
- `geom`: points, lines, circles, and the exact predicates over them.
- `closure`: saturation of a configuration under construction steps and
  derivability queries.
- `regions`: open disks and sign-cells with exact membership and
  containment tests.
- `dsl`: the construction-program language (parser, checker,
  interpreter).
- `corpus`: a verified library of classical construction programs.
- `game`: the adversarial construction game with strategies, sampling
  and certificate adversaries, and certificate checking.
- `net`: straightedge-only densification through harmonic conjugates,
  with replayable traces and grid gap measurement.
- `algebra`: integer polynomials and the power-of-two degree criterion
  for non-constructibility.
- `replay`: transport of recorded traces under projective maps and the
  report of which facts survive.
- `configfile`: scene files declaring named exact input objects.
- `render`: deterministic SVG figures from traces.
- `cli`: the `euclid` command binding everything together.
"""

__version__ = "0.1.0"
