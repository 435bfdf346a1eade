"""Exact fixed-point calculus for quantum loop and toroidal algebra actions
on the K-theory of Laumon spaces and their affine (parabolic-sheaf) version.

Subpackages:

* exact            - Laurent rational arithmetic over Q, series expansion
* patterns         - finite and affine Gelfand-Tsetlin-type fixed-point data
* finite_action    - loop-algebra operators on the finite module
* toroidal_action  - toroidal operators on the affine module
* tangent          - tangent-space characters and the Bott-Lefschetz oracle
* relations        - relation verifier with machine-readable reports
* specialization   - integrable-module specialization and closure checks
* cli              - command-line front end
"""

__version__ = "0.1.0"
