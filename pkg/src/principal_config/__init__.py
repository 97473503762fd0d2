"""Principal configurations of surfaces: curvature kernel, umbilic analysis,
principal foliations and quadric tools."""

from .errors import *  # noqa: F401,F403
from .foliation import (Controls, PrincipalConfiguration, PrincipalCycle, PrincipalLine,
                        assemble_configuration, detect_cycles, integrate_line, trace_separatrices)
from .quadric import ConfocalCoordinates, QuadricPoint9, confocal_of, perturb_quadric, stability_probe
from .surface import (CurvatureFrame, ImplicitQuadric, MongePatch, ParametricPatch, fundamental_forms,
                      normal_curvature, principal_data)
from .umbilic import (CubicJet, UmbilicPoint, adapted_jet, classify_darbouxian, find_umbilics,
                      lie_cartan_resolution, sigma_membership_local)

__version__ = "0.1.0"
