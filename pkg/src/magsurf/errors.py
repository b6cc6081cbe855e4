"""Exception types shared across the package."""


class MagsurfError(Exception):
    """Base class for all package-specific errors."""


class DegenerateJetError(MagsurfError):
    """Surface jet is not immersed (S_u, S_v nearly dependent)."""


class SingularSystemError(MagsurfError):
    """The 2x2 acceleration solve is singular (degenerate or lightlike point)."""


class ConformalDegenerateError(MagsurfError):
    """Conformal factor vanished (singular set of the chart)."""


class NotLightlikeError(MagsurfError):
    """Graph point does not have a lightlike tangent plane."""


class FlatPointError(MagsurfError):
    """Hessian is zero at the lightlike point; direction theorem does not apply."""


class BracketError(MagsurfError):
    """Shooting bracket endpoints do not have opposite orientations."""


class LostCrossingError(MagsurfError):
    """No self-intersection continues across the shooting family."""
