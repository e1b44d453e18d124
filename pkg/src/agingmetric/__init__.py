"""Material-metric model of aging: kinematics, variational identities and rod processes."""

__version__ = "0.1.0"
