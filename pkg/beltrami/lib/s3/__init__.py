"""
Beltrami fields on the round 3-sphere built from spherical harmonics in
the Hopf frame.
"""

from beltrami.lib.s3.beltrami_field import (
    AssembledFrameField,
    ConstantFrameField,
    HarmonicFrameField,
    HopfFrameField,
    IsometryPushforward,
    RescaledPushforward,
    S3BeltramiField,
    S3VectorField,
    antipodal_image,
    assemble_beltrami,
    hopf_frame_curl,
    pushforward_rescale,
)
from beltrami.lib.s3.chart import NormalChart, exp_chart
from beltrami.lib.s3.harmonics import (
    S3HarmonicSum,
    gegenbauer_decay_profile,
    lift_atoms,
    lift_harmonic,
)
from beltrami.lib.s3.hopf import (
    hopf_field,
    hopf_flow,
    hopf_frame,
    hopf_matrices,
)
from beltrami.lib.s3.multi_center import (
    equivariant_sum,
    isometry_pushforward,
    lens_generator,
    multi_center_field,
)

__all__ = [
    "AssembledFrameField",
    "ConstantFrameField",
    "HarmonicFrameField",
    "HopfFrameField",
    "IsometryPushforward",
    "NormalChart",
    "RescaledPushforward",
    "S3BeltramiField",
    "S3HarmonicSum",
    "S3VectorField",
    "antipodal_image",
    "assemble_beltrami",
    "equivariant_sum",
    "exp_chart",
    "gegenbauer_decay_profile",
    "hopf_field",
    "hopf_flow",
    "hopf_frame",
    "hopf_frame_curl",
    "hopf_matrices",
    "isometry_pushforward",
    "lens_generator",
    "lift_atoms",
    "lift_harmonic",
    "multi_center_field",
    "pushforward_rescale",
]
