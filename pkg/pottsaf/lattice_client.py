# python 2 backwards compatibility
from __future__ import print_function
from builtins import object

# external imports
import logging

# package imports
from . import lattice
from .errors import ValidationError
from .models import CheckReport, LatticeKind

logger = logging.getLogger(__name__)


class LatticeClient(object):

    def build_lattice(self, kind=LatticeKind.DICED, radius=None, p=None, generations=None):
        """
        Build a quadrangulation patch.

        :param kind: ``"diced"`` (needs ``radius``) or ``"schlafli"`` (needs ``p`` and ``generations``)
        :return: the :class:`Quadrangulation`
        """

        kind = LatticeKind.parse(kind)
        if kind == LatticeKind.DICED:
            if radius is None:
                raise ValidationError("a diced patch needs a radius")
            quad = lattice.build_diced_patch(int(radius))
        else:
            if p is None or generations is None:
                raise ValidationError("a Schlafli patch needs p and generations")
            quad = lattice.build_schlafli_patch(int(p), int(generations),
                                                generation_cap=self.config['schlafli_generation_cap'])
        logger.info("Built %s patch with %d vertices", kind, quad.n_vertices)
        return quad

    def build_region(self, spec, quad=None):
        """
        A region from its textual spec (see :func:`lattice.region_from_spec`).  Without ``quad`` a diced patch just
        large enough for the region is built.
        """

        if quad is None:
            quad = lattice.build_diced_patch(lattice.default_patch_radius(spec))
        return lattice.region_from_spec(quad, spec)

    def export_lattice(self, quad):
        return lattice.export_edge_list(quad)

    def dual_distance_check(self, radius):
        """Dual-distance property for the edges within ``radius`` of the origin of a diced patch."""
        quad = self.build_lattice(radius=radius + 2)
        checked, violations = lattice.dual_distance_violations(quad, radius)
        return CheckReport('dual_distance', not violations, checked=checked, failures=violations[:20],
                           details={'radius': radius, 'violations': len(violations)})
