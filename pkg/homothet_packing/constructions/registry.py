"""
Generator kinds known to the command line, with their parameter sets.
"""

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import Any
from typing import ClassVar

from homothet_packing.constructions.base import GeneratorParameterError
from homothet_packing.constructions.disks import EXPLICIT_MAX_LEVELS
from homothet_packing.constructions.disks import GREEDY_MAX_DISKS
from homothet_packing.constructions.disks import gen_apollonian_chain
from homothet_packing.constructions.disks import gen_explicit_disks
from homothet_packing.constructions.disks import gen_ford
from homothet_packing.constructions.disks import gen_greedy_square
from homothet_packing.constructions.grid import gen_grid_translates
from homothet_packing.constructions.squares import LAYERS_MAX_LAMBDA
from homothet_packing.constructions.squares import SLOPED_MAX_DEPTH
from homothet_packing.constructions.squares import gen_layers_general
from homothet_packing.constructions.squares import gen_sloped_squares
from homothet_packing.constructions.squares import gen_square_layers
from homothet_packing.packings.documents import PackingDoc
from homothet_packing.params import BodyFileParam
from homothet_packing.params import EdgeIndexParam
from homothet_packing.params import IntegerParam
from homothet_packing.params import ParamSet
from homothet_packing.params import ScalarParam
from homothet_packing.scalars import Scalar

ZERO = Scalar(Fraction(0))
ONE = Scalar(Fraction(1))


class GeneratorParams(ParamSet):
    flag_aliases: ClassVar[dict[str, str]] = {"lam": "lambda"}


class GridParams(GeneratorParams):
    n = IntegerParam(min_value=1, help_text="number of translates")
    body = BodyFileParam(help_text="JSON file with the body C")
    container = BodyFileParam(polygon_only=True, help_text="JSON file with the container D")


class FordParams(GeneratorParams):
    Q = IntegerParam(min_value=1, help_text="largest denominator")


class ApollonianParams(GeneratorParams):
    r1 = ScalarParam(lower=ZERO, help_text="radius of the left seed disk")
    r2 = ScalarParam(lower=ZERO, help_text="radius of the right seed disk")
    n = IntegerParam(min_value=2, help_text="number of disks")


class GreedyParams(GeneratorParams):
    n = IntegerParam(min_value=1, max_value=GREEDY_MAX_DISKS)


class ExplicitDisksParams(GeneratorParams):
    K = IntegerParam(min_value=0, max_value=EXPLICIT_MAX_LEVELS, help_text="largest size class")


class SquareLayersParams(GeneratorParams):
    lam = IntegerParam(min_value=1, max_value=LAYERS_MAX_LAMBDA, label="lambda")


class LayersGeneralParams(GeneratorParams):
    body = BodyFileParam(polygon_only=True)
    container = BodyFileParam(polygon_only=True)
    edge = EdgeIndexParam(help_text="index of the container edge carrying the layers")
    lam = IntegerParam(min_value=1, max_value=LAYERS_MAX_LAMBDA, label="lambda")


class SlopedSquaresParams(GeneratorParams):
    slope = ScalarParam(lower=ZERO, upper=ONE)
    depth = IntegerParam(min_value=0, max_value=SLOPED_MAX_DEPTH)


@dataclass(frozen=True)
class Construction:
    """
    A generator kind.

    ``scale_param`` is the data key swept by ``scale``; ``boundary_contact``
    says whether every output body touches the container boundary.
    """

    kind: str
    params: type[ParamSet]
    build: Callable[[dict[str, Any]], PackingDoc]
    scale_param: str
    boundary_contact: bool

    def generate(self, data: dict[str, Any]) -> PackingDoc:
        """
        Validate raw flag values and run the generator.

        Raises:
            GeneratorParameterError: The values do not pass the parameter set
        """
        params = self.params(data)
        if not params.is_valid():
            raise GeneratorParameterError(params.error_text())
        return self.build(params.cleaned_data)


CONSTRUCTIONS: dict[str, Construction] = {
    construction.kind: construction
    for construction in (
        Construction(
            kind="grid",
            params=GridParams,
            build=lambda data: gen_grid_translates(data["body"], data["container"], data["n"]),
            scale_param="n",
            boundary_contact=False,
        ),
        Construction(
            kind="ford",
            params=FordParams,
            build=lambda data: gen_ford(data["Q"]),
            scale_param="Q",
            boundary_contact=True,
        ),
        Construction(
            kind="apollonian",
            params=ApollonianParams,
            build=lambda data: gen_apollonian_chain(
                float(data["r1"]),
                float(data["r2"]),
                data["n"],
            ),
            scale_param="n",
            boundary_contact=True,
        ),
        Construction(
            kind="greedy",
            params=GreedyParams,
            build=lambda data: gen_greedy_square(data["n"]),
            scale_param="n",
            boundary_contact=True,
        ),
        Construction(
            kind="explicit-disks",
            params=ExplicitDisksParams,
            build=lambda data: gen_explicit_disks(data["K"]),
            scale_param="K",
            boundary_contact=True,
        ),
        Construction(
            kind="square-layers",
            params=SquareLayersParams,
            build=lambda data: gen_square_layers(data["lam"]),
            scale_param="lam",
            boundary_contact=False,
        ),
        Construction(
            kind="layers-general",
            params=LayersGeneralParams,
            build=lambda data: gen_layers_general(
                data["body"],
                data["container"],
                data["edge"],
                data["lam"],
            ),
            scale_param="lam",
            boundary_contact=False,
        ),
        Construction(
            kind="sloped-squares",
            params=SlopedSquaresParams,
            build=lambda data: gen_sloped_squares(float(data["slope"]), data["depth"]),
            scale_param="depth",
            boundary_contact=True,
        ),
    )
}
