from .base import ModelBase, to_jsonable
from .enum import *
from .beta import Beta
from .quadrangulation import Quadrangulation, Region
from .polygon import Polygon, PolygonTable, PathCountTable
from .bound import ContourWeights, BoundReport
from .measure import GibbsParams, Event, ExactMeasure, SplitMeasure
from .contour import Contour, ContourMeasure, ContourSet
from .chain import Schedule, ChainState, Estimate, EstimateReport
from .report import CheckReport
from .run_config import RunConfig
