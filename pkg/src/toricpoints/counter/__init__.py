"""Point counting: Cox-coordinate and affine enumeration, heights, regions and fits."""
from .affine import AffineModel, ModelError, enumerate_affine, load_model
from .cox import CountError, enumerate_cox
from .fit import AsymptoticGrowthRegressor, FitError, FitResult, fit_asymptotics, verdict
from .heights import HeightError, HeightSpec, MonomialHeightTransformer, height_eval, height_spec
from .records import CountRecord, default_schedule, read_csv, write_csv
from .regions import ALL, Region, parse_region

__all__ = [
    "ALL", "AffineModel", "AsymptoticGrowthRegressor", "CountError", "CountRecord", "FitError",
    "FitResult", "HeightError", "HeightSpec", "ModelError", "MonomialHeightTransformer", "Region",
    "default_schedule", "enumerate_affine", "enumerate_cox", "fit_asymptotics", "height_eval",
    "height_spec", "load_model", "parse_region", "read_csv", "verdict", "write_csv",
]
