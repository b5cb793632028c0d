"""Write the measure files used in the README and CLI examples to demos/measures/."""

from pathlib import Path

from cxorder.catalog import midpoint01, quadrature, trapezoid01, uniform01
from cxorder.measure import dump_measure

OUT = Path(__file__).parent / "measures"

FILES = {
    "midpoint.json": midpoint01(),
    "uniform.json": uniform01(),
    "trapezoid.json": trapezoid01(),
    "chebyshev.json": quadrature("C").measure,
    "gauss2.json": quadrature("G2").measure,
    "g3.json": quadrature("G3").measure,
    "lobatto4.json": quadrature("L4").measure,
    "l5.json": quadrature("L5").measure,
    "simpson.json": quadrature("S").measure,
    "mean.json": quadrature("I").measure,
}

if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    for name, mu in FILES.items():
        dump_measure(mu, OUT / name)
        print(f"wrote {OUT / name}")
