import numpy as np
import pytest

import fanwelfare as fw


@pytest.fixture
def canonical_params():
    """The reference triage parameters used throughout (gamma*H on the boundary)."""
    return fw.TriageParams(L=0.1, H=0.5, gamma=2.0)


def build_nested_table(n, breakpoints=(0.0, 0.35, 0.7), spreads=(1.0, 0.5, 0.1)):
    """A valid decreasing vertex table: contamination-style sets that shrink.

    Each band's vertices are (1 - s) * uniform + s * e_i; smaller spread s
    means a smaller set, so decreasing spreads give nested, shrinking bands.
    """
    sets = []
    for s in spreads:
        vertices = []
        for i in range(n):
            w = np.full(n, (1.0 - s) / n)
            w[i] += s
            vertices.append(fw.WeightVector(w))
        sets.append(tuple(vertices))
    return fw.VertexTableFan(tuple(breakpoints), tuple(sets), "decreasing")


@pytest.fixture
def nested_table():
    return build_nested_table


def build_adversarial_table(boundaries=(0.0, 0.05, 0.5)):
    """A deliberately invalid (non-monotone) table, declared decreasing.

    Bands: biased singleton, then the full simplex, then the uniform
    singleton; neither inclusion order holds across the first boundary. The
    default boundaries keep the interesting geometry inside the unit box.
    """
    return fw.VertexTableFan(
        tuple(boundaries),
        (
            (fw.WeightVector([0.6, 0.4]),),
            (fw.WeightVector([1.0, 0.0]), fw.WeightVector([0.0, 1.0])),
            (fw.WeightVector([0.5, 0.5]),),
        ),
        "decreasing",
    )


@pytest.fixture
def adversarial_table():
    return build_adversarial_table()
