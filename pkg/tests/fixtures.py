"""Shared fixture graphs and realisations (rank <= 4, labels in {2..7, inf})."""

from fusioncox.fusion_ring import build_group_ring, build_rep_s3, symmetric_group_table
from fusioncox.realisation import VARIANTS, CoxeterMatrix, build_RM_realisation, realisation_from_cartan

I = 0  # infinity in file encoding

GRAPHS = {
    "a1": [[1]],
    "i2_2": [[1, 2], [2, 1]],
    "i2_3": [[1, 3], [3, 1]],
    "i2_4": [[1, 4], [4, 1]],
    "i2_5": [[1, 5], [5, 1]],
    "i2_6": [[1, 6], [6, 1]],
    "i2_7": [[1, 7], [7, 1]],
    "i2_inf": [[1, I], [I, 1]],
    "a3": [[1, 3, 2], [3, 1, 3], [2, 3, 1]],
    "b3": [[1, 4, 2], [4, 1, 3], [2, 3, 1]],
    "h3": [[1, 5, 2], [5, 1, 3], [2, 3, 1]],
    "affine_a2": [[1, 3, 3], [3, 1, 3], [3, 3, 1]],
    "affine_c2": [[1, 4, 2], [4, 1, 4], [2, 4, 1]],
    "affine_g2": [[1, 6, 2], [6, 1, 3], [2, 3, 1]],
    "inf_3": [[1, I, 2], [I, 1, 3], [2, 3, 1]],
    "7_3": [[1, 7, 2], [7, 1, 3], [2, 3, 1]],
    "a4": [[1, 3, 2, 2], [3, 1, 3, 2], [2, 3, 1, 3], [2, 2, 3, 1]],
    "b4": [[1, 4, 2, 2], [4, 1, 3, 2], [2, 3, 1, 3], [2, 2, 3, 1]],
    "d4": [[1, 3, 2, 2], [3, 1, 3, 3], [2, 3, 1, 2], [2, 3, 2, 1]],
    "f4": [[1, 3, 2, 2], [3, 1, 4, 2], [2, 4, 1, 3], [2, 2, 3, 1]],
    "h4": [[1, 5, 2, 2], [5, 1, 3, 2], [2, 3, 1, 3], [2, 2, 3, 1]],
    "affine_a3": [[1, 3, 2, 3], [3, 1, 3, 2], [2, 3, 1, 3], [3, 2, 3, 1]],
    "path_5_6_7": [[1, 5, 2, 2], [5, 1, 6, 2], [2, 6, 1, 7], [2, 2, 7, 1]],
    "star_4_5_inf": [[1, 4, 5, I], [4, 1, 2, 2], [5, 2, 1, 2], [I, 2, 2, 1]],
}

# graphs whose Coxeter group is finite, with |W|
FINITE_ORDERS = {
    "a1": 2, "i2_2": 4, "i2_3": 6, "i2_4": 8, "i2_5": 10, "i2_6": 12, "i2_7": 14,
    "a3": 24, "b3": 48, "h3": 120, "a4": 120, "b4": 384, "d4": 192, "f4": 1152, "h4": 14400,
}


def coxeter(name):
    return CoxeterMatrix.from_rows(GRAPHS[name])


def builder_realisations():
    """``(id, realisation)`` for every fixture graph and every variant."""
    out = []
    for name in GRAPHS:
        for variant in VARIANTS:
            out.append((f"{name}-{variant}", build_RM_realisation(coxeter(name), variant)))
    return out


def rep_s3_affine():
    """Affine A1 over Rep(S3) with Cartan [[2, -V], [-V, 2]]."""
    ring = build_rep_s3()
    v = ring.index("V")
    minus_v = [-1 if i == v else 0 for i in range(ring.rank)]
    two = [2 if i == ring.unit else 0 for i in range(ring.rank)]
    return realisation_from_cartan(ring, CoxeterMatrix.from_rows(GRAPHS["i2_inf"]),
                                   [[two, minus_v], [minus_v, two]], name="Rep(S3) affine A1")


def s3_group_ring_a2():
    """I2(3) over Z[S3] with r_st = -g, r_ts = -g^2 for a 3-cycle g (noncommutative)."""
    table, names = symmetric_group_table(3)
    ring = build_group_ring(table, names, name="Z[S3]")
    g = next(i for i in range(ring.rank)
             if i != ring.unit and (ring.basis(i) ** 3) == ring.one() and ring.basis(i) ** 2 != ring.one())
    g2 = next(i for i, c in (ring.basis(g) ** 2).support())
    vec = lambda i, c: [c if a == i else 0 for a in range(ring.rank)]
    two = vec(ring.unit, 2)
    return realisation_from_cartan(ring, CoxeterMatrix.from_rows(GRAPHS["i2_3"]),
                                   [[two, vec(g, -1)], [vec(g2, -1), two]], name="Z[S3] A2")


def special_realisations():
    return [("rep_s3_affine_a1", rep_s3_affine()), ("z_s3_a2", s3_group_ring_a2())]


def all_realisations():
    return builder_realisations() + special_realisations()
