#!/usr/bin/env python3
"""Writes altitude.asc: a coarse Puerto Rico main-island mask with a smooth
central ridge. Sea cells are NODATA. Usage: make_altitude.py [cellsize_m]"""
import math
import sys

COAST = [
    (18.505, -67.165), (18.480, -66.950), (18.492, -66.700), (18.480, -66.400),
    (18.475, -66.200), (18.470, -66.100), (18.440, -65.900), (18.385, -65.620),
    (18.270, -65.590), (18.150, -65.730), (18.020, -65.850), (17.965, -66.100),
    (17.955, -66.400), (17.975, -66.620), (17.950, -66.880), (17.925, -67.200),
    (18.080, -67.205), (18.200, -67.165), (18.380, -67.265),
]

LAT0, LAT1 = 17.88, 18.56
LON0, LON1 = -67.32, -65.54
NODATA = -9999


def inside(lat, lon):
    hit = False
    n = len(COAST)
    for i in range(n):
        (ya, xa), (yb, xb) = COAST[i], COAST[(i + 1) % n]
        if (ya > lat) != (yb > lat):
            x = xa + (lat - ya) * (xb - xa) / (yb - ya)
            if lon < x:
                hit = not hit
    return hit


def altitude(lat, lon):
    ridge = math.exp(-((lat - 18.17) / 0.08) ** 2)
    taper = math.exp(-((lon + 66.45) / 0.55) ** 2)
    east = 0.6 * math.exp(-((lat - 18.28) / 0.05) ** 2 - ((lon + 65.80) / 0.08) ** 2)
    return round(20 + 1100 * ridge * taper + 900 * east, 1)


def main():
    cell = float(sys.argv[1]) if len(sys.argv) > 1 else 500.0
    # Spherical earth, matching the toolkit's local projection.
    m_lat = 6371008.8 * math.pi / 180
    m_lon = m_lat * math.cos(math.radians(LAT0))
    dlat, dlon = cell / m_lat, cell / m_lon
    rows = int((LAT1 - LAT0) / dlat) + 1
    cols = int((LON1 - LON0) / dlon) + 1
    out = [f"ncols {cols}", f"nrows {rows}", f"xllcenter {LON0}", f"yllcenter {LAT0}",
           f"cellsize {cell:g}", f"NODATA_value {NODATA}"]
    for r in range(rows):
        lat = LAT0 + (rows - 1 - r) * dlat
        vals = []
        for c in range(cols):
            lon = LON0 + c * dlon
            vals.append(f"{altitude(lat, lon):g}" if inside(lat, lon) else str(NODATA))
        out.append(" ".join(vals))
    with open("altitude.asc", "w") as f:
        f.write("\n".join(out) + "\n")


if __name__ == "__main__":
    main()
