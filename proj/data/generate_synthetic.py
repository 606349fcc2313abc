"""Regenerates the synthetic inputs shipped in this directory.

None of these files come from a real catalog or from MASTER-8. They are
stand-ins with plausible shapes so the presets can be loaded and exercised.
Run from this directory: python3 generate_synthetic.py
"""
import csv
import math

import numpy as np

MU = 398600.4418
RE = 6378.137
J2 = 1.08262668e-3


def histogram(path):
    width = 18.14
    lo = 186.0 + width * np.arange(100)
    hi = lo + width
    hi[-1] = 2000.0
    mid = 0.5 * (lo + hi)
    peaks = [(550, 60, 0.35), (800, 70, 1.0), (1000, 60, 0.5), (1450, 80, 0.6)]
    f = sum(w * np.exp(-0.5 * ((mid - c) / s) ** 2) for c, s, w in peaks) + 0.01
    f /= f.sum()
    with open(path, "w", newline="") as fh:
        fh.write("# synthetic altitude histogram, not MASTER-8 output\n")
        w = csv.writer(fh)
        w.writerow(["bin_lo_km", "bin_hi_km", "freq"])
        for a, b, c in zip(lo, hi, f):
            w.writerow([f"{a:.2f}", f"{b:.2f}", f"{c:.8f}"])


def large_catalog(path):
    rng = np.random.default_rng(20240226)
    rows = []
    masses = []
    # Upper-stage-like cluster, mid-size rocket bodies, and assorted payloads.
    for _ in range(18):
        masses.append((rng.uniform(8300, 9000), rng.uniform(820, 850), 71.0))
    for _ in range(20):
        masses.append((1400.0, rng.uniform(750, 1000), rng.choice([74.0, 82.9])))
    for _ in range(12):
        masses.append((rng.uniform(800, 3000), rng.uniform(600, 1000), rng.uniform(65, 99)))
    masses[0] = (9000.0,) + masses[0][1:]
    masses[-1] = (800.0,) + masses[-1][1:]
    for i, (m, alt, inc) in enumerate(masses):
        ecc = rng.uniform(0.0005, 0.005)
        rows.append([f"L{i + 1:02d}", f"{RE + alt:.3f}", f"{ecc:.5f}", f"{inc:.3f}",
                     f"{rng.uniform(0, 360):.3f}", f"{rng.uniform(0, 360):.3f}",
                     f"{rng.uniform(0, 360):.3f}", f"{m:.1f}", ""])
    with open(path, "w", newline="") as fh:
        fh.write("# synthetic stand-in for a list of 50 massive derelicts (800-9000 kg)\n")
        w = csv.writer(fh)
        w.writerow(["id", "sma_km", "ecc", "inc_deg", "raan_deg", "argp_deg", "anomaly_deg", "mass_kg", "rho_kg_m2"])
        w.writerows(rows)


ASSETS = [
    ("k1", 6862.80, 0.0013, 52.94, 240.18, 76.06, 300.22),
    ("k2", 6933.20, 0.0011, 53.20, 109.69, 106.38, 63.51),
    ("k3", 6921.01, 0.0015, 52.94, 224.49, 71.00, 181.65),
    ("k4", 6924.25, 0.0014, 53.35, 66.92, 68.18, 316.11),
    ("k5", 6874.50, 0.0005, 97.53, 132.48, 273.28, 73.11),
    ("k6", 7131.61, 0.0021, 86.46, 16.74, 77.71, 170.80),
    ("k7", 6917.09, 0.0011, 53.12, 221.95, 66.99, 60.67),
    ("k8", 7565.34, 0.0010, 88.04, 81.73, 122.65, 66.20),
    ("k9", 6955.44, 0.0012, 69.88, 276.33, 67.97, 307.92),
    ("k10", 6796.97, 0.0006, 51.70, 150.06, 78.94, 50.82),
]


def assets(path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["id", "sma_km", "ecc", "inc_deg", "raan_deg", "argp_deg", "anomaly_deg"])
        for row in ASSETS:
            w.writerow(row)


def circular_rates(a, inc):
    n = math.sqrt(MU / a**3)
    f = n * J2 * (RE / a) ** 2
    c = math.cos(inc)
    raan = -1.5 * f * c
    u = n + 0.75 * f * (5 * c * c - 1) + 0.75 * f * (3 * c * c - 1)
    return raan, u


def propagate(a, inc, raan, u, dt):
    dr, du = circular_rates(a, inc)
    return raan + dr * dt, u + du * dt


def direction(inc, raan, u):
    return np.array([
        math.cos(raan) * math.cos(u) - math.sin(raan) * math.sin(u) * math.cos(inc),
        math.sin(raan) * math.cos(u) + math.cos(raan) * math.sin(u) * math.cos(inc),
        math.sin(u) * math.sin(inc),
    ])


def crossing_orbit(target_dir, a, inc, t_c):
    """Circular orbit of inclination `inc` at `target_dir` after t_c seconds."""
    x, y, z = target_dir
    u = math.asin(z / math.sin(inc))
    raan = math.atan2(y, x) - math.atan2(math.sin(u) * math.cos(inc), math.cos(u))
    raan0, u0 = propagate(a, inc, raan, u, -t_c)
    return math.degrees(raan0) % 360, math.degrees(u0) % 360


def conjunction_pair(step_size, tca_step, miss_km):
    a_asset = RE + 610.0
    inc_asset = math.radians(74.07)
    raan_a, u_a = math.radians(120.0), math.radians(30.0)
    t_c = step_size * tca_step
    raan_c, u_c = propagate(a_asset, inc_asset, raan_a, u_a, t_c)
    d = direction(inc_asset, raan_c, u_c)
    a_deb = a_asset + miss_km
    raan_d, u_d = crossing_orbit(d, a_deb, math.radians(82.6), t_c)
    asset = dict(id="26998", sma_km=a_asset, ecc=0.0, inc_deg=74.07, raan_deg=120.0, argp_deg=0.0, anomaly_deg=30.0)
    debris = dict(id="22236", sma_km=a_deb, ecc=0.0, inc_deg=82.6, raan_deg=raan_d, argp_deg=0.0, anomaly_deg=u_d)
    return asset, debris


if __name__ == "__main__":
    histogram("small_debris_histogram.csv")
    large_catalog("large_debris.csv")
    assets("assets.csv")
    asset, debris = conjunction_pair(160.0, 1081, 2.30)
    print("asset", asset)
    print("debris", {k: (round(v, 9) if isinstance(v, float) else v) for k, v in debris.items()})
