"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criteria P1-P10 exercise the simulator at production resolution; S1
exercises the figure renderer on real sweep outputs. Runs are memoized on
disk (see _sweepcache) so a warm cache finishes in seconds while a cold one
recomputes every sweep.
"""

import functools
import json
import sys

import numpy as np
import pytest

from hgpdc.config import config_from_preset
from hgpdc.lowgain import compare_lowgain
from hgpdc.physics import theta_angle
from hgpdc.presets import PRESETS, get_preset
from hgpdc.propagator import constraint_residuals, init_state
from hgpdc.runner import CSV_HEADER
from hgpdc.schmidt import SecondMoment, schmidt_decompose

from _sweepcache import SWEEP_COUNTS, cached_run, sweep_table


_CAPSYS = None


@pytest.fixture(autouse=True)
def _uncaptured_reporting(capsys):
    # pytest captures at the file-descriptor level, so the per-criterion
    # lines must be emitted with capture suspended to reach the terminal
    global _CAPSYS
    _CAPSYS = capsys
    yield
    _CAPSYS = None


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"{criterion}: {'PASS' if ok else 'FAIL'} - {detail}"
    if _CAPSYS is not None:
        with _CAPSYS.disabled():
            print(line, flush=True)
    else:
        print(line, file=sys.__stdout__, flush=True)
    assert ok, line


@functools.lru_cache(maxsize=None)
def table(preset: str) -> dict:
    return sweep_table(preset)


def low_row(preset: str) -> dict:
    return cached_run(preset, get_preset(preset).low_power)


def crossings(gain_a, purity_a, gain_b, purity_b):
    """Gain values where curve a crosses curve b, on their shared gain range."""
    lo = max(gain_a.min(), gain_b.min())
    hi = min(gain_a.max(), gain_b.max())
    g = np.linspace(lo, hi, 4001)
    diff = np.interp(g, gain_a, purity_a) - np.interp(g, gain_b, purity_b)
    sign = np.sign(diff)
    idx = np.nonzero(np.diff(sign) != 0)[0]
    return [float(0.5 * (g[i] + g[i + 1])) for i in idx]


def test_p1_low_gain_oracle_equivalence():
    worst_shape, worst_scale = 0.0, 0.0
    for name in ("theta0-sinc-broadband", "theta45-sinc-broadband"):
        cfg = config_from_preset(name)
        power = get_preset(name).low_power
        rec = cached_run(name, power)
        cmp = compare_lowgain(rec["moment"], cfg.grid(), cfg.waveguide,
                              cfg.pump(power))
        worst_shape = max(worst_shape, cmp.shape_error)
        worst_scale = max(worst_scale, abs(cmp.scale_ratio - 1.0))
    ok = worst_shape <= 0.01 and worst_scale <= 0.02
    report("P1", ok, f"max shape deviation {worst_shape:.2e} (<=0.01), "
           f"scale off by {worst_scale:.2e} (<=0.02)")


def test_p2_commutation_constraints():
    cfg = config_from_preset("theta45-sinc-broadband", n_signal=24, n_pump=192)
    t0 = cfg.integration().t0
    init_res = max(constraint_residuals(init_state(cfg.grid(), t0)))
    finals = {name: table(name)["residual_max"].max()
              for name in SWEEP_COUNTS}
    # presets outside the sweep set still have to hold the constraints at
    # their top power
    for name in sorted(set(PRESETS) - set(SWEEP_COUNTS)):
        rec = cached_run(name, get_preset(name).high_power)
        finals[name] = rec["residuals"].max()
    worst_name = max(finals, key=finals.get)
    coarse = cached_run("theta45-sinc-broadband", 2.0)["residuals"].max()
    fine = cached_run("theta45-sinc-broadband", 2.0,
                      n_steps=4096)["residuals"].max()
    ratio = coarse / fine
    ok = (init_res <= 1e-12 and finals[worst_name] <= 1e-3 and ratio >= 8.0)
    report("P2", ok, f"init residual {init_res:.1e} (<=1e-12), worst final "
           f"{finals[worst_name]:.2e} at {worst_name} (<=1e-3), "
           f"step-halving gain {ratio:.1f}x (>=8x)")


def test_p3_low_gain_purity_anchors():
    anchors = [
        ("theta0-sinc-broadband", 0.913, 0.03),
        ("theta45-sinc-broadband", 0.409, 0.05),
        ("thetam11-sinc-broadband", 0.459, 0.05),
        ("theta0-gaussian-broadband", 0.975, 0.02),
        ("theta45-gaussian-broadband", 0.524, 0.05),
    ]
    details, ok = [], True
    for name, expected, tol in anchors:
        rec = low_row(name)
        good = abs(rec["purity"] - expected) <= tol and rec["gain_db"] <= 0.05
        ok = ok and good
        details.append(f"{name} {rec['purity']:.3f} (want {expected}+-{tol})")
    report("P3", ok, "; ".join(details))


def _reaches(tab, threshold_db, target):
    mask = tab["gain_db"] <= threshold_db
    return bool(np.any(tab["purity"][mask] >= target))


def test_p4_high_gain_saturation():
    t45 = table("theta45-sinc-broadband")
    t0 = table("theta0-sinc-broadband")
    tm11 = table("thetam11-sinc-broadband")
    t45g = table("theta45-gaussian-broadband")
    checks = {
        "45deg sinc >=0.99 by 50 dB": _reaches(t45, 50.0, 0.99),
        "45deg sinc >=0.995 by 86 dB": _reaches(t45, 86.0, 0.995),
        "0deg sinc >=0.985 by 66 dB": _reaches(t0, 66.0, 0.985),
        "-11deg sinc 0.661+-0.08 at top":
            abs(tm11["purity"][-1] - 0.661) <= 0.08,
        "-11deg sinc <=0.75 near 99 dB": tm11["purity"][-1] <= 0.75
            and 96.0 <= tm11["gain_db"][-1] <= 102.0,
        "45deg gaussian >=0.995 by 35 dB": _reaches(t45g, 35.0, 0.995),
    }
    failed = [k for k, v in checks.items() if not v]
    report("P4", not failed,
           "all saturation targets met" if not failed
           else "failed: " + "; ".join(failed))


def test_p5_purity_curve_crossing():
    t45 = table("theta45-sinc-broadband")
    t0 = table("theta0-sinc-broadband")
    xs = crossings(t45["gain_db"], t45["purity"], t0["gain_db"], t0["purity"])
    ok = len(xs) == 1 and 20.0 <= xs[0] <= 32.0
    report("P5", ok, f"crossings at {['%.1f' % x for x in xs]} dB "
           "(want exactly one in [20, 32])")


def test_p6_nonmonotonic_apodized_purity():
    tab = table("theta0-gaussian-broadband")
    purity, gain_db, p1 = tab["purity"], tab["gain_db"], tab["p1"]
    low_value = purity[0]
    i_min = int(np.argmin(purity))
    depth = low_value - purity[i_min]
    interior = 0 < i_min < purity.size - 1
    recovered = purity[-1] >= 0.99
    i_dip = int(np.argmin(p1))
    dip_db = gain_db[i_dip]
    ok = (interior and depth >= 0.01 and recovered
          and abs(dip_db - 15.0) <= 8.0)
    report("P6", ok, f"purity dips {depth:.3f} below low-gain {low_value:.3f} "
           f"at {gain_db[i_min]:.1f} dB, recovers to {purity[-1]:.3f}; "
           f"p1 dip at {dip_db:.1f} dB (want 15+-8)")


def _interior_max_then_decreasing(gain_db, values, tol=1e-9):
    """('ok', detail) for curves with an interior peak that never rise again."""
    i = int(np.argmax(values))
    if i == 0 or i == values.size - 1:
        return False, f"peak at sweep edge ({gain_db[i]:.1f} dB)"
    rises = np.nonzero(np.diff(values[i:]) > tol)[0]
    if rises.size:
        j = i + int(rises[0])
        return False, (f"peak {values[i]:.3f} at {gain_db[i]:.1f} dB but rises "
                       f"{values[j]:.3f}->{values[j + 1]:.3f} at "
                       f"{gain_db[j + 1]:.1f} dB")
    return True, f"peak {values[i]:.3f} at {gain_db[i]:.1f} dB, decreasing after"


def test_p7_squeezing_parameter_shapes():
    ok, details = True, []
    for name in ("theta45-sinc-broadband", "theta45-gaussian-broadband"):
        tab = table(name)
        for col in ("r2", "r3"):
            good, what = _interior_max_then_decreasing(tab["gain_db"], tab[col])
            ok = ok and good
            details.append(f"{name} {col}: {what}")
    t0 = table("theta0-sinc-broadband")
    mono = all(bool(np.all(np.diff(t0[c]) >= -1e-9)) for c in ("r1", "r2", "r3"))
    ok = ok and mono
    details.append(f"0deg sinc r1..r3 nondecreasing: {mono}")
    report("P7", ok, "; ".join(details))


def test_p8_nearby_angle_robustness():
    ok, details = True, []
    for theta in (40, 42, 47, 50):
        tab = table(f"theta{theta}-sinc-broadband")
        half = tab["gain_db"].size // 2
        p1_up = bool(np.all(np.diff(tab["p1"][half:]) >= -1e-9))
        p23_down = all(bool(np.all(np.diff(tab[c][half:]) <= 1e-9))
                       for c in ("p2", "p3"))
        top = tab["p1"][-1]
        good = p1_up and p23_down and top >= 0.97
        ok = ok and good
        details.append(f"{theta}deg p1 top {top:.3f}"
                       + ("" if good else " (FAILS trend/threshold)"))
    report("P8", ok, "; ".join(details))


def test_p9_narrowband_trend_insensitivity():
    t45 = table("theta45-sinc-narrowband")
    t0 = table("theta0-sinc-narrowband")
    xs = crossings(t45["gain_db"], t45["purity"], t0["gain_db"], t0["purity"])
    below = t45["purity"][0] < t0["purity"][0]
    above = (np.interp(min(t45["gain_db"][-1], t0["gain_db"][-1]),
                       t45["gain_db"], t45["purity"])
             > np.interp(min(t45["gain_db"][-1], t0["gain_db"][-1]),
                         t0["gain_db"], t0["purity"]))
    ok = len(xs) == 1 and below and above
    report("P9", ok, f"45deg starts below: {below}, ends above: {above}, "
           f"crossings {['%.1f' % x for x in xs]} (want exactly one)")


def test_p10_property_suite():
    details, ok = [], True

    # perturbative scaling: quadrupling the power doubles the overall gain
    worst = 0.0
    for name in ("theta0-sinc-broadband", "theta45-sinc-broadband"):
        p_low = get_preset(name).low_power
        g1 = cached_run(name, p_low)["gain"]
        g4 = cached_run(name, 4.0 * p_low)["gain"]
        worst = max(worst, abs(g4 / g1 - 2.0))
    scaling_ok = worst <= 0.01
    ok = ok and scaling_ok
    details.append(f"G(4P)/G(P) off by {worst:.2e} (<=0.01)")

    # decomposition round-trip on a real mid-gain moment
    name = "theta45-sinc-broadband"
    tab = table(name)
    mid = int(np.argmin(np.abs(tab["gain_db"] - 26.0)))
    rec = cached_run(name, float(tab["power"][mid]))
    grid = config_from_preset(name).grid()
    dec = schmidt_decompose(SecondMoment(rec["moment"], 0.0, 0.0), grid,
                            truncation=0.0)
    sigma = 0.5 * np.sinh(2.0 * dec.r)
    rebuilt = ((dec.signal_modes * grid.sqrt_signal_weights[:, None] * sigma)
               @ (dec.idler_modes * grid.sqrt_idler_weights[:, None]).T)
    rt = (np.linalg.norm(rebuilt - rec["moment"])
          / np.linalg.norm(rec["moment"]))
    rt_ok = rt <= 1e-10
    ok = ok and rt_ok
    details.append(f"SVD round-trip {rt:.1e} (<=1e-10)")

    # grid-refinement stability at the perturbative power
    base = low_row(name)
    fine = cached_run(name, get_preset(name).low_power, n_signal=192)
    drift = max(abs(base["purity"] - fine["purity"]),
                abs(base["gain"] - fine["gain"]),
                abs(base["mode_weights"][0] - fine["mode_weights"][0]))
    grid_ok = drift <= 1e-3
    ok = ok and grid_ok
    details.append(f"N vs 2N drift {drift:.1e} (<=1e-3)")

    # dispersion-angle labels
    angle_err = max(abs(theta_angle(p.waveguide()) - p.theta_label)
                    for p in PRESETS.values())
    angle_ok = angle_err <= 0.2
    ok = ok and angle_ok
    details.append(f"angle label error {angle_err:.2e} deg (<=0.2)")

    # soft absolute-gain check at the top preset power
    top_db = table("theta0-sinc-broadband")["gain_db"][-1]
    soft_ok = abs(top_db - 65.57) <= 0.15 * 65.57
    ok = ok and soft_ok
    details.append(f"0deg top gain {top_db:.2f} dB (65.57 +- 15%)")

    report("P10", ok, "; ".join(details))


# --- S1: figure renderer on real sweep outputs ---------------------------


def _write_sweep_csv(path, tab):
    lines = [CSV_HEADER]
    for i in range(tab["power"].size):
        row = [tab["power"][i], tab["gain"][i], tab["gain_db"][i],
               tab["purity"][i], tab["p1"][i], tab["p2"][i], tab["p3"][i],
               tab["r1"][i], tab["r2"][i], tab["r3"][i],
               tab["res_aa"][i], tab["res_bb"][i], tab["res_ab"][i], 0.0]
        lines.append(",".join("%.12g" % v for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def test_s1_figure_renderer_regenerates_families(tmp_path):
    figrender = pytest.importorskip("figrender")
    from figrender.render import FigureKind, FigureSpec, render

    sweeps = ("theta0-sinc-broadband", "theta45-sinc-broadband",
              "theta0-gaussian-broadband")
    csvs = [_write_sweep_csv(tmp_path / f"{name}.csv", table(name))
            for name in sweeps]

    ok, details = True, []
    for kind in (FigureKind.PURITY_VS_GAIN, FigureKind.MODE_WEIGHTS_VS_GAIN,
                 FigureKind.SQUEEZING_VS_GAIN):
        out = tmp_path / f"{kind.value}.png"
        sidecar = render(FigureSpec(kind=kind, inputs=tuple(csvs), output=out,
                                    labels=tuple(sweeps)))
        summary = json.loads(sidecar.read_text())
        if kind is FigureKind.MODE_WEIGHTS_VS_GAIN:
            partial_ok = all(f["p_sum"]["max"] <= 1.0 + 1e-9
                             for f in summary["files"])
            ok = ok and out.exists() and partial_ok
            details.append(f"top-3 weight sum <= 1: {partial_ok}")
        else:
            ok = ok and out.exists()

    # the plotted columns are the three largest weights; the full
    # decomposition's weights are normalized to one on every row
    sums = [float(np.sum(w)) for name in sweeps
            for w in table(name)["mode_weights"]]
    full_ok = max(abs(s - 1.0) for s in sums) <= 1e-9
    ok = ok and full_ok
    details.append(f"full weight sums = 1: {full_ok}")

    # heatmaps from the raw matrix dumps; panel maxima must match exactly
    heat_ok = True
    for name in ("theta0-sinc-broadband", "theta45-sinc-broadband"):
        rec = cached_run(name, get_preset(name).low_power)
        npz = tmp_path / f"{name}.npz"
        np.savez(npz, moment=rec["moment"], signal_nodes=rec["signal_nodes"],
                 idler_nodes=rec["idler_nodes"])
        out = tmp_path / f"{name}-heat.png"
        sidecar = render(FigureSpec(kind=FigureKind.MOMENT_HEATMAP,
                                    inputs=(npz,), output=out))
        summary = json.loads(sidecar.read_text())
        heat_ok = heat_ok and (summary["files"][0]["panel_max"]
                               == float(np.abs(rec["moment"]).max()))
    ok = ok and heat_ok
    details.append(f"heatmap maxima exact: {heat_ok}")

    report("S1", ok, "; ".join(details))
