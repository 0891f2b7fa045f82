"""Builds the extension with cargo, imports it and exercises each binding.

    python3 python/smoke_test.py [--release]
"""

import math
import pathlib
import shutil
import subprocess
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parents[1]


def build(release):
    cmd = ["cargo", "build", "-p", "fpsci-py"]
    if release:
        cmd.append("--release")
    subprocess.run(cmd, cwd=ROOT, check=True)
    lib = ROOT / "target" / ("release" if release else "debug") / "libfpsci.so"
    out = pathlib.Path(tempfile.mkdtemp()) / "fpsci.so"
    shutil.copy(lib, out)
    sys.path.insert(0, str(out.parent))


def main():
    build("--release" in sys.argv)
    import fpsci

    tree = fpsci.parse("{ a = 1, b: [true, null,], // note\n c: \"x\" }")
    assert tree == {"a": 1.0, "b": [True, None], "c": "x"}, tree
    assert fpsci.parse(fpsci.serialize(tree)) == tree
    try:
        fpsci.parse("[1,\n 2,,]")
    except ValueError as e:
        assert str(e).startswith("2:4:"), e
    else:
        raise AssertionError("bad input parsed")

    demo = (ROOT / "docs" / "demo.exp.any").read_text()
    summary = fpsci.load_experiment_summary(demo)
    assert summary["sessions"] == ["demo"] and summary["trials"] == 60, summary

    sens = fpsci.mouse_sensitivity(30, 800)
    assert abs(sens * (30 / 2.54) * 800 - 360) < 1e-9

    lat = fpsci.click_to_photon_model(60, 60, 1, 2000, seed=3)
    stats = fpsci.latency_summary(lat)
    assert abs(stats["mean"] - 50.0) < 0.5, stats
    assert sum(c for _, c in stats["histogram"]) == 2000

    xs = [float(i) for i in range(1, 21)]
    a, b, c, rss = fpsci.quadratic_fit(xs, [0.5 * x * x - 2 * x + 3 for x in xs])
    assert abs(a - 0.5) < 1e-9 and abs(b + 2) < 1e-9 and abs(c - 3) < 1e-9 and rss < 1e-9

    mean, se, n = fpsci.completion_stats([1.0, 2.0, 3.0, 4.0])
    assert (mean, n) == (2.5, 4) and math.isclose(se, math.sqrt(5 / 3) / 2)

    sched = fpsci.make_constant_schedule([("s", 0.2), ("s", 0.4)], 3, 9)
    assert sorted(sched) == [("s", 0.2)] * 3 + [("s", 0.4)] * 3
    order = fpsci.order_trials([("a", 2), ("b", 1)], 5)
    assert sorted(order) == ["a", "a", "b"]

    st = fpsci.Staircase(4.0, 0.5, 0.0, 10.0)
    while not st.complete:
        st.step(st.level > 2.2)
    assert len(st.reversals) == 9 and 1.5 < st.threshold() < 3.0, st

    rows = fpsci.run_session(demo, "demo", "volunteer", sens, 7)
    assert len(rows) == 60
    assert all((r["outcome"] == "success") == (r["completionTimeSec"] is not None) for r in rows)
    assert rows == fpsci.run_session(demo, "demo", "volunteer", sens, 7)

    print("python smoke test ok:", sum(r["outcome"] == "success" for r in rows), "of 60 trials succeeded")


if __name__ == "__main__":
    main()
