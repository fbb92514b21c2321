"""Smoke test for the kshg extension module.

Build and run:
    cargo build --release -p kshg-python --features extension-module
    cp target/release/libkshg.so python/kshg.so
    python3 python/smoke_test.py
"""

import math
import os
import sys
import tempfile

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import kshg  # noqa: E402


def main():
    h = kshg.generate("linear", k=3, weight=1)
    assert h.edges == [(0, 1, 1), (1, 2, 1)]
    bound, witness = kshg.classical_bound(h)
    assert (bound, witness) == (6, [0, 2]), (bound, witness)
    assert kshg.closed_form_independence("fractal-tree", k=3) == 10

    g = kshg.expand(kshg.HyperGraph(2, [(0, 1, 1)]))
    assert len(g.labels) == 8 and len(g.edges) == 11 and len(g.bases) == 2
    assert g.brute_force_max() == 3
    assert g.mis_oracle() == 3
    contradiction, trace = g.propagate([(0, 1), (1, 1)])
    assert contradiction and len(trace) >= 6

    rays = kshg.wheel7_demo_rays()
    wheel = kshg.generate("wheel7", rays=rays)
    report = kshg.classify(wheel)
    assert report.classification == "state-independent"
    assert abs(report.lambda_min - 7 / 3) < 0.05 and report.margin > 0.25

    tetra = [kshg.Ray.from_real(*v) for v in [(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)]]
    m = kshg.projector_sum(tetra)
    for i in range(3):
        for j in range(3):
            assert abs(m[i][j] - (4 / 3 if i == j else 0)) < 1e-12
    assert all(abs(x - 4 / 3) < 1e-12 for x in kshg.eigenvalues(m))
    assert abs(tetra[0].overlap(tetra[1]) - 1 / 3) < 1e-12
    assert kshg.hyper_edge_weight(1 / 3) == 1

    r = kshg.parse_rays("0.57735 0 0.57735 0 0.57735 0")[0]
    assert abs(r.amplitudes[0] - 1 / math.sqrt(3)) < 1e-12

    try:
        kshg.HyperGraph.from_text("vertices 2\nedge 1 2 1\nedge 1 2 2")
    except ValueError as e:
        assert "line 3" in str(e)
    else:
        raise AssertionError("duplicate edge accepted")

    try:
        kshg.expand(kshg.generate("complete", k=6)).mis_oracle()
    except kshg.CapacityError:
        pass
    else:
        raise AssertionError("capacity limit not enforced")

    with tempfile.TemporaryDirectory() as d:
        path = os.path.join(d, "g.hg")
        status, out, _ = kshg.run_cli(["gen", "cyclic", "--k", "5", "-o", path])
        assert status == 0
        status, out, _ = kshg.run_cli(["bound", path])
        assert status == 0 and "classical_bound = 12" in out

    print("smoke test passed")


if __name__ == "__main__":
    main()
