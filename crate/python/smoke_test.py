"""Quick check that the extension module loads and agrees with closed forms."""

import json
import math

import loopbound as lb


def close(a, b, tol=1e-9):
    assert abs(a - b) <= tol, (a, b)


def main():
    close(lb.sn(1.0, 0.5), math.sin(0.5))
    close(lb.cs(-1.0, 0.5), math.cosh(0.5))
    close(lb.unit_sphere_volume(2), 4 * math.pi)
    close(lb.comparison_angle(0.0, 1.0, 1.0, math.sqrt(2)), math.pi / 2)

    sphere = lb.ModelSpace.sphere(1.0, 2)
    square = [lb.Point.unit([math.cos(t), math.sin(t), 0.0]) for t in (0, math.pi / 2, math.pi, 3 * math.pi / 2)]
    close(lb.loop_length(sphere, square), 2 * math.pi)
    assert lb.turning_angle(sphere, square) == 0.0
    length_form, _ = lb.theorem_a_check(2, 1.0, math.pi, 4 * math.pi, 2 * math.pi, 0.0)
    assert length_form["holds"], length_form

    cone = lb.ModelSpace.flat_cone(math.pi / 2, 1.0)
    assert cone.kind == "flat-cone"
    p, q = lb.Point.polar(0.5, 0.0), lb.Point.polar(0.5, math.pi / 4)
    close(cone.distance(p, q), 2 * 0.5 * math.sin(math.pi / 8))
    close(lb.ModelSpace.from_json(cone.to_json()).distance(p, q), cone.distance(p, q))

    psi = lb.psi_estimate(0.0, 0.5)
    assert psi["lower"] <= psi["value"] <= psi["upper"], psi

    report = lb.run_scenario("great-circle-equality")
    assert all(v["holds"] for v in report["verdicts"]), report["verdicts"]
    text = lb.run_scenario_json(json.dumps({"name": "corollary-constants", "seed": 1}))
    assert json.loads(text)["scenario"] == "corollary-constants"

    try:
        lb.ModelSpace.flat_cone(-1.0, 1.0)
    except ValueError:
        pass
    else:
        raise AssertionError("negative cone angle accepted")

    print(f"loopbound {lb.__version__}: smoke test passed ({len(lb.list_scenarios())} scenarios)")


if __name__ == "__main__":
    main()
