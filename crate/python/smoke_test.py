"""Smoke test for the polyspan Python bindings."""

import json
import pathlib

import polyspan_py as ps

GOLDENS = pathlib.Path(__file__).resolve().parent.parent / "goldens"


def read(name):
    return (GOLDENS / name).read_text()


def main():
    assert ps.DOCUMENT_VERSION == "1"

    composite = ps.compose("set", read("a2.json"), read("b3.json"))
    assert composite == read("a2_after_b3.json")
    assert json.loads(composite)["payload"]["e"] == 6

    assert ps.random("polynomial", 1) == read("random_polynomial_1.json")
    assert ps.random("mod", 3) == ps.random("mod", 3)

    family = json.dumps({"version": "1", "kind": "family", "payload": {"base": 1, "proj": [0, 0, 0]}})
    out = json.loads(ps.eval(read("a2.json"), family))
    assert len(out["payload"]["proj"]) == 9

    try:
        ps.compose("rel", read("a2.json"), read("b3.json"))
    except ValueError as e:
        assert "kind mismatch" in str(e)
    else:
        raise AssertionError("expected a kind mismatch")

    assert len(ps.suites()) == 11
    passed, report = ps.run_check("distributivity", seed=42, count=50)
    assert passed, report
    print(report, end="")
    print("ok")


if __name__ == "__main__":
    main()
