"""Smoke test for the rdfdelta extension: build it with
`maturin develop -m crates/python/Cargo.toml` and run this file."""

import json
import pathlib

import rdfdelta

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "crates/core/tests/fixtures"


def read(*parts):
    return (FIXTURES.joinpath(*parts)).read_text()


def main():
    v1 = rdfdelta.Dataset(read("fig5", "v1.nt"), label="v1")
    v2 = rdfdelta.Dataset(read("fig5", "v2.nt"), label="v2")
    assert len(v1) == 2 and len(v2) == 3, (v1, v2)

    result = rdfdelta.detect(v1, v2, "rdf", complex=read("fig5", "complex.json"))
    assert [c.name for c in result.simple] == ["Add_Superclass"], result.simple
    (obsolete,) = result.complex
    assert obsolete.name == "Mark_as_Obsolete"
    assert obsolete.args == ["<http://www.ebi.ac.uk/efo/EFO_0004151>"]
    assert obsolete.consumes == [result.simple[0].id]
    assert result.report_json() == read("fig5", "expected", "report.json")
    assert result.instance_triples == 10
    assert not result.unconsumed and not result.ambiguous

    m1 = rdfdelta.Dataset(read("fig4", "v1.nt"), label="v1")
    m2 = rdfdelta.Dataset(read("fig4", "v2.nt"), label="v2")
    qb = rdfdelta.detect(m1, m2, "qb")
    assert qb.counts["Attach_Type_To_Measure"] == 1
    assert json.loads(qb.report_json(timings=True))["timings"]["setup_seconds"] >= 0

    assert "Add_Label" in rdfdelta.catalog("rdf")
    assert rdfdelta.check("rdf", trials=50) == {"trials": 50, "unconsumed": 0, "ambiguous": 0}
    try:
        rdfdelta.Dataset("<a:s> <a:p> .")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed input was accepted")
    print("python smoke test passed")


if __name__ == "__main__":
    main()
