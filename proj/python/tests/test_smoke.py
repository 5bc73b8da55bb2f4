import pytest

import qra


def test_bundled_frames_round_trip():
    names = qra.bundled_frame_names()
    assert len(names) == 14
    for name in names:
        w = qra.bundled_frame(name)
        assert qra.validate_frame(w)["ok"]
        a = qra.complex_algebra(w)
        assert qra.validate_algebra(a)["ok"]
        assert qra.frame_iso(qra.dual_frame(a), w) is not None
        assert len(qra.roundtrip_algebra(a)) == a["size"]


def test_sugihara_three():
    s3 = qra.complex_algebra(qra.bundled_frame("W3_1_2"))
    flags = qra.classify(s3)
    assert all(flags.values())
    assert qra.no_finite_rep_filter(s3) is None
    l3 = qra.complex_algebra(qra.bundled_frame("W3_1_1"))
    assert qra.algebra_iso(s3, l3) is None
    assert qra.no_finite_rep_filter(l3) is not None


def test_counts_and_enumeration():
    assert qra.count_algebras(4) == (9, 10)
    assert len(qra.enumerate_frames("2x2", "dqra")) == 23
    assert len(qra.enumerate_frames("bowtie", "dinfl")) == 11


def test_filters_and_homs():
    b2 = qra.complex_algebra(qra.bundled_frame("W2_1_1"))
    assert len(qra.gen_prime_filters(b2)) == 3
    assert qra.enumerate_homs(b2, b2) == [[0, 1]]
    assert sorted(qra.priestley_roundtrip(b2)) == [0, 1]


def test_representation():
    b2 = qra.complex_algebra(qra.bundled_frame("W2_1_1"))
    r = qra.represent(b2, max_points=1)
    assert r["result"] == "certificate"
    assert qra.verify_certificate(b2, r["certificate"])["ok"]


def test_subreducts():
    assert qra.family(1) == "A12"
    assert qra.family(13) == "B8"
    assert qra.subreduct(3) is None
    s = qra.subreduct(13)
    assert len(s["members"]) == 8 and s["poset"] == "1+3"


def test_catalog_small():
    c = qra.catalog(4)
    assert [e["name"] for e in c["entries"]][:4] == ["D1_1_1", "D2_1_1", "D3_1_1", "D3_1_2"]


def test_errors():
    with pytest.raises(qra.NotFound):
        qra.bundled_frame("nope")
    with pytest.raises(qra.StructuralError):
        qra.validate_algebra("{\"size\": 2,")
