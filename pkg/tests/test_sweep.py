import json

from cubiclines.norms import norm_subgroup, sample_nested_pairs, subgroup_fingerprint
from cubiclines.sweep import SweepConfig, fibrations_doc, verify_sweep
from cubiclines.weyl import sample_subgroups


def test_norm_span_monotone_under_restriction():
    # a G-orbit splits into H-orbits, so the G-span sits inside the H-span
    for big, small in sample_nested_pairs(seed=71, count=25):
        assert norm_subgroup(small).contains_sublattice(norm_subgroup(big))


def test_family_orders_divide_group_order():
    from cubiclines.weyl import SplitMix64, perm_order

    rng = SplitMix64(19)
    for sub in sample_subgroups(seed=3, count=10):
        assert 51840 % sub.order == 0
        for _ in range(5):
            g = sub.elements[rng.randrange(sub.order)]
            assert sub.order % perm_order(g) == 0


def test_sweep_family_matches_sampling():
    cfg = SweepConfig(seed=13, random_count=6, jobs=1)
    doc = verify_sweep(cfg)
    fingerprints = [subgroup_fingerprint(s) for s in sample_subgroups(13, 6)]
    assert doc["summary"]["families"] == len(fingerprints)
    by_key = sorted(fingerprints)
    got = [
        (r["signature"]["order"], tuple(r["signature"]["orbit_sizes"]))
        for r in doc["reports"]
    ]
    assert got == [(fp[0], fp[1]) for fp in by_key]


def test_sweep_reports_sorted_and_json_stable():
    cfg = SweepConfig(seed=2, random_count=0, include_cyclic=False, jobs=1)
    doc1 = verify_sweep(cfg)
    doc2 = verify_sweep(cfg)
    assert json.dumps(doc1) == json.dumps(doc2)
    orders = [r["signature"]["order"] for r in doc1["reports"]]
    assert orders == sorted(orders)
    assert doc1["summary"]["families"] == 27  # the stabilizers are pairwise distinct


def test_fibrations_doc_shape():
    doc = fibrations_doc()
    assert list(doc) == ["command", "reports", "summary"]
    assert doc["summary"] == {"lines": 27, "failures": 0}
