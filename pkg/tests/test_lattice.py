import json

import networkx as nx
import numpy as np
import pytest

from sekine.idempotents import Catalog, CatalogEntry, Haar
from sekine.idempotents import haar_functional
from sekine.lattice import (
    HasseDiagram,
    OrderRelation,
    build_order,
    export_dot,
    export_json,
    hasse,
    max_workers,
    precedes,
    precedes_fourier,
    theoretic_precedes,
)

from oracles import REFERENCE_K2_EDGES, reference_name, reference_prime_edges


def by_name(cat):
    return {reference_name(e.descriptor): e for e in cat}


def test_eps_and_h_are_extremes(catalog):
    for k in (2, 3, 4):
        cat = catalog(k)
        eps, h = cat[cat.index("eps")].functional, cat[cat.index("h")].functional
        for f in cat.functionals:
            assert precedes(eps, f)
            assert precedes(f, h)


def test_k2_examples(catalog):
    named = by_name(catalog(2))
    plus, plus0, plus1 = (named[n].functional for n in ("h_+", "h_+0", "h_+1"))
    assert precedes(plus, plus1)
    assert not precedes(plus1, plus0)
    assert not precedes(plus0, plus1)


@pytest.mark.parametrize("k", [2, 3, 4, 5, 6])
def test_three_methods_agree(k, catalog):
    cat = catalog(k)
    rels = [build_order(cat, m).rel for m in ("convolution", "fourier", "theory")]
    assert np.array_equal(rels[0], rels[1])
    assert np.array_equal(rels[0], rels[2])


def test_precedes_fourier_pairwise(catalog):
    cat = catalog(4)
    fs = cat.functionals
    for a in fs:
        for b in fs:
            assert precedes(a, b) == precedes_fourier(a, b)


@pytest.mark.parametrize("k", [2, 4, 6])
def test_partial_order_axioms(k, catalog):
    order = build_order(catalog(k))
    assert order.is_reflexive() and order.is_antisymmetric() and order.is_transitive()
    fs = catalog(k).functionals
    n = len(fs)
    for i in range(n):
        for j in range(n):
            if order.rel[i, j] and order.rel[j, i]:
                assert fs[i].distance(fs[j]) < 1e-8


def test_build_order_rejects_unknown_method(catalog):
    with pytest.raises(ValueError):
        build_order(catalog(2), "guess")


def test_theoretic_precedes_rejects_mixed_k():
    with pytest.raises(ValueError):
        theoretic_precedes(Haar(2), Haar(3))


def test_type2_order_rule(catalog):
    # TypeII(q1, l1) < TypeII(q2, l2) iff q2 | q1 and l1 = l2 mod q2
    cat = catalog(8)
    type2 = cat.family("I2")
    for a in type2:
        for b in type2:
            da, db = a.descriptor, b.descriptor
            expected = da.q % db.q == 0 and (da.l - db.l) % db.q == 0
            assert precedes(a.functional, b.functional) == expected


def test_relation_shape_checked():
    with pytest.raises(ValueError):
        OrderRelation(("a", "b"), np.eye(3, dtype=bool))


def test_chain_reduces_to_two_edges():
    rel = np.array([[1, 1, 1], [0, 1, 1], [0, 0, 1]], dtype=bool)
    hd = hasse(OrderRelation(("a", "b", "c"), rel))
    assert hd.edge_labels() == [("a", "b"), ("b", "c")]


def test_cycle_rejected():
    rel = np.array([[1, 1], [1, 1]], dtype=bool)
    with pytest.raises(ValueError):
        hasse(OrderRelation(("a", "b"), rel))


def test_k2_hasse_matches_reference(catalog):
    cat = catalog(2)
    hd = hasse(build_order(cat))
    names = [reference_name(d) for d in cat.descriptors]
    ours = {(names[i], names[j]) for i, j in hd.edges}
    assert len(ours) == 15
    assert ours == set(REFERENCE_K2_EDGES)
    assert nx.is_isomorphic(nx.DiGraph(list(ours)), nx.DiGraph(REFERENCE_K2_EDGES))


@pytest.mark.parametrize("k", [3, 5, 7])
def test_prime_hasse_is_three_layered(k, catalog):
    cat = catalog(k)
    hd = hasse(build_order(cat))
    names = [reference_name(d) for d in cat.descriptors]
    taus = [d.tau.signs for d in cat.descriptors if d.family == "I3"]
    assert {(names[i], names[j]) for i, j in hd.edges} == set(reference_prime_edges(k, taus))


def test_export_dot_k2(catalog):
    hd = hasse(build_order(catalog(2)))
    text = export_dot(hd)
    lines = text.splitlines()
    assert lines[0] == "digraph idempotents {" and lines[-1] == "}"
    assert sum(1 for ln in lines if "[label=" in ln) == 10
    assert sum(1 for ln in lines if "->" in ln) == 15
    assert export_dot(hasse(build_order(catalog(2)))) == text


def test_export_dot_edges_point_upwards(catalog):
    cat = catalog(3)
    hd = hasse(build_order(cat))
    eps, h = cat.index("eps"), cat.index("h")
    assert all(j != eps and i != h for i, j in hd.edges)


def test_single_node_has_no_edges():
    hd = HasseDiagram(("h",), ())
    lines = export_dot(hd).splitlines()
    assert not any("->" in ln for ln in lines)


def test_export_json(catalog):
    hd = hasse(build_order(catalog(2)))
    doc = json.loads(export_json(hd, 2))
    assert doc["k"] == 2 and len(doc["nodes"]) == 10 and len(doc["edges"]) == 15
    assert sum(len(v) for v in doc["adjacency"].values()) == 15


def test_parallel_pairwise_tests(catalog, monkeypatch):
    monkeypatch.setenv("SEKINE_MAX_WORKERS", "4")
    assert max_workers() == 4
    serial = build_order(catalog(4), "convolution").rel
    monkeypatch.setenv("SEKINE_MAX_WORKERS", "1")
    assert np.array_equal(serial, build_order(catalog(4), "convolution").rel)
    monkeypatch.setenv("SEKINE_MAX_WORKERS", "lots")
    assert max_workers() == 1


def test_extremes_checked():
    # a catalog whose only member is h has no eps
    cat = Catalog(2, (CatalogEntry(Haar(2), haar_functional(2)),))
    with pytest.raises(RuntimeError):
        build_order(cat)
