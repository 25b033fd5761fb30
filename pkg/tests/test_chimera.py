import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qlinsolve.anneal import chimera_for
from qlinsolve.chimera import (
    BrokenChainError,
    Embedding,
    EmbeddingError,
    build_chimera,
    counter_term_energy,
    detect_broken_chains,
    embed_complete_graph,
    embed_hamiltonian,
    expand_state,
    intact_ground_chain_strength,
    unembed,
    unembed_many,
    verify_embedding,
)
from qlinsolve.qubo_core import QuboModel, brute_force_solve, energies, exact_ground_state

from .conftest import all_states, qubo_models


def chain_model(n, alpha):
    """Physical model of a single isolated chain with zero logical weight."""
    g = build_chimera(1, n)
    chain = tuple(g.qubit(0, c, 1, 0) for c in range(n))
    return embed_hamiltonian(QuboModel([0.0], {}), Embedding({0: chain}), g, alpha)


class TestGraph:
    def test_single_cell(self):
        g = build_chimera(1, 1)
        assert g.num_qubits == 8 and len(g.edges) == 16
        for a, b in g.edges:
            assert g.coordinates(a)[2] != g.coordinates(b)[2]  # opposite shores only

    @pytest.mark.parametrize("rows, cols", [(1, 1), (2, 2), (1, 2), (3, 2)])
    def test_edge_census(self, rows, cols):
        g = build_chimera(rows, cols)
        assert g.num_qubits == 8 * rows * cols
        assert len(g.edges) == 16 * rows * cols + 4 * (rows - 1) * cols + 4 * rows * (cols - 1)

    def test_inter_cell_couplers_join_matching_qubits(self):
        g = build_chimera(1, 2)
        inter = [(a, b) for a, b in g.edges if a // 8 != b // 8]
        assert len(inter) == 4
        for a, b in inter:
            ra, ca, sa, ka = g.coordinates(a)
            rb, cb, sb, kb = g.coordinates(b)
            assert sa == sb == 1 and ka == kb and abs(ca - cb) == 1

    def test_vertical_couplers(self):
        g = build_chimera(2, 1)
        for a, b in (e for e in g.edges if e[0] // 8 != e[1] // 8):
            assert g.coordinates(a)[2] == g.coordinates(b)[2] == 0

    def test_degrees(self):
        g = build_chimera(3, 3)
        centre = [g.qubit(1, 1, s, k) for s in (0, 1) for k in range(4)]
        assert all(len(g.neighbors(q)) == 6 for q in centre)

    def test_empty(self):
        with pytest.raises(ValueError):
            build_chimera(0, 1)


class TestCompleteGraphEmbedding:
    def test_k4_on_one_cell(self):
        g = build_chimera(1, 1)
        emb = embed_complete_graph(4, g)
        lengths = sorted(len(c) for c in emb.chains.values())
        assert lengths == [1, 1, 2, 2] and emb.max_chain_length == 2
        assert verify_embedding(emb, 4, g).ok

    def test_k1(self):
        emb = embed_complete_graph(1, build_chimera(1, 1))
        assert len(emb.qubits) == 1

    def test_k8(self):
        g = build_chimera(2, 2)
        emb = embed_complete_graph(8, g)
        assert emb.max_chain_length <= 3
        assert verify_embedding(emb, 8, g).ok

    @pytest.mark.parametrize("n", range(2, 13))
    def test_verified_for_small_cliques(self, n):
        g = chimera_for(n)
        assert verify_embedding(embed_complete_graph(n, g), n, g).ok

    def test_graph_too_small(self):
        with pytest.raises(EmbeddingError):
            embed_complete_graph(9, build_chimera(2, 2))


class TestVerify:
    def test_shared_qubit(self):
        g = build_chimera(1, 1)
        rep = verify_embedding(Embedding({0: (0, 4), 1: (4, 1)}), 2, g)
        assert any("disjointness" in v for v in rep.violations)

    def test_missing_coupler_names_edge(self):
        g = build_chimera(1, 1)
        rep = verify_embedding(Embedding({0: (0,), 1: (1,)}), [(0, 1)], g)
        assert rep.violations == ["coverage: no physical coupler for logical edge (0, 1)"]

    def test_disconnected_chain(self):
        g = build_chimera(1, 1)
        rep = verify_embedding(Embedding({0: (0, 1)}), 1, g)
        assert any("connectivity" in v for v in rep.violations)


class TestCounterTerm:
    @pytest.mark.parametrize("alpha", [1.0, 3.0, 20.0])
    def test_two_qubit_table(self, alpha):
        phys = chain_model(2, alpha)
        got = energies(phys, all_states(2)).tolist()
        assert got == [0.0, alpha, alpha, 0.0]

    @pytest.mark.parametrize("alpha", [1.0, 3.0, 20.0])
    def test_three_qubit_spectrum(self, alpha):
        got = energies(chain_model(3, alpha), all_states(3))
        want = [0, 4 * alpha / 3, 4 * alpha / 3, 2 * alpha / 3, 4 * alpha / 3, 8 * alpha / 3, 2 * alpha / 3, 0]
        np.testing.assert_allclose(got, want, atol=1e-12)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_minimum_break_penalty(self, n):
        for bits in itertools.product((0, 1), repeat=n):
            if 0 < sum(bits) < n:
                assert counter_term_energy(bits, 1.0) >= 2.0 / n - 1e-12

    def test_no_counter_weight_variant(self):
        g = build_chimera(1, 2)
        emb = Embedding({0: (g.qubit(0, 0, 1, 0), g.qubit(0, 1, 1, 0))})
        bare = embed_hamiltonian(QuboModel([0.0], {}), emb, g, 5.0, counter_weights=False)
        assert energies(bare, all_states(2)).tolist() == [0.0, 0.0, 0.0, -10.0]

    def test_matches_physical_model(self):
        phys = chain_model(4, 2.5)
        for s in all_states(4):
            assert energies(phys, s[None])[0] == pytest.approx(counter_term_energy(s, 2.5))


class TestEmbedHamiltonian:
    @given(qubo_models(max_vars=8), st.sampled_from([0.0, 1.0, 20.0]))
    def test_intact_states_keep_logical_energy(self, model, alpha):
        g = chimera_for(model.num_vars)
        emb = embed_complete_graph(model.num_vars, g)
        phys = embed_hamiltonian(model, emb, g, alpha)
        S = all_states(model.num_vars)
        P = np.array([expand_state(s, emb) for s in S])
        np.testing.assert_allclose(energies(phys, P), energies(model, S), atol=1e-12)

    @given(qubo_models(min_vars=2, max_vars=8))
    def test_each_coupling_on_one_edge(self, model):
        g = chimera_for(model.num_vars)
        emb = embed_complete_graph(model.num_vars, g)
        phys = embed_hamiltonian(model, emb, g, 7.0)
        chain_links = sum(len(c) - 1 for c in emb.chains.values())
        assert len(phys.couplings) == chain_links + len(model.couplings)
        assert sum(phys.weights) == pytest.approx(
            sum(model.weights) + sum(2.0 * (len(c) - 1) * 7.0 for c in emb.chains.values())
        )

    @given(qubo_models(min_vars=2, max_vars=8, density=0.8))
    def test_ground_state_survives_at_safe_strength(self, model):
        g = chimera_for(model.num_vars)
        emb = embed_complete_graph(model.num_vars, g)
        alpha = intact_ground_chain_strength(model, emb)
        assert alpha >= model.max_abs_coefficient()
        state, e = exact_ground_state(embed_hamiltonian(model, emb, g, alpha))
        assert not detect_broken_chains(state, emb)
        assert e == pytest.approx(brute_force_solve(model).ground_energy, abs=1e-9)

    def test_negative_alpha(self):
        g = build_chimera(1, 1)
        with pytest.raises(ValueError):
            embed_hamiltonian(QuboModel([0.0, 0.0], {}), embed_complete_graph(2, g), g, -1.0)

    def test_missing_coupler(self):
        g = build_chimera(1, 1)
        with pytest.raises(EmbeddingError):
            embed_hamiltonian(QuboModel([0.0, 0.0], {(0, 1): 1.0}), Embedding({0: (0,), 1: (1,)}), g)


class TestUnembed:
    def setup_method(self):
        self.g = build_chimera(2, 2)
        self.emb = embed_complete_graph(5, self.g)

    def test_intact_copy(self):
        logical = np.array([1, 0, 1, 1, 0], dtype=np.uint8)
        phys = expand_state(logical, self.emb)
        assert not detect_broken_chains(phys, self.emb)
        np.testing.assert_array_equal(unembed(phys, self.emb), logical)

    def test_discard_rejects(self):
        phys = expand_state([0] * 5, self.emb)
        phys[self.emb.chain_indices()[2][0]] = 1
        with pytest.raises(BrokenChainError) as err:
            unembed(phys, self.emb)
        assert err.value.vertices == [2]

    def test_majority(self):
        phys = expand_state([0] * 5, self.emb)
        ix = self.emb.chain_indices()[0]
        phys[ix[0]] = phys[ix[1]] = 1
        assert unembed(phys, self.emb, "majority")[0] == 1

    def test_tie_goes_to_zero(self):
        emb = embed_complete_graph(4, build_chimera(1, 1))
        phys = expand_state([1, 1, 1, 1], emb)
        phys[emb.chain_indices()[2][0]] = 0
        assert unembed(phys, emb, "majority").tolist() == [1, 1, 0, 1]

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            unembed_many(np.zeros((1, len(self.emb.qubits))), self.emb, "vote")

    def test_mapping_input(self):
        state = {q: 1 for q in self.emb.qubits}
        assert unembed(state, self.emb).tolist() == [1] * 5

    @given(st.data())
    def test_broken_detection_matches_scan(self, data):
        n = len(self.emb.qubits)
        bits = np.array(data.draw(st.lists(st.integers(0, 1), min_size=n, max_size=n)), dtype=np.uint8)
        pos = {q: k for k, q in enumerate(self.emb.qubits)}
        scan = [v for v, chain in self.emb.chains.items() if len({int(bits[pos[q]]) for q in chain}) > 1]
        assert detect_broken_chains(bits, self.emb) == scan
        _, broken = unembed_many(bits, self.emb)
        assert bool(broken[0]) == bool(scan)


def test_embedding_text_roundtrip(tmp_path):
    emb = embed_complete_graph(8, build_chimera(2, 2))
    path = tmp_path / "k8.emb"
    emb.write(path)
    assert Embedding.read(path).chains == emb.chains
    assert emb.to_text().splitlines()[0] == "L0: 0 4 12"
    with pytest.raises(ValueError):
        Embedding.from_text("0 1 2")
