"""Tests for the witness operators, verdicts, and closed-form spectra."""

from __future__ import annotations

import numpy as np
import pytest

from qinflate.errors import (
    DimensionError,
    DomainError,
    InconsistentMarginals,
    MissingMarginal,
    OddCardinalityRequired,
    UnknownLabel,
)
from qinflate.linalg import (
    DensityMatrix,
    HermitianOperator,
    SubsystemLayout,
    identity,
    kron,
    partial_trace,
    permute_subsystems,
)
from qinflate.states import (
    QUBIT3,
    Distribution,
    LocalBasis,
    ghz_distn,
    ghz_state,
    measure_local,
    nu_decomposition,
    qutrit_pair,
    random_density_matrix,
    random_pure_state,
    toth_acin,
    toth_acin_operator,
    tri_bell,
    w_distn,
    w_state,
    white_noise_mixture,
)
from qinflate.witness import (
    GHZ_FIDELITY_THRESHOLD,
    QUTRIT_MIXED_REFERENCE,
    classical_delta,
    cut_witness_classical,
    cut_witness_quantum,
    fidelity_witness,
    hall_delta,
    marginals_of,
    schmidt224_entry,
    pure_delta_structure,
    qutrit_witnesses,
    supp_ker_test,
    tri_bell_cubic,
    tri_bell_eigs,
    toth_acin_eigs,
    verdict,
    werner_ghz_eigs,
    werner_thresholds,
    werner_w_eigs,
)

from oracles import classical_cut_tensor_oracle, jacobi_eigh

CUTS = (("A", "B"), ("A", "C"), ("B", "C"))


class TestHallDelta:
    def test_psd_on_genuine_marginals(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            rho = random_density_matrix(QUBIT3, rng)
            d = hall_delta(marginals_of(rho))
            assert d.min_eigenvalue() > -1e-10

    def test_even_cardinality_rejected(self):
        layout = SubsystemLayout((2, 2), ("A", "B"))
        rho = DensityMatrix(identity(layout) * 0.25)
        with pytest.raises(OddCardinalityRequired):
            hall_delta(marginals_of(rho))

    def test_missing_marginal_rejected(self):
        rho = ghz_state().to_density()
        margs = marginals_of(rho)
        del margs[frozenset({"A", "B"})]
        with pytest.raises(MissingMarginal):
            hall_delta(margs)

    def test_inconsistent_marginals_rejected(self):
        margs = marginals_of(ghz_state().to_density())
        other = marginals_of(w_state().to_density())
        margs[frozenset({"A"})] = other[frozenset({"A"})]
        # W and GHZ single-site marginals coincide; perturb instead
        layout = SubsystemLayout((2,), ("A",))
        skew = DensityMatrix(
            HermitianOperator(layout, np.array([[0.9, 0], [0, 0.1]]))
        )
        margs[frozenset({"A"})] = skew
        with pytest.raises(InconsistentMarginals):
            hall_delta(margs)

    def test_witness_decomposition_identity(self):
        # I_xy equals Delta plus (rho_x (x) rho_y - rho_xy) (x) 1_z
        rng = np.random.default_rng(12)
        for _ in range(10):
            rho = random_density_matrix(QUBIT3, rng)
            delta = hall_delta(marginals_of(rho))
            for x, y in CUTS:
                w = cut_witness_quantum(rho, (x, y))
                rx = partial_trace(rho.op, {x})
                ry = partial_trace(rho.op, {y})
                rxy = partial_trace(rho.op, {x, y})
                diff = kron(rx, ry) + (-1.0) * permute_subsystems(
                    rxy, tuple(sorted((x, y)))
                )
                (z,) = [lab for lab in "ABC" if lab not in (x, y)]
                rz_id = identity(SubsystemLayout((2,), (z,)))
                full = QUBIT3
                from qinflate.linalg import embed

                term = embed(kron(diff, rz_id * 1.0), full)
                lhs = w.entries
                rhs = delta.entries + term.entries
                assert np.max(np.abs(lhs - rhs)) < 1e-10


class TestClassicalDelta:
    def test_matches_oracle_on_random_distributions(self):
        rng = np.random.default_rng(13)
        for _ in range(5):
            t = rng.random((2, 3, 2))
            t /= t.sum()
            p = Distribution((2, 3, 2), t.reshape(-1))
            for ax, ay, cut in ((0, 1, ("A", "B")), (0, 2, ("A", "C")), (1, 2, ("B", "C"))):
                got = cut_witness_classical(p, cut)
                want = classical_cut_tensor_oracle(t, ax, ay)
                assert np.max(np.abs(got - want)) < 1e-12

    def test_delta_nonnegative_for_genuine_joint(self):
        rng = np.random.default_rng(14)
        t = rng.random((2, 2, 2))
        t /= t.sum()
        p = Distribution((2, 2, 2), t.reshape(-1))
        margs = {
            frozenset(k): p.marginal(k)
            for k in ((0,), (1,), (2,), (0, 1), (0, 2), (1, 2))
        }
        d = classical_delta(margs)
        assert d.min() > -1e-12

    def test_missing_marginal(self):
        p = ghz_distn()
        margs = {frozenset(k): p.marginal(k) for k in ((0,), (1,), (2,), (0, 1), (0, 2))}
        with pytest.raises(MissingMarginal):
            classical_delta(margs)

    def test_diagonal_state_matches_distribution_witness(self):
        # For classical (diagonal) states the quantum witness diagonal equals
        # the classical cut tensor.
        from qinflate.states import encode_distribution

        for p in (ghz_distn(), w_distn()):
            rho = encode_distribution(p)
            for cut in CUTS:
                w = cut_witness_quantum(rho, cut)
                diag = np.real(np.diag(w.entries)).reshape(p.outcome_dims)
                tensor = cut_witness_classical(p, cut)
                assert np.max(np.abs(diag - tensor)) < 1e-12


class TestCutWitness:
    def test_hermitian_unit_trace_identity_like(self):
        # a fully mixed state gives I_xy = 1 - small corrections; compute directly
        rho = DensityMatrix(identity(QUBIT3) * 0.125)
        for cut in CUTS:
            w = cut_witness_quantum(rho, cut)
            # every marginal is maximally mixed: I = 1 - 3/2^1 ... compute
            # directly: 1 - 3*(1/2) + 1/4 + 1/4 + 1/4 = 1/4 on the diagonal
            assert np.max(np.abs(w.entries - 0.25 * np.eye(8))) < 1e-12

    def test_rejects_bad_labels(self):
        rho = ghz_state().to_density()
        with pytest.raises(UnknownLabel):
            cut_witness_quantum(rho, ("A", "A"))
        with pytest.raises(UnknownLabel):
            cut_witness_quantum(rho, ("A", "X"))

    def test_rejects_wrong_arity(self):
        layout = SubsystemLayout((2, 2), ("A", "B"))
        rho = DensityMatrix(identity(layout) * 0.25)
        with pytest.raises(DimensionError):
            cut_witness_quantum(rho, ("A", "B"))

    def test_spectrum_matches_jacobi_oracle(self):
        rng = np.random.default_rng(15)
        rho = random_density_matrix(QUBIT3, rng)
        for cut in CUTS:
            w = cut_witness_quantum(rho, cut)
            oracle = jacobi_eigh(w.entries)
            assert np.max(np.abs(w.spectrum.eigenvalues - oracle)) < 1e-9

    def test_invariant_under_cut_order(self):
        rho = w_state().to_density()
        a = cut_witness_quantum(rho, ("A", "B")).entries
        b = cut_witness_quantum(rho, ("B", "A")).entries
        assert np.max(np.abs(a - b)) < 1e-14

    def test_eigenvalue_clusters(self):
        w = cut_witness_quantum(tri_bell(4.0).to_density(), ("A", "B"))
        clusters = w.eigenvalue_clusters()
        assert all(mult == 2 for _, mult in clusters)
        assert sum(mult for _, mult in clusters) == 8


class TestVerdict:
    def test_witnessed_on_ghz(self):
        rho = ghz_state().to_density()
        for cut in CUTS:
            v = verdict(cut_witness_quantum(rho, cut))
            assert v.witnessed
            assert v.evidence is not None
            assert v.evidence.min_value < -0.2
            assert v.evidence.vector is not None

    def test_inconclusive_on_product(self):
        amps = np.zeros(8)
        amps[0] = 1.0
        from qinflate.states import PureState

        rho = PureState(QUBIT3, amps).to_density()
        for cut in CUTS:
            assert not verdict(cut_witness_quantum(rho, cut)).witnessed

    def test_classical_verdict_carries_outcome(self):
        t = cut_witness_classical(ghz_distn(), ("A", "B"))
        v = verdict(t)
        assert v.witnessed
        assert v.evidence.outcome is not None
        assert t[v.evidence.outcome] == pytest.approx(v.evidence.min_value)

    def test_threshold_respected(self):
        t = np.array([[-1e-9, 0.1], [0.2, 0.3]])
        assert not verdict(t).witnessed
        assert verdict(t, tol=1e-10).witnessed


class TestPureDeltaStructure:
    def test_decomposition_holds_for_random_pure(self):
        rng = np.random.default_rng(16)
        for _ in range(25):
            psi = random_pure_state(QUBIT3, rng)
            conj = pure_delta_structure(psi)  # raises if identity fails
            # rank of Delta is at most 2 for pure three-qubit states
            delta = hall_delta(marginals_of(psi.to_density()))
            evs = delta.spectrum.eigenvalues
            assert np.sum(evs > 1e-9) <= 2
            assert conj.trace() == pytest.approx(1.0, abs=1e-10)

    def test_w_state_delta_matrix(self):
        # Delta on the W state has entries in {0, 1/3}: the projector onto W
        # plus the projector onto its spin-flip image.
        delta = hall_delta(marginals_of(w_state().to_density()))
        m = permute_subsystems(delta.op, ("A", "B", "C")).entries
        want = np.zeros((8, 8))
        w_idx = [1, 2, 4]  # |001>, |010>, |100>
        wb_idx = [3, 5, 6]  # |011>, |101>, |110>
        for block in (w_idx, wb_idx):
            for i in block:
                for j in block:
                    want[i, j] = 1 / 3
        assert np.max(np.abs(m - want)) < 1e-12

    def test_rejects_non_qubit(self):
        from qinflate.states import PureState, QUTRIT3

        amps = np.zeros(27)
        amps[0] = 1.0
        with pytest.raises(DimensionError):
            pure_delta_structure(PureState(QUTRIT3, amps))


class TestSuppKerTest:
    def test_fires_on_ghz(self):
        rho = ghz_state().to_density()
        assert any(supp_ker_test(rho, cut) for cut in CUTS)

    def test_sound_when_it_fires(self):
        # whenever the support/kernel criterion fires, the same cut's witness
        # has a negative eigenvalue
        rng = np.random.default_rng(17)
        fired = 0
        for _ in range(40):
            psi = random_pure_state(QUBIT3, rng)
            rho = psi.to_density()
            for cut in CUTS:
                if supp_ker_test(rho, cut):
                    fired += 1
                    assert verdict(cut_witness_quantum(rho, cut)).witnessed
        assert fired > 0

    def test_silent_on_product_state(self):
        from qinflate.states import PureState

        amps = np.zeros(8)
        amps[0] = 1.0
        rho = PureState(QUBIT3, amps).to_density()
        for cut in CUTS:
            assert not supp_ker_test(rho, cut)


class TestFidelityWitness:
    def test_ghz_and_w_fidelities(self):
        f_ghz, f_w, flagged = fidelity_witness(ghz_state().to_density())
        assert f_ghz == pytest.approx(1.0)
        assert f_w == pytest.approx(0.0, abs=1e-12)
        assert flagged
        f_ghz, f_w, flagged = fidelity_witness(w_state().to_density())
        assert f_w == pytest.approx(1.0)
        assert flagged

    def test_threshold_values(self):
        assert GHZ_FIDELITY_THRESHOLD == pytest.approx((1 + np.sqrt(3)) / 4)

    def test_not_flagged_on_noise(self):
        rho = DensityMatrix(identity(QUBIT3) * 0.125)
        _, _, flagged = fidelity_witness(rho)
        assert not flagged


class TestTriBell:
    def test_cubic_matches_assembled_spectrum(self):
        for t in (3.0, 5.0, 2 / 0.19, 40.0):
            w = cut_witness_quantum(tri_bell(t).to_density(), ("A", "B"))
            closed = tri_bell_eigs(t)
            assert np.max(np.abs(w.spectrum.eigenvalues - closed)) < 1e-9

    def test_vieta_product_negative(self):
        for t in (2.5, 3.0, 10.0, 100.0):
            (b, c, d), roots, prod = tri_bell_cubic(t)
            assert prod == pytest.approx(-d)
            assert prod == pytest.approx(float(np.prod(roots)), rel=1e-9)
            assert prod < 0  # at least one negative root for every t > 2

    def test_roots_satisfy_cubic(self):
        (b, c, d), roots, _ = tri_bell_cubic(7.3)
        for r in roots:
            assert abs(r**3 + b * r**2 + c * r + d) < 1e-6

    def test_domain(self):
        with pytest.raises(DomainError):
            tri_bell_cubic(2.0)

    def test_min_eig_at_leading_amplitude_09(self):
        t = 2 / 0.19
        w = cut_witness_quantum(tri_bell(t).to_density(), ("A", "B"))
        clusters = w.eigenvalue_clusters()
        assert clusters[0][0] == pytest.approx(-0.0529889, abs=5e-7)
        assert clusters[0][1] == 2


class TestWerner:
    def test_ghz_closed_form_matches_assembled(self):
        for p in (0.0, 0.3, 0.5, 0.8, 1.0):
            rho = white_noise_mixture(ghz_state(), p)
            w = cut_witness_quantum(rho, ("A", "B"))
            assert np.max(np.abs(w.spectrum.eigenvalues - werner_ghz_eigs(p))) < 1e-10

    def test_w_closed_form_matches_assembled(self):
        for p in (0.0, 0.4, 0.627, 0.9, 1.0):
            rho = white_noise_mixture(w_state(), p)
            w = cut_witness_quantum(rho, ("A", "B"))
            assert np.max(np.abs(w.spectrum.eigenvalues - werner_w_eigs(p))) < 1e-10

    def test_thresholds(self):
        rep = werner_thresholds()
        assert rep.ghz_threshold == pytest.approx(0.5, abs=1e-9)
        assert rep.w_threshold == pytest.approx(0.6270, abs=5e-4)
        # verdict flips across each threshold
        for psi, thr in ((ghz_state(), rep.ghz_threshold), (w_state(), rep.w_threshold)):
            below = white_noise_mixture(psi, thr - 1e-3)
            above = white_noise_mixture(psi, thr + 1e-3)
            assert not verdict(cut_witness_quantum(below, ("A", "B"))).witnessed
            assert verdict(cut_witness_quantum(above, ("A", "B"))).witnessed


class TestTothAcin:
    def test_closed_form_matches_assembled(self):
        for c in (-1.0, -0.5, 0.0, 0.4, 1.0):
            op = toth_acin_operator(c)
            w = cut_witness_quantum(op, ("A", "B"))
            assert np.max(np.abs(w.spectrum.eigenvalues - toth_acin_eigs(c))) < 1e-10

    def test_witnessed_for_all_nonzero_c(self):
        # 4 + 3c - 2 sqrt(4 + 6c + 9c^2) is strictly negative unless c = 0
        for c in (-0.6, -0.3, 0.5, 1.0):
            rho = toth_acin(c)
            assert verdict(cut_witness_quantum(rho, ("A", "B"))).witnessed
        assert not verdict(cut_witness_quantum(toth_acin(0.0), ("A", "B"))).witnessed

    def test_min_eig_zero_at_c_zero(self):
        assert float(toth_acin_eigs(0.0)[0]) == pytest.approx(0.0, abs=1e-12)


class TestQutrits:
    def test_mixed_reference_spectrum(self):
        rep = qutrit_witnesses(0.5, 0.25)
        for spec in rep.mixed_spectra.values():
            assert np.max(np.abs(spec - QUTRIT_MIXED_REFERENCE)) < 1e-9
        assert rep.mixed_matches_reference

    def test_pure_witnessed_at_reference_weights(self):
        rep = qutrit_witnesses(0.5, 0.25)
        mins = [float(s[0]) for s in rep.pure_spectra.values()]
        assert min(mins) == pytest.approx(-0.013480, abs=5e-6)
        assert any(v.witnessed for v in rep.pure_verdicts.values())

    def test_mixed_independent_of_weights(self):
        a = qutrit_witnesses(0.5, 0.25)
        b = qutrit_witnesses(0.2, 0.7)
        for k in a.mixed_spectra:
            assert np.max(np.abs(a.mixed_spectra[k] - b.mixed_spectra[k])) < 1e-10


class TestSchmidt224Entry:
    def test_closed_form(self):
        a0, a4 = 0.5, 0.3
        rest = 1 - a0**2 - a4**2
        a5 = np.sqrt(rest * 0.5)
        a6 = np.sqrt(rest * 0.3)
        a7 = np.sqrt(rest * 0.2)
        entry = schmidt224_entry(a0, a4, a5, a6, a7)
        assert entry == pytest.approx(-(a0**2) * (1 - a0**2 - a4**2))
        assert entry < 0

    def test_with_phase(self):
        a0, a4 = 0.4, 0.2
        rest = 1 - a0**2 - a4**2
        a5 = np.sqrt(rest / 3)
        a6 = np.sqrt(rest / 3)
        a7 = np.sqrt(rest / 3)
        entry = schmidt224_entry(a0, a4, a5, a6, a7, phi0=0.8)
        assert entry == pytest.approx(-(a0**2) * (1 - a0**2 - a4**2))


class TestMeasuredDistributions:
    def test_computational_measurement_reproduces_diagonal(self):
        rho = ghz_state().to_density()
        p = measure_local(rho, LocalBasis.computational(QUBIT3))
        assert p.probs[0] == pytest.approx(0.5)
        assert p.probs[7] == pytest.approx(0.5)
        v = verdict(cut_witness_classical(p, ("A", "B")))
        assert v.witnessed

    def test_pauli_x_measurement_of_ghz(self):
        # X-basis statistics of GHZ: parity of the three outcomes is even
        p = measure_local(ghz_state().to_density(), LocalBasis.pauli_x())
        t = p.tensor
        for idx in np.ndindex(2, 2, 2):
            if sum(idx) % 2 == 0:
                assert t[idx] == pytest.approx(0.25)
            else:
                assert t[idx] == pytest.approx(0.0, abs=1e-12)


class TestLinearIndependence:
    def test_witnessed_pure_states_span_dim_at_least_3(self):
        # every pure state witnessed on some cut has local supports spanning
        # at least dimension 3 overall (it cannot be a product across the cut)
        rng = np.random.default_rng(18)
        for _ in range(20):
            psi = random_pure_state(QUBIT3, rng)
            rho = psi.to_density()
            for x, y in CUTS:
                if not verdict(cut_witness_quantum(rho, (x, y))).witnessed:
                    continue
                nu = nu_decomposition(rho, x, y)
                # a nonzero negative part certifies rho_xy != rho_x (x) rho_y
                assert nu.nu_minus.trace() > 1e-12
