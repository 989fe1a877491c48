"""Acceptance suite: every release criterion, one pass/fail line each.

The 16-site optimization runs dominate the wall time (roughly half an
hour on two cores); they are shared through module-scoped fixtures and
farmed out to a small process pool.
"""

import time
from concurrent.futures import ProcessPoolExecutor

import numpy as np
import pytest

from symvqe import (
    Ansatz,
    CyclicGroup,
    HeisenbergRing,
    MomentumSector,
    StateVector,
    apply_gate,
    apply_h,
    dimer_state,
    energy_gradient,
    inner,
    lanczos_ground,
    metric_tensor,
    momentum_sectors,
    project,
    projected_energy,
    run_ground,
    sector_spec,
    singlet_product,
    swap_count_bound,
    theta_swap_params,
    trial_state,
    verify_eswap_decomposition,
)
from symvqe.hadamard import (
    THETA_1,
    THETA_2,
    energy_from_correlator,
    exact_probs,
    measured_register_state,
    n4_exact_ground,
    n4_ground_circuit,
    pauli_xx_expectation,
    sample,
)
from symvqe.hamiltonian import lowest_in_spin_sector
from symvqe.statevector import Permutation, Swap, eswap_amps, swap_bit_index
from symvqe.symmetry import amida_decompose, long_range_swap_perm

from conftest import dense_heisenberg, dense_projector, random_state_amps

SEEDS = (1, 2, 3, 4, 5)
N = 16
K_MAX = 1000
WORKERS = 2


def _report(name: str, ok: bool, detail: str = "") -> None:
    print(f"\n[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'}"
          f"{'  (' + detail + ')' if detail else ''}")
    assert ok, f"{name}: {detail}"


def _ground_job(kwargs):
    return run_ground(**kwargs)


@pytest.fixture(scope="module")
def pool():
    with ProcessPoolExecutor(max_workers=WORKERS) as ex:
        yield ex


@pytest.fixture(scope="module")
def exact_reference():
    ground = lanczos_ground(HeisenbergRing(N), sector=(None, 0.0))
    triplet = {
        sec.m: lowest_in_spin_sector(HeisenbergRing(N), sec.m, s_z=1.0, total_spin=1.0)
        for sec in momentum_sectors(N)
    }
    return ground, triplet


@pytest.fixture(scope="module")
def ground_runs(pool):
    """Symmetrized D=1/D=2 runs over the fixed seeds, plus bare controls."""
    jobs = {}
    for depth in (1, 2):
        for seed in SEEDS:
            jobs[("sym", depth, seed)] = dict(
                n_sites=N, n_layers=depth, m=0, k_max=K_MAX, seed=seed
            )
    for depth in (1, 2, 4):
        jobs[("bare", depth, 1)] = dict(
            n_sites=N, n_layers=depth, m=None, k_max=K_MAX, seed=1
        )
    keys = list(jobs)
    results = list(pool.map(_ground_job, [jobs[k] for k in keys]))
    return dict(zip(keys, results))


@pytest.fixture(scope="module")
def excitation_tables(pool, ground_runs):
    """Final triplet energies per momentum sector at D=1 and D=2 (seed 1)."""
    ms = [sec.m for sec in momentum_sectors(N)]
    jobs = []
    for depth in (1, 2):
        for m in ms:
            jobs.append(
                dict(
                    n_sites=N,
                    n_layers=depth,
                    m=m,
                    reference="triplet",
                    k_max=K_MAX,
                    seed=1,
                    oracle=None,
                )
            )
    results = list(pool.map(_ground_job, jobs))
    tables = {}
    for depth, chunk in zip((1, 2), (results[: len(ms)], results[len(ms):])):
        e0 = ground_runs[("sym", depth, 1)].energy
        tables[depth] = {m: res.energy - e0 for m, res in zip(ms, chunk)}
    return tables


class TestN4Exactness:
    def test_exact_suite(self):
        start = time.perf_counter()
        _, _, state = n4_ground_circuit()
        from symvqe import energy as energy_of

        e0 = energy_of(HeisenbergRing(4), state)
        xx = pauli_xx_expectation(n4_exact_ground())
        p0, _ = exact_probs()
        elapsed = time.perf_counter() - start
        ok = (
            abs(e0 - (-2.0)) <= 1e-10
            and abs(xx - (-2.0 / 3.0)) <= 1e-12
            and abs(p0 - 1.0 / 6.0) <= 1e-12
            and elapsed < 1.0
        )
        _report(
            "4-site exactness (energy, correlator, interference)",
            ok,
            f"E0 err={e0 + 2.0:.1e}, XX err={xx + 2 / 3:.1e}, "
            f"p0 err={p0 - 1 / 6:.1e}, {elapsed:.2f}s",
        )


class TestGateDecomposition:
    def test_twenty_angles(self):
        thetas = list(np.linspace(0.0, 2.0 * np.pi, 18)) + [THETA_1, THETA_2]
        devs = [verify_eswap_decomposition(t)[1] for t in thetas]
        _report(
            "exchange-gate decomposition identity (20 angles incl. optimum)",
            max(devs) <= 1e-12,
            f"max elementwise dev {max(devs):.2e}",
        )


class TestSwapNetworks:
    def test_counts_and_embedding(self):
        counts_ok = True
        details = []
        for r in (2, 4, 6, 8):
            net = amida_decompose(long_range_swap_perm(max(r + 2, 10), r))
            want_swaps, want_depth, _ = swap_count_bound(r)
            counts_ok &= net.n_swaps == want_swaps and net.depth == want_depth
            details.append(f"r={r}:{net.n_swaps}sw/{net.depth}d")

        r = 8
        net = amida_decompose(long_range_swap_perm(N, r))
        layers = swap_count_bound(r)[2]
        assert layers == 4
        params = theta_swap_params((N, layers), net)
        bare = sector_spec(N, None)
        got = trial_state(Ansatz(N, layers), params, bare)
        want = apply_gate(
            singlet_product(N), Permutation(tuple(long_range_swap_perm(N, r)))
        )
        overlap = abs(inner(want, got))
        ok = counts_ok and overlap >= 1.0 - 1e-10
        _report(
            "long-range swap compilation and 4-layer embedding",
            ok,
            f"{' '.join(details)}; overlap={overlap:.12f}",
        )


class TestGroundStateN16:
    def test_symmetrized_and_bare(self, ground_runs, exact_reference):
        exact_ground, _ = exact_reference
        d1_hits = sum(
            1
            for seed in SEEDS
            if ground_runs[("sym", 1, seed)].fidelity >= 0.985
            and ground_runs[("sym", 1, seed)].energy / N <= -0.444
        )
        d2_hits = sum(
            1
            for seed in SEEDS
            if ground_runs[("sym", 2, seed)].fidelity >= 0.999
            and ground_runs[("sym", 2, seed)].energy / N <= -0.4455
        )
        best_d1 = min(ground_runs[("sym", 1, seed)].energy for seed in SEEDS)
        bare_above = all(
            ground_runs[("bare", depth, 1)].energy > best_d1 for depth in (1, 2, 4)
        )
        detail = (
            f"D=1 hits {d1_hits}/5, D=2 hits {d2_hits}/5, "
            f"best sym D=1 E/JN={best_d1 / N:.5f}, bare D=1/2/4 E/JN="
            + "/".join(f"{ground_runs[('bare', d, 1)].energy / N:.5f}" for d in (1, 2, 4))
            + f", exact {exact_ground.energy / N:.5f}"
        )
        ok = d1_hits >= 3 and d2_hits >= 1 and bare_above
        _report("16-site ground state (5 seeds, bare controls)", ok, detail)


class TestExcitationsN16:
    def test_triplet_dispersion(self, excitation_tables, exact_reference):
        exact_ground, triplet = exact_reference
        exact_de = {m: triplet[m].energy - exact_ground.energy for m in triplet}
        errs = {
            depth: {m: abs(excitation_tables[depth][m] - exact_de[m]) for m in exact_de}
            for depth in (1, 2)
        }
        worst_d2 = max(errs[2].values())
        mean_d1 = np.mean(list(errs[1].values()))
        mean_d2 = np.mean(list(errs[2].values()))
        ok = worst_d2 <= 0.05 and mean_d1 >= mean_d2
        detail = (
            f"worst D=2 err {worst_d2:.4f} J, mean err D=1 {mean_d1:.4f} >= "
            f"D=2 {mean_d2:.4f}"
        )
        _report("16-site triplet dispersion vs exact", ok, detail)
        print("           m:  " + "  ".join(f"{m:+d}" for m in sorted(exact_de)))
        print("  D=2 err (J): " + "  ".join(f"{errs[2][m]:.3f}" for m in sorted(exact_de)))


class TestPropertySuites:
    def test_fast_property_block(self, rng):
        start = time.perf_counter()
        checks = {}

        # projector algebra on 8 sites
        group, sec = CyclicGroup(8), MomentumSector(8, 3)
        psi = StateVector(8, random_state_amps(rng, 8))
        phi = StateVector(8, random_state_amps(rng, 8))
        once = project(psi, group, sec)
        twice = project(once, group, sec)
        checks["idempotence"] = np.max(np.abs(once.amplitudes - twice.amplitudes)) <= 1e-12
        checks["hermiticity"] = abs(
            inner(phi, project(psi, group, sec)) - inner(project(phi, group, sec), psi)
        ) <= 1e-12
        checks["psd"] = all(
            inner(x, project(x, group, s2)).real >= -1e-12
            for s2 in momentum_sectors(8)
            for x in [StateVector(8, random_state_amps(rng, 8))]
        )
        total = sum(
            (project(psi, group, s2).amplitudes for s2 in momentum_sectors(8)),
            np.zeros(256, dtype=complex),
        )
        checks["completeness"] = np.max(np.abs(total - psi.amplitudes)) <= 1e-12

        # commutators with H: momentum projector, total spin, magnetization
        model = HeisenbergRing(8)
        hp = apply_h(model, project(psi, group, sec)).amplitudes
        ph = project(apply_h(model, psi), group, sec).amplitudes
        checks["[H,P]"] = np.linalg.norm(hp - ph) <= 1e-10

        def apply_s2(amps):
            n = 8
            out = (0.75 * n - 0.25 * n * (n - 1)) * amps.copy()
            for i in range(n):
                for j in range(i + 1, n):
                    out += amps[swap_bit_index(n, i, j)]
            return out

        sz_diag = 0.5 * (8 - 2.0 * np.array(
            [bin(x).count("1") for x in range(256)]
        ))
        h_amps = apply_h(model, psi).amplitudes
        checks["[H,S2]"] = (
            np.linalg.norm(apply_s2(h_amps) - apply_h(model, StateVector(8, apply_s2(psi.amplitudes))).amplitudes)
            <= 1e-10
        )
        checks["[H,Sz]"] = (
            np.linalg.norm(sz_diag * h_amps - apply_h(model, StateVector(8, sz_diag * psi.amplitudes)).amplitudes)
            <= 1e-10
        )

        # analytic gradient and metric vs finite differences, 8 sites, 2 layers
        ans = Ansatz(8, 2)
        spec = sector_spec(8, 1)
        params = rng.uniform(0, 2 * np.pi, ans.n_params)
        grad = energy_gradient(ans, params, spec, model)
        eps = 1e-4
        e_ref, _ = projected_energy(ans, params, spec, model)
        fd = np.zeros_like(grad)
        for i in range(ans.n_params):
            up, down = params.copy(), params.copy()
            up[i] += eps
            down[i] -= eps
            fd[i] = (
                projected_energy(ans, up, spec, model)[0]
                - projected_energy(ans, down, spec, model)[0]
            ) / (2 * eps)
        checks["gradient-fd"] = np.max(np.abs(grad - fd)) <= 1e-6 * max(1.0, abs(e_ref))

        proj_mat = dense_projector(8, 1)

        def normalized_projected(p):
            amps = trial_state(ans, p, sector_spec(8, None)).amplitudes
            v = proj_mat @ amps
            return v / np.linalg.norm(v)

        eps2 = 1e-5
        derivs = np.zeros((ans.n_params, 256), dtype=complex)
        for i in range(ans.n_params):
            up, down = params.copy(), params.copy()
            up[i] += eps2
            down[i] -= eps2
            derivs[i] = (normalized_projected(up) - normalized_projected(down)) / (2 * eps2)
        psn = normalized_projected(params)
        metric_fd = derivs.conj() @ derivs.T - np.outer(
            derivs.conj() @ psn, psn.conj() @ derivs.T
        )
        metric = metric_tensor(ans, params, spec)
        checks["metric-fd"] = np.max(np.abs(metric - metric_fd)) <= 1e-5

        # singlet-pair gate algebra, exact to 1e-12
        s_pair = dimer_state(4, [(0, 1), (2, 3)])
        crossed = dimer_state(4, [(0, 2), (1, 3)])
        theta = 1.1
        checks["pair-sign"] = np.allclose(
            apply_gate(s_pair, Swap(0, 1)).amplitudes, -s_pair.amplitudes, atol=1e-12
        )
        checks["pair-phase"] = np.allclose(
            eswap_amps(s_pair.amplitudes, swap_bit_index(4, 0, 1), theta),
            np.exp(0.5j * theta) * s_pair.amplitudes,
            atol=1e-12,
        )
        checks["pair-recombine"] = np.allclose(
            apply_gate(s_pair, Swap(1, 2)).amplitudes, crossed.amplitudes, atol=1e-12
        )
        checks["pair-superpose"] = np.allclose(
            eswap_amps(s_pair.amplitudes, swap_bit_index(4, 1, 2), theta),
            np.cos(theta / 2) * s_pair.amplitudes
            - 1j * np.sin(theta / 2) * crossed.amplitudes,
            atol=1e-12,
        )

        # dense-matrix oracles for H and the projector at 8 sites
        h_dense = dense_heisenberg(8, model.bonds)
        x = random_state_amps(rng, 8)
        checks["H-dense"] = (
            np.max(np.abs(apply_h(model, StateVector(8, x)).amplitudes - h_dense @ x))
            <= 1e-12
        )
        checks["P-dense"] = (
            np.max(
                np.abs(
                    project(StateVector(8, x), group, MomentumSector(8, 3)).amplitudes
                    - dense_projector(8, 3) @ x
                )
            )
            <= 1e-12
        )

        elapsed = time.perf_counter() - start
        bad = [k for k, v in checks.items() if not v]
        _report(
            "property suites (projector, commutators, derivatives, pair algebra, dense oracles)",
            not bad and elapsed < 30.0,
            f"{len(checks)} checks, {elapsed:.1f}s" + (f", failed: {bad}" if bad else ""),
        )


class TestSampledInterference:
    def test_thousand_seeds(self):
        hits = 0
        for seed in range(1000):
            _, summary = sample(16, 1024, seed=seed)
            if abs(summary.mean - (-2.0 / 3.0)) <= 4.0 * summary.sem:
                hits += 1
        rate = hits / 1000.0
        _report(
            "sampled interference estimate within 4 SEM (1000 seeds)",
            rate >= 0.99,
            f"coverage {rate:.3f}",
        )


class TestEnergyConversionChain:
    def test_correlator_to_energy(self):
        # the ancilla asymmetry reproduces the exact energy through the
        # isotropy relation, and the reduced register state is equivalent
        p0, p1 = exact_probs()
        e = energy_from_correlator(p0 - p1)
        direct = pauli_xx_expectation(measured_register_state())
        ok = abs(e - (-2.0)) <= 1e-12 and abs((p0 - p1) - direct) <= 1e-12
        _report("interference-to-energy conversion", ok, f"E={e:.12f}")
