use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use sso_core::benchmarks::{Benchmark, FunctionId};
use sso_core::parallel::{iterate, search_phase_counted, update_gbest_phase, update_pbests_phase};
use sso_core::sequential::SequentialRunner;
use sso_core::{initialize, run_parallel, run_sequential, Branch, LayoutMode, ParticleMatrix, RngStream, SsoParams, Swarm};

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// A swarm whose positions were just evaluated but whose bests are stale.
fn random_swarm(rng: &mut StdRng, nsol: usize, nvar: usize) -> Swarm {
    let rows = |rng: &mut StdRng| -> Vec<Vec<f64>> {
        (0..nsol).map(|_| (0..nvar).map(|_| rng.random_range(-5.0..5.0)).collect()).collect()
    };
    let mut sol = rows(rng);
    let pb = rows(rng);
    // mirrored position: equal fitness, different coordinates, so the <= rule matters
    sol[3] = pb[3].iter().map(|v| -v).collect();
    let sol_f: Vec<f64> = sol.iter().map(|r| sphere(r)).collect();
    let p_f: Vec<f64> = pb.iter().map(|r| sphere(r)).collect();
    let g = rng.random_range(0..nsol);
    let g_f = p_f[g] + 1.0;
    let gbest = pb[g].clone();
    Swarm::from_parts(
        ParticleMatrix::from_rows(&sol, LayoutMode::ParticleMajor).unwrap(),
        ParticleMatrix::from_rows(&pb, LayoutMode::ParticleMajor).unwrap(),
        gbest,
        sol_f,
        p_f,
        g_f,
    )
    .unwrap()
}

#[test]
fn pbest_update_matches_brute_force() {
    let mut rng = StdRng::seed_from_u64(11);
    for trial in 0..20 {
        let before = random_swarm(&mut rng, 10, 6);
        for workers in [1, 3, 10] {
            let after = update_pbests_phase(before.clone(), workers).unwrap();
            for i in 0..10 {
                let (want_row, want_f) = if before.sol_f()[i] <= before.p_f()[i] {
                    (before.sol().row(i), before.sol_f()[i])
                } else {
                    (before.pbests().row(i), before.p_f()[i])
                };
                assert_eq!(after.pbests().row(i), want_row, "trial {trial}, particle {i}");
                assert_eq!(after.p_f()[i], want_f);
            }
            assert_eq!(after.gbest(), before.gbest());
        }
    }
}

#[test]
fn gbest_reduce_matches_sequential_scan() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..50 {
        let nsol = rng.random_range(1..40);
        let mut s = random_swarm(&mut rng, nsol.max(4), 3);
        // duplicate the best fitness at a later index
        let mut p_f = s.p_f().to_vec();
        let best = (0..p_f.len()).min_by(|&a, &b| p_f[a].total_cmp(&p_f[b])).unwrap();
        let dup = p_f.len() - 1;
        if dup != best {
            let row = s.pbests().row(best);
            let mut pb: Vec<Vec<f64>> = (0..p_f.len()).map(|i| s.pbests().row(i)).collect();
            pb[dup] = row.iter().map(|v| -v).collect();
            p_f[dup] = p_f[best];
            s = Swarm::from_parts(
                s.sol().clone(),
                ParticleMatrix::from_rows(&pb, LayoutMode::ParticleMajor).unwrap(),
                s.gbest().to_vec(),
                s.sol_f().to_vec(),
                p_f.clone(),
                s.g_f(),
            )
            .unwrap();
        }
        let mut want_i = 0;
        for i in 1..p_f.len() {
            if p_f[i] < p_f[want_i] {
                want_i = i;
            }
        }
        for workers in [1, 2, 7] {
            let after = update_gbest_phase(s.clone(), workers).unwrap();
            if p_f[want_i] <= s.g_f() {
                assert_eq!(after.g_f(), p_f[want_i]);
                assert_eq!(after.gbest(), s.pbests().row(want_i).as_slice());
            } else {
                assert_eq!(after.gbest(), s.gbest());
            }
        }
    }
}

#[test]
fn single_particle_schedules_coincide() {
    let params = SsoParams::default().with_sizes(1, 8, 300);
    for seed in 0..5 {
        let a = run_sequential(&params, &sphere, seed).unwrap();
        let b = run_parallel(&params, &sphere, seed, 3, LayoutMode::Interleaved).unwrap();
        assert!(a.same_result(&b), "seed {seed}");
    }
}

#[test]
fn draw_budget() {
    let params = SsoParams::default().with_sizes(13, 7, 25);
    for out in [
        run_sequential(&params, &sphere, 5).unwrap(),
        run_parallel(&params, &sphere, 5, 4, LayoutMode::ParticleMajor).unwrap(),
    ] {
        let per_iter = (params.nsol * params.nvar) as u64;
        assert_eq!(out.draws.init, per_iter);
        assert_eq!(out.draws.branch, per_iter * params.niter as u64);
        assert_eq!(out.branches.total(), out.draws.branch);
        assert_eq!(out.draws.fresh, out.branches.get(Branch::Fresh));
    }
}

#[test]
fn search_phase_reports_its_draws() {
    let params = SsoParams::default().with_sizes(9, 5, 3);
    let rng = RngStream::new(3);
    let s = initialize(&params, &sphere, &rng).unwrap();
    let (_, draws, branches) = search_phase_counted(s, &params, &rng, 0, 2).unwrap();
    assert_eq!(draws.branch, 45);
    assert_eq!(draws.fresh, branches.get(Branch::Fresh));
}

#[test]
fn invariants_hold_every_iteration() {
    for id in [FunctionId::F4, FunctionId::F6, FunctionId::F9] {
        let bench = Benchmark::new(id, 6).unwrap();
        let (lo, hi) = id.bounds();
        let params = SsoParams::default().with_bounds(lo, hi).with_sizes(12, 6, 40);
        let rng = RngStream::new(8);

        let mut swarm = initialize(&params, &bench, &rng).unwrap();
        let mut last = swarm.g_f();
        for t in 0..params.niter {
            swarm = iterate(swarm, &params, &bench, &rng, t, 3).unwrap();
            assert!(swarm.invariant_violations(&params, &bench).is_empty(), "{id} parallel t={t}");
            assert!(swarm.g_f() <= last);
            last = swarm.g_f();
        }

        let mut runner = SequentialRunner::new(params, &bench, 8).unwrap();
        let mut last = runner.swarm().g_f();
        while !runner.is_done() {
            let g = runner.step().unwrap();
            assert!(g <= last);
            last = g;
            assert!(runner.swarm().invariant_violations(&params, &bench).is_empty(), "{id} sequential");
        }
    }
}
