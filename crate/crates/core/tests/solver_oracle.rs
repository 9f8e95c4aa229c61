//! Representation solver against the spectral and L1 oracles, the PDE
//! residual and the boundary conditions.

use std::f64::consts::PI;

use thetafrac::grid::{Profile, SpaceTimeGrid};
use thetafrac::kernel::{FractionalOrder, ThetaTruncation};
use thetafrac::oracle::{cosine_coefficients, l1_solve, spectral_solve, L1Config};
use thetafrac::solver::{pde_residual, CauchyData, Solver, SolverOptions};
use thetafrac::verify;
use thetafrac::ExperimentConfig;

fn solver<T: thetafrac::Scalar>(alpha: f64) -> Solver<T> {
    Solver::new(
        FractionalOrder::new(thetafrac::scalar::lit::<T>(alpha)).unwrap(),
        ThetaTruncation::default(),
        SolverOptions::default(),
    )
    .unwrap()
}

#[test]
fn higher_mode_matches_spectral_oracle() {
    let order = FractionalOrder::new(0.4).unwrap();
    let grid = SpaceTimeGrid::new(21, 20, 1.0).unwrap();
    let u0 = Profile::function(|x: f64| (2.0 * PI * x).cos() - 0.5 * (3.0 * PI * x).cos());
    let data = CauchyData::with_flux_fn(u0.clone(), |_| 0.0, 1.0, 1).unwrap();
    let sol = solver::<f64>(0.4).solve_ibvp(&data, &grid).unwrap();
    let spec = spectral_solve(&cosine_coefficients(&u0, 6, 64), order, &grid).unwrap();
    let gap = sol.field.max_diff_in(&spec, 0.05, 1.0).unwrap();
    assert!(gap < 1e-8, "gap {gap:e}");
}

#[test]
fn narrow_scalar_solution_agrees_with_wide() {
    let grid64 = SpaceTimeGrid::new(11, 8, 0.5).unwrap();
    let grid32 = SpaceTimeGrid::<f32>::new(11, 8, 0.5).unwrap();
    let d64 = CauchyData::with_flux_fn(Profile::function(|x: f64| x * x), |t| t, 0.5, 16).unwrap();
    let d32 =
        CauchyData::with_flux_fn(Profile::function(|x: f32| x * x), |t| t, 0.5f32, 16).unwrap();
    let u64 = solver::<f64>(0.5).solve_ibvp(&d64, &grid64).unwrap().field;
    let u32 = solver::<f32>(0.5).solve_ibvp(&d32, &grid32).unwrap().field;
    for i in 0..11 {
        for j in 1..=8 {
            let d = (u64.at(i, j) - u32.at(i, j) as f64).abs();
            assert!(d < 1e-4, "({i},{j}): {d:e}");
        }
    }
}

#[test]
fn mixed_datum_matches_l1_oracle() {
    let order = FractionalOrder::new(0.6).unwrap();
    let grid = SpaceTimeGrid::new(21, 32, 1.0).unwrap();
    let data = CauchyData::with_flux_fn(
        Profile::function(|x: f64| 0.5 + x * x * (1.0 - x)),
        |t: f64| (PI * t).sin(),
        1.0,
        64,
    )
    .unwrap();
    let sol = solver::<f64>(0.6).solve_ibvp(&data, &grid).unwrap();
    let l1 = l1_solve(&data, None, order, &L1Config::default(), &grid).unwrap();
    let gap = sol.field.max_diff(&l1).unwrap();
    assert!(gap < 1e-3, "gap {gap:e}");
}

#[test]
fn discrete_residual_shrinks_under_refinement() {
    let u0 = Profile::function(|x: f64| (PI * x).cos());
    let data = CauchyData::with_flux_fn(u0.clone(), |_| 0.0, 1.0, 1).unwrap();
    let s = solver::<f64>(0.5);
    let mut last = f64::INFINITY;
    for (nx, nt) in [(11, 32), (21, 128)] {
        let grid = SpaceTimeGrid::new(nx, nt, 1.0).unwrap();
        let sol = s.solve_ibvp(&data, &grid).unwrap();
        let res = pde_residual(&sol.field, 0.5, &u0.sample(&grid)).unwrap();
        // skip the first steps where the L1 formula is least accurate
        let worst = res
            .columns()
            .into_iter()
            .skip(nt / 4)
            .flat_map(|c| c.to_vec())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        assert!(worst < 0.5 * last, "{worst:e} vs {last:e}");
        last = worst;
    }
}

#[test]
fn fluxes_match_neumann_conditions() {
    let grid = SpaceTimeGrid::new(81, 16, 1.0).unwrap();
    let data =
        CauchyData::with_flux_fn(Profile::zero(), |t: f64| 4.0 * t * (1.0 - t), 1.0, 64).unwrap();
    let sol = solver::<f64>(0.5).solve_ibvp(&data, &grid).unwrap();
    let left = &sol.traces.left_flux;
    assert!(left.sup_norm() < 1e-4, "u_x(0,·) = {:e}", left.sup_norm());
    let ext = data.extension();
    let h = grid.dx();
    let n = grid.nx - 1;
    for j in 1..=grid.nt {
        let u = |i: usize| sol.field.at(i, j);
        let right = (3.0 * u(n) - 4.0 * u(n - 1) + u(n - 2)) / (2.0 * h);
        let g = ext.eval(grid.t(j));
        assert!((right - g).abs() < 1e-2, "t {}: {right} vs {g}", grid.t(j));
    }
}

#[test]
fn verify_reports_are_reproducible() {
    let config = ExperimentConfig::default();
    let a = verify::run(
        &["specfun", "titchmarsh"],
        &config,
        &verify::Sweep::default(),
    )
    .unwrap();
    let b = verify::run(
        &["specfun", "titchmarsh"],
        &config,
        &verify::Sweep::default(),
    )
    .unwrap();
    assert!(a.pass);
    assert_eq!(thetafrac::io::to_json(&a), thetafrac::io::to_json(&b));
    let back: verify::VerifyReport = serde_json::from_str(&thetafrac::io::to_json(&a)).unwrap();
    assert_eq!(back, a);
}
