mod common;

use common::oracles::{frank_tau, kendall_pairs, ks_distance};
use depmeter::samplers::{
    paper_experiment_cells, sample, CopulaFamily, GeneratorKind, GeneratorSpec, MarginalSpec,
};
use depmeter::DataMatrix;
use statrs::distribution::{ContinuousCDF, Normal};

fn archimedean(family: CopulaFamily, alpha: f64, dim: usize, n: usize, seed: u64) -> DataMatrix {
    sample(&GeneratorSpec {
        kind: GeneratorKind::ArchCopula {
            family,
            alpha,
            dim,
            marginals: vec![MarginalSpec::Uniform01; dim],
        },
        n,
        seed,
    })
    .unwrap()
}

/// 0.1% critical value of the one-sample Kolmogorov-Smirnov distance.
fn ks_critical(n: usize) -> f64 {
    1.95 / (n as f64).sqrt()
}

#[test]
fn frank_tau_follows_the_debye_formula() {
    for (i, alpha) in [0.5, 1.0, 2.0, 4.0, 7.0, 10.0].into_iter().enumerate() {
        let d = archimedean(CopulaFamily::Frank, alpha, 2, 2000, 100 + i as u64);
        let tau = kendall_pairs(d.column(0), d.column(1));
        let truth = frank_tau(alpha);
        assert!(
            (tau - truth).abs() < 0.04,
            "alpha {alpha}: {tau} vs {truth}"
        );
    }
}

#[test]
fn debye_oracle_matches_known_values() {
    // Tabulated Frank tau values.
    assert!((frank_tau(1.0) - 0.1100).abs() < 5e-4);
    assert!((frank_tau(5.0) - 0.4567).abs() < 5e-4);
    assert!((frank_tau(10.0) - 0.6657).abs() < 5e-4);
}

#[test]
fn copula_coordinates_are_uniform() {
    for family in [
        CopulaFamily::Clayton,
        CopulaFamily::Gumbel,
        CopulaFamily::Frank,
    ] {
        for (alpha, seed) in [(1.5, 1), (6.0, 2)] {
            let d = archimedean(family, alpha, 3, 3000, seed);
            for c in 0..3 {
                let ks = ks_distance(d.column(c), |u| u.clamp(0.0, 1.0));
                assert!(ks < ks_critical(3000), "{family:?} {alpha} col {c}: {ks}");
            }
        }
    }
}

#[test]
fn experiment_marginals_have_the_declared_laws() {
    let normal = Normal::new(0.0, 2.0).unwrap();
    for experiment in [2, 3, 4, 5] {
        let (_, spec) = paper_experiment_cells(experiment).unwrap().remove(5);
        let d = sample(&spec.with_n(3000).with_seed(7)).unwrap();
        let ks_x = ks_distance(d.column(0), |x| normal.cdf(x));
        let ks_y = ks_distance(d.column(1), |y| {
            if y <= 0.0 {
                0.0
            } else {
                1.0 - (-2.0 * y).exp()
            }
        });
        assert!(ks_x < ks_critical(3000), "exp {experiment} x: {ks_x}");
        assert!(ks_y < ks_critical(3000), "exp {experiment} y: {ks_y}");
    }
}

#[test]
fn archimedean_copulas_are_exchangeable() {
    for family in [
        CopulaFamily::Clayton,
        CopulaFamily::Gumbel,
        CopulaFamily::Frank,
    ] {
        let d = archimedean(family, 4.0, 3, 1500, 9);
        let t01 = kendall_pairs(d.column(0), d.column(1));
        let t02 = kendall_pairs(d.column(0), d.column(2));
        let t12 = kendall_pairs(d.column(1), d.column(2));
        let spread = t01.max(t02).max(t12) - t01.min(t02).min(t12);
        assert!(spread < 0.06, "{family:?}: {t01} {t02} {t12}");
    }
}

#[test]
fn uncorrelated_normal_has_independent_coordinates() {
    let d = sample(&GeneratorSpec {
        kind: GeneratorKind::MvNormal {
            cov: vec![1.0, 0.0, 0.0, 1.0],
            dim: 2,
        },
        n: 3000,
        seed: 12,
    })
    .unwrap();
    let normal = Normal::standard();
    for c in 0..2 {
        assert!(ks_distance(d.column(c), |x| normal.cdf(x)) < ks_critical(3000));
    }
    let tau = kendall_pairs(d.column(0), d.column(1));
    assert!(tau.abs() < 0.04, "{tau}");
}

#[test]
fn normal_copula_tau_matches_arcsine_law() {
    for (rho, seed) in [(0.3, 20), (0.8, 21)] {
        let d = sample(&GeneratorSpec {
            kind: GeneratorKind::NormalCopula {
                cov: vec![1.0, rho, rho, 1.0],
                dim: 2,
                marginals: vec![
                    MarginalSpec::Exponential { rate: 0.5 },
                    MarginalSpec::Uniform01,
                ],
            },
            n: 2000,
            seed,
        })
        .unwrap();
        let tau = kendall_pairs(d.column(0), d.column(1));
        let truth = 2.0 / std::f64::consts::PI * f64::asin(rho);
        assert!((tau - truth).abs() < 0.04, "{rho}: {tau} vs {truth}");
    }
}
