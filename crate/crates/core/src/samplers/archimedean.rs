//! Frailty (Marshall–Olkin) samplers for Archimedean copulas.
//!
//! A shared latent `V` with Laplace transform `psi` drives every coordinate:
//! `U_j = psi(E_j / V)` with `E_j` iid standard exponential.

use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};

use crate::rng::Rng as SeedRng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CopulaFamily {
    Clayton,
    Gumbel,
    Frank,
}

/// Keeps uniforms strictly inside (0, 1).
#[inline]
pub(crate) fn open_unit(u: f64) -> f64 {
    u.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0)
}

/// Positive stable variate with Laplace transform `exp(-t^a)`, `0 < a <= 1`
/// (Kanter's representation of the Chambers–Mallows–Stuck construction).
pub fn positive_stable(a: f64, rng: &mut SeedRng) -> f64 {
    if a >= 1.0 {
        return 1.0;
    }
    let theta = std::f64::consts::PI * rng.random::<f64>();
    let w: f64 = Exp1.sample(rng);
    let num = (a * theta).sin() / theta.sin().powf(1.0 / a);
    num * ((1.0 - a) * theta).sin().powf((1.0 - a) / a) / w.powf((1.0 - a) / a)
}

/// Logarithmic-series variate `P(V = k) = -p^k / (k ln(1-p))` using Kemp's
/// LK algorithm. `log1m_p` must equal `ln(1 - p)`.
pub fn logarithmic(p: f64, log1m_p: f64, rng: &mut SeedRng) -> f64 {
    let v: f64 = rng.random();
    if v >= p {
        return 1.0;
    }
    let u: f64 = rng.random();
    let q = -(log1m_p * u).exp_m1();
    if v <= q * q {
        let k = (1.0 + v.ln() / q.ln()).floor();
        return k.max(1.0);
    }
    if v > q {
        1.0
    } else {
        2.0
    }
}

/// Draws one `dim`-dimensional row of an Archimedean copula.
pub(crate) fn sample_row(
    family: CopulaFamily,
    alpha: f64,
    dim: usize,
    rng: &mut SeedRng,
    out: &mut [f64],
) {
    match family {
        CopulaFamily::Clayton => {
            let v: f64 = Gamma::new(1.0 / alpha, 1.0)
                .expect("clayton alpha validated")
                .sample(rng);
            for slot in out.iter_mut().take(dim) {
                let e: f64 = Exp1.sample(rng);
                *slot = open_unit((-(e / v).ln_1p() / alpha).exp());
            }
        }
        CopulaFamily::Gumbel => {
            let v = positive_stable(1.0 / alpha, rng);
            for slot in out.iter_mut().take(dim) {
                let e: f64 = Exp1.sample(rng);
                *slot = open_unit((-(e / v).powf(1.0 / alpha)).exp());
            }
        }
        CopulaFamily::Frank if alpha > 0.0 => {
            let p = -(-alpha).exp_m1();
            let v = logarithmic(p, -alpha, rng);
            for slot in out.iter_mut().take(dim) {
                let e: f64 = Exp1.sample(rng);
                *slot = open_unit(-(-p * (-e / v).exp()).ln_1p() / alpha);
            }
        }
        CopulaFamily::Frank => {
            // Negative dependence is not reachable by a frailty; invert the
            // conditional distribution of the second coordinate instead.
            let u: f64 = open_unit(rng.random());
            let w: f64 = open_unit(rng.random());
            let a = (-alpha * u).exp();
            let v = -(1.0 + w * (-alpha).exp_m1() / (w + (1.0 - w) * a)).ln() / alpha;
            out[0] = u;
            out[1] = open_unit(v);
        }
    }
}
