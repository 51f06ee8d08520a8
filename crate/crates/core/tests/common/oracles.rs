//! Slow reference implementations used as independent oracles.

/// `n * integral (C_n - Pi)^2` by the midpoint rule on a `g x g` grid.
pub fn cvm_grid(u: &[Vec<f64>], g: usize) -> f64 {
    let n = u[0].len();
    let h = 1.0 / g as f64;
    let mut acc = 0.0;
    for a in 0..g {
        for b in 0..g {
            let (s, t) = ((a as f64 + 0.5) * h, (b as f64 + 0.5) * h);
            let c = (0..n).filter(|&i| u[0][i] <= s && u[1][i] <= t).count() as f64 / n as f64;
            acc += (c - s * t).powi(2);
        }
    }
    n as f64 * acc * h * h
}

/// Checkerboard copula of tied data at `(s, t)`: each observation's mass
/// is uniform over its tie run's rank interval on each axis.
pub fn checkerboard_cdf(cols: &[Vec<f64>], s: f64, t: f64) -> f64 {
    let n = cols[0].len();
    let nf = n as f64;
    let share = |col: &[f64], i: usize, x: f64| {
        let below = col.iter().filter(|&&v| v < col[i]).count() as f64;
        let equal = col.iter().filter(|&&v| v == col[i]).count() as f64;
        if equal == 1.0 {
            f64::from(u8::from((below + 0.5) / nf <= x))
        } else {
            ((x - below / nf) / (equal / nf)).clamp(0.0, 1.0)
        }
    };
    (0..n)
        .map(|i| share(&cols[0], i, s) * share(&cols[1], i, t))
        .sum::<f64>()
        / nf
}

/// `S1 + S2 - 2 S3` form of the squared distance covariance.
pub fn dcov_four_loop(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let (mut s1, mut sa, mut sb, mut s3) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let a = (x[i] - x[j]).abs();
            let b = (y[i] - y[j]).abs();
            s1 += a * b;
            sa += a;
            sb += b;
            for k in 0..n {
                s3 += a * (y[i] - y[k]).abs();
            }
        }
    }
    s1 / (nf * nf) + sa * sb / nf.powi(4) - 2.0 * s3 / nf.powi(3)
}

/// `-(1/n^2) sum_ij (y_i - ybar)(y_j - ybar) A_ij`.
pub fn mdd_pairwise(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let ybar = y.iter().sum::<f64>() / nf;
    let d = |i: usize, j: usize| (x[i] - x[j]).abs();
    let row: Vec<f64> = (0..n)
        .map(|i| (0..n).map(|j| d(i, j)).sum::<f64>() / nf)
        .collect();
    let grand = row.iter().sum::<f64>() / nf;
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            s += (y[i] - ybar) * (y[j] - ybar) * (d(i, j) - row[i] - row[j] + grand);
        }
    }
    -s / (nf * nf)
}

/// Kendall's tau-a by the pair loop.
pub fn kendall_pairs(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let mut s = 0i64;
    for i in 0..n {
        for j in i + 1..n {
            let a = (x[i] - x[j]).partial_cmp(&0.0).unwrap() as i64;
            let b = (y[i] - y[j]).partial_cmp(&0.0).unwrap() as i64;
            s += a * b;
        }
    }
    s as f64 / (n * (n - 1) / 2) as f64
}

/// Ball covariance of two scalar columns straight from its definition.
pub fn ball_cov_triple_loop(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len();
    let nf = n as f64;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let (rx, ry) = ((x[i] - x[j]).abs(), (y[i] - y[j]).abs());
            let mut cx = 0;
            let mut cy = 0;
            let mut both = 0;
            for k in 0..n {
                let in_x = (x[i] - x[k]).abs() <= rx;
                let in_y = (y[i] - y[k]).abs() <= ry;
                cx += usize::from(in_x);
                cy += usize::from(in_y);
                both += usize::from(in_x && in_y);
            }
            let d = both as f64 / nf - (cx as f64 / nf) * (cy as f64 / nf);
            acc += d * d;
        }
    }
    acc / (nf * nf)
}

/// HHG sum over centres `i` and radius points `j` of the 2x2 table score
/// of the remaining points, Pearson chi-square (`lr = false`) or
/// likelihood ratio (`lr = true`).
pub fn hhg_tables(x: &[f64], y: &[f64], lr: bool) -> f64 {
    let n = x.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let mut t = [[0.0f64; 2]; 2];
            for k in 0..n {
                if k == i || k == j {
                    continue;
                }
                let a = usize::from((x[i] - x[k]).abs() <= (x[i] - x[j]).abs());
                let b = usize::from((y[i] - y[k]).abs() <= (y[i] - y[j]).abs());
                t[a][b] += 1.0;
            }
            let m = (n - 2) as f64;
            for a in 0..2 {
                for b in 0..2 {
                    let e = (t[a][0] + t[a][1]) * (t[0][b] + t[1][b]) / m;
                    let o = t[a][b];
                    if e > 0.0 {
                        total += if !lr {
                            (o - e).powi(2) / e
                        } else if o > 0.0 {
                            o * (o / e).ln()
                        } else {
                            0.0
                        };
                    }
                }
            }
        }
    }
    total
}

/// Bergsma-Dassios tau* averaged over all `n^4` index tuples.
pub fn tau_star_all_tuples(x: &[f64], y: &[f64]) -> f64 {
    let a = |z: &[f64], i: usize, j: usize, k: usize, l: usize| -> i64 {
        let v =
            (z[i] - z[j]).abs() + (z[k] - z[l]).abs() - (z[i] - z[k]).abs() - (z[j] - z[l]).abs();
        v.partial_cmp(&0.0).unwrap() as i64
    };
    // Integer ranks keep the kernel's sign exact.
    let rank = |z: &[f64]| -> Vec<f64> {
        z.iter()
            .map(|v| z.iter().filter(|w| *w < v).count() as f64)
            .collect()
    };
    let (rx, ry) = (rank(x), rank(y));
    let n = x.len();
    let mut acc = 0i64;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    acc += a(&rx, i, j, k, l) * a(&ry, i, j, k, l);
                }
            }
        }
    }
    acc as f64 / (n as f64).powi(4)
}

pub fn clayton_tau(alpha: f64) -> f64 {
    alpha / (alpha + 2.0)
}

pub fn gumbel_tau(alpha: f64) -> f64 {
    1.0 - 1.0 / alpha
}

/// `1 - 4/a + 4 D_1(a)/a` with the first Debye function integrated by
/// Simpson's rule.
pub fn frank_tau(alpha: f64) -> f64 {
    let f = |t: f64| if t == 0.0 { 1.0 } else { t / t.exp_m1() };
    let m = 4000;
    let h = alpha / m as f64;
    let mut s = f(0.0) + f(alpha);
    for i in 1..m {
        s += f(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    let debye = s * h / 3.0 / alpha;
    1.0 - 4.0 / alpha + 4.0 * debye / alpha
}

/// Kolmogorov-Smirnov distance between a sample and the CDF `cdf`.
pub fn ks_distance(sample: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let nf = s.len() as f64;
    s.iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = cdf(v);
            (f - i as f64 / nf)
                .abs()
                .max(((i + 1) as f64 / nf - f).abs())
        })
        .fold(0.0, f64::max)
}
