//! Reference computations shared by the integration tests and the acceptance
//! runner. Nothing here calls into the library's linear algebra; frequency
//! responses come straight from the polynomial data.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use passify_core::benchmarks;
use passify_core::ss::RationalEntry;
use passify_core::Realization;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type CMat = DMatrix<Complex64>;

/// Horner evaluation of a polynomial in descending powers.
pub fn poly_eval(p: &[f64], s: Complex64) -> Complex64 {
    p.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * s + c)
}

/// Limit of `num/den` as `s → ∞` for a proper ratio.
fn limit_at_infinity(num: &[f64], den: &[f64]) -> f64 {
    let strip = |p: &[f64]| p.iter().skip_while(|&&v| v == 0.0).copied().collect::<Vec<_>>();
    let (n, d) = (strip(num), strip(den));
    if n.len() == d.len() {
        n[0] / d[0]
    } else {
        0.0
    }
}

/// A transfer matrix given entrywise by polynomial ratios.
#[derive(Clone)]
pub struct RationalModel {
    pub entries: Vec<Vec<RationalEntry>>,
}

impl RationalModel {
    pub fn siso(num: &[f64], den: &[f64]) -> Self {
        Self { entries: vec![vec![RationalEntry::new(num.to_vec(), den.to_vec())]] }
    }

    pub fn ports(&self) -> usize {
        self.entries.len()
    }

    pub fn eval(&self, s: Complex64) -> CMat {
        let p = self.ports();
        CMat::from_fn(p, p, |i, j| {
            let e = &self.entries[i][j];
            poly_eval(&e.num, s) / poly_eval(&e.den, s)
        })
    }

    pub fn at_infinity(&self) -> CMat {
        let p = self.ports();
        CMat::from_fn(p, p, |i, j| {
            let e = &self.entries[i][j];
            limit_at_infinity(&e.num, &e.den).into()
        })
    }
}

pub fn model(name: &str) -> RationalModel {
    match name {
        "toy" => RationalModel::siso(&[-1.0, 1.0], &[1.0, 1.0]),
        "lowpass" => RationalModel::siso(&[1.0], &[1.0, 1.0]),
        "ttp" => RationalModel::siso(&benchmarks::TTP_NUM, &benchmarks::TTP_DEN),
        "dumi1" => {
            let (n, d) = (expand(&[-1.0, -3.0, -90.0, -95.0, -100.0]), expand(&[-25.0, -35.0, -38.0, -180.0, -185.0]));
            RationalModel::siso(&n, &d)
        }
        "trafe1" => {
            let off = RationalEntry::new(vec![-2.0, -10.0], vec![1.0, 6.0]);
            RationalModel {
                entries: vec![
                    vec![RationalEntry::new(vec![2.0, 6.0, 16.0], vec![1.0, 3.0, 2.0]), off.clone()],
                    vec![off, RationalEntry::new(vec![2.0, 5.0, 1.0], vec![1.0, 3.0, 2.0])],
                ],
            }
        }
        other => panic!("unknown model {other}"),
    }
}

pub fn realization(name: &str) -> Realization {
    match name {
        "toy" => benchmarks::toy(),
        "lowpass" => benchmarks::lowpass(),
        "ttp" => benchmarks::ttp(),
        "dumi1" => benchmarks::dumi1(),
        "trafe1" => benchmarks::trafe1(),
        other => panic!("unknown model {other}"),
    }
}

/// Monic polynomial with the given real roots, written out term by term.
pub fn expand(roots: &[f64]) -> Vec<f64> {
    let mut p = vec![1.0];
    for &r in roots {
        let mut next = vec![0.0; p.len() + 1];
        for (k, &c) in p.iter().enumerate() {
            next[k] += c;
            next[k + 1] -= r * c;
        }
        p = next;
    }
    p
}

/// Eigenvalues of a 1×1 or 2×2 Hermitian matrix in closed form, ascending.
pub fn hermitian_eigs_small(m: &CMat) -> Vec<f64> {
    match m.nrows() {
        1 => vec![m[(0, 0)].re],
        2 => {
            let (a, d) = (m[(0, 0)].re, m[(1, 1)].re);
            let b = 0.5 * (m[(0, 1)] + m[(1, 0)].conj());
            let mean = 0.5 * (a + d);
            let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - rad, mean + rad]
        }
        n => panic!("closed form only for n ≤ 2, got {n}"),
    }
}

fn r_of(m: &CMat) -> CMat {
    m + m.adjoint()
}

/// `(λ_min, λ_max)` of `H(iω) + H(iω)ᴴ` from the polynomial data.
pub fn r_extremes(model: &RationalModel, omega: f64) -> (f64, f64) {
    let e = hermitian_eigs_small(&r_of(&model.eval(Complex64::new(0.0, omega))));
    (e[0], e[e.len() - 1])
}

fn golden<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, iters: usize) -> f64 {
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..iters {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

/// Dense log sweep over `[1e−6, 1e8]` plus `ω = 0` and `ω = ∞`, with
/// golden-section refinement around the best local extrema.
pub fn dissipation_oracle(model: &RationalModel) -> (f64, f64) {
    let points = 20_000;
    let (lo, hi) = (-6.0f64, 8.0f64);
    let logs: Vec<f64> = (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect();
    let vals: Vec<(f64, f64)> = logs.iter().map(|&l| r_extremes(model, 10f64.powf(l))).collect();
    let inf = hermitian_eigs_small(&r_of(&model.at_infinity()));
    let zero = r_extremes(model, 0.0);
    let mut dmin = zero.0.min(inf[0]);
    let mut dmax = zero.1.max(inf[inf.len() - 1]);

    let refine = |sign: f64, pick: fn(&(f64, f64)) -> f64| -> f64 {
        let series: Vec<f64> = vals.iter().map(|v| sign * pick(v)).collect();
        let mut minima: Vec<usize> = (1..points - 1)
            .filter(|&i| series[i] <= series[i - 1] && series[i] <= series[i + 1])
            .collect();
        minima.sort_by(|&a, &b| series[a].total_cmp(&series[b]));
        let mut best = series.iter().copied().fold(f64::INFINITY, f64::min);
        for &i in minima.iter().take(6) {
            let f = |l: f64| sign * pick(&r_extremes(model, 10f64.powf(l)));
            best = best.min(golden(f, logs[i - 1], logs[i + 1], 120));
        }
        sign * best
    };
    dmin = dmin.min(refine(1.0, |v| v.0));
    dmax = dmax.max(refine(-1.0, |v| v.1));
    (dmin, dmax)
}

/// Largest singular value of a small complex matrix via the 2×2 closed form
/// of `MᴴM`.
pub fn sigma_max_small(m: &CMat) -> f64 {
    let e = hermitian_eigs_small(&(m.adjoint() * m));
    e[e.len() - 1].max(0.0).sqrt()
}

/// `‖H‖∞` by dense sweep with golden refinement.
pub fn hinf_oracle(model: &RationalModel) -> f64 {
    let points = 20_000;
    let (lo, hi) = (-6.0f64, 8.0f64);
    let logs: Vec<f64> = (0..points).map(|k| lo + (hi - lo) * k as f64 / (points - 1) as f64).collect();
    let vals: Vec<f64> =
        logs.iter().map(|&l| sigma_max_small(&model.eval(Complex64::new(0.0, 10f64.powf(l))))).collect();
    let mut best = vals.iter().copied().fold(0.0, f64::max);
    best = best.max(sigma_max_small(&model.eval(Complex64::new(0.0, 0.0))));
    best = best.max(sigma_max_small(&model.at_infinity()));
    for i in 1..points - 1 {
        if vals[i] >= vals[i - 1] && vals[i] >= vals[i + 1] {
            let f = |l: f64| -sigma_max_small(&model.eval(Complex64::new(0.0, 10f64.powf(l))));
            best = best.max(-golden(f, logs[i - 1], logs[i + 1], 120));
        }
    }
    best
}

/// All roots of a polynomial by simultaneous Weierstrass iteration.
pub fn durand_kerner(p: &[f64]) -> Vec<Complex64> {
    let lead = p[0];
    let monic: Vec<f64> = p.iter().map(|c| c / lead).collect();
    let n = monic.len() - 1;
    let radius = 1.0 + monic[1..].iter().fold(0.0f64, |m, c| m.max(c.abs()));
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius).collect();
    for _ in 0..2000 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            let step = poly_eval(&monic, z[i]) / denom;
            z[i] -= step;
            moved = moved.max(step.norm());
        }
        if moved < 1e-15 * radius {
            break;
        }
    }
    z
}

/// Random Hurwitz realization with well-separated spectrum.
pub fn random_stable(n: usize, p: usize, rng: &mut ChaCha8Rng) -> Realization {
    let mut a = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let q = DMatrix::<f64>::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
    for i in 0..n {
        for j in 0..i {
            a[(i, j)] = 0.0;
        }
        a[(i, i)] = -rng.gen_range(0.2..3.0);
    }
    let mut k = 0;
    while k + 1 < n {
        if rng.gen_bool(0.5) {
            let w = rng.gen_range(0.5..4.0);
            a[(k + 1, k)] = -w;
            a[(k, k + 1)] = w;
            a[(k + 1, k + 1)] = a[(k, k)];
            k += 2;
        } else {
            k += 1;
        }
    }
    let a = &q * a * q.transpose();
    let b = DMatrix::<f64>::from_fn(n, p, |_, _| rng.gen_range(-1.0..1.0));
    let c = DMatrix::<f64>::from_fn(p, n, |_, _| rng.gen_range(-1.0..1.0));
    let d = DMatrix::<f64>::from_fn(p, p, |_, _| rng.gen_range(-1.0..1.0));
    Realization::new(a, b, c, d).expect("consistent shapes")
}

/// `X(s) + X(−s)ᵀ` assembled block by block.
pub fn mirror_sum(x: &Realization) -> Realization {
    let (n, p) = (x.states(), x.ports());
    let mut a = DMatrix::<f64>::zeros(2 * n, 2 * n);
    a.view_mut((0, 0), (n, n)).copy_from(x.a());
    a.view_mut((n, n), (n, n)).copy_from(&(-x.a().transpose()));
    let mut b = DMatrix::<f64>::zeros(2 * n, p);
    b.view_mut((0, 0), (n, p)).copy_from(x.b());
    b.view_mut((n, 0), (n, p)).copy_from(&x.c().transpose());
    let mut c = DMatrix::<f64>::zeros(p, 2 * n);
    c.view_mut((0, 0), (p, n)).copy_from(x.c());
    c.view_mut((0, n), (p, n)).copy_from(&(-x.b().transpose()));
    let d = x.d() + x.d().transpose();
    Realization::new(a, b, c, d).expect("consistent shapes")
}

/// `D + C(sI − A)⁻¹B` by Gaussian elimination written out here.
pub fn direct_eval(x: &Realization, s: Complex64) -> CMat {
    let n = x.states();
    let p = x.ports();
    let mut m = CMat::from_fn(n, n, |i, j| Complex64::new(-x.a()[(i, j)], 0.0) + if i == j { s } else { 0.0.into() });
    let mut rhs = CMat::from_fn(n, p, |i, j| x.b()[(i, j)].into());
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| m[(i, col)].norm().total_cmp(&m[(j, col)].norm())).unwrap();
        m.swap_rows(col, piv);
        rhs.swap_rows(col, piv);
        for r in (col + 1)..n {
            let f = m[(r, col)] / m[(col, col)];
            for k in col..n {
                let v = m[(col, k)];
                m[(r, k)] -= f * v;
            }
            for k in 0..p {
                let v = rhs[(col, k)];
                rhs[(r, k)] -= f * v;
            }
        }
    }
    for col in (0..n).rev() {
        for k in 0..p {
            let mut v = rhs[(col, k)];
            for j in (col + 1)..n {
                v -= m[(col, j)] * rhs[(j, k)];
            }
            rhs[(col, k)] = v / m[(col, col)];
        }
    }
    let c = CMat::from_fn(p, n, |i, j| x.c()[(i, j)].into());
    let d = CMat::from_fn(p, p, |i, j| x.d()[(i, j)].into());
    c * rhs + d
}

/// Largest singular value of any complex matrix via power iteration on `MᴴM`.
pub fn spectral_norm_power(m: &CMat) -> f64 {
    let g = m.adjoint() * m;
    let mut v = nalgebra::DVector::<Complex64>::from_fn(g.ncols(), |i, _| Complex64::new(1.0 + i as f64 * 0.37, 0.1));
    let mut last = 0.0;
    for _ in 0..500 {
        let w = &g * &v;
        let n = w.norm();
        if n == 0.0 {
            return 0.0;
        }
        v = w / Complex64::new(n, 0.0);
        if (n - last).abs() <= 1e-15 * n {
            break;
        }
        last = n;
    }
    (&g * &v).norm().sqrt()
}

pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let (l, h) = (lo.log10(), hi.log10());
    (0..points).map(|k| 10f64.powf(l + (h - l) * k as f64 / (points - 1) as f64)).collect()
}
