//! Julia quadratic, Julia invariant, and the zero map.
//!
//! For a squarefree form with roots split into r real roots and s conjugate
//! pairs, the positive definite quadratic `Q_f = T_r + S_s` has discriminant
//! `-|D|` where `|D|(w)` is a quadratic form with nonnegative coefficients in
//! the weights `w = (t_i^2, u_j^2)`. The objective
//! `log theta_0 = 2 log a_n + (n/2) log |D| - sum m_k log w_k`
//! is convex in `xi = log w` (log-sum-exp of affine functions), so a damped
//! Newton iteration with a gauge penalty finds the unique minimizer; the
//! minimizing quadratic is the Julia quadratic and its upper half-plane root
//! is the zero map.

use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::forms::BinaryForm;
use crate::numerics::{complex_roots, RootSet};
use crate::{Error, Result};

/// Default gradient-norm tolerance for the minimizer.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Gradient norm accepted when the iteration stalls at the numerical floor.
const SOFT_TOL: f64 = 1e-8;
const ROOT_TOL: f64 = 1e-12;
const NEWTON_CAP: usize = 200;

/// Optimal root weights: `real_weights[i] = t_i^2`, `pair_weights[j] = u_j^2`,
/// normalized so that `prod real * prod pair^2 = 1`.
#[derive(Clone, Debug)]
pub struct JuliaWeights {
    pub real_weights: Vec<f64>,
    pub pair_weights: Vec<f64>,
}

/// Positive definite real quadratic `a x^2 + b x z + c z^2`.
#[derive(Clone, Copy, Debug)]
pub struct JuliaQuadratic {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl JuliaQuadratic {
    pub fn discriminant(&self) -> f64 {
        self.b * self.b - 4.0 * self.a * self.c
    }

    /// Root in the upper half-plane.
    pub fn upper_root(&self) -> Complex64 {
        let d = self.discriminant();
        Complex64::new(-self.b / (2.0 * self.a), (-d).max(0.0).sqrt() / (2.0 * self.a))
    }
}

/// Result of the theta minimization.
#[derive(Clone, Debug)]
pub struct JuliaResult {
    pub weights: JuliaWeights,
    pub julia_quadratic: JuliaQuadratic,
    /// Julia invariant theta_f; may overflow to infinity for extreme inputs,
    /// in which case `ln_theta` still carries the value.
    pub theta: f64,
    pub ln_theta: f64,
    /// Zero map: root of the Julia quadratic in the upper half-plane.
    pub zero: Complex64,
    /// Achieved gradient norm of log theta_0 in log coordinates.
    pub gradient_norm: f64,
    pub iterations: usize,
    /// Max relative residual of the stationarity (Lagrange) system.
    pub stationarity_residual: f64,
}

struct WeightProblem {
    n: usize,
    /// multiplicities: 1 per real root, 2 per pair
    m: Vec<f64>,
    /// |D|(w) = w^T q w
    q: Vec<Vec<f64>>,
}

impl WeightProblem {
    fn build(roots: &RootSet, n: usize) -> Self {
        let reals = roots.reals();
        let pairs = roots.pairs();
        let (r, s) = (reals.len(), pairs.len());
        let k = r + s;
        let mut q = vec![vec![0.0; k]; k];
        for i in 0..r {
            for j in i + 1..r {
                let c = 4.0 * (reals[i] - reals[j]).powi(2);
                q[i][j] += c / 2.0;
                q[j][i] += c / 2.0;
            }
        }
        for j in 0..s {
            let (aj, bj) = (pairs[j].re, pairs[j].im);
            q[r + j][r + j] += 16.0 * bj * bj;
            for l in j + 1..s {
                let (al, bl) = (pairs[l].re, pairs[l].im);
                let c = 16.0 * ((aj - al).powi(2) + bj * bj + bl * bl);
                q[r + j][r + l] += c / 2.0;
                q[r + l][r + j] += c / 2.0;
            }
        }
        for i in 0..r {
            for j in 0..s {
                let (aj, bj) = (pairs[j].re, pairs[j].im);
                let c = 8.0 * ((reals[i] - aj).powi(2) + bj * bj);
                q[i][r + j] += c / 2.0;
                q[r + j][i] += c / 2.0;
            }
        }
        let m = (0..k).map(|i| if i < r { 1.0 } else { 2.0 }).collect();
        WeightProblem { n, m, q }
    }

    fn qw(&self, w: &[f64]) -> Vec<f64> {
        self.q
            .iter()
            .map(|row| row.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Value, gradient and Hessian of
    /// `(n/2) ln(w^T q w) - m.xi + (m.xi)^2 / 2` at `w = exp(xi)`.
    fn fgh(&self, xi: &[f64]) -> (f64, Vec<f64>, Vec<Vec<f64>>) {
        let k = xi.len();
        let n = self.n as f64;
        let w: Vec<f64> = xi.iter().map(|x| x.exp()).collect();
        let p = self.qw(&w);
        let d: f64 = w.iter().zip(&p).map(|(a, b)| a * b).sum();
        let mxi: f64 = self.m.iter().zip(xi).map(|(a, b)| a * b).sum();
        let f = (n / 2.0) * d.ln() - mxi + 0.5 * mxi * mxi;
        let mut g = vec![0.0; k];
        for i in 0..k {
            g[i] = n * p[i] * w[i] / d - self.m[i] + mxi * self.m[i];
        }
        let mut h = vec![vec![0.0; k]; k];
        for i in 0..k {
            for j in 0..k {
                let mut v = n * (self.q[i][j] * w[i] * w[j]) / d;
                if i == j {
                    v += n * p[i] * w[i] / d;
                }
                v -= 2.0 * n * (p[i] * w[i]) * (p[j] * w[j]) / (d * d);
                v += self.m[i] * self.m[j];
                h[i][j] = v;
            }
        }
        (f, g, h)
    }
}

fn solve_sym(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let (piv, &pval) = a
            .iter()
            .enumerate()
            .skip(col)
            .map(|(i, row)| (i, &row[col]))
            .max_by(|x, y| x.1.abs().partial_cmp(&y.1.abs()).unwrap())?;
        if pval.abs() < 1e-300 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f == 0.0 {
                continue;
            }
            for c in col..n {
                a[r][c] -= f * a[col][c];
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut v = b[i];
        for j in i + 1..n {
            v -= a[i][j] * x[j];
        }
        x[i] = v / a[i][i];
    }
    Some(x)
}

/// The quadratic `T_r + S_s` at the given weights.
pub fn q_f(roots: &RootSet, w: &JuliaWeights) -> JuliaQuadratic {
    let reals = roots.reals();
    let pairs = roots.pairs();
    let mut a = 0.0;
    let mut b = 0.0;
    let mut c = 0.0;
    for (i, &al) in reals.iter().enumerate() {
        let wi = w.real_weights[i];
        a += wi;
        b += -2.0 * wi * al;
        c += wi * al * al;
    }
    for (j, bj) in pairs.iter().enumerate() {
        let wj = w.pair_weights[j];
        a += 2.0 * wj;
        b += -4.0 * wj * bj.re;
        c += 2.0 * wj * bj.norm_sqr();
    }
    JuliaQuadratic { a, b, c }
}

/// The discriminant of `q_f` as the closed quadratic form in the weights;
/// always strictly negative for genuine weights.
pub fn disc_qf(roots: &RootSet, w: &JuliaWeights) -> f64 {
    let prob = WeightProblem::build(roots, roots.roots.len() + roots.infinity_multiplicity);
    let wv: Vec<f64> = w
        .real_weights
        .iter()
        .chain(w.pair_weights.iter())
        .cloned()
        .collect();
    let p = prob.qw(&wv);
    -wv.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>()
}

/// `theta_0` at the given weights.
pub fn theta0(f: &BinaryForm, roots: &RootSet, w: &JuliaWeights) -> f64 {
    ln_theta0(f, roots, w).exp()
}

fn ln_theta0(f: &BinaryForm, roots: &RootSet, w: &JuliaWeights) -> f64 {
    let n = f.degree() as f64;
    let lead = f.lead().to_f64().unwrap().abs();
    let d = -disc_qf(roots, w);
    let mut ln_den = 0.0;
    for wi in &w.real_weights {
        ln_den += wi.ln();
    }
    for wj in &w.pair_weights {
        ln_den += 2.0 * wj.ln();
    }
    2.0 * lead.ln() + (n / 2.0) * d.ln() - ln_den
}

/// Minimize `theta_0` over the weights; unit-weight start.
pub fn minimize_theta(f: &BinaryForm, tol: f64) -> Result<JuliaResult> {
    let k = weight_count(f)?;
    minimize_theta_from(f, tol, &vec![0.0; k])
}

fn weight_count(f: &BinaryForm) -> Result<usize> {
    let roots = complex_roots(f, ROOT_TOL)?;
    Ok(roots.real_indices.len() + roots.pair_indices.len())
}

/// Minimize `theta_0` from a caller-chosen start in log coordinates.
/// Exposed so tests can probe uniqueness with random restarts.
pub fn minimize_theta_from(f: &BinaryForm, tol: f64, xi0: &[f64]) -> Result<JuliaResult> {
    let n = f.degree();
    if !(2..=10).contains(&n) {
        return Err(Error::WrongDegree {
            expected: "2..=10".into(),
            got: n,
        });
    }
    let roots = complex_roots(f, ROOT_TOL)?;
    let prob = WeightProblem::build(&roots, n);
    let k = prob.m.len();
    if xi0.len() != k {
        return Err(Error::Anomaly(format!(
            "start vector has length {}, expected {k}",
            xi0.len()
        )));
    }

    let mut xi = xi0.to_vec();
    let mut iterations = 0;
    let mut grad_norm = f64::INFINITY;
    for it in 0..NEWTON_CAP {
        iterations = it;
        let (fval, g, h) = prob.fgh(&xi);
        grad_norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if grad_norm <= tol {
            break;
        }
        let step = match solve_sym(h, g.iter().map(|v| -v).collect()) {
            Some(s) => s,
            None => g.iter().map(|v| -v).collect(),
        };
        let slope: f64 = g.iter().zip(&step).map(|(a, b)| a * b).sum();
        let mut t = 1.0;
        let mut moved = false;
        while t > 1e-18 {
            let trial: Vec<f64> = xi.iter().zip(&step).map(|(x, s)| x + t * s).collect();
            let (ft, _, _) = prob.fgh(&trial);
            if ft <= fval + 1e-4 * t * slope {
                xi = trial;
                moved = true;
                break;
            }
            t /= 2.0;
        }
        if !moved {
            break;
        }
    }
    if grad_norm > tol && grad_norm > SOFT_TOL {
        return Err(Error::NonConvergence(format!(
            "gradient norm {grad_norm:.3e} after {iterations} Newton steps"
        )));
    }

    // project onto the normalization gauge prod w^m = 1
    let mxi: f64 = prob.m.iter().zip(&xi).map(|(a, b)| a * b).sum();
    let shift = mxi / n as f64;
    for x in xi.iter_mut() {
        *x -= shift;
    }
    let w: Vec<f64> = xi.iter().map(|x| x.exp()).collect();
    let r = roots.real_indices.len();
    let weights = JuliaWeights {
        real_weights: w[..r].to_vec(),
        pair_weights: w[r..].to_vec(),
    };

    let jq = q_f(&roots, &weights);
    let zero = jq.upper_root();
    let ln_theta = ln_theta0(f, &roots, &weights);

    // stationarity residuals of the Lagrange system, relative per equation
    let p = prob.qw(&w);
    let d: f64 = w.iter().zip(&p).map(|(a, b)| a * b).sum();
    let mut res: f64 = 0.0;
    for i in 0..k {
        let lhs = n as f64 * p[i] * w[i] / d;
        res = res.max((lhs - prob.m[i]).abs() / prob.m[i]);
    }

    Ok(JuliaResult {
        weights,
        julia_quadratic: jq,
        theta: ln_theta.exp(),
        ln_theta,
        zero,
        gradient_norm: grad_norm,
        iterations,
        stationarity_residual: res,
    })
}

/// The zero map: upper half-plane root of the Julia quadratic.
pub fn zero_map(f: &BinaryForm) -> Result<Complex64> {
    Ok(minimize_theta(f, DEFAULT_TOL)?.zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forms::BinaryForm;

    fn paper_example() -> BinaryForm {
        BinaryForm::from_integers(&[3770, -3014, 1489, -458, 96, -12, 1])
    }

    #[test]
    fn worked_example_zero() {
        let res = minimize_theta(&paper_example(), DEFAULT_TOL).unwrap();
        let want = Complex64::new(2.12067656802142, 3.26692991594356);
        assert!((res.zero - want).norm() < 1e-9, "{}", res.zero);
        assert!(res.stationarity_residual < 1e-8);
    }

    #[test]
    fn worked_example_lagrange_system() {
        // the eliminated two-equation system in w = u^2 from the example:
        // 144 w1^2 + 280 w1 w2 - 240 w2 w3 - 64 w3^2 = 0
        // 280 w1 w2 - 136 w1 w3 + 400 w2^2 - 64 w3^2 = 0
        let res = minimize_theta(&paper_example(), DEFAULT_TOL).unwrap();
        let w = &res.weights.pair_weights;
        // pairs are sorted by real part: (1,3i), (2,5i), (3,2i)
        let (w1, w2, w3) = (w[0], w[1], w[2]);
        let scale = (w1 * w1 + w2 * w2 + w3 * w3) * 400.0;
        let e1 = 144.0 * w1 * w1 + 280.0 * w1 * w2 - 240.0 * w2 * w3 - 64.0 * w3 * w3;
        let e2 = 280.0 * w1 * w2 - 136.0 * w1 * w3 + 400.0 * w2 * w2 - 64.0 * w3 * w3;
        assert!(e1.abs() / scale < 1e-10, "{e1}");
        assert!(e2.abs() / scale < 1e-10, "{e2}");
        // normalization constraint w1^2 w2^2 w3^2 = 1
        assert!(((w1 * w2 * w3).powi(2) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn symmetric_sextic_zero_is_i() {
        let f = BinaryForm::from_integers(&[1, 0, 0, 0, 0, 0, 1]);
        let z = zero_map(&f).unwrap();
        assert!((z - Complex64::new(0.0, 1.0)).norm() < 1e-10);
    }

    #[test]
    fn positive_definite_quadratic() {
        let f = BinaryForm::from_integers(&[5, -2, 1]); // x^2 - 2x + 5, root 1+2i
        let res = minimize_theta(&f, DEFAULT_TOL).unwrap();
        assert!((res.zero - Complex64::new(1.0, 2.0)).norm() < 1e-12);
        let jq = res.julia_quadratic;
        // proportional to f
        assert!((jq.b / jq.a - (-2.0)).abs() < 1e-12);
        assert!((jq.c / jq.a - 5.0).abs() < 1e-12);
    }

    #[test]
    fn theta_scale_invariance_under_weight_rescale() {
        let f = paper_example();
        let roots = complex_roots(&f, 1e-12).unwrap();
        let w1 = JuliaWeights {
            real_weights: vec![],
            pair_weights: vec![1.0, 2.0, 3.0],
        };
        let s = 1.7;
        let w2 = JuliaWeights {
            real_weights: vec![],
            pair_weights: w1.pair_weights.iter().map(|x| x * s).collect(),
        };
        let t1 = theta0(&f, &roots, &w1);
        let t2 = theta0(&f, &roots, &w2);
        assert!((t1 - t2).abs() / t1 < 1e-12);
        // optimizer does at least as well as unit weights
        let res = minimize_theta(&f, DEFAULT_TOL).unwrap();
        let unit = JuliaWeights {
            real_weights: vec![],
            pair_weights: vec![1.0; 3],
        };
        assert!(res.theta <= theta0(&f, &roots, &unit) * (1.0 + 1e-12));
    }

    #[test]
    fn q_f_paper_cases() {
        // single pair beta = i with unit weight: 2(x^2 + 1)
        let f = BinaryForm::from_integers(&[1, 0, 1]);
        let roots = complex_roots(&f, 1e-12).unwrap();
        let w = JuliaWeights { real_weights: vec![], pair_weights: vec![1.0] };
        let q = q_f(&roots, &w);
        assert!((q.a - 2.0).abs() < 1e-14 && q.b.abs() < 1e-14 && (q.c - 2.0).abs() < 1e-14);
        // two real roots +-1 with unit weights: 2x^2 + 2
        let g = BinaryForm::from_integers(&[-1, 0, 1]);
        let roots = complex_roots(&g, 1e-12).unwrap();
        let w = JuliaWeights { real_weights: vec![1.0, 1.0], pair_weights: vec![] };
        let q = q_f(&roots, &w);
        assert!((q.a - 2.0).abs() < 1e-14 && q.b.abs() < 1e-14 && (q.c - 2.0).abs() < 1e-14);
    }

    #[test]
    fn disc_qf_single_pair() {
        // one pair a+bi, weight w: disc = -16 w^2 b^2
        let f = BinaryForm::from_integers(&[13, -6, 1]); // roots 3 +- 2i
        let roots = complex_roots(&f, 1e-12).unwrap();
        let w = JuliaWeights { real_weights: vec![], pair_weights: vec![1.5] };
        let d = disc_qf(&roots, &w);
        assert!((d - (-16.0 * 2.25 * 4.0)).abs() < 1e-10);
    }

    #[test]
    fn disc_qf_matches_quadratic_discriminant() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        let f = paper_example();
        let roots = complex_roots(&f, 1e-12).unwrap();
        for _ in 0..100 {
            let w = JuliaWeights {
                real_weights: vec![],
                pair_weights: (0..3).map(|_| rng.gen_range(0.1..5.0)).collect(),
            };
            let d1 = disc_qf(&roots, &w);
            let d2 = q_f(&roots, &w).discriminant();
            assert!((d1 - d2).abs() / d1.abs() < 1e-10);
            assert!(d1 < 0.0);
        }
    }

    #[test]
    fn restarts_converge_to_same_point() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let f = BinaryForm::from_integers(&[12, -7, 9, 4, -3, 1, 2]);
        let base = minimize_theta(&f, 1e-12).unwrap();
        let k = base.weights.real_weights.len() + base.weights.pair_weights.len();
        for _ in 0..20 {
            let xi0: Vec<f64> = (0..k).map(|_| rng.gen_range(-2.0..2.0)).collect();
            let res = minimize_theta_from(&f, 1e-12, &xi0).unwrap();
            let wa: Vec<f64> = base
                .weights
                .real_weights
                .iter()
                .chain(&base.weights.pair_weights)
                .cloned()
                .collect();
            let wb: Vec<f64> = res
                .weights
                .real_weights
                .iter()
                .chain(&res.weights.pair_weights)
                .cloned()
                .collect();
            for (a, b) in wa.iter().zip(&wb) {
                assert!((a.ln() - b.ln()).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn julia_quadratic_always_definite() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut done = 0;
        while done < 30 {
            let cs: Vec<i64> = (0..7).map(|_| rng.gen_range(-20..=20)).collect();
            let Ok(f) = BinaryForm::new(cs.iter().map(|&c| crate::forms::Rat::from_integer(c.into())).collect()) else { continue };
            if f.lead().is_zero() {
                continue;
            }
            let Ok(res) = minimize_theta(&f, 1e-12) else { continue };
            assert!(res.julia_quadratic.discriminant() < 0.0);
            assert!(res.julia_quadratic.a > 0.0);
            assert!(res.zero.im > 0.0);
            done += 1;
        }
    }
}
