//! Brute-force typed spectrum of `K_n(rho) = [rho^|j-l|]`.
//!
//! The matrix is split into its symmetric and skew-symmetric invariant
//! subspaces by the exchange-matrix basis change, each block's characteristic
//! polynomial is formed by Faddeev-LeVerrier, and its roots are found by
//! Aberth-Ehrlich iteration. Nothing in here depends on the level-curve
//! parametrization, so it serves as an independent oracle for it.

use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::thresholds::EigenType;
use crate::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Largest matrix (or polynomial degree) the trace recursion is trusted with.
pub const MAX_DIM: usize = 32;

const ABERTH_MAX_ITER: usize = 200;
const ABERTH_STEP_TOL: f64 = 1e-13;
/// Accepted normwise backward error of a root when the step criterion is not
/// met (multiple roots jitter at the `sqrt(eps)` level forever).
const ABERTH_BACKWARD_TOL: f64 = 1e-8;
/// Roots closer than this (relative to `max(1, |z|)`) are merged at their mean.
pub const CLUSTER_TOL: f64 = 1e-5;
/// Relative width of the band around `N` in which a count is ambiguous.
pub const TIE_TOL: f64 = 1e-9;

/// `K_n(rho)` together with its defining data.
#[derive(Debug, Clone, PartialEq)]
pub struct KmsMatrix {
    pub n: usize,
    pub rho: Complex64,
    pub entries: CMatrix,
}

pub fn build_kms(n: usize, rho: Complex64) -> Result<KmsMatrix> {
    if n < 2 {
        return Err(Error::domain(format!("K_n needs n >= 2, got {n}")));
    }
    let mut powers = Vec::with_capacity(n);
    let mut p = Complex64::new(1.0, 0.0);
    for _ in 0..n {
        powers.push(p);
        p *= rho;
    }
    let entries = CMatrix::from_fn(n, n, |j, l| powers[j.abs_diff(l)]);
    Ok(KmsMatrix { n, rho, entries })
}

impl KmsMatrix {
    pub fn split(&self) -> Result<CentroBlocks> {
        centro_split(&self.entries)
    }
}

/// Diagonal blocks of a centrosymmetric matrix in the symmetric /
/// skew-symmetric basis.
#[derive(Debug, Clone, PartialEq)]
pub struct CentroBlocks {
    /// `ceil(n/2)` square block acting on symmetric vectors (type-2).
    pub symmetric: CMatrix,
    /// `floor(n/2)` square block acting on skew-symmetric vectors (type-1).
    pub skew: CMatrix,
    /// Largest off-diagonal-block magnitude after the basis change.
    pub coupling: f64,
}

/// Orthogonal basis `{(e_i + e_i')/sqrt2, [e_c], (e_i - e_i')/sqrt2}` with
/// `i' = n - 1 - i`, symmetric vectors first.
fn exchange_basis(n: usize) -> DMatrix<f64> {
    let half = n / 2;
    let sym = n - half;
    let mut q = DMatrix::<f64>::zeros(n, n);
    for i in 0..half {
        q[(i, i)] = FRAC_1_SQRT_2;
        q[(n - 1 - i, i)] = FRAC_1_SQRT_2;
        q[(i, sym + i)] = FRAC_1_SQRT_2;
        q[(n - 1 - i, sym + i)] = -FRAC_1_SQRT_2;
    }
    if n % 2 == 1 {
        q[(half, half)] = 1.0;
    }
    q
}

pub fn centro_split(m: &CMatrix) -> Result<CentroBlocks> {
    let n = m.nrows();
    if m.ncols() != n || n == 0 {
        return Err(Error::Contract(format!(
            "centrosymmetric split needs a square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    for i in 0..n {
        for j in 0..n {
            if m[(i, j)] != m[(n - 1 - i, n - 1 - j)] {
                return Err(Error::Contract(format!(
                    "matrix is not centrosymmetric at ({i}, {j})"
                )));
            }
        }
    }
    let q = exchange_basis(n).map(|x| Complex64::new(x, 0.0));
    let t = q.transpose() * m * &q;
    let sym = n - n / 2;
    let scale = m.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut coupling: f64 = 0.0;
    for i in 0..n {
        for j in 0..n {
            if (i < sym) != (j < sym) {
                coupling = coupling.max(t[(i, j)].norm());
            }
        }
    }
    if coupling > 1e-12 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::Contract(format!(
            "symmetric/skew blocks still coupled after basis change: {coupling:e}"
        )));
    }
    Ok(CentroBlocks {
        symmetric: t.view((0, 0), (sym, sym)).into_owned(),
        skew: t.view((sym, sym), (n - sym, n - sym)).into_owned(),
        coupling,
    })
}

/// Monic characteristic polynomial `det(lambda I - M)`, highest degree first.
pub fn char_poly(m: &CMatrix) -> Result<Vec<Complex64>> {
    let d = m.nrows();
    if m.ncols() != d {
        return Err(Error::Contract("char_poly needs a square matrix".into()));
    }
    if d > MAX_DIM {
        return Err(Error::domain(format!(
            "char_poly supports dimension <= {MAX_DIM}, got {d}"
        )));
    }
    let mut coeffs = Vec::with_capacity(d + 1);
    coeffs.push(Complex64::new(1.0, 0.0));
    let mut acc = CMatrix::zeros(d, d);
    for k in 1..=d {
        // M_k = A M_{k-1} + c_{k-1} I,  c_k = -tr(A M_k) / k
        let mut next = m * &acc;
        for i in 0..d {
            next[(i, i)] += coeffs[k - 1];
        }
        acc = next;
        let am = m * &acc;
        coeffs.push(-am.trace() / k as f64);
    }
    Ok(coeffs)
}

/// Horner evaluation of `p` and `p'`; coefficients highest degree first.
fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = coeffs[0];
    let mut dp = Complex64::new(0.0, 0.0);
    for c in &coeffs[1..] {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Normwise backward error `|p(z)| / sum |c_i| |z|^(d-i)`.
pub fn backward_error(coeffs: &[Complex64], z: Complex64) -> f64 {
    let (p, _) = horner(coeffs, z);
    let r = z.norm();
    let mut scale = 0.0;
    for c in coeffs {
        scale = scale * r + c.norm();
    }
    if scale == 0.0 {
        0.0
    } else {
        p.norm() / scale
    }
}

/// All roots of a polynomial (highest degree first) by Aberth-Ehrlich.
///
/// Roots within [`CLUSTER_TOL`] of each other are merged into a repeated root
/// at the pair's mean.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    if coeffs.len() < 2 {
        return Err(Error::domain("poly_roots needs degree >= 1"));
    }
    let lead = coeffs[0];
    if lead.norm() == 0.0 {
        return Err(Error::domain("leading coefficient is zero"));
    }
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();
    let d = monic.len() - 1;
    if d == 1 {
        return Ok(vec![-monic[1]]);
    }

    // Fujiwara bound on the root moduli.
    let radius = monic[1..]
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = if i + 1 == d { c.norm() / 2.0 } else { c.norm() };
            m.powf(1.0 / (i + 1) as f64)
        })
        .fold(0.0, f64::max)
        * 2.0;
    let radius = if radius > 0.0 { radius } else { 1.0 };
    let mut z: Vec<Complex64> = (0..d)
        .map(|j| Complex64::from_polar(radius, TAU * j as f64 / d as f64 + 0.4))
        .collect();
    let mut converged = false;

    for _ in 0..ABERTH_MAX_ITER {
        let mut all_small = true;
        for j in 0..d {
            let (p, dp) = horner(&monic, z[j]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for l in 0..d {
                if l != j {
                    repulsion += 1.0 / (z[j] - z[l]);
                }
            }
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[j] -= step;
            if step.norm() >= ABERTH_STEP_TOL * (1.0 + z[j].norm()) {
                all_small = false;
            }
        }
        if all_small {
            converged = true;
            break;
        }
    }

    if !converged {
        let errs: Vec<f64> = z.iter().map(|&r| backward_error(&monic, r)).collect();
        if errs.iter().any(|&e| !(e < ABERTH_BACKWARD_TOL)) {
            return Err(Error::Convergence(format!(
                "Aberth iteration did not converge in {ABERTH_MAX_ITER} steps; \
                 backward errors {errs:?}"
            )));
        }
    }
    Ok(merge_clusters(z))
}

/// Replace pairs of roots closer than [`CLUSTER_TOL`] by their mean.
fn merge_clusters(z: Vec<Complex64>) -> Vec<Complex64> {
    merge_clusters_marked(z).0
}

fn merge_clusters_marked(mut z: Vec<Complex64>) -> (Vec<Complex64>, Vec<bool>) {
    let d = z.len();
    let mut merged = vec![false; d];
    for i in 0..d {
        if merged[i] {
            continue;
        }
        for j in i + 1..d {
            if merged[j] {
                continue;
            }
            let scale = z[i].norm().max(z[j].norm()).max(1.0);
            if (z[i] - z[j]).norm() < CLUSTER_TOL * scale {
                let mean = 0.5 * (z[i] + z[j]);
                z[i] = mean;
                z[j] = mean;
                merged[i] = true;
                merged[j] = true;
                break;
            }
        }
    }
    (z, merged)
}

/// Eigenvalues of `K_n(rho)` labelled by type.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedSpectrum {
    /// `floor(n/2)` eigenvalues with skew-symmetric eigenvectors.
    pub type1: Vec<Complex64>,
    /// `ceil(n/2)` eigenvalues with symmetric eigenvectors.
    pub type2: Vec<Complex64>,
}

impl TypedSpectrum {
    pub fn of_type(&self, kind: EigenType) -> &[Complex64] {
        match kind {
            EigenType::One => &self.type1,
            EigenType::Two => &self.type2,
        }
    }

    pub fn trace(&self) -> Complex64 {
        self.type1.iter().chain(&self.type2).sum()
    }

    /// `min | |lambda| - N | / N` over the eigenvalues of one type.
    pub fn level_gap(&self, kind: EigenType, level: f64) -> f64 {
        self.of_type(kind)
            .iter()
            .map(|l| (l.norm() - level).abs() / level)
            .fold(f64::INFINITY, f64::min)
    }
}

fn sort_by_magnitude(v: &mut [Complex64]) {
    v.sort_by(|a, b| {
        b.norm()
            .total_cmp(&a.norm())
            .then(a.re.total_cmp(&b.re))
            .then(a.im.total_cmp(&b.im))
    });
}

/// Estimate of the smallest singular value of `z I - A` from one inverse
/// iteration step; `None` when the shifted matrix is exactly singular.
fn shifted_inverse(a: &CMatrix, z: Complex64) -> Option<CMatrix> {
    let d = a.nrows();
    let shifted = CMatrix::from_diagonal_element(d, d, z) - a;
    shifted.lu().try_inverse()
}

/// Aberth-Ehrlich iteration on `det(z I - A)` itself, using
/// `p'(z) / p(z) = tr((z I - A)^-1)`.
///
/// The trace recursion loses every eigenvalue much smaller than `||A||` once
/// `||A||^d` dwarfs them (`|rho| ~ 3`, `n = 16` already does), so its roots
/// serve only as starting points here.
fn refine_on_matrix(a: &CMatrix, mut z: Vec<Complex64>) -> Result<Vec<Complex64>> {
    let d = z.len();
    let mut converged = false;
    for _ in 0..ABERTH_MAX_ITER {
        let mut all_small = true;
        for j in 0..d {
            let Some(inv) = shifted_inverse(a, z[j]) else {
                continue;
            };
            let log_deriv = inv.trace();
            if log_deriv.norm() == 0.0 || !log_deriv.re.is_finite() {
                continue;
            }
            let ratio = 1.0 / log_deriv;
            let mut repulsion = Complex64::new(0.0, 0.0);
            for l in 0..d {
                if l != j {
                    repulsion += 1.0 / (z[j] - z[l]);
                }
            }
            let step = ratio / (1.0 - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[j] -= step;
            if step.norm() >= ABERTH_STEP_TOL * (1.0 + z[j].norm()) {
                all_small = false;
            }
        }
        if all_small {
            converged = true;
            break;
        }
    }
    if !converged {
        // sigma_min(z I - A) <= |b| / |(z I - A)^-1 b|
        let scale = a.iter().map(|x| x.norm()).fold(1.0, f64::max) * d as f64;
        let ones = nalgebra::DVector::from_element(d, Complex64::new(1.0, 0.0));
        for &r in &z {
            let sigma = shifted_inverse(a, r)
                .map(|inv| ones.norm() / (inv * &ones).norm())
                .unwrap_or(0.0);
            if !(sigma < ABERTH_BACKWARD_TOL * scale) {
                return Err(Error::Convergence(format!(
                    "eigenvalue iteration stalled at {r}: shifted residual {sigma:e}"
                )));
            }
        }
    }
    let (mut z, merged) = merge_clusters_marked(z);
    // Iterates jitter around a double eigenvalue at the sqrt(eps) level, but
    // the cluster mean is fixed by the trace once the other eigenvalues are
    // simple.
    if merged.iter().filter(|&&m| m).count() == 2 {
        let others: Complex64 = z.iter().zip(&merged).filter(|(_, &m)| !m).map(|(v, _)| v).sum();
        let mean = 0.5 * (a.trace() - others);
        for (v, &m) in z.iter_mut().zip(&merged) {
            if m {
                *v = mean;
            }
        }
    }
    Ok(z)
}

/// Eigenvalues of one diagonal block: trace-recursion polynomial and Aberth
/// for starting values, then Aberth on the block determinant.
pub fn block_eigenvalues(block: &CMatrix) -> Result<Vec<Complex64>> {
    if block.nrows() == 0 {
        return Ok(Vec::new());
    }
    let start = match poly_roots(&char_poly(block)?) {
        Ok(r) => r,
        Err(_) => {
            let d = block.nrows();
            let radius = block.iter().map(|x| x.norm()).fold(1.0, f64::max) * d as f64;
            (0..d)
                .map(|j| Complex64::from_polar(radius, TAU * j as f64 / d as f64 + 0.4))
                .collect()
        }
    };
    let mut roots = refine_on_matrix(block, start)?;
    sort_by_magnitude(&mut roots);
    Ok(roots)
}

pub fn typed_spectrum(n: usize, rho: Complex64) -> Result<TypedSpectrum> {
    if n > MAX_DIM {
        return Err(Error::domain(format!("typed_spectrum supports n <= {MAX_DIM}, got {n}")));
    }
    let blocks = build_kms(n, rho)?.split()?;
    Ok(TypedSpectrum {
        type1: block_eigenvalues(&blocks.skew)?,
        type2: block_eigenvalues(&blocks.symmetric)?,
    })
}

/// Number of type-`kind` eigenvalues of `K_n(rho)` with magnitude above `N`.
pub fn count_exceeding(n: usize, rho: Complex64, level: f64, kind: EigenType) -> Result<usize> {
    let spectrum = typed_spectrum(n, rho)?;
    let mut count = 0;
    for l in spectrum.of_type(kind) {
        let m = l.norm();
        if (m - level).abs() <= TIE_TOL * level {
            return Err(Error::Ambiguous(format!(
                "type-{} eigenvalue {l} of K_{n}({rho}) has magnitude {m} on the level {level}",
                kind.index()
            )));
        }
        if m > level {
            count += 1;
        }
    }
    Ok(count)
}
