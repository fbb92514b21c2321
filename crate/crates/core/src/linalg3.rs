//! Fixed-size complex linear algebra for a single qutrit: rays, rank-1
//! projectors, Hermitian 3x3 matrices and a Jacobi eigensolver.

#![allow(clippy::needless_range_loop)]

use std::fmt;
use std::ops::{Add, Index};

pub use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest deviation of the squared-norm from 1 that [`Ray::new`] silently repairs.
pub const RAY_NORM_TOLERANCE: f64 = 1e-6;

/// Entry-wise tolerance for the Hermitian check, relative to the largest entry.
pub const HERMITIAN_TOLERANCE: f64 = 1e-12;

const JACOBI_THRESHOLD: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A normalized vector of C^3, i.e. a pure qutrit state.
#[derive(Clone, Copy, PartialEq)]
pub struct Ray {
    amplitudes: [Complex64; 3],
}

impl Ray {
    /// Builds a ray from amplitudes whose norm is already 1 up to
    /// [`RAY_NORM_TOLERANCE`]; the residual deviation is normalized away.
    pub fn new(amplitudes: [Complex64; 3]) -> Result<Self> {
        let norm = norm(&amplitudes);
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::DegenerateRay);
        }
        if (norm - 1.0).abs() > RAY_NORM_TOLERANCE {
            return Err(Error::RayNorm { norm, tolerance: RAY_NORM_TOLERANCE });
        }
        Ok(Self::scaled(amplitudes, norm))
    }

    /// Builds a ray from any non-zero vector by dividing out its norm.
    pub fn normalized(amplitudes: [Complex64; 3]) -> Result<Self> {
        let norm = norm(&amplitudes);
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::DegenerateRay);
        }
        Ok(Self::scaled(amplitudes, norm))
    }

    /// Real-valued convenience constructor, normalizing the input.
    pub fn from_real(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::normalized([Complex64::new(x, 0.0), Complex64::new(y, 0.0), Complex64::new(z, 0.0)])
    }

    /// The computational basis ray |index>.
    pub fn basis(index: usize) -> Self {
        assert!(index < 3, "qutrit basis index {index} out of range");
        let mut amplitudes = [ZERO; 3];
        amplitudes[index] = ONE;
        Self { amplitudes }
    }

    fn scaled(amplitudes: [Complex64; 3], norm: f64) -> Self {
        Self { amplitudes: amplitudes.map(|a| a / norm) }
    }

    pub fn amplitudes(&self) -> &[Complex64; 3] {
        &self.amplitudes
    }

    /// The same ray multiplied by a global phase e^{i theta}.
    pub fn with_phase(&self, theta: f64) -> Self {
        let phase = Complex64::from_polar(1.0, theta);
        Self { amplitudes: self.amplitudes.map(|a| a * phase) }
    }

    /// Hermitian inner product <self|other>.
    pub fn inner(&self, other: &Ray) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other.amplitudes.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

impl fmt::Debug for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.amplitudes;
        write!(f, "Ray({a}, {b}, {c})")
    }
}

fn norm(v: &[Complex64; 3]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

/// |<a|b>|, clamped to [0, 1].
pub fn overlap(a: &Ray, b: &Ray) -> f64 {
    a.inner(b).norm().min(1.0)
}

/// A 3x3 complex matrix equal to its conjugate transpose.
#[derive(Clone, Copy, PartialEq)]
pub struct Hermitian3 {
    entries: [[Complex64; 3]; 3],
}

impl Hermitian3 {
    /// Validates and symmetrizes a candidate matrix.
    pub fn new(entries: [[Complex64; 3]; 3]) -> Result<Self> {
        let scale = entries
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(1.0_f64, f64::max);
        let tolerance = HERMITIAN_TOLERANCE * scale;
        for row in 0..3 {
            for col in row..3 {
                let deviation = (entries[row][col] - entries[col][row].conj()).norm();
                if !deviation.is_finite() || deviation > tolerance {
                    return Err(Error::NotHermitian { row, col, deviation });
                }
            }
        }
        Ok(Self::symmetrized(entries))
    }

    fn symmetrized(entries: [[Complex64; 3]; 3]) -> Self {
        let mut out = [[ZERO; 3]; 3];
        for row in 0..3 {
            out[row][row] = Complex64::new(entries[row][row].re, 0.0);
            for col in row + 1..3 {
                let z = (entries[row][col] + entries[col][row].conj()) * 0.5;
                out[row][col] = z;
                out[col][row] = z.conj();
            }
        }
        Self { entries: out }
    }

    pub fn zero() -> Self {
        Self { entries: [[ZERO; 3]; 3] }
    }

    pub fn identity() -> Self {
        Self::diagonal([1.0, 1.0, 1.0])
    }

    pub fn diagonal(d: [f64; 3]) -> Self {
        let mut entries = [[ZERO; 3]; 3];
        for (k, value) in d.into_iter().enumerate() {
            entries[k][k] = Complex64::new(value, 0.0);
        }
        Self { entries }
    }

    pub fn entries(&self) -> &[[Complex64; 3]; 3] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..3).map(|k| self.entries[k][k].re).sum()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { entries: self.entries.map(|row| row.map(|z| z * factor)) }
    }

    /// Largest entry-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Hermitian3) -> f64 {
        let mut worst = 0.0_f64;
        for row in 0..3 {
            for col in 0..3 {
                worst = worst.max((self.entries[row][col] - other.entries[row][col]).norm());
            }
        }
        worst
    }

    pub fn apply(&self, v: &[Complex64; 3]) -> [Complex64; 3] {
        let mut out = [ZERO; 3];
        for (row, slot) in out.iter_mut().enumerate() {
            *slot = (0..3).map(|col| self.entries[row][col] * v[col]).sum();
        }
        out
    }

    /// Plain matrix product; the result is generally not Hermitian.
    pub fn matmul(&self, other: &Hermitian3) -> [[Complex64; 3]; 3] {
        mul(&self.entries, &other.entries)
    }
}

impl Index<(usize, usize)> for Hermitian3 {
    type Output = Complex64;

    fn index(&self, (row, col): (usize, usize)) -> &Complex64 {
        &self.entries[row][col]
    }
}

impl Add for Hermitian3 {
    type Output = Hermitian3;

    fn add(self, rhs: Hermitian3) -> Hermitian3 {
        let mut entries = self.entries;
        for row in 0..3 {
            for col in 0..3 {
                entries[row][col] += rhs.entries[row][col];
            }
        }
        Hermitian3 { entries }
    }
}

impl fmt::Debug for Hermitian3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

/// |r><r|.
pub fn projector(r: &Ray) -> Hermitian3 {
    let a = r.amplitudes();
    let mut entries = [[ZERO; 3]; 3];
    for row in 0..3 {
        for col in 0..3 {
            entries[row][col] = a[row] * a[col].conj();
        }
    }
    Hermitian3::symmetrized(entries)
}

pub fn projector_sum(rays: &[Ray]) -> Result<Hermitian3> {
    if rays.is_empty() {
        return Err(Error::NoRays);
    }
    Ok(rays.iter().map(projector).fold(Hermitian3::zero(), |acc, p| acc + p))
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone, Copy)]
pub struct EigenDecomposition {
    pub values: [f64; 3],
    pub vectors: [Ray; 3],
}

impl EigenDecomposition {
    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        self.values[2]
    }

    /// ||M v_k - lambda_k v_k|| for each k.
    pub fn residuals(&self, m: &Hermitian3) -> [f64; 3] {
        let mut out = [0.0; 3];
        for k in 0..3 {
            let v = self.vectors[k].amplitudes();
            let mv = m.apply(v);
            out[k] = (0..3)
                .map(|i| (mv[i] - v[i] * self.values[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
        }
        out
    }
}

/// Cyclic complex Jacobi sweeps until the off-diagonal Frobenius norm drops
/// below `1e-14 * max(1, ||M||_F)`.
pub fn eigensystem(m: &Hermitian3) -> EigenDecomposition {
    let mut a = m.entries;
    let mut v = identity_entries();
    let frobenius = a.iter().flatten().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = JACOBI_THRESHOLD * frobenius.max(1.0);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diagonal_norm(&a) <= threshold {
            break;
        }
        for (p, q) in [(0, 1), (0, 2), (1, 2)] {
            let apq = a[p][q];
            let r = apq.norm();
            if r == 0.0 {
                continue;
            }
            let phase = apq / r;
            let tau = (a[q][q].re - a[p][p].re) / (2.0 * r);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;

            // J = diag(phase^-1 at q) * real rotation in the (p, q) plane.
            let mut j = identity_entries();
            j[p][p] = Complex64::new(c, 0.0);
            j[p][q] = Complex64::new(s, 0.0);
            j[q][p] = -phase.conj() * s;
            j[q][q] = phase.conj() * c;

            a = mul(&adjoint(&j), &mul(&a, &j));
            a[p][q] = ZERO;
            a[q][p] = ZERO;
            for k in 0..3 {
                a[k][k].im = 0.0;
            }
            v = mul(&v, &j);
        }
    }

    let mut pairs: Vec<(f64, Ray)> = (0..3)
        .map(|k| {
            let column = [v[0][k], v[1][k], v[2][k]];
            let ray = Ray::scaled(column, norm(&column));
            let mv = m.apply(ray.amplitudes());
            let rayleigh: Complex64 =
                ray.amplitudes().iter().zip(mv.iter()).map(|(x, y)| x.conj() * y).sum();
            (rayleigh.re, ray)
        })
        .collect();
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0));

    EigenDecomposition {
        values: [pairs[0].0, pairs[1].0, pairs[2].0],
        vectors: [pairs[0].1, pairs[1].1, pairs[2].1],
    }
}

fn identity_entries() -> [[Complex64; 3]; 3] {
    let mut out = [[ZERO; 3]; 3];
    for (k, row) in out.iter_mut().enumerate() {
        row[k] = ONE;
    }
    out
}

fn off_diagonal_norm(a: &[[Complex64; 3]; 3]) -> f64 {
    (2.0 * (a[0][1].norm_sqr() + a[0][2].norm_sqr() + a[1][2].norm_sqr())).sqrt()
}

fn adjoint(a: &[[Complex64; 3]; 3]) -> [[Complex64; 3]; 3] {
    let mut out = [[ZERO; 3]; 3];
    for row in 0..3 {
        for col in 0..3 {
            out[row][col] = a[col][row].conj();
        }
    }
    out
}

fn mul(a: &[[Complex64; 3]; 3], b: &[[Complex64; 3]; 3]) -> [[Complex64; 3]; 3] {
    let mut out = [[ZERO; 3]; 3];
    for row in 0..3 {
        for col in 0..3 {
            out[row][col] = (0..3).map(|k| a[row][k] * b[k][col]).sum();
        }
    }
    out
}
