//! P1 finite elements for the Dirichlet Laplacian on T(s,t).
//!
//! T(s,t) is cut along its altitude into two right triangles, each refined
//! uniformly into n = 2^level strips; all elements are right triangles, which
//! keeps the discretization well behaved for very flat T. Nodes are numbered
//! column by column in x, so K and M are banded with bandwidth ≈ 2n.
//!
//! The lowest eigenpairs come from subspace iteration on (K − σM)⁻¹M with
//! σ = π²/t²: every vertical chord of T is at most t long, so λ₁ > σ and the
//! shifted matrix is positive definite.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::linalg::{generalized_eigen, Mat};

#[derive(Clone, Debug, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<[f64; 2]>,
    pub elements: Vec<[usize; 3]>,
    pub boundary: Vec<bool>,
}

impl TriangleMesh {
    /// Structured mesh of T(s,t) at refinement `level` (2·4^level elements).
    pub fn new(s: f64, t: f64, level: u32) -> Result<Self> {
        if !(s > -1.0 && s < 1.0 && t > 0.0) {
            return Err(domain(format!("T({s}, {t}) is not a triangle with an interior foot point")));
        }
        if level > 11 {
            return Err(domain("level too large"));
        }
        let n = 1usize << level;
        let mut vertices = Vec::new();
        let mut boundary = Vec::new();
        // left half: columns i = 0..=n at x = −1 + (1+s)i/n, rows j = 0..=i
        let mut left = vec![Vec::new(); n + 1];
        for (i, col) in left.iter_mut().enumerate() {
            for j in 0..=i {
                col.push(vertices.len());
                vertices.push([-1.0 + (1.0 + s) * i as f64 / n as f64, t * j as f64 / n as f64]);
                boundary.push(j == 0 || j == i);
            }
        }
        // right half: columns i = n−1 down to 0 at x = 1 − (1−s)i/n; column n is shared
        let mut right = vec![Vec::new(); n + 1];
        right[n] = left[n].clone();
        for i in (0..n).rev() {
            for j in 0..=i {
                right[i].push(vertices.len());
                vertices.push([1.0 - (1.0 - s) * i as f64 / n as f64, t * j as f64 / n as f64]);
                boundary.push(j == 0 || j == i);
            }
        }
        // apex closes the shared column
        boundary[left[n][n]] = true;
        let mut elements = Vec::with_capacity(2 * n * n);
        for half in [&left, &right] {
            let flip = std::ptr::eq(half, &right);
            for i in 0..n {
                for j in 0..=i {
                    let mut push = |e: [usize; 3]| elements.push(if flip { [e[0], e[2], e[1]] } else { e });
                    push([half[i][j], half[i + 1][j], half[i + 1][j + 1]]);
                    if j < i {
                        push([half[i][j], half[i + 1][j + 1], half[i][j + 1]]);
                    }
                }
            }
        }
        Ok(TriangleMesh { vertices, elements, boundary })
    }

    pub fn signed_area(&self, e: usize) -> f64 {
        let [a, b, c] = self.elements[e].map(|k| self.vertices[k]);
        0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]))
    }
}

/// Symmetric band matrix, lower band stored row-wise.
struct Band {
    n: usize,
    w: usize,
    v: Vec<f64>,
}

impl Band {
    fn new(n: usize, w: usize) -> Self {
        Band { n, w, v: vec![0.0; n * (w + 1)] }
    }

    #[inline]
    fn at(&mut self, i: usize, j: usize) -> &mut f64 {
        let (i, j) = if j > i { (j, i) } else { (i, j) };
        &mut self.v[i * (self.w + 1) + (j + self.w - i)]
    }

    fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for i in 0..self.n {
            let lo = i.saturating_sub(self.w);
            let row = &self.v[i * (self.w + 1)..(i + 1) * (self.w + 1)];
            let mut acc = row[self.w] * x[i];
            for j in lo..i {
                let a = row[j + self.w - i];
                acc += a * x[j];
                y[j] += a * x[i];
            }
            y[i] += acc;
        }
        y
    }

    fn axpy(&self, alpha: f64, other: &Band) -> Band {
        Band { n: self.n, w: self.w, v: self.v.iter().zip(&other.v).map(|(a, b)| a + alpha * b).collect() }
    }

    /// In-place band Cholesky.
    fn cholesky(mut self) -> Result<Band> {
        let w = self.w;
        for i in 0..self.n {
            let lo = i.saturating_sub(w);
            for j in lo..=i {
                let mut s = self.v[i * (w + 1) + (j + w - i)];
                let klo = lo.max(j.saturating_sub(w));
                for k in klo..j {
                    s -= self.v[i * (w + 1) + (k + w - i)] * self.v[j * (w + 1) + (k + w - j)];
                }
                if i == j {
                    if s <= 0.0 {
                        return Err(Error::NotPosDef);
                    }
                    self.v[i * (w + 1) + w] = s.sqrt();
                } else {
                    self.v[i * (w + 1) + (j + w - i)] = s / self.v[j * (w + 1) + w];
                }
            }
        }
        Ok(self)
    }

    fn chol_solve(&self, b: &[f64]) -> Vec<f64> {
        let w = self.w;
        let mut y = b.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for k in i.saturating_sub(w)..i {
                s -= self.v[i * (w + 1) + (k + w - i)] * y[k];
            }
            y[i] = s / self.v[i * (w + 1) + w];
        }
        for i in (0..self.n).rev() {
            y[i] /= self.v[i * (w + 1) + w];
            let yi = y[i];
            for k in i.saturating_sub(w)..i {
                y[k] -= self.v[i * (w + 1) + (k + w - i)] * yi;
            }
        }
        y
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FemResult {
    pub eigs: Vec<f64>,
    pub unknowns: usize,
    pub iterations: usize,
    /// Very flat triangle (t < 10⁻³): results are unreliable.
    pub ill_conditioned: bool,
}

const MAX_ITER: usize = 2000;

/// Lowest k Dirichlet eigenvalues of T(s,t), conforming P1 (upper-biased).
pub fn fem_triangle_eigs(s: f64, t: f64, level: u32, k: usize) -> Result<FemResult> {
    if level < 3 {
        return Err(domain("level must be at least 3"));
    }
    if k == 0 || k > 8 {
        return Err(domain("k must lie in 1..=8"));
    }
    let mesh = TriangleMesh::new(s, t, level)?;
    let mut index = vec![usize::MAX; mesh.vertices.len()];
    let mut n = 0;
    for (v, b) in mesh.boundary.iter().enumerate() {
        if !b {
            index[v] = n;
            n += 1;
        }
    }
    let p = (k + 4).min(n);
    if p < k {
        return Err(domain("mesh too coarse for k eigenvalues"));
    }
    let mut w = 0;
    for e in &mesh.elements {
        for &a in e {
            for &b in e {
                if index[a] != usize::MAX && index[b] != usize::MAX {
                    w = w.max(index[a].abs_diff(index[b]));
                }
            }
        }
    }
    let mut kk = Band::new(n, w);
    let mut mm = Band::new(n, w);
    for (ei, e) in mesh.elements.iter().enumerate() {
        let area = mesh.signed_area(ei);
        let xy = e.map(|v| mesh.vertices[v]);
        let grad: Vec<[f64; 2]> = (0..3)
            .map(|i| {
                let (b, c) = (xy[(i + 1) % 3], xy[(i + 2) % 3]);
                [(b[1] - c[1]) / (2.0 * area), (c[0] - b[0]) / (2.0 * area)]
            })
            .collect();
        for i in 0..3 {
            let gi = index[e[i]];
            if gi == usize::MAX {
                continue;
            }
            for j in 0..=2 {
                let gj = index[e[j]];
                if gj == usize::MAX || gj > gi {
                    continue;
                }
                let stiff = area * (grad[i][0] * grad[j][0] + grad[i][1] * grad[j][1]);
                let mass = area / 12.0 * if i == j { 2.0 } else { 1.0 };
                *kk.at(gi, gj) += stiff;
                *mm.at(gi, gj) += mass;
            }
        }
    }
    let sigma = PI * PI / (t * t);
    let chol = kk.axpy(-sigma, &mm).cholesky()?;

    // deterministic smooth start vectors
    let interior: Vec<[f64; 2]> = (0..mesh.vertices.len()).filter(|&v| index[v] != usize::MAX).map(|v| mesh.vertices[v]).collect();
    let mut x: Vec<Vec<f64>> = (0..p)
        .map(|c| interior.iter().map(|q| ((c + 1) as f64 * PI * (q[0] + 1.0) / 2.0).sin() + 0.01 * ((c * 7 + 3) as f64 * q[1] / t).cos()).collect())
        .collect();
    let mut prev = vec![f64::INFINITY; k];
    let mut iterations = 0;
    let mut eigs = Vec::new();
    for it in 0..MAX_ITER {
        iterations = it + 1;
        let y: Vec<Vec<f64>> = x.iter().map(|xc| chol.chol_solve(&mm.matvec(xc))).collect();
        let ky: Vec<Vec<f64>> = y.iter().map(|v| kk.matvec(v)).collect();
        let my: Vec<Vec<f64>> = y.iter().map(|v| mm.matvec(v)).collect();
        let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        let a = Mat::from_fn(p, |i, j| dot(&y[i], &ky[j]));
        let b = Mat::from_fn(p, |i, j| dot(&y[i], &my[j]));
        let a = Mat::from_fn(p, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
        let b = Mat::from_fn(p, |i, j| 0.5 * (b[(i, j)] + b[(j, i)]));
        let pairs = generalized_eigen(&a, &b)?;
        x = pairs
            .iter()
            .map(|(_, v)| {
                let mut col = vec![0.0; n];
                for (c, &coef) in v.iter().enumerate() {
                    col.iter_mut().zip(&y[c]).for_each(|(o, yv)| *o += coef * yv);
                }
                col
            })
            .collect();
        eigs = pairs.iter().take(k).map(|p| p.0).collect();
        let change = eigs.iter().zip(&prev).map(|(a, b)| ((a - b) / a).abs()).fold(0.0, f64::max);
        prev.clone_from(&eigs);
        if change < 1e-12 {
            break;
        }
    }
    Ok(FemResult { eigs, unknowns: n, iterations, ill_conditioned: t < 1e-3 })
}
