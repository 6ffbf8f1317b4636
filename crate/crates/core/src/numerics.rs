//! Dense symmetric linear algebra: eigendecomposition, Schur complements,
//! Cholesky solves and mass-weighted generalized eigenproblems.
//!
//! The eigensolver is Householder tridiagonalization followed by implicit QL
//! with Wilkinson-style shifts. Every sweep runs in a fixed order, so repeated
//! calls on the same matrix are bitwise identical.

use crate::error::{Error, Result};

/// Largest order accepted by the dense solvers.
pub const MAX_ORDER: usize = 4096;

const QL_MAX_ITERATIONS: usize = 60;

/// Dense symmetric matrix in row-major storage. Writes go to both triangles.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * diag.len() + i] = d;
        }
        m
    }

    /// Builds from the upper triangle of `f`; `f(i, j)` is called for `i <= j`.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in i..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Builds from square rows, averaging the two triangles.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::input("matrix rows must form a square array"));
        }
        Ok(Self::from_fn(n, |i, j| 0.5 * (rows[i][j] + rows[j][i])))
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
        self.data[j * self.n + i] = value;
    }

    /// Adds `value` to entry `(i, j)` and its mirror (once on the diagonal).
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] += value;
        if i != j {
            self.data[j * self.n + i] += value;
        }
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |acc, x| acc.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &SymMatrix) -> f64 {
        assert_eq!(self.n, other.n, "order mismatch");
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |acc, (a, b)| acc.max((a - b).abs()))
    }

    pub fn scaled(&self, c: f64) -> SymMatrix {
        SymMatrix {
            n: self.n,
            data: self.data.iter().map(|x| x * c).collect(),
        }
    }

    /// `self - shift·I`.
    pub fn shifted(&self, shift: f64) -> SymMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.data[i * self.n + i] -= shift;
        }
        m
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n, "vector length mismatch");
        (0..self.n)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &[f64], y: &[f64]) -> f64 {
        x.iter().zip(self.mul_vec(y)).map(|(a, b)| a * b).sum()
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.row(i).iter().sum()).collect()
    }

    /// Principal submatrix on `indices`, in the given order.
    pub fn submatrix(&self, indices: &[usize]) -> SymMatrix {
        SymMatrix::from_fn(indices.len(), |a, b| self.get(indices[a], indices[b]))
    }

    fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::input("matrix has non-finite entries"))
        }
    }

    fn check_order(&self) -> Result<()> {
        if self.n > MAX_ORDER {
            return Err(Error::Capacity {
                what: "matrix order",
                requested: self.n,
                limit: MAX_ORDER,
            });
        }
        Ok(())
    }
}

/// Eigenvalues in ascending order with orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct EigDecomposition {
    pub values: Vec<f64>,
    /// Column `j` (contiguous) is the eigenvector of `values[j]`.
    vectors: Vec<f64>,
    /// `max_i ‖M v_i − λ_i v_i‖₂`.
    pub residual: f64,
}

impl EigDecomposition {
    pub fn order(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> &[f64] {
        let n = self.order();
        &self.vectors[j * n..(j + 1) * n]
    }

    pub fn vectors(&self) -> impl Iterator<Item = &[f64]> {
        self.vectors.chunks(self.order().max(1))
    }
}

/// Householder reduction to tridiagonal form. `v` is column-major; on return
/// `d` holds the diagonal and `e[1..]` the subdiagonal. With `accumulate` the
/// orthogonal transformation is left in `v`.
fn tridiagonalize(n: usize, v: &mut [f64], d: &mut [f64], e: &mut [f64], accumulate: bool) {
    let at = |r: usize, c: usize| c * n + r;
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
    }
    for i in (1..n).rev() {
        let mut h = 0.0;
        let scale: f64 = d[..i].iter().map(|x| x.abs()).sum();
        if scale == 0.0 {
            e[i] = d[i - 1];
            for j in 0..i {
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
                v[at(j, i)] = 0.0;
            }
        } else {
            for x in d[..i].iter_mut() {
                *x /= scale;
                h += *x * *x;
            }
            let mut f = d[i - 1];
            let mut g = if f > 0.0 { -h.sqrt() } else { h.sqrt() };
            e[i] = scale * g;
            h -= f * g;
            d[i - 1] = f - g;
            e[..i].fill(0.0);
            for j in 0..i {
                f = d[j];
                v[at(j, i)] = f;
                g = e[j] + v[at(j, j)] * f;
                for k in j + 1..i {
                    g += v[at(k, j)] * d[k];
                    e[k] += v[at(k, j)] * f;
                }
                e[j] = g;
            }
            f = 0.0;
            for j in 0..i {
                e[j] /= h;
                f += e[j] * d[j];
            }
            let hh = f / (h + h);
            for j in 0..i {
                e[j] -= hh * d[j];
            }
            for j in 0..i {
                f = d[j];
                g = e[j];
                for k in j..i {
                    v[at(k, j)] -= f * e[k] + g * d[k];
                }
                d[j] = v[at(i - 1, j)];
                v[at(i, j)] = 0.0;
            }
        }
        d[i] = h;
    }

    if !accumulate {
        for j in 0..n {
            d[j] = v[at(j, j)];
        }
        e[0] = 0.0;
        return;
    }
    for i in 0..n.saturating_sub(1) {
        v[at(n - 1, i)] = v[at(i, i)];
        v[at(i, i)] = 1.0;
        let h = d[i + 1];
        if h != 0.0 {
            for k in 0..=i {
                d[k] = v[at(k, i + 1)] / h;
            }
            for j in 0..=i {
                let mut g = 0.0;
                for k in 0..=i {
                    g += v[at(k, i + 1)] * v[at(k, j)];
                }
                for k in 0..=i {
                    v[at(k, j)] -= g * d[k];
                }
            }
        }
        for k in 0..=i {
            v[at(k, i + 1)] = 0.0;
        }
    }
    for j in 0..n {
        d[j] = v[at(n - 1, j)];
        v[at(n - 1, j)] = 0.0;
    }
    v[at(n - 1, n - 1)] = 1.0;
    e[0] = 0.0;
}

/// Implicit QL on the tridiagonal `(d, e)`; rotations are applied to `v` when given.
fn tridiagonal_ql(n: usize, d: &mut [f64], e: &mut [f64], mut v: Option<&mut [f64]>) -> Result<()> {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    if n > 0 {
        e[n - 1] = 0.0;
    }
    let eps = f64::EPSILON;
    let mut f = 0.0;
    let mut tst1: f64 = 0.0;
    for l in 0..n {
        tst1 = tst1.max(d[l].abs() + e[l].abs());
        let mut m = l;
        while m < n - 1 && e[m].abs() > eps * tst1 {
            m += 1;
        }
        if m > l {
            let mut iterations = 0;
            loop {
                iterations += 1;
                if iterations > QL_MAX_ITERATIONS {
                    return Err(Error::NotConverged {
                        iterations: QL_MAX_ITERATIONS,
                    });
                }
                let mut g = d[l];
                let mut p = (d[l + 1] - g) / (2.0 * e[l]);
                let mut r = p.hypot(1.0);
                if p < 0.0 {
                    r = -r;
                }
                d[l] = e[l] / (p + r);
                d[l + 1] = e[l] * (p + r);
                let dl1 = d[l + 1];
                let mut h = g - d[l];
                for x in d[l + 2..n].iter_mut() {
                    *x -= h;
                }
                f += h;

                p = d[m];
                let mut c = 1.0;
                let mut c2 = c;
                let mut c3 = c;
                let el1 = e[l + 1];
                let mut s = 0.0;
                let mut s2 = 0.0;
                for i in (l..m).rev() {
                    c3 = c2;
                    c2 = c;
                    s2 = s;
                    g = c * e[i];
                    h = c * p;
                    r = p.hypot(e[i]);
                    e[i + 1] = s * r;
                    s = e[i] / r;
                    c = p / r;
                    p = c * d[i] - s * g;
                    d[i + 1] = h + s * (c * g + s * d[i]);
                    if let Some(v) = v.as_deref_mut() {
                        let (left, right) = v.split_at_mut((i + 1) * n);
                        let col_i = &mut left[i * n..];
                        let col_next = &mut right[..n];
                        for (a, b) in col_i.iter_mut().zip(col_next.iter_mut()) {
                            let hk = *b;
                            *b = s * *a + c * hk;
                            *a = c * *a - s * hk;
                        }
                    }
                }
                p = -s * s2 * c3 * el1 * e[l] / dl1;
                e[l] = s * p;
                d[l] = c * p;
                if e[l].abs() <= eps * tst1 {
                    break;
                }
            }
        }
        d[l] += f;
        e[l] = 0.0;
    }
    Ok(())
}

/// Full symmetric eigendecomposition.
pub fn sym_eig(m: &SymMatrix) -> Result<EigDecomposition> {
    m.check_finite()?;
    m.check_order()?;
    let n = m.order();
    // Symmetric input: the row-major buffer is also the column-major one.
    let mut v = m.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n > 0 {
        tridiagonalize(n, &mut v, &mut d, &mut e, true);
        tridiagonal_ql(n, &mut d, &mut e, Some(&mut v))?;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d[a].total_cmp(&d[b]).then(a.cmp(&b)));
    let values: Vec<f64> = order.iter().map(|&j| d[j]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &j in &order {
        vectors.extend_from_slice(&v[j * n..(j + 1) * n]);
    }
    let mut out = EigDecomposition {
        values,
        vectors,
        residual: 0.0,
    };
    out.residual = (0..n)
        .map(|j| {
            let x = out.vector(j);
            let mx = m.mul_vec(x);
            mx.iter()
                .zip(x)
                .map(|(a, b)| (a - out.values[j] * b).powi(2))
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max);
    Ok(out)
}

/// Eigenvalues only, ascending. Skips all eigenvector work.
pub fn sym_eigvals(m: &SymMatrix) -> Result<Vec<f64>> {
    m.check_finite()?;
    m.check_order()?;
    let n = m.order();
    let mut v = m.data.clone();
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    if n > 0 {
        tridiagonalize(n, &mut v, &mut d, &mut e, false);
        tridiagonal_ql(n, &mut d, &mut e, None)?;
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// LU factorization with partial pivoting of a general square matrix (row-major).
struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
}

impl Lu {
    fn factor(n: usize, mut a: Vec<f64>, shift: f64) -> Result<Self> {
        let norm = a
            .iter()
            .fold(0.0f64, |acc, x| acc.max(x.abs()))
            .max(f64::MIN_POSITIVE);
        let tol = f64::EPSILON * n.max(1) as f64 * norm;
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pivot) =
                (k..n)
                    .map(|i| (i, a[i * n + k].abs()))
                    .fold(
                        (k, -1.0),
                        |best, cur| if cur.1 > best.1 { cur } else { best },
                    );
            if pivot <= tol {
                return Err(Error::Singular { shift, pivot });
            }
            if p != k {
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
            }
            let akk = a[k * n + k];
            for i in k + 1..n {
                let factor = a[i * n + k] / akk;
                a[i * n + k] = factor;
                if factor != 0.0 {
                    let (upper, lower) = a.split_at_mut(i * n);
                    let row_k = &upper[k * n + k + 1..k * n + n];
                    let row_i = &mut lower[k + 1..n];
                    for (x, y) in row_i.iter_mut().zip(row_k) {
                        *x -= factor * y;
                    }
                }
            }
        }
        Ok(Self { n, lu: a, perm })
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.lu[i * n + j] * x[j]).sum();
            x[i] = (x[i] - s) / self.lu[i * n + i];
        }
        x
    }
}

/// Schur complement `A − B·D⁻¹·C` of `m` onto the kept indices.
pub fn schur(m: &SymMatrix, keep: &[usize]) -> Result<SymMatrix> {
    schur_shifted(m, keep, 0.0)
}

/// Schur complement of `m − shift·I` onto the kept indices. The result is
/// indexed in the order of `keep`.
pub fn schur_shifted(m: &SymMatrix, keep: &[usize], shift: f64) -> Result<SymMatrix> {
    m.check_finite()?;
    let n = m.order();
    let mut kept = vec![false; n];
    for &k in keep {
        if k >= n {
            return Err(Error::input(format!(
                "kept index {k} out of range for order {n}"
            )));
        }
        if kept[k] {
            return Err(Error::input(format!("kept index {k} listed twice")));
        }
        kept[k] = true;
    }
    let drop: Vec<usize> = (0..n).filter(|&i| !kept[i]).collect();
    let shifted = m.shifted(shift);
    let mut out = shifted.submatrix(keep);
    if drop.is_empty() {
        return Ok(out);
    }
    let nd = drop.len();
    let mut dblock = Vec::with_capacity(nd * nd);
    for &i in &drop {
        dblock.extend(drop.iter().map(|&j| shifted.get(i, j)));
    }
    let lu = Lu::factor(nd, dblock, shift)?;
    // X = D⁻¹ C, one column per kept index.
    let columns: Vec<Vec<f64>> = keep
        .iter()
        .map(|&k| lu.solve(&drop.iter().map(|&i| shifted.get(i, k)).collect::<Vec<_>>()))
        .collect();
    for (a, &ka) in keep.iter().enumerate() {
        for (b, col) in columns.iter().enumerate().skip(a) {
            let correction: f64 = drop
                .iter()
                .zip(col)
                .map(|(&i, x)| shifted.get(ka, i) * x)
                .sum();
            let mirrored: f64 = drop
                .iter()
                .zip(&columns[a])
                .map(|(&i, x)| shifted.get(keep[b], i) * x)
                .sum();
            out.set(a, b, out.get(a, b) - 0.5 * (correction + mirrored));
        }
    }
    Ok(out)
}

/// Schur complement of a general (not necessarily symmetric) row-major matrix
/// minus `shift·I` onto its first `keep` indices.
pub fn schur_general(order: usize, data: &[f64], keep: usize, shift: f64) -> Result<Vec<f64>> {
    if data.len() != order * order || keep > order {
        return Err(Error::input("matrix shape does not match its order"));
    }
    let at = |i: usize, j: usize| data[i * order + j] - if i == j { shift } else { 0.0 };
    let nd = order - keep;
    let mut out: Vec<f64> = (0..keep * keep).map(|k| at(k / keep, k % keep)).collect();
    if nd == 0 {
        return Ok(out);
    }
    let dblock: Vec<f64> = (0..nd * nd)
        .map(|k| at(keep + k / nd, keep + k % nd))
        .collect();
    let lu = Lu::factor(nd, dblock, shift)?;
    for j in 0..keep {
        let col = lu.solve(&(0..nd).map(|i| at(keep + i, j)).collect::<Vec<_>>());
        for i in 0..keep {
            let correction: f64 = (0..nd).map(|k| at(i, keep + k) * col[k]).sum();
            out[i * keep + j] -= correction;
        }
    }
    Ok(out)
}

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    pub fn factor(m: &SymMatrix) -> Result<Self> {
        m.check_finite()?;
        let n = m.order();
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let s: f64 = l[j * n..j * n + j].iter().map(|x| x * x).sum();
            let pivot = m.get(j, j) - s;
            if pivot <= 0.0 {
                return Err(Error::domain(format!(
                    "matrix is not positive definite (pivot {pivot:e} at {j})"
                )));
            }
            let ljj = pivot.sqrt();
            l[j * n + j] = ljj;
            for i in j + 1..n {
                let dot: f64 = l[i * n..i * n + j]
                    .iter()
                    .zip(&l[j * n..j * n + j])
                    .map(|(a, b)| a * b)
                    .sum();
                l[i * n + j] = (m.get(i, j) - dot) / ljj;
            }
        }
        Ok(Self { n, l })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        assert_eq!(b.len(), n, "right-hand side length mismatch");
        let mut y = b.to_vec();
        for i in 0..n {
            let s: f64 = (0..i).map(|j| self.l[i * n + j] * y[j]).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| self.l[j * n + i] * y[j]).sum();
            y[i] = (y[i] - s) / self.l[i * n + i];
        }
        y
    }

    /// `solve` followed by `rounds` steps of iterative refinement against `m`,
    /// the matrix that was factored.
    pub fn solve_refined(&self, m: &SymMatrix, b: &[f64], rounds: usize) -> Vec<f64> {
        let mut x = self.solve(b);
        for _ in 0..rounds {
            let r: Vec<f64> = m
                .mul_vec(&x)
                .iter()
                .zip(b)
                .map(|(ax, bi)| bi - ax)
                .collect();
            for (xi, d) in x.iter_mut().zip(self.solve(&r)) {
                *xi += d;
            }
        }
        x
    }
}

fn weighting(mass: &[f64], n: usize) -> Result<Vec<f64>> {
    if mass.len() != n {
        return Err(Error::input(format!(
            "mass vector has length {}, matrix order {n}",
            mass.len()
        )));
    }
    if let Some((i, m)) = mass
        .iter()
        .enumerate()
        .find(|(_, m)| !(**m > 0.0) || !m.is_finite())
    {
        return Err(Error::input(format!(
            "mass at {i} must be positive, got {m}"
        )));
    }
    Ok(mass.iter().map(|m| 1.0 / m.sqrt()).collect())
}

fn weighted(l: &SymMatrix, w: &[f64]) -> SymMatrix {
    SymMatrix::from_fn(l.order(), |i, j| w[i] * l.get(i, j) * w[j])
}

/// Eigenproblem `L u = λ M u` for diagonal `M`, solved as `M^(-1/2) L M^(-1/2)`.
/// Eigenvectors are mapped back to `u = M^(-1/2) v`.
pub fn gen_eig(l: &SymMatrix, mass: &[f64]) -> Result<EigDecomposition> {
    let w = weighting(mass, l.order())?;
    let mut eig = sym_eig(&weighted(l, &w))?;
    let n = l.order();
    for col in eig.vectors.chunks_mut(n.max(1)) {
        for (x, wi) in col.iter_mut().zip(&w) {
            *x *= wi;
        }
    }
    Ok(eig)
}

pub fn gen_eigvals(l: &SymMatrix, mass: &[f64]) -> Result<Vec<f64>> {
    let w = weighting(mass, l.order())?;
    sym_eigvals(&weighted(l, &w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sym(n: usize, seed: u64) -> SymMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        SymMatrix::from_fn(n, |_, _| rng.gen_range(-1.0..1.0))
    }

    /// Cyclic Jacobi, used only as an independent reference.
    fn jacobi_eigvals(m: &SymMatrix) -> Vec<f64> {
        let n = m.order();
        let mut a = m.to_rows();
        for _ in 0..100 {
            let off: f64 = (0..n)
                .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| a[i][j] * a[i][j])
                .sum();
            if off < 1e-22 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    if a[p][q].abs() < 1e-300 {
                        continue;
                    }
                    let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    for k in 0..n {
                        let (akp, akq) = (a[k][p], a[k][q]);
                        a[k][p] = c * akp - s * akq;
                        a[k][q] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (a[p][k], a[q][k]);
                        a[p][k] = c * apk - s * aqk;
                        a[q][k] = s * apk + c * aqk;
                    }
                }
            }
        }
        let mut d: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
        d.sort_by(f64::total_cmp);
        d
    }

    #[test]
    fn two_by_two_walk_laplacian() {
        let q = 0.25;
        let m = SymMatrix::from_rows(&[vec![q, -q], vec![-q, q]]).unwrap();
        let eig = sym_eig(&m).unwrap();
        assert!(eig.values[0].abs() < 1e-15);
        assert!((eig.values[1] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_eigenvalues() {
        let eig = sym_eig(&SymMatrix::identity(5)).unwrap();
        assert!(eig.values.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn rejects_non_finite() {
        let mut m = SymMatrix::identity(3);
        m.set(0, 1, f64::NAN);
        assert!(matches!(sym_eig(&m), Err(Error::Input(_))));
        assert!(matches!(sym_eigvals(&m), Err(Error::Input(_))));
    }

    #[test]
    fn empty_and_scalar() {
        assert!(sym_eig(&SymMatrix::zeros(0)).unwrap().values.is_empty());
        let eig = sym_eig(&SymMatrix::from_diagonal(&[3.5])).unwrap();
        assert_eq!(eig.values, vec![3.5]);
        assert_eq!(eig.vector(0), &[1.0]);
    }

    #[test]
    fn matches_jacobi_reference() {
        for (n, seed) in [(4, 1), (9, 2), (17, 3), (30, 4)] {
            let m = random_sym(n, seed);
            let ours = sym_eigvals(&m).unwrap();
            let reference = jacobi_eigvals(&m);
            for (a, b) in ours.iter().zip(&reference) {
                assert!((a - b).abs() < 1e-11, "n={n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn residual_orthonormality_and_trace() {
        let n = 40;
        let m = random_sym(n, 7);
        let eig = sym_eig(&m).unwrap();
        let norm = m.max_abs();
        assert!(eig.residual <= 1e-10 * n as f64 * norm);
        for i in 0..n {
            for j in 0..n {
                let dot: f64 = eig
                    .vector(i)
                    .iter()
                    .zip(eig.vector(j))
                    .map(|(a, b)| a * b)
                    .sum();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((dot - expected).abs() < 1e-10 * n as f64);
            }
        }
        let sum: f64 = eig.values.iter().sum();
        assert!((sum - m.trace()).abs() < 1e-9 * n as f64 * norm);
        assert!(eig.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn values_only_path_agrees() {
        let m = random_sym(25, 11);
        let full = sym_eig(&m).unwrap().values;
        let fast = sym_eigvals(&m).unwrap();
        for (a, b) in full.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn repeated_calls_are_bitwise_identical() {
        let m = random_sym(20, 5);
        let a = sym_eig(&m).unwrap();
        let b = sym_eig(&m).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.vectors, b.vectors);
    }

    #[test]
    fn schur_keep_all_and_block_diagonal() {
        let m = random_sym(6, 3);
        let keep: Vec<usize> = (0..6).collect();
        assert_eq!(schur(&m, &keep).unwrap(), m);

        let mut b = SymMatrix::zeros(4);
        b.set(0, 0, 2.0);
        b.set(0, 1, 0.5);
        b.set(1, 1, 3.0);
        b.set(2, 2, 5.0);
        b.set(2, 3, 1.0);
        b.set(3, 3, 4.0);
        let s = schur(&b, &[0, 1]).unwrap();
        assert_eq!(s, b.submatrix(&[0, 1]));
    }

    #[test]
    fn schur_series_reduction() {
        // two unit resistors in series: path 0 - 2 - 1
        let mut l = SymMatrix::zeros(3);
        for (u, v) in [(0, 2), (2, 1)] {
            l.add(u, u, 1.0);
            l.add(v, v, 1.0);
            l.add(u, v, -1.0);
        }
        let s = schur(&l, &[0, 1]).unwrap();
        assert!((s.get(0, 0) - 0.5).abs() < 1e-15);
        assert!((s.get(0, 1) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn schur_reports_singular_shift() {
        let m = SymMatrix::from_diagonal(&[1.0, 2.0, 3.0]);
        let err = schur_shifted(&m, &[0], 2.0).unwrap_err();
        assert!(matches!(err, Error::Singular { shift, .. } if shift == 2.0));
    }

    #[test]
    fn schur_is_transitive() {
        let mut m = random_sym(12, 9);
        for i in 0..12 {
            m.add(i, i, 12.0);
        }
        let direct = schur(&m, &[0, 1, 2]).unwrap();
        let middle = schur(&m, &[0, 1, 2, 3, 4, 5, 6]).unwrap();
        let two_step = schur(&middle, &[0, 1, 2]).unwrap();
        assert!(direct.max_abs_diff(&two_step) < 1e-9);
    }

    #[test]
    fn cholesky_solves() {
        let mut m = random_sym(10, 21);
        for i in 0..10 {
            m.add(i, i, 10.0);
        }
        let b: Vec<f64> = (0..10).map(|i| i as f64 - 3.0).collect();
        let x = Cholesky::factor(&m).unwrap().solve(&b);
        let mx = m.mul_vec(&x);
        for (a, b) in mx.iter().zip(&b) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!(Cholesky::factor(&SymMatrix::from_diagonal(&[1.0, -1.0])).is_err());
    }

    #[test]
    fn generalized_two_by_two() {
        let l = SymMatrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0]]).unwrap();
        let eig = gen_eig(&l, &[1.0, 2.0]).unwrap();
        assert!(eig.values[0].abs() < 1e-15);
        assert!((eig.values[1] - 1.5).abs() < 1e-14);
        // original coordinates: L u = λ M u
        let u = eig.vector(1);
        let lu = l.mul_vec(u);
        assert!((lu[0] - 1.5 * u[0]).abs() < 1e-14);
        assert!((lu[1] - 1.5 * 2.0 * u[1]).abs() < 1e-14);
        assert!(gen_eig(&l, &[1.0, 0.0]).is_err());
        assert!(gen_eig(&l, &[1.0]).is_err());
    }

    #[test]
    fn unit_masses_match_plain_solver() {
        let m = random_sym(8, 13);
        let a = gen_eigvals(&m, &[1.0; 8]).unwrap();
        let b = sym_eigvals(&m).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn capacity_limit() {
        let big = SymMatrix {
            n: MAX_ORDER + 1,
            data: Vec::new(),
        };
        assert!(matches!(big.check_order(), Err(Error::Capacity { .. })));
    }

    proptest! {
        #[test]
        fn mass_scaling_scales_eigenvalues(seed in 0u64..1000, c in 0.1f64..10.0) {
            let m = random_sym(6, seed);
            let l = SymMatrix::from_fn(6, |i, j| m.get(i, j) + if i == j { 6.0 } else { 0.0 });
            let mass: Vec<f64> = (0..6).map(|i| 1.0 + i as f64 * 0.3).collect();
            let scaled: Vec<f64> = mass.iter().map(|x| x * c).collect();
            let a = gen_eigvals(&l, &mass).unwrap();
            let b = gen_eigvals(&l, &scaled).unwrap();
            for (x, y) in a.iter().zip(&b) {
                prop_assert!((x / c - y).abs() < 1e-10 * x.abs().max(1.0));
            }
        }

        #[test]
        fn eigen_residual_bound(seed in 0u64..1000, n in 1usize..24) {
            let m = random_sym(n, seed);
            let eig = sym_eig(&m).unwrap();
            prop_assert!(eig.residual <= 1e-10 * n as f64 * m.max_abs().max(1e-300));
        }
    }
}
