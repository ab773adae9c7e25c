//! Desk-scale spectral checks: signed Laplacians, a dense Jacobi
//! eigensolver, isospectrality of balanced re-signings, and the
//! 0-eigenvector/Harary-bipartition correspondence.
//!
//! This module exists to verify the theory on small graphs, not to cluster
//! with it, so the eigensolver is a deliberately simple cyclic Jacobi
//! iteration with a hard size cap.

use crate::balance::{is_balanced, switched_graph, SwitchingFunction};
use crate::error::{Error, Result};
use crate::graph::{connected_components, SignedGraph, VertexId};

/// Hard cap for dense spectral work.
pub const LAPLACIAN_VERTEX_CAP: usize = 2048;

const SYMMETRY_TOL: f64 = 1e-12;
const OFFDIAG_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;
const SPECTRUM_TOL: f64 = 1e-8;
const ZERO_EIG_TOL: f64 = 1e-6;

/// Dense symmetric matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseSymMatrix {
    pub fn zero(n: usize) -> DenseSymMatrix {
        DenseSymMatrix { n, data: vec![0.0; n * n] }
    }

    pub fn from_rows(rows: &[&[f64]]) -> Result<DenseSymMatrix> {
        let n = rows.len();
        let mut m = DenseSymMatrix::zero(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidArgument("ragged rows".into()));
            }
            for (j, &x) in row.iter().enumerate() {
                m.set(i, j, x);
            }
        }
        m.check_symmetric()?;
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: f64) {
        self.data[i * self.n + j] = x;
    }

    fn check_symmetric(&self) -> Result<()> {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                if (self.get(i, j) - self.get(j, i)).abs() > SYMMETRY_TOL {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        Ok(())
    }
}

/// Eigenvalues in ascending order with the matching orthonormal columns.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    pub values: Vec<f64>,
    /// `vectors[k]` is the eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

/// `L = D - A` where `A(u,v)` is the edge sign (after the optional switching)
/// and `D(v,v)` the unsigned degree.
pub fn signed_laplacian(
    g: &SignedGraph,
    sigma: Option<&SwitchingFunction>,
) -> Result<DenseSymMatrix> {
    let n = g.vertex_count();
    if n > LAPLACIAN_VERTEX_CAP {
        return Err(Error::SizeCap { op: "signed_laplacian", n, cap: LAPLACIAN_VERTEX_CAP });
    }
    let mut m = DenseSymMatrix::zero(n);
    for v in 0..n {
        m.set(v, v, g.degree(v as VertexId) as f64);
    }
    for e in g.edges() {
        let sign = match sigma {
            Some(s) => s.get(e.u) * e.sign * s.get(e.v),
            None => e.sign,
        };
        let a = f64::from(sign.value());
        m.set(e.u as usize, e.v as usize, -a);
        m.set(e.v as usize, e.u as usize, -a);
    }
    Ok(m)
}

/// Cyclic Jacobi rotations. Converged when the largest off-diagonal entry
/// drops below 1e-12; fails after 100 sweeps.
pub fn eigen_symmetric(m: &DenseSymMatrix) -> Result<EigenSystem> {
    m.check_symmetric()?;
    let n = m.n();
    let mut a = m.clone();
    // v holds the accumulated rotations, columns are eigenvectors.
    let mut v = DenseSymMatrix::zero(n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }

    let mut converged = false;
    for _sweep in 0..MAX_SWEEPS {
        let mut off_max = 0.0f64;
        for p in 0..n {
            for q in (p + 1)..n {
                off_max = off_max.max(a.get(p, q).abs());
            }
        }
        if off_max < OFFDIAG_TOL {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() < OFFDIAG_TOL {
                    continue;
                }
                let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                let app = a.get(p, p);
                let aqq = a.get(q, q);
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);
                a.set(q, p, 0.0);
                for r in 0..n {
                    if r != p && r != q {
                        let arp = a.get(r, p);
                        let arq = a.get(r, q);
                        a.set(r, p, c * arp - s * arq);
                        a.set(p, r, a.get(r, p));
                        a.set(r, q, s * arp + c * arq);
                        a.set(q, r, a.get(r, q));
                    }
                }
                for r in 0..n {
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, c * vrp - s * vrq);
                    v.set(r, q, s * vrp + c * vrq);
                }
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence(MAX_SWEEPS));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a.get(i, i).partial_cmp(&a.get(j, j)).unwrap());
    let values: Vec<f64> = order.iter().map(|&i| a.get(i, i)).collect();
    let vectors: Vec<Vec<f64>> = order
        .iter()
        .map(|&col| {
            let mut vec: Vec<f64> = (0..n).map(|r| v.get(r, col)).collect();
            // Sign convention: first entry of noticeable magnitude positive.
            if let Some(&lead) = vec.iter().find(|x| x.abs() > 1e-9) {
                if lead < 0.0 {
                    vec.iter_mut().for_each(|x| *x = -*x);
                }
            }
            vec
        })
        .collect();
    Ok(EigenSystem { values, vectors })
}

/// Spectrum of the signed Laplacian of `g` re-signed by `sigma`.
pub fn switched_spectrum(g: &SignedGraph, sigma: &SwitchingFunction) -> Result<Vec<f64>> {
    Ok(eigen_symmetric(&signed_laplacian(g, Some(sigma))?)?.values)
}

/// Checks that the two re-signings of `g` have identical Laplacian spectra.
/// Both re-signings must be balanced; an unbalanced input is an error since
/// the theorem says nothing about it.
pub fn verify_isospectral(
    g: &SignedGraph,
    sigma1: &SwitchingFunction,
    sigma2: &SwitchingFunction,
) -> Result<bool> {
    for sigma in [sigma1, sigma2] {
        if is_balanced(&switched_graph(g, sigma)).is_none() {
            return Err(Error::Unbalanced);
        }
    }
    let a = switched_spectrum(g, sigma1)?;
    let b = switched_spectrum(g, sigma2)?;
    Ok(a.iter().zip(&b).all(|(x, y)| (x - y).abs() <= SPECTRUM_TOL))
}

/// Reads the Harary bipartition off the 0-eigenvector of a connected
/// balanced graph. The eigenvector, normalized to unit max-entry, has all
/// entries at `+1` or `-1`; vertices split by entry sign.
pub fn zero_eigenvector_bipartition(
    g: &SignedGraph,
) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
    if connected_components(g, |_, _, _| true).len() != 1 {
        return Err(Error::Disconnected);
    }
    let eig = eigen_symmetric(&signed_laplacian(g, None)?)?;
    let smallest = eig.values[0];
    if smallest.abs() > ZERO_EIG_TOL {
        return Err(Error::Unbalanced);
    }
    let raw = &eig.vectors[0];
    let max_abs = raw.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scaled: Vec<f64> = raw.iter().map(|x| x / max_abs).collect();
    if scaled.iter().any(|x| (x.abs() - 1.0).abs() > ZERO_EIG_TOL) {
        return Err(Error::InvalidArgument(
            "0-eigenvector entries are not all unit magnitude".into(),
        ));
    }
    // Global sign: first entry positive.
    let flip = scaled[0] < 0.0;
    let mut u = Vec::new();
    let mut w = Vec::new();
    for (v, &x) in scaled.iter().enumerate() {
        let positive = if flip { x < 0.0 } else { x > 0.0 };
        if positive {
            u.push(v as VertexId);
        } else {
            w.push(v as VertexId);
        }
    }
    Ok((u, w))
}
