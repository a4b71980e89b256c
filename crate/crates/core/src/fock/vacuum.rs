//! Vacuum multiplicity and explicit intertwiners between canonical
//! representations at finite truncation.
//!
//! For a representation of `m` canonical pairs, `a_i = (y_i + i q_i) / sqrt(2 sigma)`
//! and `H = sum_i a_i^dagger a_i`. The near-null space of `H` is the vacuum space;
//! its dimension is the number of copies of the irreducible representation that
//! the generators contain. When it is one-dimensional the orbit of the vacuum
//! under the raising operators gives a number basis, and matching two such bases
//! vector for vector is the unitary that intertwines the representations.

use std::collections::HashMap;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;

use super::linalg::{max_modulus, CMatrix, CVector, I};
use super::operator::{Layout, OperatorMatrix};
use super::rep::{FockRep, RepTarget};
use crate::error::{Error, Result};

/// Default vacuum threshold on eigenvalues of `H` (dimensionless).
pub const DEFAULT_VACUUM_TOL: f64 = 0.1;

/// Residual norm below which a new number-basis vector counts as lost.
pub const BREAKDOWN_NORM: f64 = 1e-8;

#[derive(Debug, Clone)]
pub struct VacuumSpace {
    /// Orthonormal columns spanning the near-null space of `H`.
    pub vectors: CMatrix,
    pub count: usize,
    /// Lowest eigenvalues of `H`, ascending (at most `count + 4` of them).
    pub low_spectrum: Vec<f64>,
}

fn check_sigma(sigma: f64) -> Result<()> {
    if sigma > 0.0 && sigma.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidSigma(sigma))
    }
}

/// `a_i` and `a_i^dagger` for each mode.
fn ladder_pairs(rep: &FockRep, sigma: f64) -> Vec<(OperatorMatrix, OperatorMatrix)> {
    let m = rep.modes();
    let c = Complex64::from(1.0 / (2.0 * sigma).sqrt());
    (0..m)
        .map(|i| {
            let y = rep.generator(i);
            let q = rep.generator(i + m);
            let a = y.add(&q.scale(I)).scale(c);
            let adag = y.sub(&q.scale(I)).scale(c);
            (a, adag)
        })
        .collect()
}

pub fn vacuum_space(rep: &FockRep, sigma: f64, tol: f64) -> Result<VacuumSpace> {
    check_sigma(sigma)?;
    let layout = rep.layout();
    let h = ladder_pairs(rep, sigma)
        .iter()
        .fold(OperatorMatrix::zeros(layout), |acc, (a, adag)| {
            acc.add(&adag.matmul(a))
        })
        .to_dense();
    let eig = SymmetricEigen::new(h);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[i].total_cmp(&eig.eigenvalues[j]));
    let kept: Vec<usize> = order
        .iter()
        .copied()
        .take_while(|&i| eig.eigenvalues[i] < tol)
        .collect();
    let count = kept.len();
    let vectors = CMatrix::from_fn(eig.eigenvectors.nrows(), count, |r, c| {
        eig.eigenvectors[(r, kept[c])]
    });
    let low_spectrum = order
        .iter()
        .take(count + 4)
        .map(|&i| eig.eigenvalues[i])
        .collect();
    Ok(VacuumSpace {
        vectors,
        count,
        low_spectrum,
    })
}

/// Occupation tuples of `modes` modes in graded order (total number first, then
/// lexicographically descending), the first `count` of them.
fn occupations(modes: usize, count: usize) -> Vec<Vec<usize>> {
    fn fill(prefix: &mut Vec<usize>, modes: usize, left: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == modes {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=left).rev() {
            prefix.push(k);
            fill(prefix, modes, left - k, out);
            prefix.pop();
        }
    }
    let mut out = Vec::with_capacity(count);
    let mut total = 0;
    while out.len() < count {
        fill(&mut Vec::new(), modes, total, &mut out);
        total += 1;
    }
    out.truncate(count);
    out
}

/// Orthonormal number basis `|n_1 .. n_m>` generated from `vacuum` by the
/// raising operators, each new vector orthogonalized twice against all earlier
/// ones. Columns follow [`occupations`] order.
pub fn number_basis(rep: &FockRep, sigma: f64, vacuum: &CVector, count: usize) -> Result<CMatrix> {
    check_sigma(sigma)?;
    let raising: Vec<OperatorMatrix> = ladder_pairs(rep, sigma)
        .into_iter()
        .map(|(_, d)| d)
        .collect();
    let states = occupations(rep.modes(), count);
    let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
    let mut basis: Vec<CVector> = Vec::with_capacity(count);

    for (pos, occ) in states.iter().enumerate() {
        let mut v = if pos == 0 {
            vacuum.clone()
        } else {
            let mode = occ.iter().position(|&k| k > 0).expect("non-vacuum state");
            let mut prev = occ.clone();
            prev[mode] -= 1;
            raising[mode].apply(&basis[index[&prev]])
        };
        for _ in 0..2 {
            for b in &basis {
                let c = b.dotc(&v);
                v -= b * c;
            }
        }
        let norm = v.norm();
        if norm < BREAKDOWN_NORM {
            return Err(Error::BasisBreakdown { index: pos, norm });
        }
        v /= Complex64::from(norm);
        index.insert(occ.clone(), pos);
        basis.push(v);
    }
    Ok(CMatrix::from_columns(&basis))
}

#[derive(Debug, Clone)]
pub struct Intertwiner {
    /// `E_B E_A^dagger`: maps the compared block of A onto that of B.
    pub w: CMatrix,
    pub basis_a: CMatrix,
    pub basis_b: CMatrix,
    /// `max_i || E_B^dagger G_i^B E_B - E_A^dagger G_i^A E_A || / sigma`, which equals
    /// `|| P_B (W G_i^A - G_i^B W) P_A || / sigma` for the block projectors `P_A`, `P_B`.
    pub residual: f64,
    /// `max |E_A^dagger W^dagger W E_A - 1|`.
    pub unitarity_defect: f64,
}

fn unique_vacuum(rep: &FockRep, sigma: f64, tol: f64) -> Result<CVector> {
    let vac = vacuum_space(rep, sigma, tol)?;
    if vac.count != 1 {
        return Err(Error::DegenerateVacuum { count: vac.count });
    }
    Ok(vac.vectors.column(0).into_owned())
}

fn compress(op: &OperatorMatrix, basis: &CMatrix) -> CMatrix {
    let cols: Vec<CVector> = basis
        .column_iter()
        .map(|c| op.apply(&c.into_owned()))
        .collect();
    basis.adjoint() * CMatrix::from_columns(&cols)
}

/// Builds the intertwiner between two canonical representations on their first
/// `n_interior` number states.
pub fn intertwiner(
    rep_a: &FockRep,
    rep_b: &FockRep,
    sigma: f64,
    n_interior: usize,
    vacuum_tol: f64,
) -> Result<Intertwiner> {
    check_sigma(sigma)?;
    if rep_a.generators().len() != rep_b.generators().len() {
        return Err(Error::DimensionMismatch {
            left: rep_a.generators().len(),
            right: rep_b.generators().len(),
        });
    }
    let basis_a = number_basis(
        rep_a,
        sigma,
        &unique_vacuum(rep_a, sigma, vacuum_tol)?,
        n_interior,
    )?;
    let basis_b = number_basis(
        rep_b,
        sigma,
        &unique_vacuum(rep_b, sigma, vacuum_tol)?,
        n_interior,
    )?;

    let residual = rep_a
        .generators()
        .iter()
        .zip(rep_b.generators())
        .map(|(ga, gb)| {
            let diff = compress(gb, &basis_b) - compress(ga, &basis_a);
            super::linalg::dense_spectral_norm(&diff) / sigma
        })
        .fold(0.0, f64::max);

    let w = &basis_b * basis_a.adjoint();
    let block = basis_a.adjoint() * w.adjoint() * &w * &basis_a;
    let unitarity_defect = max_modulus(&(block - CMatrix::identity(n_interior, n_interior)));

    Ok(Intertwiner {
        w,
        basis_a,
        basis_b,
        residual,
        unitarity_defect,
    })
}

/// `T G T^dagger` for every generator, as dense matrices.
pub fn conjugate_rep(rep: &FockRep, t: &CMatrix) -> Result<FockRep> {
    if t.nrows() != rep.dim() || !t.is_square() {
        return Err(Error::DimensionMismatch {
            left: t.nrows(),
            right: rep.dim(),
        });
    }
    let layout: Layout = rep.layout();
    let tdag = t.adjoint();
    let gens = rep
        .generators()
        .iter()
        .map(|g| OperatorMatrix::from_dense(t * g.to_dense() * &tdag, layout))
        .collect();
    let target: RepTarget = rep.target();
    Ok(FockRep::new(gens, target)?.with_margin(rep.interior_margin()))
}
