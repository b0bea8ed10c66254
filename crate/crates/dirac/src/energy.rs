use num_traits::Zero;
use serde::Serialize;
use superdirac_core::algebra::{LieSuperalgebra, Weight};
use superdirac_core::linalg::Matrix;
use superdirac_core::scalar::fmt_vec;
use superdirac_core::{Error, Result, Q};

/// Expansion of an isotropic weight in a family of mutually orthogonal odd roots.
#[derive(Clone, Debug, Serialize)]
pub struct IsotropicExpansion {
    pub rank: usize,
    pub roots: Vec<String>,
    pub coefficients: Vec<String>,
}

/// Smallest number of mutually orthogonal odd roots whose span contains `eta`.
pub fn energy_rank(alg: &LieSuperalgebra, eta: &[Q]) -> Result<IsotropicExpansion> {
    if !alg.wnorm(eta).is_zero() {
        return Err(Error::NotIsotropic(format!("B(η, η) ≠ 0 for η = {}", fmt_vec(eta))));
    }
    let target = alg.canonical(eta);
    if target.iter().all(|x| x.is_zero()) {
        return Ok(IsotropicExpansion {
            rank: 0,
            roots: Vec::new(),
            coefficients: Vec::new(),
        });
    }
    let odd: Vec<usize> = alg
        .positive_roots()
        .into_iter()
        .filter(|&a| alg.parity(a) == 1)
        .collect();
    let k = odd.len().min(20);
    let mut best: Option<(usize, Vec<usize>, Vec<Q>)> = None;
    for mask in 1u32..(1u32 << k) {
        let set: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| odd[b]).collect();
        if best.as_ref().is_some_and(|b| set.len() >= b.0) || !alg.is_orthogonal_family(&set) {
            continue;
        }
        let cols: Vec<Weight> = set.iter().map(|&a| alg.canonical(&alg.basis[a].weight)).collect();
        let m = Matrix::from_cols(&cols, target.len());
        if let Some(c) = m.solve(&target) {
            if c.iter().all(|x| !x.is_zero()) {
                best = Some((set.len(), set, c));
            }
        }
    }
    let (rank, set, coeffs) = best.ok_or_else(|| {
        Error::NotIsotropic(format!(
            "{} is not in the span of mutually orthogonal odd roots",
            fmt_vec(eta)
        ))
    })?;
    Ok(IsotropicExpansion {
        rank,
        roots: set.iter().map(|&a| alg.label(a).to_string()).collect(),
        coefficients: coeffs.iter().map(superdirac_core::scalar::fmt_q).collect(),
    })
}

/// Whether `eta` lies in `X_μ`: isotropic, in the span of orthogonal odd roots, and orthogonal to `μ`.
pub fn in_x_mu(alg: &LieSuperalgebra, mu: &[Q], eta: &[Q]) -> bool {
    energy_rank(alg, eta).is_ok() && alg.wform(mu, eta).is_zero()
}
