use crate::space::{sparse_add, sparse_mul, Block, TensorOp, TensorSpace};
use num_traits::{One, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use superdirac_core::algebra::{CheckResult, LieSuperalgebra, Weight};
use superdirac_core::fock::FockSpace;
use superdirac_core::linalg::Matrix;
use superdirac_core::module::{SparseMat, WeightModule};
use superdirac_core::scalar::{fmt_vec, q};
use superdirac_core::{Error, Result, Q};

/// Relative cubic Dirac operator `D = Σ_{a∈P} e^a ⊗ e_a + 1 ⊗ q(φ_P)` on `M ⊗ M̄(P)`,
/// for a subalgebra `l ⊇ h` with orthogonal complement `P`.
#[derive(Clone, Debug)]
pub struct DiracOperator {
    pub alg: LieSuperalgebra,
    pub l: Vec<usize>,
    pub p: Vec<usize>,
    pub space: TensorSpace,
    pub d: TensorOp,
    /// `Σ_a ρ(e^a) ρ(e_a)` over a basis of the whole algebra.
    pub casimir: SparseMat,
    /// `(str_g Ω_g - str_l Ω_l) / 24`.
    pub kappa: Q,
    l_duals: Vec<Vec<Q>>,
    j_down: Vec<TensorOp>,
    j_up: Vec<TensorOp>,
}

/// Summary of a verification run over a set of blocks.
#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub name: String,
    pub blocks_checked: usize,
    pub passed: bool,
    pub detail: Option<String>,
}

impl Verification {
    fn from_check(name: &str, blocks: usize, failure: Option<String>) -> Self {
        Verification {
            name: name.to_string(),
            blocks_checked: blocks,
            passed: failure.is_none(),
            detail: failure,
        }
    }

    pub fn as_check(&self) -> CheckResult {
        CheckResult::new(&self.name, self.detail.clone())
    }
}

/// Weight of a homogeneous element, or `None` if its support mixes weights.
pub fn element_weight(alg: &LieSuperalgebra, x: &[Q]) -> Option<Weight> {
    let mut w: Option<Weight> = None;
    for (a, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let wa = alg.basis[a].weight.clone();
        match &w {
            None => w = Some(wa),
            Some(v) if *v != wa => return None,
            _ => {}
        }
    }
    Some(w.unwrap_or_else(|| vec![Q::zero(); alg.rank_n()]))
}

/// Parity of a homogeneous element, or `None` if its support mixes parities.
pub fn element_parity(alg: &LieSuperalgebra, x: &[Q]) -> Option<u8> {
    let ps: BTreeSet<u8> = x
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(a, _)| alg.parity(a))
        .collect();
    match ps.len() {
        0 => Some(0),
        1 => ps.into_iter().next(),
        _ => None,
    }
}

/// Splits an element into weight-homogeneous components.
pub fn weight_components(alg: &LieSuperalgebra, x: &[Q]) -> Vec<Vec<Q>> {
    let mut groups: std::collections::BTreeMap<Weight, Vec<Q>> = std::collections::BTreeMap::new();
    for (a, c) in x.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let e = groups
            .entry(alg.basis[a].weight.clone())
            .or_insert_with(|| vec![Q::zero(); alg.dim()]);
        e[a] = c.clone();
    }
    groups.into_values().collect()
}

/// `Σ_a ρ(e^a) ρ(e_a)` over the span of `idx`.
pub fn casimir_on(alg: &LieSuperalgebra, module: &WeightModule, idx: &[usize]) -> Result<SparseMat> {
    let duals = alg.dual_basis(idx)?;
    let mut acc = SparseMat::zeros(module.dim(), module.dim());
    for (x, &a) in idx.iter().enumerate() {
        let up = module.action(&duals[x]);
        let down = &module.actions[a];
        acc = sparse_add(&acc, &sparse_mul(&up, down));
    }
    Ok(acc)
}

impl DiracOperator {
    pub fn new(alg: &LieSuperalgebra, module: &WeightModule, l: &[usize]) -> Result<Self> {
        let mut l: Vec<usize> = l.to_vec();
        l.sort_unstable();
        l.dedup();
        if let Some(&h) = alg.cartan.iter().find(|h| !l.contains(h)) {
            return Err(Error::NotInSubalgebra(format!(
                "l must contain the Cartan subalgebra; {} is missing",
                alg.label(h)
            )));
        }
        if !alg.is_subalgebra(&l) {
            return Err(Error::NotInSubalgebra(
                "the span of l is not closed under the bracket".into(),
            ));
        }
        let p = alg.complement(&l);
        let l_duals = alg
            .dual_basis(&l)
            .map_err(|e| Error::DegenerateSubspace(format!("l: {}", e)))?;
        if !p.is_empty() {
            alg.dual_basis(&p)
                .map_err(|e| Error::DegenerateSubspace(format!("complement of l: {}", e)))?;
        }
        for &y in &l {
            if !alg.ad_preserves(&alg.unit(y), &p) {
                return Err(Error::SubspaceNotStable(format!(
                    "ad({}) does not preserve the complement of l",
                    alg.label(y)
                )));
            }
        }
        let fock = FockSpace::new(alg, &p)?;
        let rank = alg.rank_n();
        let mut d = TensorOp::zero(vec![Q::zero(); rank]);
        if !p.is_empty() {
            let duals = alg.dual_basis(&p)?;
            for (x, &a) in p.iter().enumerate() {
                let pos = fock.cw.position(a).expect("generator of P");
                let term = TensorOp {
                    terms: vec![crate::space::Term {
                        module: Some(module.action(&duals[x])),
                        module_parity: alg.parity(a),
                        cw: Some(fock.cw.gen(pos)),
                        cw_parity: alg.parity(a),
                        coeff: Q::one(),
                    }],
                    shift: vec![Q::zero(); rank],
                    twist: false,
                };
                d = d.plus(&term);
            }
            let phi = fock.cw.cubic_term(alg)?;
            if !phi.is_zero() {
                d = d.plus(&TensorOp::cw_only(phi, 0, vec![Q::zero(); rank]));
            }
        }
        let casimir = casimir_on(alg, module, &alg.all_indices())?;
        let kappa = (alg.casimir_supertrace(&alg.all_indices())? - alg.casimir_supertrace(&l)?) / q(24);
        let mut op = DiracOperator {
            alg: alg.clone(),
            l,
            p,
            space: TensorSpace::new(module.clone(), fock),
            d,
            casimir,
            kappa,
            l_duals,
            j_down: Vec::new(),
            j_up: Vec::new(),
        };
        op.j_down = op.l.iter().map(|&a| op.j(&op.alg.unit(a))).collect::<Result<_>>()?;
        op.j_up = op.l_duals.iter().map(|x| op.j(x)).collect::<Result<_>>()?;
        Ok(op)
    }

    pub fn rank(&self) -> usize {
        self.alg.rank_n()
    }

    /// Diagonal embedding `J(x) = ρ(x) ⊗ 1 + 1 ⊗ ν_*(x)` of a homogeneous element of `l`.
    pub fn j(&self, x: &[Q]) -> Result<TensorOp> {
        let lset: BTreeSet<usize> = self.l.iter().copied().collect();
        if let Some((a, _)) = x.iter().enumerate().find(|(a, c)| !c.is_zero() && !lset.contains(a)) {
            return Err(Error::NotInSubalgebra(format!("{} is not in l", self.alg.label(a))));
        }
        let shift = element_weight(&self.alg, x)
            .ok_or_else(|| Error::SchemaError("element is not weight-homogeneous".into()))?;
        let parity = element_parity(&self.alg, x)
            .ok_or_else(|| Error::SchemaError("element is not parity-homogeneous".into()))?;
        let mut op = TensorOp::module_only(self.space.module.action(x), parity, shift.clone());
        if !self.p.is_empty() {
            let nu = self.space.fock.cw.nu_star(&self.alg, x)?;
            if !nu.is_zero() {
                op = op.plus(&TensorOp::cw_only(nu, parity, shift));
            }
        }
        Ok(op)
    }

    /// `J(e_a)` for a basis element of `l`.
    pub fn j_basis(&self, a: usize) -> Result<TensorOp> {
        match self.l.iter().position(|&b| b == a) {
            Some(k) => Ok(self.j_down[k].clone()),
            None => self.j(&self.alg.unit(a)),
        }
    }

    pub fn d_matrix(&self, b: &Block) -> Result<Matrix> {
        self.space.matrix(&self.d, b, b)
    }

    pub fn d_squared(&self, b: &Block) -> Result<Matrix> {
        let d = self.d_matrix(b)?;
        Ok(d.mul(&d))
    }

    /// `Ω_M ⊗ 1 - Σ_{b∈l} J(e^b) J(e_b) + κ` on a block.
    pub fn square_rhs(&self, b: &Block) -> Result<Matrix> {
        let om = TensorOp::module_only(self.casimir.clone(), 0, vec![Q::zero(); self.rank()]);
        let mut acc = self.space.matrix(&om, b, b)?.add_scalar(&self.kappa);
        for (up, down) in self.j_up.iter().zip(&self.j_down) {
            let (m, dst) = self.space.compose(&[up, down], b)?;
            if dst.weight != b.weight {
                return Err(Error::VerificationFailure("dual pair does not preserve weight".into()));
            }
            acc = acc.sub(&m);
        }
        Ok(acc)
    }

    /// Checks the square formula on the blocks of the given weights.
    pub fn verify_square(&self, weights: &[Weight]) -> Result<Verification> {
        let mut n = 0;
        for w in weights {
            let b = self.space.block(w);
            if b.dim() == 0 {
                continue;
            }
            n += 1;
            let lhs = self.d_squared(&b)?;
            let rhs = self.square_rhs(&b)?;
            if lhs != rhs {
                return Ok(Verification::from_check(
                    "dirac-square",
                    n,
                    Some(format!(
                        "D² differs from the Casimir formula on the block {}",
                        fmt_vec(w)
                    )),
                ));
            }
        }
        Ok(Verification::from_check("dirac-square", n, None))
    }

    /// Checks that `D` commutes with `J(y)` for every basis element `y` of `l`.
    pub fn verify_equivariance(&self, weights: &[Weight]) -> Result<Verification> {
        let mut n = 0;
        for w in weights {
            let b = self.space.block(w);
            if b.dim() == 0 {
                continue;
            }
            n += 1;
            for (&y, jy) in self.l.iter().zip(&self.j_down) {
                let (dj, _) = self.space.compose(&[&self.d, jy], &b)?;
                let (jd, _) = self.space.compose(&[jy, &self.d], &b)?;
                if dj != jd {
                    return Ok(Verification::from_check(
                        "l-equivariance",
                        n,
                        Some(format!(
                            "D and J({}) do not commute on {}",
                            self.alg.label(y),
                            fmt_vec(w)
                        )),
                    ));
                }
            }
        }
        Ok(Verification::from_check("l-equivariance", n, None))
    }

    /// Checks `[D, [D, c]] = 0` for `c = J(y)` and for `c = Ω ⊗ 1`, both in the commutant of `l`.
    pub fn verify_differential(&self, weights: &[Weight]) -> Result<Verification> {
        let om = TensorOp::module_only(self.casimir.clone(), 0, vec![Q::zero(); self.rank()]);
        let mut tests: Vec<TensorOp> = vec![om];
        tests.extend(self.j_down.iter().take(4).cloned());
        let mut n = 0;
        for w in weights {
            let b = self.space.block(w);
            if b.dim() == 0 {
                continue;
            }
            n += 1;
            for c in &tests {
                let (ddc, _) = self.space.compose(&[&self.d, &self.d, c], &b)?;
                let (cdd, _) = self.space.compose(&[c, &self.d, &self.d], &b)?;
                if ddc != cdd {
                    return Ok(Verification::from_check(
                        "differential-squares-to-zero",
                        n,
                        Some(format!("[D,[D,c]] is nonzero on {}", fmt_vec(w))),
                    ));
                }
            }
        }
        Ok(Verification::from_check("differential-squares-to-zero", n, None))
    }

    /// Whether the module Casimir acts by a scalar, and its value.
    pub fn casimir_scalar(&self) -> Option<Q> {
        crate::space::sparse_scalar(&self.casimir)
    }

    /// Twisted diagonal embeddings `J(x_i) K` of the weight components of `x`.
    pub fn j_twisted_components(&self, x: &[Q]) -> Result<Vec<TensorOp>> {
        crate::dirac::weight_components(&self.alg, x)
            .iter()
            .map(|c| Ok(self.j(c)?.twisted()))
            .collect()
    }

    /// Weights of the blocks `M ⊗ (monomials of polynomial degree ≤ max_poly)`.
    pub fn sample_weights(&self, max_poly: u32) -> Vec<Weight> {
        self.space.weights_up_to(max_poly)
    }
}
