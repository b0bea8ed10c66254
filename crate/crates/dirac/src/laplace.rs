use crate::dirac::DiracOperator;
use crate::space::{Block, TensorOp, TensorSpace, Term};
use num_traits::{One, Zero};
use superdirac_core::algebra::{LieSuperalgebra, Weight};
use superdirac_core::clifford::{CwAlgebra, Elem};
use superdirac_core::fock::FockSpace;
use superdirac_core::linalg::Matrix;
use superdirac_core::module::WeightModule;
use superdirac_core::{Error, Result, Q};

/// Operators of one simple factor of the even part: its relative Dirac operator and Cartan.
#[derive(Clone, Debug)]
struct Factor {
    d: TensorOp,
    cartan: Vec<Vec<Q>>,
    cartan_ops: Vec<TensorOp>,
    gram_inv: Matrix,
}

#[derive(Clone, Debug)]
struct Parts {
    block: Block,
    d2: Vec<Matrix>,
    cartan: Vec<Vec<Matrix>>,
    centre: Vec<Matrix>,
}

/// The family `ξ ↦ Δ_i(ξ)` of each simple factor of `g_0` on `L(Λ) ⊗ M̄(n_0^-)`, and the
/// combined operator `Δ̃(ξ) = Σ_i Δ_i(ξ)ᵀ Δ_i(ξ) + Σ_z A_z(ξ)ᵀ A_z(ξ)` over a basis of the centre.
///
/// `Δ_i(ξ) = D_i² + Σ_{k,l} G^{kl} (J(h_k) + ξ(h_k)) (J(h_l) + ξ(h_l))`: the Cartan part of the
/// absolute Dirac operator acts through its square, so no spinor of `h` is needed.
#[derive(Clone, Debug)]
pub struct EvenFamily {
    pub alg: LieSuperalgebra,
    pub space: TensorSpace,
    factors: Vec<Factor>,
    centre: Vec<Vec<Q>>,
    centre_ops: Vec<TensorOp>,
    parts: Vec<Parts>,
}

fn embed(elem: &Elem, positions: &[usize], ngen: usize) -> Elem {
    let mut out = Elem::zero();
    for (m, c) in &elem.terms {
        let mut big = vec![0u16; ngen];
        for (k, &e) in m.iter().enumerate() {
            big[positions[k]] = e;
        }
        out.add_term(big, c.clone());
    }
    out
}

fn cartan_full(alg: &LieSuperalgebra, hc: &[Q]) -> Vec<Q> {
    let mut v = vec![Q::zero(); alg.dim()];
    for (k, &a) in alg.cartan.iter().enumerate() {
        v[a] = hc[k].clone();
    }
    v
}

fn j_cartan(alg: &LieSuperalgebra, module: &WeightModule, fock: &FockSpace, h: &[Q]) -> Result<TensorOp> {
    let zero = vec![Q::zero(); alg.rank_n()];
    let mut op = TensorOp::module_only(module.action(h), 0, zero.clone());
    if fock.cw.ngen() > 0 {
        op = op.plus(&TensorOp::cw_only(fock.cw.nu_star(alg, h)?, 0, zero));
    }
    Ok(op)
}

fn gram(alg: &LieSuperalgebra, vs: &[Vec<Q>]) -> Result<Matrix> {
    let r = vs.len();
    let mut g = Matrix::zeros(r, r);
    for i in 0..r {
        for j in 0..r {
            g.set(i, j, alg.b(&vs[i], &vs[j]));
        }
    }
    g.inverse()
        .ok_or_else(|| Error::DegenerateSubspace("form is singular on a Cartan factor".into()))
}

/// `Σ_{k,l} G^{kl} (A_k + a_k)(A_l + a_l)` for diagonal-shifted matrices.
fn shifted_square(ops: &[Matrix], shifts: &[Q], gram_inv: &Matrix) -> Matrix {
    let n = ops.first().map_or(0, |m| m.rows);
    let shifted: Vec<Matrix> = ops.iter().zip(shifts).map(|(a, s)| a.add_scalar(s)).collect();
    let mut acc = Matrix::zeros(n, n);
    for k in 0..ops.len() {
        for l in 0..ops.len() {
            let c = gram_inv.get(k, l);
            if !c.is_zero() {
                acc = acc.add(&shifted[k].mul(&shifted[l]).scale(c));
            }
        }
    }
    acc
}

impl EvenFamily {
    pub fn new(alg: &LieSuperalgebra, module: &WeightModule) -> Result<Self> {
        let p0: Vec<usize> = alg
            .even_indices()
            .into_iter()
            .filter(|a| alg.root_ij(*a).is_some())
            .collect();
        let fock = FockSpace::new(alg, &p0)?;
        let rank = alg.rank_n();
        let zero = vec![Q::zero(); rank];
        let (even_factors, centre_hc) = alg.even_factors();
        let mut factors = Vec::new();
        for f in &even_factors {
            let mut gens: Vec<usize> = f.roots.clone();
            gens.sort_by_key(|&a| fock.cw.position(a));
            let positions: Vec<usize> = gens.iter().map(|&a| fock.cw.position(a).expect("even root")).collect();
            let sub = CwAlgebra::new(alg, &gens);
            let duals = alg.dual_basis(&gens)?;
            let mut d = TensorOp::zero(zero.clone());
            for (x, &a) in gens.iter().enumerate() {
                d.terms.push(Term {
                    module: Some(module.action(&duals[x])),
                    module_parity: 0,
                    cw: Some(fock.cw.gen(positions[x])),
                    cw_parity: 0,
                    coeff: Q::one(),
                });
                let _ = a;
            }
            let phi = embed(&sub.cubic_term(alg)?, &positions, fock.cw.ngen());
            if !phi.is_zero() {
                d = d.plus(&TensorOp::cw_only(phi, 0, zero.clone()));
            }
            let cartan: Vec<Vec<Q>> = f.cartan.iter().map(|hc| cartan_full(alg, hc)).collect();
            let cartan_ops = cartan
                .iter()
                .map(|h| j_cartan(alg, module, &fock, h))
                .collect::<Result<Vec<_>>>()?;
            let gram_inv = gram(alg, &cartan)?;
            factors.push(Factor {
                d,
                cartan,
                cartan_ops,
                gram_inv,
            });
        }
        let centre: Vec<Vec<Q>> = centre_hc.iter().map(|hc| cartan_full(alg, hc)).collect();
        let centre_ops = centre
            .iter()
            .map(|h| j_cartan(alg, module, &fock, h))
            .collect::<Result<Vec<_>>>()?;
        let space = TensorSpace::new(module.clone(), fock);
        let mut parts = Vec::new();
        for w in space.weights_up_to(0) {
            let block = space.block(&w);
            let mut d2 = Vec::new();
            let mut cartan_m = Vec::new();
            for f in &factors {
                let d = space.matrix(&f.d, &block, &block)?;
                d2.push(d.mul(&d));
                cartan_m.push(
                    f.cartan_ops
                        .iter()
                        .map(|o| space.matrix(o, &block, &block))
                        .collect::<Result<Vec<_>>>()?,
                );
            }
            let centre_m = centre_ops
                .iter()
                .map(|o| space.matrix(o, &block, &block))
                .collect::<Result<Vec<_>>>()?;
            parts.push(Parts {
                block,
                d2,
                cartan: cartan_m,
                centre: centre_m,
            });
        }
        Ok(EvenFamily {
            alg: alg.clone(),
            space,
            factors,
            centre,
            centre_ops,
            parts,
        })
    }

    pub fn num_factors(&self) -> usize {
        self.factors.len()
    }

    pub fn blocks(&self) -> impl Iterator<Item = &Block> {
        self.parts.iter().map(|p| &p.block)
    }

    pub fn dim(&self) -> usize {
        self.parts.iter().map(|p| p.block.dim()).sum()
    }

    fn factor_matrix(&self, part: &Parts, i: usize, xi: &[Q]) -> Matrix {
        let f = &self.factors[i];
        let shifts: Vec<Q> = f.cartan.iter().map(|h| self.alg.eval_weight_full(xi, h)).collect();
        part.d2[i].add(&shifted_square(&part.cartan[i], &shifts, &f.gram_inv))
    }

    /// `Δ_i(ξ)` on every block, in block order.
    pub fn delta_factor(&self, i: usize, xi: &[Q]) -> Vec<Matrix> {
        self.parts.iter().map(|p| self.factor_matrix(p, i, xi)).collect()
    }

    /// The operators whose Gram sum is `Δ̃(ξ)`, per block.
    pub fn components(&self, xi: &[Q]) -> Vec<Vec<Matrix>> {
        self.parts
            .iter()
            .map(|p| {
                let mut out: Vec<Matrix> = (0..self.factors.len()).map(|i| self.factor_matrix(p, i, xi)).collect();
                for (z, m) in self.centre.iter().zip(&p.centre) {
                    out.push(m.add_scalar(&self.alg.eval_weight_full(xi, z)));
                }
                out
            })
            .collect()
    }

    /// `Δ̃(ξ)` per block.
    pub fn delta_tilde(&self, xi: &[Q]) -> Vec<Matrix> {
        self.components(xi).iter().map(|c| gram_sum(c)).collect()
    }

    /// Kernel of `Δ̃(ξ)` per block (only nonzero blocks are listed).
    pub fn kernel(&self, xi: &[Q]) -> Vec<(Weight, Vec<Vec<Q>>)> {
        self.parts
            .iter()
            .zip(self.delta_tilde(xi))
            .filter_map(|(p, m)| {
                let k = m.kernel();
                if k.is_empty() {
                    None
                } else {
                    Some((p.block.weight.clone(), k))
                }
            })
            .collect()
    }

    pub fn kernel_dim(&self, xi: &[Q]) -> usize {
        self.delta_tilde(xi).iter().map(|m| m.nullity()).sum()
    }

    /// For an even algebra with a single simple factor, `Δ(ξ)` itself, per block.
    pub fn laplace(&self, xi: &[Q]) -> Result<Vec<Matrix>> {
        if self.factors.len() != 1 || !self.centre.is_empty() || self.alg.spec.n != 0 {
            return Err(Error::UnsupportedAlgebra(format!(
                "the Laplace family needs a simple even algebra; {} is not",
                self.alg.spec.name()
            )));
        }
        Ok(self.delta_factor(0, xi))
    }

    pub fn laplace_kernel_dim(&self, xi: &[Q]) -> Result<usize> {
        Ok(self.laplace(xi)?.iter().map(|m| m.nullity()).sum())
    }

    pub fn block_weights(&self) -> Vec<Weight> {
        self.parts.iter().map(|p| p.block.weight.clone()).collect()
    }

    pub fn centre_ops(&self) -> &[TensorOp] {
        &self.centre_ops
    }
}

/// `Σ_i A_iᵀ A_i`.
pub fn gram_sum(ops: &[Matrix]) -> Matrix {
    let n = ops.first().map_or(0, |m| m.cols);
    let mut acc = Matrix::zeros(n, n);
    for a in ops {
        acc = acc.add(&a.transpose().mul(a));
    }
    acc
}

/// The energy operator `T(η) = 2 J(h_η) + B(η, η)` and the detecting family on `E_Λ ⊗ 1`.
#[derive(Clone, Debug)]
pub struct DetectingFamily {
    pub even: EvenFamily,
    pub full: DiracOperator,
    /// `g_0`-highest weights of `L(Λ)` with multiplicities.
    pub x_set: Vec<(Weight, usize)>,
    embeds: Vec<(Block, Block)>,
}

impl DetectingFamily {
    pub fn new(alg: &LieSuperalgebra, module: &WeightModule) -> Result<Self> {
        let even = EvenFamily::new(alg, module)?;
        let full = DiracOperator::new(alg, module, &alg.cartan)?;
        let shift: Weight = full
            .space
            .fock
            .vacuum_weight
            .iter()
            .zip(&even.space.fock.vacuum_weight)
            .map(|(a, b)| a - b)
            .collect();
        let n_even = even.space.fock.nbar;
        let n_full = full.space.fock.nbar;
        let mut embeds = Vec::new();
        for b in even.blocks() {
            let w: Weight = b.weight.iter().zip(&shift).map(|(a, s)| a + s).collect();
            let big = full.space.block(&w);
            let sub = big.restrict(|_, m| m[n_even..n_full].iter().all(|&e| e == 0));
            if sub.dim() != b.dim() {
                return Err(Error::VerificationFailure(
                    "E_Λ ⊗ 1 does not match the even oscillator space".into(),
                ));
            }
            for ((i, m), (i2, m2)) in b.basis.iter().zip(&sub.basis) {
                if i != i2 || m[..] != m2[..n_even] {
                    return Err(Error::VerificationFailure("E_Λ ⊗ 1 basis order mismatch".into()));
                }
            }
            embeds.push((big, sub));
        }
        let x_set = module.even_decomposition(alg);
        Ok(DetectingFamily {
            even,
            full,
            x_set,
            embeds,
        })
    }

    /// Matrices of `T(η)` on the blocks of `E_Λ ⊗ 1`; fails if `T(η)` leaves the subspace.
    pub fn energy(&self, eta: &[Q]) -> Result<Vec<Matrix>> {
        let alg = &self.even.alg;
        let h = alg.h_of_full(eta);
        let j = self.full.j(&h)?;
        let c = alg.wnorm(eta);
        let mut out = Vec::new();
        for (big, sub) in &self.embeds {
            let m = self.full.space.matrix(&j, sub, big)?;
            let pos = big.positions_of(sub)?;
            let mut r = Matrix::zeros(sub.dim(), sub.dim());
            for row in 0..big.dim() {
                let inside = pos.iter().position(|&p| p == row);
                for col in 0..sub.dim() {
                    let v = m.get(row, col);
                    if v.is_zero() {
                        continue;
                    }
                    match inside {
                        Some(k) => r.set(k, col, v.clone()),
                        None => {
                            return Err(Error::VerificationFailure("T(η) does not preserve E_Λ ⊗ 1".into()));
                        }
                    }
                }
            }
            out.push(r.scale(&Q::from_integer(2.into())).add_scalar(&c));
        }
        Ok(out)
    }

    /// Dimension of the joint kernel of `Δ̃(ξ)` and `T(η)` on `E_Λ ⊗ 1`.
    pub fn joint_kernel_dim(&self, xi: &[Q], eta: &[Q]) -> Result<usize> {
        let t = self.energy(eta)?;
        Ok(self
            .even
            .delta_tilde(xi)
            .iter()
            .zip(&t)
            .map(|(d, t)| Matrix::vstack(&[d, t]).nullity())
            .sum())
    }

    /// Dimension of the kernel of `T(η)` on `E_Λ ⊗ 1`.
    pub fn energy_kernel_dim(&self, eta: &[Q]) -> Result<usize> {
        Ok(self.energy(eta)?.iter().map(|m| m.nullity()).sum())
    }

    /// Total weights (in `L(Λ) ⊗ M̄(n^-)`) of the blocks of `E_Λ ⊗ 1`.
    pub fn total_weights(&self) -> Vec<Weight> {
        self.embeds.iter().map(|(b, _)| b.weight.clone()).collect()
    }

    pub fn block_dims(&self) -> Vec<usize> {
        self.embeds.iter().map(|(_, s)| s.dim()).collect()
    }

    /// Prediction: the joint kernel is nonzero iff `ξ = -μ-ρ_0` and `B(μ+ρ, η) = 0` for some `μ` in the X-set.
    pub fn predicted_nonzero(&self, xi: &[Q], eta: &[Q]) -> bool {
        let alg = &self.even.alg;
        let rho0 = alg.rho0();
        let rho = alg.rho();
        self.x_set.iter().any(|(mu, _)| {
            let target: Weight = mu.iter().zip(&rho0).map(|(a, b)| -(a + b)).collect();
            let mr: Weight = mu.iter().zip(&rho).map(|(a, b)| a + b).collect();
            alg.same_weight(xi, &target) && alg.wform(&mr, eta).is_zero()
        })
    }
}
