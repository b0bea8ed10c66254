use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, Mutex};
use superdirac_core::algebra::{add, sub, Weight};
use superdirac_core::clifford::{Elem, Mono};
use superdirac_core::fock::{height, FockSpace, FockVec};
use superdirac_core::linalg::Matrix;
use superdirac_core::module::{SparseMat, WeightModule};
use superdirac_core::scalar::{fmt_vec, to_i64};
use superdirac_core::{Error, Result, Q};

/// One fine weight space of `M ⊗ M̄(P)`, with basis pairs (module index, creation monomial).
#[derive(Clone, Debug)]
pub struct Block {
    pub weight: Weight,
    pub basis: Vec<(usize, Mono)>,
    pub parity: Vec<u8>,
    index: HashMap<(usize, Mono), usize>,
}

impl Block {
    fn from_basis(weight: Weight, basis: Vec<(usize, Mono)>, parity: Vec<u8>) -> Self {
        let index = basis.iter().enumerate().map(|(k, b)| (b.clone(), k)).collect();
        Block {
            weight,
            basis,
            parity,
            index,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn index_of(&self, i: usize, m: &Mono) -> Option<usize> {
        self.index.get(&(i, m.clone())).copied()
    }

    /// The sub-block spanned by the basis vectors accepted by `keep`.
    pub fn restrict(&self, keep: impl Fn(usize, &Mono) -> bool) -> Block {
        let mut basis = Vec::new();
        let mut parity = Vec::new();
        for (k, (i, m)) in self.basis.iter().enumerate() {
            if keep(*i, m) {
                basis.push((*i, m.clone()));
                parity.push(self.parity[k]);
            }
        }
        Block::from_basis(self.weight.clone(), basis, parity)
    }

    /// Positions of the basis vectors of `sub` inside this block.
    pub fn positions_of(&self, sub: &Block) -> Result<Vec<usize>> {
        sub.basis
            .iter()
            .map(|(i, m)| {
                self.index_of(*i, m).ok_or_else(|| {
                    Error::VerificationFailure(format!("basis vector is not in the block {}", fmt_vec(&self.weight)))
                })
            })
            .collect()
    }
}

/// One term `coeff · A ⊗ C` of an operator on `M ⊗ M̄(P)`; `None` stands for the identity.
#[derive(Clone, Debug)]
pub struct Term {
    pub module: Option<SparseMat>,
    pub module_parity: u8,
    pub cw: Option<Elem>,
    pub cw_parity: u8,
    pub coeff: Q,
}

/// Weight-homogeneous operator on `M ⊗ M̄(P)`, a sum of tensor terms.
///
/// `(A ⊗ C)(m ⊗ s) = (-1)^{p(C) p(m)} A m ⊗ C s`. With `twist`, the operator is
/// composed on the right with `K = (-1)^{Clifford degree}`.
#[derive(Clone, Debug)]
pub struct TensorOp {
    pub terms: Vec<Term>,
    pub shift: Weight,
    pub twist: bool,
}

impl TensorOp {
    pub fn zero(shift: Weight) -> Self {
        TensorOp {
            terms: Vec::new(),
            shift,
            twist: false,
        }
    }

    pub fn scalar(c: Q, rank: usize) -> Self {
        let mut op = TensorOp::zero(vec![Q::zero(); rank]);
        op.terms.push(Term {
            module: None,
            module_parity: 0,
            cw: None,
            cw_parity: 0,
            coeff: c,
        });
        op
    }

    pub fn module_only(a: SparseMat, parity: u8, shift: Weight) -> Self {
        let mut op = TensorOp::zero(shift);
        op.terms.push(Term {
            module: Some(a),
            module_parity: parity,
            cw: None,
            cw_parity: 0,
            coeff: Q::one(),
        });
        op
    }

    pub fn cw_only(c: Elem, parity: u8, shift: Weight) -> Self {
        let mut op = TensorOp::zero(shift);
        op.terms.push(Term {
            module: None,
            module_parity: 0,
            cw: Some(c),
            cw_parity: parity,
            coeff: Q::one(),
        });
        op
    }

    /// Sum of two operators with the same weight shift and twist.
    pub fn plus(&self, other: &TensorOp) -> TensorOp {
        assert_eq!(self.shift, other.shift, "operators with different weight shifts");
        assert_eq!(self.twist, other.twist, "operators with different twists");
        let mut out = self.clone();
        out.terms.extend(other.terms.iter().cloned());
        out
    }

    pub fn scaled(&self, c: &Q) -> TensorOp {
        let mut out = self.clone();
        for t in &mut out.terms {
            t.coeff *= c;
        }
        out
    }

    pub fn twisted(&self) -> TensorOp {
        let mut out = self.clone();
        out.twist = !out.twist;
        out
    }
}

/// The space `M ⊗ M̄(P)`, graded by fine weight.
#[derive(Debug)]
pub struct TensorSpace {
    pub module: WeightModule,
    pub fock: FockSpace,
    by_weight: BTreeMap<Weight, Vec<usize>>,
    cache: Mutex<HashMap<Weight, Arc<Block>>>,
}

impl Clone for TensorSpace {
    fn clone(&self) -> Self {
        TensorSpace::new(self.module.clone(), self.fock.clone())
    }
}

impl TensorSpace {
    pub fn new(module: WeightModule, fock: FockSpace) -> Self {
        let mut by_weight: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
        for (i, w) in module.weights.iter().enumerate() {
            by_weight.entry(w.clone()).or_default().push(i);
        }
        TensorSpace {
            module,
            fock,
            by_weight,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn rank(&self) -> usize {
        self.fock.vacuum_weight.len()
    }

    /// Number of even creation operators in a monomial.
    pub fn even_degree(&self, m: &Mono) -> u32 {
        m.iter()
            .enumerate()
            .filter(|(g, _)| self.fock.cw.parity[*g] == 0)
            .map(|(_, &e)| u32::from(e))
            .sum()
    }

    /// Total parity: module parity plus the number of even creation operators.
    pub fn parity_of(&self, i: usize, m: &Mono) -> u8 {
        ((u32::from(self.module.parity[i]) + self.even_degree(m)) % 2) as u8
    }

    pub fn weight_of(&self, i: usize, m: &Mono) -> Weight {
        add(&self.module.weights[i], &self.fock.weight(m))
    }

    pub fn module_weights(&self) -> impl Iterator<Item = &Weight> {
        self.by_weight.keys()
    }

    /// The complete fine weight space of total weight `nu`.
    pub fn block(&self, nu: &[Q]) -> Block {
        (*self.block_arc(nu)).clone()
    }

    pub fn block_arc(&self, nu: &[Q]) -> Arc<Block> {
        if let Some(b) = self.cache.lock().expect("block cache").get(nu) {
            return b.clone();
        }
        let b = Arc::new(self.build_block(nu));
        self.cache.lock().expect("block cache").insert(nu.to_vec(), b.clone());
        b
    }

    fn build_block(&self, nu: &[Q]) -> Block {
        let mut basis = Vec::new();
        let mut parity = Vec::new();
        for (mu, idx) in &self.by_weight {
            let offset = sub(&sub(nu, mu), &self.fock.vacuum_weight);
            let h = height(&offset);
            if h > Q::zero() {
                continue;
            }
            let budget = to_i64(&(-h).floor()).unwrap_or(0).clamp(0, i64::from(u16::MAX)) as u32;
            let monos = self.fock.monomials_of_weight(&offset, budget);
            for &i in idx {
                for m in &monos {
                    parity.push(self.parity_of(i, m));
                    basis.push((i, m.clone()));
                }
            }
        }
        Block::from_basis(nu.to_vec(), basis, parity)
    }

    /// Total weights of all basis vectors whose monomial has polynomial degree at most `max_poly`.
    pub fn weights_up_to(&self, max_poly: u32) -> Vec<Weight> {
        let monos = all_monomials(&self.fock, max_poly);
        let mut set = BTreeSet::new();
        for mu in self.by_weight.keys() {
            for m in &monos {
                set.insert(add(mu, &self.fock.weight(m)));
            }
        }
        set.into_iter().collect()
    }

    /// Matrix of `op` from `src` to `dst`; fails if the image leaves `dst`.
    pub fn matrix(&self, op: &TensorOp, src: &Block, dst: &Block) -> Result<Matrix> {
        let mut out = Matrix::zeros(dst.dim(), src.dim());
        let mut cache: HashMap<(usize, Mono), FockVec> = HashMap::new();
        for (col, (i, mono)) in src.basis.iter().enumerate() {
            let base = if op.twist && self.fock.degree(mono) % 2 == 1 {
                -Q::one()
            } else {
                Q::one()
            };
            for (t, term) in op.terms.iter().enumerate() {
                let fock_img: FockVec = match &term.cw {
                    None => std::iter::once((mono.clone(), Q::one())).collect(),
                    Some(c) => cache
                        .entry((t, mono.clone()))
                        .or_insert_with(|| self.fock.apply_mono(c, mono))
                        .clone(),
                };
                if fock_img.is_empty() {
                    continue;
                }
                let mod_img: Vec<(usize, Q)> = match &term.module {
                    None => vec![(*i, Q::one())],
                    Some(a) => a.cols[*i].clone(),
                };
                let sign = if term.cw_parity * self.module.parity[*i] % 2 == 1 {
                    -&base
                } else {
                    base.clone()
                };
                let c0 = &sign * &term.coeff;
                for (i2, a) in &mod_img {
                    let ca = &c0 * a;
                    for (m2, b) in &fock_img {
                        let row = dst.index_of(*i2, m2).ok_or_else(|| {
                            Error::VerificationFailure(format!(
                                "operator maps the block {} outside the block {}",
                                fmt_vec(&src.weight),
                                fmt_vec(&dst.weight)
                            ))
                        })?;
                        out.add_at(row, col, &(&ca * b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Matrix of `op` on `src`, together with the complete target block.
    pub fn apply_block(&self, op: &TensorOp, src: &Block) -> Result<(Matrix, Block)> {
        let dst = self.block_arc(&add(&src.weight, &op.shift));
        let m = self.matrix(op, src, &dst)?;
        Ok((m, (*dst).clone()))
    }

    /// Matrix of a product `ops[0] ops[1] ... ops[k-1]` on `src`, with the target block.
    pub fn compose(&self, ops: &[&TensorOp], src: &Block) -> Result<(Matrix, Block)> {
        let mut cur = src.clone();
        let mut acc = Matrix::identity(src.dim());
        for op in ops.iter().rev() {
            let (m, dst) = self.apply_block(op, &cur)?;
            acc = m.mul(&acc);
            cur = dst;
        }
        Ok((acc, cur))
    }
}

/// All creation monomials with polynomial degree at most `max_poly`.
pub fn all_monomials(fock: &FockSpace, max_poly: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; fock.nbar];
    fn rec(fock: &FockSpace, g: usize, budget: u32, cur: &mut Mono, out: &mut Vec<Mono>) {
        if g == fock.nbar {
            out.push(cur.clone());
            return;
        }
        let max_e = if fock.cw.parity[g] == 0 { 1 } else { budget };
        for e in 0..=max_e {
            cur[g] = e as u16;
            let nb = if fock.cw.parity[g] == 0 { budget } else { budget - e };
            rec(fock, g + 1, nb, cur, out);
        }
        cur[g] = 0;
    }
    rec(fock, 0, max_poly, &mut cur, &mut out);
    out.sort();
    out
}

/// Sparse product `a b`.
pub fn sparse_mul(a: &SparseMat, b: &SparseMat) -> SparseMat {
    let mut out = SparseMat::zeros(a.nrows, b.ncols());
    for (j, col) in b.cols.iter().enumerate() {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (k, x) in col {
            for (i, y) in &a.cols[*k] {
                *acc.entry(*i).or_insert_with(Q::zero) += x * y;
            }
        }
        for (i, v) in acc {
            out.push(i, j, v);
        }
    }
    out
}

pub fn sparse_add(a: &SparseMat, b: &SparseMat) -> SparseMat {
    let mut out = SparseMat::zeros(a.nrows, a.ncols());
    for j in 0..a.ncols() {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (i, x) in a.cols[j].iter().chain(&b.cols[j]) {
            *acc.entry(*i).or_insert_with(Q::zero) += x;
        }
        for (i, v) in acc {
            out.push(i, j, v);
        }
    }
    out
}

/// Returns the scalar `c` if the sparse matrix is `c` times the identity.
pub fn sparse_scalar(a: &SparseMat) -> Option<Q> {
    let mut val: Option<Q> = None;
    for (j, col) in a.cols.iter().enumerate() {
        let mut diag = Q::zero();
        for (i, x) in col {
            if *i == j {
                diag += x;
            } else if !x.is_zero() {
                return None;
            }
        }
        match &val {
            None => val = Some(diag),
            Some(v) if *v != diag => return None,
            _ => {}
        }
    }
    Some(val.unwrap_or_else(Q::zero))
}
