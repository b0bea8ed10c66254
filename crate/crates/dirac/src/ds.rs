use crate::cohomology::{graded_cohomology, CandidateSearch};
use crate::dirac::DiracOperator;
use crate::space::TensorOp;
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use superdirac_core::algebra::{add, LieSuperalgebra, Weight};
use superdirac_core::linalg::Matrix;
use superdirac_core::module::WeightModule;
use superdirac_core::scalar::{fmt_q, fmt_vec, ser};
use superdirac_core::{Error, Result, Q};

/// `x = Σ c_i e_{α_i}` for mutually orthogonal, linearly independent isotropic odd roots.
#[derive(Clone, Debug, Serialize)]
pub struct SelfCommutingElement {
    pub roots: Vec<usize>,
    pub labels: Vec<String>,
    #[serde(serialize_with = "ser::vec")]
    pub coefficients: Vec<Q>,
    #[serde(skip)]
    pub element: Vec<Q>,
    pub rank: usize,
}

impl SelfCommutingElement {
    pub fn new(alg: &LieSuperalgebra, roots: &[usize], coefficients: &[Q]) -> Result<Self> {
        if roots.len() != coefficients.len() {
            return Err(Error::SchemaError("one coefficient per root is required".into()));
        }
        let mut element = vec![Q::zero(); alg.dim()];
        for (&a, c) in roots.iter().zip(coefficients) {
            if alg.root_ij(a).is_none() || alg.parity(a) != 1 {
                return Err(Error::NotSelfCommuting(format!(
                    "{} is not an odd root vector",
                    alg.label(a)
                )));
            }
            if !alg.wnorm(&alg.basis[a].weight).is_zero() {
                return Err(Error::NotSelfCommuting(format!("{} is not isotropic", alg.label(a))));
            }
            if c.is_zero() {
                return Err(Error::SchemaError(format!("zero coefficient on {}", alg.label(a))));
            }
            element[a] += c;
        }
        let kept: Vec<usize> = roots.to_vec();
        if !alg.is_orthogonal_family(&kept) {
            return Err(Error::NotSelfCommuting(
                "roots are not mutually orthogonal and independent".into(),
            ));
        }
        if alg.bracket(&element, &element).iter().any(|c| !c.is_zero()) {
            return Err(Error::NotSelfCommuting("[x, x] ≠ 0".into()));
        }
        Ok(SelfCommutingElement {
            roots: kept,
            labels: roots.iter().map(|&a| alg.label(a).to_string()).collect(),
            coefficients: coefficients.to_vec(),
            element,
            rank: roots.len(),
        })
    }

    /// Builds `x` from basis labels such as `E14`.
    pub fn from_labels(alg: &LieSuperalgebra, labels: &[&str], coefficients: &[Q]) -> Result<Self> {
        let roots = labels
            .iter()
            .map(|l| {
                alg.index_of_label(l)
                    .ok_or_else(|| Error::SchemaError(format!("no basis element named {}", l)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alg, &roots, coefficients)
    }

    pub fn zero() -> Self {
        SelfCommutingElement {
            roots: Vec::new(),
            labels: Vec::new(),
            coefficients: Vec::new(),
            element: Vec::new(),
            rank: 0,
        }
    }

    fn root_weights(&self, alg: &LieSuperalgebra) -> Vec<Weight> {
        self.roots.iter().map(|&a| alg.basis[a].weight.clone()).collect()
    }
}

/// One summand of `DS_x`, indexed by a class of weights modulo the roots of `x`.
#[derive(Clone, Debug, Serialize)]
pub struct DsPiece {
    #[serde(serialize_with = "ser::vec")]
    pub representative: Weight,
    pub dims: [usize; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct DsResult {
    pub pieces: Vec<DsPiece>,
    pub dims: [usize; 2],
    pub sdim: i64,
    pub square_zero: bool,
}

fn classes(weights: &[Weight], roots: &[Weight]) -> Vec<Vec<usize>> {
    let mut distinct: BTreeMap<Weight, usize> = BTreeMap::new();
    for w in weights {
        let n = distinct.len();
        distinct.entry(w.clone()).or_insert(n);
    }
    let keys: Vec<Weight> = distinct.keys().cloned().collect();
    let mut parent: Vec<usize> = (0..keys.len()).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for (k, w) in keys.iter().enumerate() {
        for a in roots {
            for t in [add(w, a), superdirac_core::algebra::sub(w, a)] {
                if let Ok(j) = keys.binary_search(&t) {
                    let (x, y) = (find(&mut parent, k), find(&mut parent, j));
                    parent[x] = y;
                }
            }
        }
    }
    let mut groups: BTreeMap<Weight, Vec<usize>> = BTreeMap::new();
    let mut rep_of: BTreeMap<usize, Weight> = BTreeMap::new();
    for (k, w) in keys.iter().enumerate() {
        let r = find(&mut parent, k);
        rep_of.entry(r).or_insert_with(|| w.clone());
    }
    for (i, w) in weights.iter().enumerate() {
        let k = keys.binary_search(w).unwrap_or(0);
        let r = find(&mut parent, k);
        groups.entry(rep_of[&r].clone()).or_default().push(i);
    }
    groups.into_values().collect()
}

fn sub_matrix(m: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            out.set(i, j, m.get(r, c).clone());
        }
    }
    out
}

/// `ker x / im x` for an odd square-zero operator on a graded weight space.
pub fn ds_of_operator(xm: &Matrix, parity: &[u8], weights: &[Weight], roots: &[Weight]) -> DsResult {
    let square_zero = xm.mul(xm).is_zero();
    let mut pieces = Vec::new();
    let mut dims = [0, 0];
    for class in classes(weights, roots) {
        let split = [
            class.iter().copied().filter(|&i| parity[i] == 0).collect::<Vec<_>>(),
            class.iter().copied().filter(|&i| parity[i] == 1).collect::<Vec<_>>(),
        ];
        let rank = |from: usize| {
            if split[from].is_empty() || split[1 - from].is_empty() {
                0
            } else {
                sub_matrix(xm, &split[1 - from], &split[from]).rank()
            }
        };
        let r = [rank(0), rank(1)];
        let d = [split[0].len() - r[0] - r[1], split[1].len() - r[1] - r[0]];
        dims[0] += d[0];
        dims[1] += d[1];
        if d != [0, 0] {
            let rep = class.iter().map(|&i| weights[i].clone()).min().unwrap_or_default();
            pieces.push(DsPiece {
                representative: rep,
                dims: d,
            });
        }
    }
    DsResult {
        pieces,
        dims,
        sdim: dims[0] as i64 - dims[1] as i64,
        square_zero,
    }
}

/// `DS_x(M) = ker x_M / im x_M`.
pub fn ds_module(alg: &LieSuperalgebra, x: &SelfCommutingElement, m: &WeightModule) -> DsResult {
    let xm = if x.rank == 0 {
        Matrix::zeros(m.dim(), m.dim())
    } else {
        m.action(&x.element).to_dense()
    };
    ds_of_operator(&xm, &m.parity, &m.weights, &x.root_weights(alg))
}

/// Comparison of `H_{Dˣ}` with `DS_x(H_D)` on the candidate blocks of `D²`.
#[derive(Clone, Debug, Serialize)]
pub struct PerturbedReport {
    pub x: SelfCommutingElement,
    pub search: CandidateSearch,
    pub square_matches: bool,
    pub ker_d_equals_ker_d2: bool,
    pub h_dx: [usize; 2],
    pub ds_of_h_d: Option<[usize; 2]>,
    pub agree: Option<bool>,
}

/// `ker D²` on each candidate block, as columns of block coordinates with parities.
struct KernelSpace {
    offsets: BTreeMap<Weight, (usize, Matrix)>,
    parity: Vec<u8>,
    weights: Vec<Weight>,
}

impl DiracOperator {
    /// The twisted components `J(c_i e_{α_i}) K` of the perturbation.
    pub fn perturbation(&self, x: &SelfCommutingElement) -> Result<Vec<TensorOp>> {
        x.roots
            .iter()
            .zip(&x.coefficients)
            .map(|(&a, c)| Ok(self.j_basis(a)?.scaled(c).twisted()))
            .collect()
    }

    /// Checks `(Dˣ)² = D²` on the given blocks by the vanishing of every cross term.
    pub fn verify_perturbed_square(&self, x: &SelfCommutingElement, weights: &[Weight]) -> Result<bool> {
        let parts = self.perturbation(x)?;
        for w in weights {
            let b = self.space.block(w);
            if b.dim() == 0 {
                continue;
            }
            for (i, pi) in parts.iter().enumerate() {
                let (a, _) = self.space.compose(&[&self.d, pi], &b)?;
                let (c, _) = self.space.compose(&[pi, &self.d], &b)?;
                if !a.add(&c).is_zero() {
                    return Ok(false);
                }
                for pj in &parts[i..] {
                    let (a, _) = self.space.compose(&[pi, pj], &b)?;
                    let (c, _) = self.space.compose(&[pj, pi], &b)?;
                    if !a.add(&c).is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }

    fn kernel_space(&self, weights: &[Weight]) -> Result<KernelSpace> {
        let mut offsets = BTreeMap::new();
        let mut parity = Vec::new();
        let mut ws = Vec::new();
        for w in weights {
            let b = self.space.block(w);
            let d2 = self.d_squared(&b)?;
            let mut cols = Vec::new();
            for p in 0..2u8 {
                let idx: Vec<usize> = (0..b.dim()).filter(|&k| b.parity[k] == p).collect();
                if idx.is_empty() {
                    continue;
                }
                let sub = sub_matrix(&d2, &idx, &idx);
                for v in sub.kernel() {
                    let mut full = vec![Q::zero(); b.dim()];
                    for (k, &i) in idx.iter().enumerate() {
                        full[i] = v[k].clone();
                    }
                    cols.push(full);
                    parity.push(p);
                    ws.push(w.clone());
                }
            }
            offsets.insert(
                w.clone(),
                (parity.len() - cols.len(), Matrix::from_cols(&cols, b.dim())),
            );
        }
        Ok(KernelSpace {
            offsets,
            parity,
            weights: ws,
        })
    }

    /// Matrix of `ops` on `ker D²` over the candidate blocks.
    fn on_kernel(&self, ks: &KernelSpace, ops: &[TensorOp]) -> Result<Matrix> {
        let n = ks.parity.len();
        let mut out = Matrix::zeros(n, n);
        for (w, (off, basis)) in &ks.offsets {
            if basis.cols == 0 {
                continue;
            }
            let b = self.space.block(w);
            for op in ops {
                let target = add(w, &op.shift);
                let tb = self.space.block(&target);
                if tb.dim() == 0 {
                    continue;
                }
                let image = self.space.matrix(op, &b, &tb)?.mul(basis);
                if image.is_zero() {
                    continue;
                }
                let (toff, tbasis) = ks.offsets.get(&target).ok_or_else(|| {
                    Error::KernelInfinite(format!(
                        "the perturbation leaves the searched blocks at {}",
                        fmt_vec(&target)
                    ))
                })?;
                for c in 0..image.cols {
                    let coords = tbasis.solve(&image.col(c)).ok_or_else(|| {
                        Error::VerificationFailure(format!("image is not in ker D² at {}", fmt_vec(&target)))
                    })?;
                    for (r, v) in coords.into_iter().enumerate() {
                        if !v.is_zero() {
                            out.add_at(toff + r, off + c, &v);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `H_{Dˣ}` on `ker D²` and, when `ker D = ker D²`, `DS_x(H_D)` through the `l`-action.
    pub fn perturbed_cohomology(&self, x: &SelfCommutingElement, max_poly: u32) -> Result<PerturbedReport> {
        let search = self.candidate_search(max_poly)?;
        let ks = self.kernel_space(&search.weights)?;
        let parts = self.perturbation(x)?;
        let square_matches = self.verify_perturbed_square(x, &search.weights)?;
        if !square_matches {
            return Err(Error::SquareMismatch(format!(
                "(Dˣ)² ≠ D² for x = {}",
                x.labels.join("+")
            )));
        }
        let mut all = vec![self.d.clone()];
        all.extend(parts.iter().cloned());
        let dx = self.on_kernel(&ks, &all)?;
        let split = [
            (0..ks.parity.len()).filter(|&i| ks.parity[i] == 0).collect::<Vec<_>>(),
            (0..ks.parity.len()).filter(|&i| ks.parity[i] == 1).collect::<Vec<_>>(),
        ];
        let (_, h_dx) = graded_cohomology(&dx, &split)?;
        let d_on_kernel = self.on_kernel(&ks, std::slice::from_ref(&self.d))?;
        let same = d_on_kernel.is_zero();
        let ds_of_h_d = if same {
            let jx: Vec<TensorOp> = x
                .roots
                .iter()
                .zip(&x.coefficients)
                .map(|(&a, c)| Ok(self.j_basis(a)?.scaled(c)))
                .collect::<Result<_>>()?;
            let xm = self.on_kernel(&ks, &jx)?;
            Some(ds_of_operator(&xm, &ks.parity, &ks.weights, &x.root_weights(&self.alg)).dims)
        } else {
            None
        };
        let agree = ds_of_h_d.map(|d| d == h_dx);
        Ok(PerturbedReport {
            x: x.clone(),
            search,
            square_matches,
            ker_d_equals_ker_d2: same,
            h_dx,
            ds_of_h_d,
            agree,
        })
    }
}

/// Human-readable form of `x`.
pub fn describe(x: &SelfCommutingElement) -> String {
    if x.rank == 0 {
        return "0".into();
    }
    x.labels
        .iter()
        .zip(&x.coefficients)
        .map(|(l, c)| format!("{}·{}", fmt_q(c), l))
        .collect::<Vec<_>>()
        .join(" + ")
}
