use crate::error::{Error, Result};
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::{fmt_vec, q, Q};
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Weights are stored in ε/δ coordinates of the diagonal torus of gl(m|n).
pub type Weight = Vec<Q>;

/// Sparse vector of coordinates in the basis of an algebra.
pub type SparseVec = Vec<(usize, Q)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AlgebraType {
    Gl,
    Sl,
    Psl,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub ty: AlgebraType,
    pub m: usize,
    pub n: usize,
}

impl AlgebraSpec {
    pub fn sl(n: usize) -> Self {
        AlgebraSpec {
            ty: AlgebraType::Sl,
            m: n,
            n: 0,
        }
    }
    pub fn sl_super(m: usize, n: usize) -> Self {
        AlgebraSpec {
            ty: AlgebraType::Sl,
            m,
            n,
        }
    }
    pub fn gl(m: usize, n: usize) -> Self {
        AlgebraSpec {
            ty: AlgebraType::Gl,
            m,
            n,
        }
    }
    pub fn psl(n: usize) -> Self {
        AlgebraSpec {
            ty: AlgebraType::Psl,
            m: n,
            n,
        }
    }

    pub fn name(&self) -> String {
        let base = match self.ty {
            AlgebraType::Gl => "gl",
            AlgebraType::Sl => "sl",
            AlgebraType::Psl => "psl",
        };
        if self.n == 0 {
            format!("{}({})", base, self.m)
        } else {
            format!("{}({}|{})", base, self.m, self.n)
        }
    }

    /// Parses names such as `sl2`, `sl(3)`, `gl(1|1)`, `sl(2|1)`, `psl(2|2)`.
    pub fn parse(name: &str, m: Option<usize>, n: Option<usize>) -> Result<Self> {
        let s: String = name
            .chars()
            .filter(|c| !c.is_whitespace())
            .collect::<String>()
            .to_lowercase();
        let (base, rest) = if let Some(r) = s.strip_prefix("psl") {
            (AlgebraType::Psl, r)
        } else if let Some(r) = s.strip_prefix("sl") {
            (AlgebraType::Sl, r)
        } else if let Some(r) = s.strip_prefix("gl") {
            (AlgebraType::Gl, r)
        } else {
            return Err(Error::UnsupportedAlgebra(name.to_string()));
        };
        let rest = rest.trim_start_matches('(').trim_end_matches(')');
        let (pm, pn) = if rest.is_empty() {
            (m, n)
        } else if let Some((a, b)) = rest.split_once('|') {
            let a = a.parse().map_err(|_| Error::UnsupportedAlgebra(name.to_string()))?;
            let b = b.parse().map_err(|_| Error::UnsupportedAlgebra(name.to_string()))?;
            (Some(a), Some(b))
        } else if rest.chars().all(|c| c.is_ascii_digit()) {
            if base == AlgebraType::Psl && rest.len() == 2 {
                let a = rest[..1].parse().ok();
                let b = rest[1..].parse().ok();
                (a, b)
            } else {
                (rest.parse().ok(), Some(0))
            }
        } else {
            return Err(Error::UnsupportedAlgebra(name.to_string()));
        };
        let m = pm.ok_or_else(|| Error::UnsupportedAlgebra(format!("{name}: missing m")))?;
        let n = pn.unwrap_or(0);
        Ok(AlgebraSpec { ty: base, m, n })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementKind {
    Cartan(usize),
    Root { i: usize, j: usize },
}

#[derive(Clone, Debug)]
pub struct BasisElement {
    pub label: String,
    pub parity: u8,
    pub kind: ElementKind,
    /// Torus weight in ε/δ coordinates.
    pub weight: Weight,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckResult {
    pub check_name: String,
    pub status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<String>,
}

impl CheckResult {
    pub fn new(name: &str, failure: Option<String>) -> Self {
        CheckResult {
            check_name: name.to_string(),
            status: if failure.is_none() {
                "pass".into()
            } else {
                "fail".into()
            },
            counterexample: failure,
        }
    }
    pub fn passed(&self) -> bool {
        self.status == "pass"
    }
}

/// A simple factor of the even part: its root vectors and a basis of its Cartan.
#[derive(Clone, Debug)]
pub struct EvenFactor {
    pub roots: Vec<usize>,
    pub cartan: Vec<Vec<Q>>,
}

#[derive(Clone, Debug)]
pub struct LieSuperalgebra {
    pub spec: AlgebraSpec,
    pub basis: Vec<BasisElement>,
    /// `structure[a][b]` holds the coordinates of `[e_a, e_b]`.
    pub structure: Vec<Vec<SparseVec>>,
    pub form: Matrix,
    pub form_scale: Q,
    /// Diagonal entries of each Cartan basis element.
    pub cartan_diag: Vec<Vec<Q>>,
    pub cartan: Vec<usize>,
    root_index: HashMap<(usize, usize), usize>,
    cartan_solver: Matrix,
    cartan_gram_inv: Matrix,
}

fn parity_of(i: usize, j: usize, m: usize) -> u8 {
    u8::from((i < m) != (j < m))
}

impl LieSuperalgebra {
    pub fn build(spec: AlgebraSpec) -> Result<Self> {
        let AlgebraSpec { ty, m, n } = spec;
        if m == 0 {
            return Err(Error::UnsupportedAlgebra(format!(
                "{}: m must be positive",
                spec.name()
            )));
        }
        let nn = m + n;
        if nn > 8 {
            return Err(Error::UnsupportedAlgebra(format!("{}: rank too large", spec.name())));
        }
        match ty {
            AlgebraType::Psl if m != n || m < 2 => {
                return Err(Error::UnsupportedAlgebra(format!(
                    "{}: psl requires n|n with n >= 2",
                    spec.name()
                )))
            }
            AlgebraType::Sl if m == n => {
                return Err(Error::DegenerateForm(format!(
                    "{}: the identity lies in the radical of the supertrace form",
                    spec.name()
                )))
            }
            AlgebraType::Sl if n == 0 && m < 2 => return Err(Error::UnsupportedAlgebra("sl(1) is zero".into())),
            _ => {}
        }
        let mut cartan_diag = Vec::new();
        let mut cartan_labels = Vec::new();
        match ty {
            AlgebraType::Gl => {
                for k in 0..nn {
                    let mut d = vec![Q::zero(); nn];
                    d[k] = Q::one();
                    cartan_diag.push(d);
                    cartan_labels.push(format!("E{}{}", k + 1, k + 1));
                }
            }
            AlgebraType::Sl | AlgebraType::Psl => {
                for k in 0..nn - 1 {
                    if ty == AlgebraType::Psl && k + 1 == m {
                        continue;
                    }
                    let mut d = vec![Q::zero(); nn];
                    d[k] = Q::one();
                    d[k + 1] = if k + 1 == m { Q::one() } else { -Q::one() };
                    cartan_diag.push(d);
                    cartan_labels.push(format!("H{}", k + 1));
                }
            }
        }
        let mut basis = Vec::new();
        let mut cartan = Vec::new();
        for (k, label) in cartan_labels.into_iter().enumerate() {
            cartan.push(basis.len());
            basis.push(BasisElement {
                label,
                parity: 0,
                kind: ElementKind::Cartan(k),
                weight: vec![Q::zero(); nn],
            });
        }
        let mut root_index = HashMap::new();
        for i in 0..nn {
            for j in 0..nn {
                if i == j {
                    continue;
                }
                let mut w = vec![Q::zero(); nn];
                w[i] += Q::one();
                w[j] -= Q::one();
                root_index.insert((i, j), basis.len());
                basis.push(BasisElement {
                    label: format!("E{}{}", i + 1, j + 1),
                    parity: parity_of(i, j, m),
                    kind: ElementKind::Root { i, j },
                    weight: w,
                });
            }
        }
        let mut solver_cols = cartan_diag.clone();
        if ty == AlgebraType::Psl {
            solver_cols.push(vec![Q::one(); nn]);
        }
        let cartan_solver = Matrix::from_cols(&solver_cols, nn);
        let form_scale = if ty == AlgebraType::Sl && n == 0 {
            q(2 * m as i64)
        } else {
            Q::one()
        };
        let mut alg = LieSuperalgebra {
            spec,
            basis,
            structure: Vec::new(),
            form: Matrix::zeros(0, 0),
            form_scale,
            cartan_diag,
            cartan,
            root_index,
            cartan_solver,
            cartan_gram_inv: Matrix::zeros(0, 0),
        };
        let dim = alg.basis.len();
        let mats: Vec<BTreeMap<(usize, usize), Q>> = (0..dim).map(|a| alg.matrix_of_basis(a)).collect();
        let mut structure = vec![vec![Vec::new(); dim]; dim];
        for a in 0..dim {
            for b in 0..dim {
                let sign = if alg.basis[a].parity * alg.basis[b].parity == 1 {
                    -Q::one()
                } else {
                    Q::one()
                };
                let ab = sparse_mat_mul(&mats[a], &mats[b]);
                let ba = sparse_mat_mul(&mats[b], &mats[a]);
                let mut c = ab;
                for (k, v) in ba {
                    *c.entry(k).or_insert_with(Q::zero) -= &sign * v;
                }
                c.retain(|_, v| !v.is_zero());
                structure[a][b] = alg.coords_of_matrix(&c)?;
            }
        }
        alg.structure = structure;
        let mut form = Matrix::zeros(dim, dim);
        for a in 0..dim {
            for b in 0..dim {
                let p = sparse_mat_mul(&mats[a], &mats[b]);
                let mut s = Q::zero();
                for ((i, j), v) in &p {
                    if i == j {
                        if *i < m {
                            s += v;
                        } else {
                            s -= v;
                        }
                    }
                }
                form.set(a, b, s * &alg.form_scale);
            }
        }
        if form.rank() < dim {
            return Err(Error::DegenerateForm(format!(
                "{}: invariant form is degenerate",
                spec.name()
            )));
        }
        alg.form = form;
        let r = alg.cartan.len();
        let mut gram = Matrix::zeros(r, r);
        for (x, &a) in alg.cartan.iter().enumerate() {
            for (y, &b) in alg.cartan.iter().enumerate() {
                gram.set(x, y, alg.form.get(a, b).clone());
            }
        }
        alg.cartan_gram_inv = gram
            .inverse()
            .ok_or_else(|| Error::DegenerateForm(format!("{}: form degenerate on the Cartan", spec.name())))?;
        Ok(alg)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn rank_n(&self) -> usize {
        self.spec.m + self.spec.n
    }

    pub fn parity(&self, a: usize) -> u8 {
        self.basis[a].parity
    }

    pub fn root(&self, i: usize, j: usize) -> usize {
        self.root_index[&(i, j)]
    }

    pub fn root_ij(&self, a: usize) -> Option<(usize, usize)> {
        match self.basis[a].kind {
            ElementKind::Root { i, j } => Some((i, j)),
            ElementKind::Cartan(_) => None,
        }
    }

    pub fn is_positive_root(&self, a: usize) -> bool {
        matches!(self.basis[a].kind, ElementKind::Root { i, j } if i < j)
    }

    pub fn is_negative_root(&self, a: usize) -> bool {
        matches!(self.basis[a].kind, ElementKind::Root { i, j } if i > j)
    }

    pub fn label(&self, a: usize) -> &str {
        &self.basis[a].label
    }

    pub fn index_of_label(&self, label: &str) -> Option<usize> {
        self.basis.iter().position(|b| b.label.eq_ignore_ascii_case(label))
    }

    fn matrix_of_basis(&self, a: usize) -> BTreeMap<(usize, usize), Q> {
        let mut out = BTreeMap::new();
        match self.basis[a].kind {
            ElementKind::Root { i, j } => {
                out.insert((i, j), Q::one());
            }
            ElementKind::Cartan(k) => {
                for (i, v) in self.cartan_diag[k].iter().enumerate() {
                    if !v.is_zero() {
                        out.insert((i, i), v.clone());
                    }
                }
            }
        }
        out
    }

    /// The gl(m|n) matrix representing a coordinate vector (a coset representative for psl).
    pub fn matrix_of(&self, x: &[Q]) -> Matrix {
        let nn = self.rank_n();
        let mut out = Matrix::zeros(nn, nn);
        for (a, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for ((i, j), v) in self.matrix_of_basis(a) {
                out.add_at(i, j, &(v * c));
            }
        }
        out
    }

    fn coords_of_matrix(&self, mat: &BTreeMap<(usize, usize), Q>) -> Result<SparseVec> {
        let nn = self.rank_n();
        let mut out = Vec::new();
        let mut diag = vec![Q::zero(); nn];
        let mut has_diag = false;
        for ((i, j), v) in mat {
            if i == j {
                diag[*i] = v.clone();
                has_diag = true;
            } else {
                out.push((self.root(*i, *j), v.clone()));
            }
        }
        if has_diag {
            let c = self.cartan_solver.solve(&diag).ok_or_else(|| {
                Error::NotInSubalgebra(format!("diagonal {} is not in {}", fmt_vec(&diag), self.spec.name()))
            })?;
            for (k, v) in c.iter().take(self.cartan.len()).enumerate() {
                if !v.is_zero() {
                    out.push((self.cartan[k], v.clone()));
                }
            }
        }
        out.sort_by_key(|(k, _)| *k);
        Ok(out)
    }

    /// Coordinates of an arbitrary gl(m|n) matrix, or an error if it is not in the algebra.
    pub fn coords_of_gl_matrix(&self, mat: &Matrix) -> Result<Vec<Q>> {
        let mut sparse = BTreeMap::new();
        for i in 0..mat.rows {
            for j in 0..mat.cols {
                if !mat.get(i, j).is_zero() {
                    sparse.insert((i, j), mat.get(i, j).clone());
                }
            }
        }
        let sv = self.coords_of_matrix(&sparse)?;
        Ok(self.dense(&sv))
    }

    pub fn dense(&self, sv: &[(usize, Q)]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for (k, c) in sv {
            v[*k] += c;
        }
        v
    }

    pub fn unit(&self, a: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        v[a] = Q::one();
        v
    }

    /// Super bracket of coordinate vectors.
    pub fn bracket(&self, x: &[Q], y: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa * yb;
                for (k, v) in &self.structure[a][b] {
                    out[*k] += &c * v;
                }
            }
        }
        out
    }

    pub fn bracket_sparse(&self, x: &[(usize, Q)], y: &[(usize, Q)]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.dim()];
        for (a, xa) in x {
            for (b, yb) in y {
                let c = xa * yb;
                for (k, v) in &self.structure[*a][*b] {
                    out[*k] += &c * v;
                }
            }
        }
        out
    }

    pub fn bracket_basis(&self, a: usize, b: usize) -> &SparseVec {
        &self.structure[a][b]
    }

    pub fn b(&self, x: &[Q], y: &[Q]) -> Q {
        let mut s = Q::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let f = self.form.get(a, b);
                if !f.is_zero() {
                    s += xa * yb * f;
                }
            }
        }
        s
    }

    /// Matrix of `ad(x)` in the basis, columns indexed by the argument.
    pub fn ad(&self, x: &[Q]) -> Matrix {
        let d = self.dim();
        let mut m = Matrix::zeros(d, d);
        for b in 0..d {
            let col = self.bracket(x, &self.unit(b));
            for (k, v) in col.into_iter().enumerate() {
                if !v.is_zero() {
                    m.set(k, b, v);
                }
            }
        }
        m
    }

    /// Dual basis of the span of `idx`: returns `e^b` with `B(e_a, e^b) = δ_ab`.
    pub fn dual_basis(&self, idx: &[usize]) -> Result<Vec<Vec<Q>>> {
        let r = idx.len();
        let mut g = Matrix::zeros(r, r);
        for (x, &a) in idx.iter().enumerate() {
            for (y, &b) in idx.iter().enumerate() {
                g.set(x, y, self.form.get(a, b).clone());
            }
        }
        let inv = g.inverse().ok_or_else(|| {
            Error::SingularForm(format!(
                "form restricted to {{{}}} is singular",
                idx.iter().map(|&a| self.label(a)).collect::<Vec<_>>().join(",")
            ))
        })?;
        let mut duals = Vec::with_capacity(r);
        for y in 0..r {
            let mut v = vec![Q::zero(); self.dim()];
            for (x, &c) in idx.iter().enumerate() {
                v[c] = inv.get(x, y).clone();
            }
            duals.push(v);
        }
        Ok(duals)
    }

    /// Supertrace of the Casimir of the span of `idx` acting on itself by the adjoint action.
    pub fn casimir_supertrace(&self, idx: &[usize]) -> Result<Q> {
        let duals = self.dual_basis(idx)?;
        let mut s = Q::zero();
        for (x, &a) in idx.iter().enumerate() {
            let up = self.ad(&duals[x]);
            let down = self.ad(&self.unit(a));
            for &b in idx {
                let mut diag = Q::zero();
                for &c in idx {
                    diag += up.get(b, c) * down.get(c, b);
                }
                if self.parity(b) == 0 {
                    s += diag;
                } else {
                    s -= diag;
                }
            }
        }
        Ok(s)
    }

    /// Reads a weight given either in ε/δ coordinates or, for `sl(n)`, in fundamental weight coordinates.
    pub fn weight_from_input(&self, v: &[Q]) -> Result<Weight> {
        let nn = self.rank_n();
        if self.spec.n == 0 && self.spec.ty == AlgebraType::Sl && v.len() + 1 == nn {
            let mut w = vec![Q::zero(); nn];
            for (i, a) in v.iter().enumerate() {
                for x in w.iter_mut().take(i + 1) {
                    *x += a;
                }
            }
            return Ok(self.canonical(&w));
        }
        self.check_weight(v)?;
        Ok(v.to_vec())
    }

    pub fn is_subalgebra(&self, idx: &[usize]) -> bool {
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        for &a in idx {
            for &b in idx {
                if self.structure[a][b].iter().any(|(k, _)| !set.contains(k)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn complement(&self, idx: &[usize]) -> Vec<usize> {
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        (0..self.dim()).filter(|a| !set.contains(a)).collect()
    }

    /// Whether `ad(x)` maps the span of `idx` into itself.
    pub fn ad_preserves(&self, x: &[Q], idx: &[usize]) -> bool {
        let set: BTreeSet<usize> = idx.iter().copied().collect();
        idx.iter().all(|&b| {
            self.bracket(x, &self.unit(b))
                .iter()
                .enumerate()
                .all(|(k, v)| v.is_zero() || set.contains(&k))
        })
    }

    pub fn all_indices(&self) -> Vec<usize> {
        (0..self.dim()).collect()
    }

    pub fn even_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.parity(a) == 0).collect()
    }

    /// Block-diagonal subalgebra for consecutive blocks of the given sizes.
    pub fn levi_indices(&self, blocks: &[usize]) -> Result<Vec<usize>> {
        let nn = self.rank_n();
        if blocks.iter().sum::<usize>() != nn || blocks.contains(&0) {
            return Err(Error::NotInSubalgebra(format!(
                "block sizes {:?} do not partition {}",
                blocks, nn
            )));
        }
        let mut block_of = Vec::new();
        for (b, &s) in blocks.iter().enumerate() {
            block_of.extend(std::iter::repeat_n(b, s));
        }
        Ok((0..self.dim())
            .filter(|&a| match self.basis[a].kind {
                ElementKind::Cartan(_) => true,
                ElementKind::Root { i, j } => block_of[i] == block_of[j],
            })
            .collect())
    }

    /// Evaluates a weight on a Cartan coordinate vector (coordinates over `self.cartan`).
    pub fn eval_weight(&self, lambda: &[Q], hc: &[Q]) -> Q {
        let mut s = Q::zero();
        for (k, c) in hc.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (i, d) in self.cartan_diag[k].iter().enumerate() {
                if !d.is_zero() {
                    s += c * d * &lambda[i];
                }
            }
        }
        s
    }

    /// Evaluates a weight on a full coordinate vector, using only its Cartan part.
    pub fn eval_weight_full(&self, lambda: &[Q], x: &[Q]) -> Q {
        let hc: Vec<Q> = self.cartan.iter().map(|&a| x[a].clone()).collect();
        self.eval_weight(lambda, &hc)
    }

    /// Cartan element `h_ξ` with `B(h_ξ, h) = ξ(h)`, as Cartan coordinates.
    pub fn h_of(&self, xi: &[Q]) -> Vec<Q> {
        let r = self.cartan.len();
        let rhs: Vec<Q> = (0..r)
            .map(|k| {
                let mut e = vec![Q::zero(); r];
                e[k] = Q::one();
                self.eval_weight(xi, &e)
            })
            .collect();
        self.cartan_gram_inv.mul_vec(&rhs)
    }

    pub fn h_of_full(&self, xi: &[Q]) -> Vec<Q> {
        let hc = self.h_of(xi);
        let mut v = vec![Q::zero(); self.dim()];
        for (k, &a) in self.cartan.iter().enumerate() {
            v[a] = hc[k].clone();
        }
        v
    }

    /// The invariant form transported to weights.
    pub fn wform(&self, lambda: &[Q], nu: &[Q]) -> Q {
        self.eval_weight(lambda, &self.h_of(nu))
    }

    pub fn wnorm(&self, lambda: &[Q]) -> Q {
        self.wform(lambda, lambda)
    }

    fn str_vec(&self) -> Weight {
        let (m, n) = (self.spec.m, self.spec.n);
        (0..m + n).map(|k| if k < m { Q::one() } else { -Q::one() }).collect()
    }

    /// Canonical representative of the class of a weight modulo the annihilator of the Cartan.
    pub fn canonical(&self, lambda: &[Q]) -> Weight {
        let (m, n) = (self.spec.m, self.spec.n);
        let s = self.str_vec();
        match self.spec.ty {
            AlgebraType::Gl => lambda.to_vec(),
            AlgebraType::Sl => {
                let tot: Q = lambda.iter().sum();
                let c = tot / q(m as i64 - n as i64);
                lambda.iter().zip(&s).map(|(a, b)| a - &c * b).collect()
            }
            AlgebraType::Psl => {
                let eps: Q = lambda[..m].iter().sum();
                let c = eps / q(m as i64);
                lambda.iter().zip(&s).map(|(a, b)| a - &c * b).collect()
            }
        }
    }

    pub fn same_weight(&self, a: &[Q], b: &[Q]) -> bool {
        self.canonical(a) == self.canonical(b)
    }

    /// Whether a vector of ε/δ coordinates defines a weight of this algebra.
    pub fn check_weight(&self, lambda: &[Q]) -> Result<()> {
        if lambda.len() != self.rank_n() {
            return Err(Error::SchemaError(format!(
                "weight {} has {} coordinates, expected {}",
                fmt_vec(lambda),
                lambda.len(),
                self.rank_n()
            )));
        }
        if self.spec.ty == AlgebraType::Psl && !lambda.iter().sum::<Q>().is_zero() {
            return Err(Error::SchemaError(format!(
                "weight {} does not vanish on the identity, so it is not a weight of {}",
                fmt_vec(lambda),
                self.spec.name()
            )));
        }
        Ok(())
    }

    pub fn positive_roots(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&a| self.is_positive_root(a)).collect()
    }

    pub fn simple_roots(&self) -> Vec<usize> {
        (0..self.rank_n() - 1).map(|k| self.root(k, k + 1)).collect()
    }

    fn half_sum(&self, parity: u8) -> Weight {
        let mut r = vec![Q::zero(); self.rank_n()];
        for a in self.positive_roots() {
            if self.parity(a) == parity {
                for (x, w) in r.iter_mut().zip(&self.basis[a].weight) {
                    *x += w;
                }
            }
        }
        r.iter().map(|x| x / q(2)).collect()
    }

    pub fn rho0(&self) -> Weight {
        self.half_sum(0)
    }

    pub fn rho1(&self) -> Weight {
        self.half_sum(1)
    }

    pub fn rho(&self) -> Weight {
        add(&self.rho0(), &scale(&self.rho1(), &-Q::one()))
    }

    /// Integral dominance for the even part, checked on the coroots of the simple even roots.
    pub fn is_dominant(&self, lambda: &[Q]) -> bool {
        let (m, n) = (self.spec.m, self.spec.n);
        (0..m + n - 1).filter(|&k| k + 1 != m).all(|k| {
            let d = &lambda[k] - &lambda[k + 1];
            d.is_integer() && !d.is_negative()
        }) && n + m > 0
    }

    /// Value of the quadratic Casimir on the simple module of highest weight λ.
    pub fn casimir_value(&self, lambda: &[Q]) -> Q {
        let lr = add(lambda, &self.rho());
        self.wnorm(&lr) - self.wnorm(&self.rho())
    }

    pub fn weyl_group(&self) -> Result<WeylGroup> {
        WeylGroup::new(self.spec.m, self.spec.n)
    }

    /// Odd positive roots orthogonal to λ+ρ.
    pub fn atypical_roots(&self, lambda: &[Q]) -> Vec<usize> {
        let lr = add(lambda, &self.rho());
        self.positive_roots()
            .into_iter()
            .filter(|&a| self.parity(a) == 1 && self.wform(&lr, &self.basis[a].weight).is_zero())
            .collect()
    }

    /// Degree of atypicality with a witness set of mutually orthogonal independent odd roots.
    pub fn atypicality(&self, lambda: &[Q]) -> (usize, Vec<usize>) {
        let cand = self.atypical_roots(lambda);
        self.max_orthogonal_family(&cand)
    }

    /// Largest family of mutually orthogonal odd roots, independent in ε/δ coordinates.
    pub fn max_orthogonal_family(&self, cand: &[usize]) -> (usize, Vec<usize>) {
        let k = cand.len().min(20);
        let mut best: Vec<usize> = Vec::new();
        for mask in 0u32..(1u32 << k) {
            if (mask.count_ones() as usize) <= best.len() {
                continue;
            }
            let set: Vec<usize> = (0..k).filter(|b| mask & (1 << b) != 0).map(|b| cand[b]).collect();
            if self.is_orthogonal_family(&set) {
                best = set;
            }
        }
        (best.len(), best)
    }

    pub fn is_orthogonal_family(&self, set: &[usize]) -> bool {
        for (x, &a) in set.iter().enumerate() {
            for &b in &set[x..] {
                if !self.wform(&self.basis[a].weight, &self.basis[b].weight).is_zero() {
                    return false;
                }
            }
        }
        let vecs: Vec<Vec<Q>> = set.iter().map(|&a| self.basis[a].weight.clone()).collect();
        independent_subset(&vecs).len() == set.len()
    }

    pub fn defect(&self) -> usize {
        self.spec.m.min(self.spec.n)
    }

    /// Simple factors of the even part, and a basis of the centre of its Cartan.
    pub fn even_factors(&self) -> (Vec<EvenFactor>, Vec<Vec<Q>>) {
        let (m, n) = (self.spec.m, self.spec.n);
        let mut factors = Vec::new();
        let mut used = Vec::new();
        for (lo, hi) in [(0, m), (m, m + n)] {
            if hi - lo < 2 {
                continue;
            }
            let roots: Vec<usize> = (0..self.dim())
                .filter(|&a| matches!(self.root_ij(a), Some((i, j)) if i >= lo && i < hi && j >= lo && j < hi))
                .collect();
            let cartan: Vec<Vec<Q>> = (lo..hi - 1)
                .map(|k| {
                    let v = self
                        .coords_of_gl_matrix(&diag_matrix(self.rank_n(), k, k + 1))
                        .expect("block coroot");
                    self.cartan.iter().map(|&a| v[a].clone()).collect()
                })
                .collect();
            used.extend(cartan.iter().cloned());
            factors.push(EvenFactor { roots, cartan });
        }
        let r = self.cartan.len();
        let mut centre = Vec::new();
        if used.len() < r {
            let mut g = Matrix::zeros(used.len().max(1), r);
            for (x, u) in used.iter().enumerate() {
                for y in 0..r {
                    let s: Q = u
                        .iter()
                        .zip(&self.cartan)
                        .map(|(uk, &ck)| uk * self.form.get(ck, self.cartan[y]))
                        .sum();
                    g.set(x, y, s);
                }
            }
            centre = if used.is_empty() {
                Matrix::zeros(1, r).kernel()
            } else {
                g.kernel()
            };
        }
        (factors, centre)
    }

    /// Runs structural validation: antisymmetry, Jacobi, form symmetry, invariance, nondegeneracy.
    pub fn validate(&self) -> Vec<CheckResult> {
        let d = self.dim();
        let mut out = Vec::new();
        let sgn = |a: usize, b: usize| {
            if self.parity(a) * self.parity(b) == 1 {
                -Q::one()
            } else {
                Q::one()
            }
        };
        let mut fail = None;
        'a: for a in 0..d {
            for b in 0..d {
                let ab = self.dense(&self.structure[a][b]);
                let ba = self.dense(&self.structure[b][a]);
                let s = sgn(a, b);
                if ab.iter().zip(&ba).any(|(x, y)| x + &s * y != Q::zero()) {
                    fail = Some(format!("[{},{}]", self.label(a), self.label(b)));
                    break 'a;
                }
            }
        }
        out.push(CheckResult::new("super-antisymmetry", fail));
        let mut fail = None;
        'j: for a in 0..d {
            for b in 0..d {
                for c in 0..d {
                    let lhs = self.bracket_sparse(&[(a, Q::one())], &self.structure[b][c]);
                    let r1 = self.bracket_sparse(&self.structure[a][b], &[(c, Q::one())]);
                    let r2 = self.bracket_sparse(&[(b, Q::one())], &self.structure[a][c]);
                    let s = sgn(a, b);
                    if lhs.iter().zip(r1.iter().zip(&r2)).any(|(l, (x, y))| *l != x + &s * y) {
                        fail = Some(format!("({},{},{})", self.label(a), self.label(b), self.label(c)));
                        break 'j;
                    }
                }
            }
        }
        out.push(CheckResult::new("jacobi", fail));
        let mut fail = None;
        'f: for a in 0..d {
            for b in 0..d {
                let x = self.form.get(a, b);
                if *x != sgn(a, b) * self.form.get(b, a) || (self.parity(a) != self.parity(b) && !x.is_zero()) {
                    fail = Some(format!("B({},{})", self.label(a), self.label(b)));
                    break 'f;
                }
            }
        }
        out.push(CheckResult::new("form-supersymmetric-even", fail));
        let mut fail = None;
        'i: for a in 0..d {
            for b in 0..d {
                let ab = self.dense(&self.structure[a][b]);
                for c in 0..d {
                    let bc = self.dense(&self.structure[b][c]);
                    if self.b(&ab, &self.unit(c)) != self.b(&self.unit(a), &bc) {
                        fail = Some(format!("({},{},{})", self.label(a), self.label(b), self.label(c)));
                        break 'i;
                    }
                }
            }
        }
        out.push(CheckResult::new("form-invariance", fail));
        let fail = if self.form.rank() == d {
            None
        } else {
            Some("rank deficient".into())
        };
        out.push(CheckResult::new("form-nondegenerate", fail));
        out
    }
}

fn diag_matrix(nn: usize, a: usize, b: usize) -> Matrix {
    let mut d = Matrix::zeros(nn, nn);
    d.set(a, a, Q::one());
    d.set(b, b, -Q::one());
    d
}

fn sparse_mat_mul(a: &BTreeMap<(usize, usize), Q>, b: &BTreeMap<(usize, usize), Q>) -> BTreeMap<(usize, usize), Q> {
    let mut out: BTreeMap<(usize, usize), Q> = BTreeMap::new();
    for ((i, k), x) in a {
        for ((k2, j), y) in b {
            if k == k2 {
                *out.entry((*i, *j)).or_insert_with(Q::zero) += x * y;
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(a: &[Q], c: &Q) -> Vec<Q> {
    a.iter().map(|x| x * c).collect()
}

/// Weyl group of the even part: independent permutations of the ε and δ coordinates.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub m: usize,
    pub n: usize,
    pub elements: Vec<Vec<usize>>,
}

pub const MAX_WEYL_ORDER: usize = 50_000;

impl WeylGroup {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        let order = (1..=m).product::<usize>() * (1..=n).product::<usize>();
        if order > MAX_WEYL_ORDER {
            return Err(Error::GroupTooLarge(order));
        }
        let pm = permutations(m);
        let pn = permutations(n);
        let mut elements = Vec::with_capacity(order);
        for a in &pm {
            for b in &pn {
                let mut w: Vec<usize> = a.clone();
                w.extend(b.iter().map(|x| x + m));
                elements.push(w);
            }
        }
        Ok(WeylGroup { m, n, elements })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn act(&self, w: &[usize], lambda: &[Q]) -> Weight {
        let mut out = vec![Q::zero(); lambda.len()];
        for (i, &t) in w.iter().enumerate() {
            out[t] = lambda[i].clone();
        }
        out
    }

    /// Sign `(-1)^{ℓ(w)}` via inversions.
    pub fn sign(&self, w: &[usize]) -> i32 {
        let mut inv = 0;
        for i in 0..w.len() {
            for j in i + 1..w.len() {
                if w[i] > w[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Distinct images of λ, deduplicated by the given canonicalisation.
    pub fn orbit(&self, lambda: &[Q], canon: impl Fn(&[Q]) -> Weight) -> Vec<Weight> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for w in &self.elements {
            let img = canon(&self.act(w, lambda));
            if seen.insert(img.clone()) {
                out.push(img);
            }
        }
        out
    }
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}
