use crate::algebra::{add, sub, CheckResult, ElementKind, LieSuperalgebra, Weight};
use crate::error::{Error, Result};
use crate::fock::height;
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::{fmt_vec, to_i64, Q};
use num_traits::{One, Zero};
use std::collections::{BTreeMap, BTreeSet, HashMap};

/// Sparse matrix stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub nrows: usize,
    pub cols: Vec<Vec<(usize, Q)>>,
}

impl SparseMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        SparseMat {
            nrows,
            cols: vec![Vec::new(); ncols],
        }
    }

    pub fn ncols(&self) -> usize {
        self.cols.len()
    }

    pub fn push(&mut self, row: usize, col: usize, v: Q) {
        if !v.is_zero() {
            self.cols[col].push((row, v));
        }
    }

    pub fn apply(&self, v: &[Q]) -> Vec<Q> {
        let mut out = vec![Q::zero(); self.nrows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, a) in &self.cols[j] {
                out[*i] += a * x;
            }
        }
        out
    }

    pub fn to_dense(&self) -> Matrix {
        let mut m = Matrix::zeros(self.nrows, self.ncols());
        for (j, col) in self.cols.iter().enumerate() {
            for (i, a) in col {
                m.add_at(*i, j, a);
            }
        }
        m
    }

    pub fn from_dense(m: &Matrix) -> Self {
        let mut s = SparseMat::zeros(m.rows, m.cols);
        for j in 0..m.cols {
            for i in 0..m.rows {
                s.push(i, j, m.get(i, j).clone());
            }
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.iter().all(|(_, v)| v.is_zero()))
    }
}

/// Finite-dimensional weight module, with the action of every basis element of an algebra.
#[derive(Clone, Debug)]
pub struct WeightModule {
    pub weights: Vec<Weight>,
    pub parity: Vec<u8>,
    pub actions: Vec<SparseMat>,
    pub highest_weight: Option<Weight>,
}

/// Default bound on the number of weight spaces when building a simple module.
pub const MAX_WEIGHTS: usize = 20_000;

struct WSpace {
    dim: usize,
    raise: HashMap<(usize, usize), Matrix>,
    lower_from: HashMap<(usize, usize), Matrix>,
}

fn gl_parity(i: usize, j: usize, m: usize) -> u8 {
    u8::from((i < m) != (j < m))
}

fn sgn(p: u8) -> Q {
    if p.is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

fn root_weight(nn: usize, i: usize, j: usize) -> Weight {
    let mut w = vec![Q::zero(); nn];
    w[i] += Q::one();
    w[j] -= Q::one();
    w
}

struct Builder {
    nn: usize,
    m: usize,
    spaces: HashMap<Weight, WSpace>,
}

impl Builder {
    fn dim(&self, w: &Weight) -> usize {
        self.spaces.get(w).map_or(0, |s| s.dim)
    }

    /// Applies `E_ij` to the columns of `vecs` in the weight space `src`.
    fn apply_root(&self, src: &Weight, vecs: &Matrix, i: usize, j: usize) -> Option<(Weight, Matrix)> {
        if i == j {
            return Some((src.clone(), vecs.scale(&src[i])));
        }
        let target = add(src, &root_weight(self.nn, i, j));
        if self.dim(&target) == 0 {
            return None;
        }
        let map = if i < j {
            self.spaces.get(src)?.raise.get(&(i, j))?
        } else {
            self.spaces.get(&target)?.lower_from.get(&(j, i))?
        };
        Some((target, map.mul(vecs)))
    }

    fn build_space(&mut self, mu: &Weight) -> Result<()> {
        let nn = self.nn;
        let m = self.m;
        let mut cand_src: Vec<((usize, usize), usize)> = Vec::new();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        let simple_targets: Vec<(usize, Weight, usize)> = (0..nn - 1)
            .map(|k| {
                let t = add(mu, &root_weight(nn, k, k + 1));
                let d = self.dim(&t);
                (k, t, d)
            })
            .collect();
        for i in 0..nn {
            for j in i + 1..nn {
                let src = add(mu, &root_weight(nn, i, j));
                let ds = self.dim(&src);
                if ds == 0 {
                    continue;
                }
                let id = Matrix::identity(ds);
                let mut blocks: Vec<Matrix> = Vec::new();
                for (k, t, dt) in &simple_targets {
                    let k = *k;
                    let mut acc = Matrix::zeros(*dt, ds);
                    if *dt > 0 {
                        let pk = gl_parity(k, k + 1, m);
                        let pji = gl_parity(j, i, m);
                        if j == k + 1 {
                            if let Some((w, r)) = self.apply_root(&src, &id, k, i) {
                                debug_assert_eq!(&w, t);
                                acc = acc.add(&r);
                            }
                        }
                        if i == k {
                            if let Some((w, r)) = self.apply_root(&src, &id, j, k + 1) {
                                debug_assert_eq!(&w, t);
                                acc = acc.sub(&r.scale(&sgn(pk * pji)));
                            }
                        }
                        if let Some((w1, r1)) = self.apply_root(&src, &id, k, k + 1) {
                            if let Some((w2, r2)) = self.apply_root(&w1, &r1, j, i) {
                                debug_assert_eq!(&w2, t);
                                acc = acc.add(&r2.scale(&sgn(pk * pji)));
                            }
                        }
                    }
                    blocks.push(acc);
                }
                for c in 0..ds {
                    let mut row = Vec::new();
                    for b in &blocks {
                        row.extend(b.col(c));
                    }
                    rows.push(row);
                    cand_src.push(((i, j), c));
                }
            }
        }
        let basis = independent_subset(&rows);
        let dim = basis.len();
        let mut space = WSpace {
            dim,
            raise: HashMap::new(),
            lower_from: HashMap::new(),
        };
        if dim == 0 {
            self.spaces.insert(mu.clone(), space);
            return Ok(());
        }
        let basis_rows = Matrix::from_cols(
            &basis.iter().map(|&b| rows[b].clone()).collect::<Vec<_>>(),
            rows[0].len(),
        );
        let mut lower: BTreeMap<(usize, usize), Matrix> = BTreeMap::new();
        for (idx, ((i, j), c)) in cand_src.iter().enumerate() {
            let coords = basis_rows.solve(&rows[idx]).ok_or_else(|| {
                Error::VerificationFailure(format!("candidate at {} outside the span of its basis", fmt_vec(mu)))
            })?;
            let src = add(mu, &root_weight(nn, *i, *j));
            let ds = self.dim(&src);
            let entry = lower.entry((*i, *j)).or_insert_with(|| Matrix::zeros(dim, ds));
            for (r, v) in coords.into_iter().enumerate() {
                entry.set(r, *c, v);
            }
        }
        space.lower_from = lower.into_iter().collect();
        let mut offset = 0;
        for (k, _, dt) in &simple_targets {
            if *dt > 0 {
                let mut r = Matrix::zeros(*dt, dim);
                for (bcol, &b) in basis.iter().enumerate() {
                    for x in 0..*dt {
                        r.set(x, bcol, rows[b][offset + x].clone());
                    }
                }
                space.raise.insert((*k, *k + 1), r);
            }
            offset += dt;
        }
        self.spaces.insert(mu.clone(), space);
        self.fill_nonsimple_raising(mu);
        Ok(())
    }

    fn fill_nonsimple_raising(&mut self, mu: &Weight) {
        let nn = self.nn;
        let m = self.m;
        let dim = self.dim(mu);
        let id = Matrix::identity(dim);
        for len in 2..nn {
            for i in 0..nn - len {
                let j = i + len;
                let target = add(mu, &root_weight(nn, i, j));
                let dt = self.dim(&target);
                if dt == 0 {
                    continue;
                }
                let mut acc = Matrix::zeros(dt, dim);
                if let Some((w1, r1)) = self.apply_root(mu, &id, i + 1, j) {
                    if let Some((_, r2)) = self.apply_root(&w1, &r1, i, i + 1) {
                        acc = acc.add(&r2);
                    }
                }
                if let Some((w1, r1)) = self.apply_root(mu, &id, i, i + 1) {
                    if let Some((_, r2)) = self.apply_root(&w1, &r1, i + 1, j) {
                        acc = acc.sub(&r2.scale(&sgn(gl_parity(i, i + 1, m) * gl_parity(i + 1, j, m))));
                    }
                }
                self.spaces.get_mut(mu).unwrap().raise.insert((i, j), acc);
            }
        }
    }
}

impl WeightModule {
    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    /// The simple module of highest weight Λ (ε/δ coordinates of the gl(m|n) lift).
    pub fn simple(alg: &LieSuperalgebra, lambda: &[Q]) -> Result<Self> {
        Self::simple_bounded(alg, lambda, MAX_WEIGHTS)
    }

    pub fn simple_bounded(alg: &LieSuperalgebra, lambda: &[Q], max_weights: usize) -> Result<Self> {
        alg.check_weight(lambda)?;
        if !alg.is_dominant(lambda) {
            return Err(Error::NotDominant(format!(
                "{} is not dominant integral for the even part",
                fmt_vec(lambda)
            )));
        }
        let nn = alg.rank_n();
        let m = alg.spec.m;
        let mut b = Builder {
            nn,
            m,
            spaces: HashMap::new(),
        };
        let top = lambda.to_vec();
        b.spaces.insert(
            top.clone(),
            WSpace {
                dim: 1,
                raise: HashMap::new(),
                lower_from: HashMap::new(),
            },
        );
        let mut order = vec![top.clone()];
        let mut queue: BTreeSet<(Q, Weight)> = BTreeSet::new();
        let push_children = |w: &Weight, queue: &mut BTreeSet<(Q, Weight)>| {
            for i in 0..nn {
                for j in i + 1..nn {
                    let c = sub(w, &root_weight(nn, i, j));
                    queue.insert((-height(&c), c));
                }
            }
        };
        push_children(&top, &mut queue);
        while let Some((_, mu)) = queue.pop_first() {
            if b.spaces.contains_key(&mu) {
                continue;
            }
            b.build_space(&mu)?;
            if b.dim(&mu) > 0 {
                order.push(mu.clone());
                if order.len() > max_weights {
                    return Err(Error::PolytopeOverflow(max_weights));
                }
                push_children(&mu, &mut queue);
            }
        }
        let mut offset: HashMap<Weight, usize> = HashMap::new();
        let mut weights = Vec::new();
        let mut parity = Vec::new();
        for w in &order {
            offset.insert(w.clone(), weights.len());
            let diff = sub(lambda, w);
            let odd: Q = diff[m..].iter().sum();
            let p = to_i64(&odd).unwrap_or(0).rem_euclid(2) as u8;
            for _ in 0..b.dim(w) {
                weights.push(w.clone());
                parity.push(p);
            }
        }
        let total = weights.len();
        let mut gl_actions: HashMap<(usize, usize), SparseMat> = HashMap::new();
        for i in 0..nn {
            for j in 0..nn {
                if i == j {
                    continue;
                }
                let mut sm = SparseMat::zeros(total, total);
                for w in &order {
                    let d = b.dim(w);
                    let id = Matrix::identity(d);
                    if let Some((t, r)) = b.apply_root(w, &id, i, j) {
                        let (o_src, o_tgt) = (offset[w], offset[&t]);
                        for c in 0..d {
                            for rr in 0..r.rows {
                                sm.push(o_tgt + rr, o_src + c, r.get(rr, c).clone());
                            }
                        }
                    }
                }
                gl_actions.insert((i, j), sm);
            }
        }
        let mut actions = Vec::with_capacity(alg.dim());
        for be in &alg.basis {
            match &be.kind {
                ElementKind::Root { i, j } => actions.push(gl_actions.remove(&(*i, *j)).unwrap()),
                ElementKind::Cartan(k) => {
                    let mut sm = SparseMat::zeros(total, total);
                    for (v, w) in weights.iter().enumerate() {
                        let mut s = Q::zero();
                        for (x, d) in w.iter().zip(&alg.cartan_diag[*k]) {
                            s += x * d;
                        }
                        sm.push(v, v, s);
                    }
                    actions.push(sm);
                }
            }
        }
        Ok(WeightModule {
            weights,
            parity,
            actions,
            highest_weight: Some(lambda.to_vec()),
        })
    }

    /// The trivial one-dimensional module.
    pub fn trivial(alg: &LieSuperalgebra) -> Self {
        WeightModule {
            weights: vec![vec![Q::zero(); alg.rank_n()]],
            parity: vec![0],
            actions: vec![SparseMat::zeros(1, 1); alg.dim()],
            highest_weight: Some(vec![Q::zero(); alg.rank_n()]),
        }
    }

    /// The adjoint module, with the algebra basis as module basis.
    pub fn adjoint(alg: &LieSuperalgebra) -> Self {
        let d = alg.dim();
        let actions = (0..d)
            .map(|a| {
                let mut sm = SparseMat::zeros(d, d);
                for b in 0..d {
                    for (k, v) in alg.bracket_basis(a, b) {
                        sm.push(*k, b, v.clone());
                    }
                }
                sm
            })
            .collect();
        WeightModule {
            weights: alg.basis.iter().map(|b| b.weight.clone()).collect(),
            parity: alg.basis.iter().map(|b| b.parity).collect(),
            actions,
            highest_weight: None,
        }
    }

    /// Action of a general element given by coordinates.
    pub fn action(&self, x: &[Q]) -> SparseMat {
        let d = self.dim();
        let mut dense = Matrix::zeros(d, d);
        for (a, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (j, col) in self.actions[a].cols.iter().enumerate() {
                for (i, v) in col {
                    dense.add_at(*i, j, &(v * c));
                }
            }
        }
        SparseMat::from_dense(&dense)
    }

    /// Checks `ρ([a, b]) = ρ(a)ρ(b) - (-1)^{p(a)p(b)} ρ(b)ρ(a)` on all basis pairs.
    pub fn check_representation(&self, alg: &LieSuperalgebra) -> CheckResult {
        let dense: Vec<Matrix> = self.actions.iter().map(|s| s.to_dense()).collect();
        for a in 0..alg.dim() {
            for b in 0..alg.dim() {
                let lhs = self.action(&alg.dense(alg.bracket_basis(a, b))).to_dense();
                let s = sgn(alg.parity(a) * alg.parity(b));
                let rhs = dense[a].mul(&dense[b]).sub(&dense[b].mul(&dense[a]).scale(&s));
                if lhs != rhs {
                    return CheckResult::new("module-bracket", Some(format!("[{},{}]", alg.label(a), alg.label(b))));
                }
            }
        }
        for (a, be) in alg.basis.iter().enumerate() {
            for (j, col) in self.actions[a].cols.iter().enumerate() {
                for (i, _) in col {
                    if add(&self.weights[j], &be.weight) != self.weights[*i]
                        || (self.parity[j] ^ be.parity) != self.parity[*i]
                    {
                        return CheckResult::new(
                            "module-grading",
                            Some(format!("{} on basis vector {}", alg.label(a), j)),
                        );
                    }
                }
            }
        }
        CheckResult::new("module-bracket", None)
    }

    /// Weight multiplicities split by parity.
    pub fn character(&self) -> BTreeMap<Weight, (usize, usize)> {
        let mut out: BTreeMap<Weight, (usize, usize)> = BTreeMap::new();
        for (w, p) in self.weights.iter().zip(&self.parity) {
            let e = out.entry(w.clone()).or_insert((0, 0));
            if *p == 0 {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        out
    }

    pub fn sdim(&self) -> i64 {
        self.parity.iter().map(|&p| if p == 0 { 1 } else { -1 }).sum()
    }

    /// Indices of basis vectors of a given weight.
    pub fn indices_of_weight(&self, w: &[Q]) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.weights[i] == w).collect()
    }

    pub fn distinct_weights(&self) -> Vec<Weight> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for w in &self.weights {
            if seen.insert(w.clone()) {
                out.push(w.clone());
            }
        }
        out
    }

    /// Vectors annihilated by all the given raising operators, grouped by weight.
    pub fn singular_vectors(&self, raising: &[usize]) -> Vec<(Weight, Vec<Vec<Q>>)> {
        let mut out = Vec::new();
        for w in self.distinct_weights() {
            let idx = self.indices_of_weight(&w);
            let mut maps = Vec::new();
            for &a in raising {
                let mut m = Matrix::zeros(self.dim(), idx.len());
                for (c, &j) in idx.iter().enumerate() {
                    for (i, v) in &self.actions[a].cols[j] {
                        m.set(*i, c, v.clone());
                    }
                }
                maps.push(m);
            }
            let refs: Vec<&Matrix> = maps.iter().collect();
            let ker = crate::linalg::joint_kernel(&refs, idx.len());
            if !ker.is_empty() {
                let full: Vec<Vec<Q>> = ker
                    .into_iter()
                    .map(|k| {
                        let mut v = vec![Q::zero(); self.dim()];
                        for (c, &j) in idx.iter().enumerate() {
                            v[j] = k[c].clone();
                        }
                        v
                    })
                    .collect();
                out.push((w, full));
            }
        }
        out
    }

    /// Highest weights of the even-part constituents with multiplicities.
    pub fn even_decomposition(&self, alg: &LieSuperalgebra) -> Vec<(Weight, usize)> {
        let raising: Vec<usize> = alg
            .positive_roots()
            .into_iter()
            .filter(|&a| alg.parity(a) == 0)
            .collect();
        self.singular_vectors(&raising)
            .into_iter()
            .map(|(w, v)| (w, v.len()))
            .collect()
    }

    /// Graded tensor product with the Koszul sign on the second factor.
    pub fn tensor(&self, other: &WeightModule, alg: &LieSuperalgebra) -> WeightModule {
        let (d1, d2) = (self.dim(), other.dim());
        let total = d1 * d2;
        let mut weights = Vec::with_capacity(total);
        let mut parity = Vec::with_capacity(total);
        for i in 0..d1 {
            for j in 0..d2 {
                weights.push(add(&self.weights[i], &other.weights[j]));
                parity.push(self.parity[i] ^ other.parity[j]);
            }
        }
        let mut actions = Vec::with_capacity(self.actions.len());
        for (a, (x1, x2)) in self.actions.iter().zip(&other.actions).enumerate() {
            let px = alg.parity(a);
            let mut sm = SparseMat::zeros(total, total);
            for i in 0..d1 {
                for j in 0..d2 {
                    let col = i * d2 + j;
                    for (r, v) in &x1.cols[i] {
                        sm.push(r * d2 + j, col, v.clone());
                    }
                    let s = sgn(px * self.parity[i]);
                    for (r, v) in &x2.cols[j] {
                        sm.push(i * d2 + r, col, &s * v);
                    }
                }
            }
            actions.push(sm);
        }
        WeightModule {
            weights,
            parity,
            actions,
            highest_weight: None,
        }
    }

    pub fn direct_sum(&self, other: &WeightModule) -> WeightModule {
        let (d1, d2) = (self.dim(), other.dim());
        let mut weights = self.weights.clone();
        weights.extend(other.weights.iter().cloned());
        let mut parity = self.parity.clone();
        parity.extend(other.parity.iter().copied());
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(x1, x2)| {
                let mut sm = SparseMat::zeros(d1 + d2, d1 + d2);
                for (j, col) in x1.cols.iter().enumerate() {
                    for (i, v) in col {
                        sm.push(*i, j, v.clone());
                    }
                }
                for (j, col) in x2.cols.iter().enumerate() {
                    for (i, v) in col {
                        sm.push(d1 + i, d1 + j, v.clone());
                    }
                }
                sm
            })
            .collect();
        WeightModule {
            weights,
            parity,
            actions,
            highest_weight: None,
        }
    }
}

/// Weyl dimension formula for sl(n) or gl(n) highest weights in ε coordinates.
pub fn weyl_dimension(lambda: &[Q]) -> Q {
    let n = lambda.len();
    let mut num = Q::one();
    let mut den = Q::one();
    for i in 0..n {
        for j in i + 1..n {
            num *= &lambda[i] - &lambda[j] + Q::from_integer(((j - i) as i64).into());
            den *= Q::from_integer(((j - i) as i64).into());
        }
    }
    num / den
}
