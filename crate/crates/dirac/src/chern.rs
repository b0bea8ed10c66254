use crate::cohomology::graded_cohomology;
use crate::dirac::DiracOperator;
use crate::space::Block;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};
use std::collections::BTreeMap;
use superdirac_core::algebra::Weight;
use superdirac_core::linalg::Matrix;
use superdirac_core::scalar::{factorial, fmt_vec, ser};
use superdirac_core::{Error, Result, Q};

/// Truncated power series in one variable `u_j` per Cartan basis element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanSeries {
    pub variables: usize,
    pub order: u32,
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl Serialize for CartanSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term<'a> {
            multidegree: &'a [u32],
            num: String,
            den: String,
        }
        #[derive(Serialize)]
        struct Out<'a> {
            variables: usize,
            truncation: u32,
            terms: Vec<Term<'a>>,
        }
        let terms = self
            .terms
            .iter()
            .map(|(d, c)| Term {
                multidegree: d,
                num: c.numer().to_string(),
                den: c.denom().to_string(),
            })
            .collect();
        Out {
            variables: self.variables,
            truncation: self.order,
            terms,
        }
        .serialize(s)
    }
}

impl CartanSeries {
    pub fn zero(variables: usize, order: u32) -> Self {
        CartanSeries {
            variables,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(variables: usize, order: u32, c: Q) -> Self {
        let mut s = Self::zero(variables, order);
        if !c.is_zero() {
            s.terms.insert(vec![0; variables], c);
        }
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, degree: &[u32]) -> Q {
        self.terms.get(degree).cloned().unwrap_or_else(Q::zero)
    }

    fn insert(&mut self, d: Vec<u32>, c: Q) {
        if d.iter().sum::<u32>() > self.order {
            return;
        }
        let e = self.terms.entry(d).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add(&self, other: &CartanSeries) -> CartanSeries {
        let mut out = self.clone();
        for (d, c) in &other.terms {
            out.insert(d.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Q) -> CartanSeries {
        let mut out = Self::zero(self.variables, self.order);
        for (d, v) in &self.terms {
            out.insert(d.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &CartanSeries) -> CartanSeries {
        let mut out = Self::zero(self.variables, self.order.min(other.order));
        for (d1, c1) in &self.terms {
            for (d2, c2) in &other.terms {
                let d: Vec<u32> = d1.iter().zip(d2).map(|(a, b)| a + b).collect();
                out.insert(d, c1 * c2);
            }
        }
        out
    }

    /// `exp(Σ_j c_j u_j)` truncated at `order`.
    pub fn exp_linear(coeffs: &[Q], order: u32) -> CartanSeries {
        let n = coeffs.len();
        let mut lin = Self::zero(n, order);
        for (j, c) in coeffs.iter().enumerate() {
            let mut d = vec![0; n];
            d[j] = 1;
            lin.insert(d, c.clone());
        }
        let mut out = Self::constant(n, order, Q::one());
        let mut power = Self::constant(n, order, Q::one());
        for k in 1..=order {
            power = power.mul(&lin);
            if power.is_zero() {
                break;
            }
            out = out.add(&power.scale(&(Q::one() / factorial(k))));
        }
        out
    }
}

/// Kernel of `D` on one weight block, with its parity split.
#[derive(Clone, Debug, Serialize)]
pub struct KernelLine {
    #[serde(serialize_with = "ser::vec")]
    pub weight: Weight,
    pub dims: [usize; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct ChernReport {
    pub kernel: Vec<KernelLine>,
    pub series: CartanSeries,
    pub certified: bool,
}

/// One eigenvalue of `D²` with the superdimension of its eigenspace.
#[derive(Clone, Debug, Serialize)]
pub struct Eigenblock {
    #[serde(serialize_with = "ser::q")]
    pub eigenvalue: Q,
    pub dims: [usize; 2],
    pub sdim: i64,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeatReport {
    pub eigenblocks: Vec<Eigenblock>,
    pub all_zero: bool,
}

impl DiracOperator {
    /// `μ(h^j)` for the `B`-dual Cartan basis `h^j`.
    pub fn dual_cartan_values(&self, mu: &[Q]) -> Result<Vec<Q>> {
        let duals = self.alg.dual_basis(&self.alg.cartan)?;
        Ok(duals.iter().map(|h| self.alg.eval_weight_full(mu, h)).collect())
    }

    fn kernel_weight_check(&self, b: &Block, kernel: &[Vec<Q>]) -> Result<()> {
        for &a in &self.alg.cartan {
            let j = self.space.matrix(&self.j_basis(a)?, b, b)?;
            let mu = self.alg.eval_weight_full(&b.weight, &self.alg.unit(a));
            for v in kernel {
                let jv = j.mul_vec(v);
                if jv.iter().zip(v).any(|(x, y)| *x != &mu * y) {
                    return Err(Error::KernelNotWeightDiagonal(format!(
                        "{} does not act by a scalar on the kernel at {}",
                        self.alg.label(a),
                        fmt_vec(&b.weight)
                    )));
                }
            }
        }
        Ok(())
    }

    fn kernel_lines(&self, weights: &[Weight]) -> Result<Vec<KernelLine>> {
        let mut out = Vec::new();
        for w in weights {
            let b = self.space.block(w);
            if b.dim() == 0 {
                continue;
            }
            let d = self.d_matrix(&b)?;
            let kernel = d.kernel();
            if kernel.is_empty() {
                continue;
            }
            self.kernel_weight_check(&b, &kernel)?;
            let mut split = [Vec::new(), Vec::new()];
            for (k, &p) in b.parity.iter().enumerate() {
                split[p as usize].push(k);
            }
            let (ker, _) = graded_cohomology(&d, &split)?;
            out.push(KernelLine {
                weight: w.clone(),
                dims: ker,
            });
        }
        Ok(out)
    }

    fn series_of(&self, lines: &[KernelLine], order: u32) -> Result<CartanSeries> {
        let n = self.alg.cartan.len();
        let mut s = CartanSeries::zero(n, order);
        for line in lines {
            let e = CartanSeries::exp_linear(&self.dual_cartan_values(&line.weight)?, order);
            let signed = line.dims[0] as i64 - line.dims[1] as i64;
            s = s.add(&e.scale(&Q::from_integer(signed.into())));
        }
        Ok(s)
    }

    /// `str_{ker D} exp(F)`: the parity-signed exponential sum over the weights of `ker D`.
    pub fn chern_series(&self, order: u32, max_poly: u32) -> Result<ChernReport> {
        let search = self.candidate_search(max_poly)?;
        let kernel = self.kernel_lines(&search.weights)?;
        let series = self.series_of(&kernel, order)?;
        Ok(ChernReport {
            kernel,
            series,
            certified: search.certified,
        })
    }

    /// Superdimensions of the eigenspaces of `D²` on a finite-dimensional `M ⊗ M̄(p)`.
    pub fn heat_supertrace(&self) -> Result<HeatReport> {
        let f = &self.space.fock;
        if (0..f.nbar).any(|g| f.cw.parity[g] == 1) {
            return Err(Error::UnsupportedAlgebra(
                "the oscillator module is infinite-dimensional".into(),
            ));
        }
        let mut by_value: BTreeMap<Q, [usize; 2]> = BTreeMap::new();
        for w in self.space.weights_up_to(0) {
            let b = self.space.block(&w);
            if b.dim() == 0 {
                continue;
            }
            let d2: Matrix = self.d_squared(&b)?;
            let lambda = d2
                .as_scalar()
                .ok_or_else(|| Error::VerificationFailure(format!("D² is not scalar on the block {}", fmt_vec(&w))))?;
            let e = by_value.entry(lambda).or_insert([0, 0]);
            for &p in &b.parity {
                e[p as usize] += 1;
            }
        }
        let eigenblocks: Vec<Eigenblock> = by_value
            .into_iter()
            .map(|(eigenvalue, dims)| Eigenblock {
                eigenvalue,
                dims,
                sdim: dims[0] as i64 - dims[1] as i64,
            })
            .collect();
        let all_zero = eigenblocks.iter().all(|e| e.sdim == 0);
        Ok(HeatReport { eigenblocks, all_zero })
    }
}
