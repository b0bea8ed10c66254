use crate::dirac::DiracOperator;
use crate::space::{all_monomials, Block};
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::collections::BTreeSet;
use superdirac_core::algebra::{add, scale, Weight};
use superdirac_core::linalg::{intersection_dim, Matrix};
use superdirac_core::scalar::{fmt_vec, q, ser, to_i64};
use superdirac_core::{Error, Result, Q};

/// Largest polynomial degree the candidate search will enumerate.
pub const MAX_SEARCH_DEGREE: u32 = 40;

/// Weights of the blocks where `D²` is singular, found by enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct CandidateSearch {
    #[serde(serialize_with = "ser::vecs")]
    pub weights: Vec<Weight>,
    pub searched_poly_degree: u32,
    /// Whether no singular block exists beyond the searched degree.
    pub certified: bool,
    pub note: String,
}

/// Generalized eigenvalues of `D²` on a weight `ν` lie among
/// `constant - ‖ν + γ + ρ_l‖²` for `γ` in `gammas`.
struct Branches {
    gammas: Vec<Weight>,
    rho_l: Weight,
    constant: Q,
}

enum Tail {
    Bounded(u32),
    Infinite(Vec<Vec<u32>>),
    Unknown,
}

fn branches(op: &DiracOperator) -> Option<Branches> {
    let alg = &op.alg;
    let c = op.casimir_scalar()?;
    let roots: Vec<usize> = op.l.iter().copied().filter(|&a| alg.root_ij(a).is_some()).collect();
    let mut used = BTreeSet::new();
    let mut positive = Vec::new();
    for &a in &roots {
        let (i, j) = alg.root_ij(a)?;
        if alg.parity(a) == 0 || !op.l.contains(&alg.root(j, i)) {
            return None;
        }
        if i < j {
            if !used.insert(i) || !used.insert(j) {
                return None;
            }
            positive.push(alg.basis[a].weight.clone());
        }
    }
    let nn = alg.rank_n();
    let mut rho_l = vec![Q::zero(); nn];
    for w in &positive {
        rho_l = add(&rho_l, &scale(w, &Q::new((-1).into(), 2.into())));
    }
    let mut gammas = vec![vec![Q::zero(); nn]];
    for w in &positive {
        let more: Vec<Weight> = gammas.iter().map(|g| add(g, w)).collect();
        gammas.extend(more);
    }
    let constant = c + &op.kappa + alg.wnorm(&rho_l);
    Some(Branches {
        gammas,
        rho_l,
        constant,
    })
}

/// A common denominator of two rationals.
fn common_den(a: &Q, b: &Q) -> Q {
    Q::from_integer(a.denom() * b.denom())
}

fn nonneg_int(x: &Q) -> Option<u32> {
    if x.is_integer() && !x.is_negative() {
        to_i64(x).and_then(|v| u32::try_from(v).ok())
    } else {
        None
    }
}

fn ceil_u32(x: &Q) -> u32 {
    to_i64(&x.ceil()).map_or(u32::MAX, |v| v.clamp(0, i64::from(u32::MAX)) as u32)
}

/// Zeros of `c0 + l1 n1` or `c0 + l1 n1 + l2 n2 + q n1 n2` over nonnegative integers.
fn tail(c0: &Q, l: &[Q], qq: &Q) -> Tail {
    match l.len() {
        0 => Tail::Bounded(0),
        1 => {
            if !l[0].is_zero() {
                Tail::Bounded(ceil_u32(&(c0 / &l[0]).abs()))
            } else if c0.is_zero() {
                Tail::Infinite(vec![vec![0], vec![1], vec![2]])
            } else {
                Tail::Bounded(0)
            }
        }
        2 => {
            let (l1, l2) = (&l[0], &l[1]);
            if qq.is_zero() {
                if l1.is_zero() && l2.is_zero() {
                    return if c0.is_zero() {
                        Tail::Infinite(vec![vec![0, 0], vec![1, 0], vec![2, 0]])
                    } else {
                        Tail::Bounded(0)
                    };
                }
                if l1.is_positive() == l2.is_positive() && !l1.is_zero() && !l2.is_zero() {
                    let m = if l1.abs() < l2.abs() { l1.abs() } else { l2.abs() };
                    return Tail::Bounded(ceil_u32(&(c0.abs() / m)));
                }
                return Tail::Unknown;
            }
            let r = l1 * l2 - qq * c0;
            if r.is_zero() {
                let mut pts = Vec::new();
                if let Some(n1) = nonneg_int(&(-l2 / qq)) {
                    pts = vec![vec![n1, 0], vec![n1, 1], vec![n1, 2]];
                } else if let Some(n2) = nonneg_int(&(-l1 / qq)) {
                    pts = vec![vec![0, n2], vec![1, n2], vec![2, n2]];
                }
                return if pts.is_empty() {
                    Tail::Bounded(0)
                } else {
                    Tail::Infinite(pts)
                };
            }
            let d1 = common_den(qq, l1);
            let d2 = common_den(qq, l2);
            let b1 = (r.abs() * &d1 + l2.abs()) / qq.abs();
            let b2 = (r.abs() * &d2 + l1.abs()) / qq.abs();
            Tail::Bounded(ceil_u32(&(b1 + b2)))
        }
        _ => Tail::Unknown,
    }
}

impl DiracOperator {
    fn odd_creations(&self) -> Vec<usize> {
        let f = &self.space.fock;
        (0..f.nbar).filter(|&g| f.cw.parity[g] == 1).collect()
    }

    fn singular(&self, w: &[Q]) -> Result<bool> {
        let b = self.space.block(w);
        if b.dim() == 0 {
            return Ok(false);
        }
        let d2 = self.d_squared(&b)?;
        Ok(d2.rank() < b.dim())
    }

    /// Finds the blocks where `D²` is singular, up to polynomial degree `max_poly` or further
    /// when a bound on all solutions is available.
    pub fn candidate_search(&self, max_poly: u32) -> Result<CandidateSearch> {
        let alg = &self.alg;
        let fock = &self.space.fock;
        let odd = self.odd_creations();
        let br = branches(self);
        let bases: Vec<Weight> = {
            let even_monos = all_monomials(fock, 0);
            let mut set = BTreeSet::new();
            for mu in self.space.module_weights() {
                for m in &even_monos {
                    set.insert(add(mu, &fock.weight(m)));
                }
            }
            set.into_iter().collect()
        };
        let mut certified = true;
        let mut bound = 0u32;
        let mut note = String::new();
        let mut infinite_probe: Vec<Weight> = Vec::new();
        match &br {
            None => {
                if !odd.is_empty() {
                    certified = false;
                    note = "no eigenvalue bound for this subalgebra; enumeration only".into();
                }
            }
            Some(b) => {
                if odd.len() > 2 {
                    certified = false;
                    note = format!("{} odd creation operators; enumeration only", odd.len());
                } else {
                    let betas: Vec<&Weight> = odd.iter().map(|&g| &fock.gen_weight[g]).collect();
                    let qq = if betas.len() == 2 {
                        -q(2) * alg.wform(betas[0], betas[1])
                    } else {
                        Q::zero()
                    };
                    'outer: for w0 in &bases {
                        for g in &b.gammas {
                            let u = add(&add(w0, g), &b.rho_l);
                            let c0 = &b.constant - alg.wnorm(&u);
                            let l: Vec<Q> = betas.iter().map(|be| -q(2) * alg.wform(&u, be)).collect();
                            match tail(&c0, &l, &qq) {
                                Tail::Bounded(n) => bound = bound.max(n),
                                Tail::Infinite(pts) => {
                                    for p in pts {
                                        let mut w = w0.clone();
                                        for (k, &e) in p.iter().enumerate() {
                                            w = add(&w, &scale(betas[k], &q(i64::from(e))));
                                        }
                                        infinite_probe.push(w);
                                    }
                                    certified = false;
                                    note = "a branch of eigenvalues vanishes along a ray".into();
                                    if infinite_probe.len() >= 3 {
                                        break 'outer;
                                    }
                                }
                                Tail::Unknown => {
                                    certified = false;
                                    note = "the zero set of an eigenvalue branch is not bounded by this test".into();
                                }
                            }
                        }
                    }
                }
            }
        }
        if !infinite_probe.is_empty() {
            let all_singular = infinite_probe
                .iter()
                .map(|w| self.singular(w))
                .collect::<Result<Vec<_>>>()?;
            if all_singular.iter().all(|&s| s) {
                return Err(Error::KernelInfinite(format!(
                    "D² is singular along an unbounded family of weights starting at {}",
                    fmt_vec(&infinite_probe[0])
                )));
            }
        }
        let mut degree = max_poly;
        if certified && !odd.is_empty() {
            if bound > MAX_SEARCH_DEGREE {
                certified = false;
                note = format!(
                    "solutions are bounded by degree {} but the search stops at {}",
                    bound, MAX_SEARCH_DEGREE
                );
                degree = degree.max(MAX_SEARCH_DEGREE);
            } else {
                degree = degree.max(bound);
            }
        }
        if odd.is_empty() {
            degree = 0;
        }
        let mut weights = BTreeSet::new();
        for m in all_monomials(fock, degree) {
            let off = fock.weight(&m);
            for mu in self.space.module_weights() {
                weights.insert(add(mu, &off));
            }
        }
        let mut found = Vec::new();
        for w in weights {
            if let Some(b) = &br {
                let hit = b
                    .gammas
                    .iter()
                    .any(|g| (&b.constant - alg.wnorm(&add(&add(&w, g), &b.rho_l))).is_zero());
                if !hit {
                    continue;
                }
            }
            if self.singular(&w)? {
                found.push(w);
            }
        }
        if certified && note.is_empty() {
            note = if odd.is_empty() {
                "finite oscillator space".into()
            } else {
                format!("all solutions have degree at most {}", bound)
            };
        }
        Ok(CandidateSearch {
            weights: found,
            searched_poly_degree: degree,
            certified,
            note,
        })
    }
}

/// Dimensions of `ker D`, `ker D²` and `H_D = ker D / (ker D ∩ im D)` on one block, by parity.
#[derive(Clone, Debug, Serialize)]
pub struct CohomologyBlock {
    #[serde(serialize_with = "ser::vec")]
    pub weight: Weight,
    pub block_dim: usize,
    pub ker_d2: usize,
    pub ker_d: [usize; 2],
    pub cohomology: [usize; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct DiracCohomology {
    pub search: CandidateSearch,
    pub blocks: Vec<CohomologyBlock>,
    pub ker_d_equals_ker_d2: bool,
    pub total: [usize; 2],
}

fn parity_split(b: &Block) -> [Vec<usize>; 2] {
    let mut out = [Vec::new(), Vec::new()];
    for (k, &p) in b.parity.iter().enumerate() {
        out[p as usize].push(k);
    }
    out
}

fn submatrix(m: &Matrix, rows: &[usize], cols: &[usize]) -> Matrix {
    let mut out = Matrix::zeros(rows.len(), cols.len());
    for (i, &r) in rows.iter().enumerate() {
        for (j, &c) in cols.iter().enumerate() {
            out.set(i, j, m.get(r, c).clone());
        }
    }
    out
}

/// Kernel and cohomology of an odd operator on a graded space, by parity.
pub fn graded_cohomology(d: &Matrix, split: &[Vec<usize>; 2]) -> Result<([usize; 2], [usize; 2])> {
    for part in split {
        if !submatrix(d, part, part).is_zero() {
            return Err(Error::VerificationFailure(
                "operator is not odd for the total parity".into(),
            ));
        }
    }
    let mut ker = [0; 2];
    let mut coh = [0; 2];
    for p in 0..2 {
        let dp = submatrix(d, &split[1 - p], &split[p]);
        let kp = if split[p].is_empty() {
            Vec::new()
        } else if split[1 - p].is_empty() {
            (0..split[p].len())
                .map(|i| {
                    let mut v = vec![Q::zero(); split[p].len()];
                    v[i] = Q::one();
                    v
                })
                .collect()
        } else {
            dp.kernel()
        };
        ker[p] = kp.len();
        let into = submatrix(d, &split[p], &split[1 - p]);
        let image: Vec<Vec<Q>> = (0..into.cols)
            .map(|c| into.col(c))
            .filter(|v| v.iter().any(|x| !x.is_zero()))
            .collect();
        coh[p] = kp.len() - intersection_dim(&kp, &image);
    }
    Ok((ker, coh))
}

impl DiracOperator {
    /// Dirac cohomology, computed on the blocks where `D²` is singular.
    pub fn cohomology(&self, max_poly: u32) -> Result<DiracCohomology> {
        let search = self.candidate_search(max_poly)?;
        let mut blocks = Vec::new();
        let mut same = true;
        let mut total = [0, 0];
        for w in &search.weights {
            let b = self.space.block(w);
            let d = self.d_matrix(&b)?;
            let ker_d2 = d.mul(&d).nullity();
            let (ker, coh) = graded_cohomology(&d, &parity_split(&b))?;
            same &= ker[0] + ker[1] == ker_d2;
            total[0] += coh[0];
            total[1] += coh[1];
            blocks.push(CohomologyBlock {
                weight: w.clone(),
                block_dim: b.dim(),
                ker_d2,
                ker_d: ker,
                cohomology: coh,
            });
        }
        Ok(DiracCohomology {
            search,
            blocks,
            ker_d_equals_ker_d2: same,
            total,
        })
    }
}
