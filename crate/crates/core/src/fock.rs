use crate::algebra::{LieSuperalgebra, Weight};
use crate::clifford::{chi, CwAlgebra, Elem, Mono};
use crate::error::{Error, Result};
use crate::scalar::{q, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Oscillator module `Cl(P)/Cl(P)U` for a polarization `P = Ū ⊕ U` by root vectors.
///
/// The Clifford-Weyl generators are ordered with all of `Ū` before all of `U`, so the
/// module has the normal-ordered `Ū`-monomials as a basis.
#[derive(Clone, Debug)]
pub struct FockSpace {
    pub cw: CwAlgebra,
    /// Number of creation generators; they occupy positions `0..nbar` in `cw`.
    pub nbar: usize,
    pub vacuum_weight: Weight,
    pub gen_weight: Vec<Weight>,
}

/// Vector in a Fock space: ū-exponent vector to coefficient.
pub type FockVec = BTreeMap<Mono, Q>;

impl FockSpace {
    /// Polarizes the span of the root vectors `p` into negative (creation) and positive parts.
    pub fn new(alg: &LieSuperalgebra, p: &[usize]) -> Result<Self> {
        let mut ubar = Vec::new();
        let mut u = Vec::new();
        for &a in p {
            if alg.is_negative_root(a) {
                ubar.push(a);
            } else if alg.is_positive_root(a) {
                u.push(a);
            } else {
                return Err(Error::MixedPolarization(format!(
                    "{} is not a root vector, so the span has no polarization by roots",
                    alg.label(a)
                )));
            }
        }
        if ubar.len() != u.len() {
            return Err(Error::OddDimensionalP(format!(
                "{} creation and {} annihilation generators",
                ubar.len(),
                u.len()
            )));
        }
        ubar.sort_by_key(|&a| (alg.parity(a), a));
        u.sort_by_key(|&a| (alg.parity(a), a));
        for &a in &ubar {
            let (i, j) = alg.root_ij(a).unwrap();
            let partner = alg.root(j, i);
            if !u.contains(&partner) {
                return Err(Error::MixedPolarization(format!(
                    "{} has no partner in U",
                    alg.label(a)
                )));
            }
        }
        let mut gens = ubar.clone();
        gens.extend(u.iter().copied());
        let cw = CwAlgebra::new(alg, &gens);
        let nn = alg.rank_n();
        let mut vac = vec![Q::zero(); nn];
        for &a in &u {
            let s = if alg.parity(a) == 0 { q(1) } else { q(-1) };
            for (x, w) in vac.iter_mut().zip(&alg.basis[a].weight) {
                *x += &s * w / q(2);
            }
        }
        let gen_weight = gens.iter().map(|&a| alg.basis[a].weight.clone()).collect();
        Ok(FockSpace {
            cw,
            nbar: ubar.len(),
            vacuum_weight: vac,
            gen_weight,
        })
    }

    pub fn vacuum(&self) -> Mono {
        vec![0; self.nbar]
    }

    pub fn weight(&self, m: &Mono) -> Weight {
        let mut w = self.vacuum_weight.clone();
        for (i, &e) in m.iter().enumerate() {
            if e > 0 {
                let c = q(i64::from(e));
                for (x, g) in w.iter_mut().zip(&self.gen_weight[i]) {
                    *x += &c * g;
                }
            }
        }
        w
    }

    /// Clifford degree: the total number of creation operators.
    pub fn degree(&self, m: &Mono) -> u32 {
        m.iter().map(|&e| u32::from(e)).sum()
    }

    /// Polynomial degree: number of odd (Weyl) creation operators.
    pub fn poly_degree(&self, m: &Mono) -> u32 {
        m.iter()
            .enumerate()
            .filter(|(i, _)| self.cw.parity[*i] == 1)
            .map(|(_, &e)| u32::from(e))
            .sum()
    }

    /// Intrinsic parity: the number of odd creation operators mod 2.
    pub fn parity(&self, m: &Mono) -> u8 {
        (self.poly_degree(m) % 2) as u8
    }

    fn create(&self, g: usize, m: &Mono) -> Option<(Mono, Q)> {
        let mut sign = Q::one();
        for (i, &e) in m.iter().enumerate().take(g) {
            if e % 2 == 1 {
                sign *= chi(1, self.cw.parity[g], 1, self.cw.parity[i]);
            }
        }
        if m[g] > 0 && self.cw.parity[g] == 0 {
            return None;
        }
        let mut out = m.clone();
        out[g] += 1;
        Some((out, sign))
    }

    fn annihilate(&self, g: usize, m: &Mono, out: &mut Vec<(Mono, Q)>) {
        let mut sign = Q::one();
        for (i, &e) in m.iter().enumerate() {
            if e == 0 {
                continue;
            }
            let s = chi(1, self.cw.parity[g], 1, self.cw.parity[i]);
            let b = self.cw.gram.get(g, i);
            if !b.is_zero() {
                let mut ce = Q::zero();
                let mut st = Q::one();
                for _ in 0..e {
                    ce += &st;
                    st *= &s;
                }
                let mut rest = m.clone();
                rest[i] -= 1;
                out.push((rest, &sign * q(2) * b * ce));
            }
            if e % 2 == 1 {
                sign *= s;
            }
        }
    }

    /// Action of one generator (by position in `cw`) on a monomial.
    pub fn apply_gen(&self, g: usize, m: &Mono) -> Vec<(Mono, Q)> {
        if g < self.nbar {
            self.create(g, m).into_iter().collect()
        } else {
            let mut out = Vec::new();
            self.annihilate(g, m, &mut out);
            out
        }
    }

    /// Action of a Clifford-Weyl element on a Fock vector.
    pub fn apply(&self, x: &Elem, v: &FockVec) -> FockVec {
        let mut acc: FockVec = BTreeMap::new();
        for (mono, c) in &x.terms {
            let word = CwAlgebra::word(mono);
            let mut cur: Vec<(Mono, Q)> = v.iter().map(|(m, a)| (m.clone(), a * c)).collect();
            for &g in word.iter().rev() {
                let mut next = Vec::new();
                for (m, a) in &cur {
                    for (m2, b) in self.apply_gen(g, m) {
                        next.push((m2, a * b));
                    }
                }
                cur = next;
                if cur.is_empty() {
                    break;
                }
            }
            for (m, a) in cur {
                *acc.entry(m).or_insert_with(Q::zero) += a;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        acc
    }

    pub fn apply_mono(&self, x: &Elem, m: &Mono) -> FockVec {
        let mut v = BTreeMap::new();
        v.insert(m.clone(), Q::one());
        self.apply(x, &v)
    }

    /// All creation monomials whose weight offset from the vacuum is `target`, with
    /// polynomial degree at most `max_poly`.
    pub fn monomials_of_weight(&self, target: &[Q], max_poly: u32) -> Vec<Mono> {
        let mut out = Vec::new();
        let mut cur = vec![0u16; self.nbar];
        let rem = target.to_vec();
        self.search(0, &mut cur, rem, max_poly, &mut out);
        out.sort();
        out
    }

    fn search(&self, i: usize, cur: &mut Mono, rem: Vec<Q>, budget: u32, out: &mut Vec<Mono>) {
        if i == self.nbar {
            if rem.iter().all(|x| x.is_zero()) {
                out.push(cur.clone());
            }
            return;
        }
        let odd = self.cw.parity[i] == 1;
        let max_e = if odd { budget } else { 1 };
        for e in 0..=max_e {
            let c = q(i64::from(e));
            let r: Vec<Q> = rem.iter().zip(&self.gen_weight[i]).map(|(x, g)| x - &c * g).collect();
            if height(&r) > Q::zero() {
                break;
            }
            let nb = if odd { budget - e } else { budget };
            if !self.feasible(i + 1, &r, nb) {
                continue;
            }
            cur[i] = e as u16;
            self.search(i + 1, cur, r, nb, out);
            cur[i] = 0;
        }
    }

    /// Necessary condition for the remaining weight to be a sum of the remaining generators.
    fn feasible(&self, from: usize, rem: &[Q], budget: u32) -> bool {
        let h = height(rem);
        if h > Q::zero() {
            return false;
        }
        let mut min_reach = Q::zero();
        let mut most_negative_odd: Option<Q> = None;
        for i in from..self.nbar {
            let hi = height(&self.gen_weight[i]);
            if self.cw.parity[i] == 0 {
                min_reach += hi;
            } else if most_negative_odd.as_ref().is_none_or(|o| hi < *o) {
                most_negative_odd = Some(hi);
            }
        }
        if let Some(o) = most_negative_odd {
            min_reach += o * q(i64::from(budget));
        }
        h >= min_reach
    }
}

/// Linear functional that is positive on every positive root.
pub fn height(w: &[Q]) -> Q {
    let nn = w.len();
    w.iter().enumerate().map(|(k, x)| x * q((nn - k) as i64)).sum()
}
