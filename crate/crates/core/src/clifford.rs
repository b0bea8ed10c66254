use crate::algebra::LieSuperalgebra;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{factorial, q, Q};
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Exponent vector over the ordered generators.
pub type Mono = Vec<u16>;

/// Linear combination of normal-ordered monomials (also used for wedge monomials).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Elem {
    pub terms: BTreeMap<Mono, Q>,
}

impl Elem {
    pub fn zero() -> Self {
        Elem { terms: BTreeMap::new() }
    }

    pub fn from_mono(m: Mono, c: Q) -> Self {
        let mut e = Elem::zero();
        e.add_term(m, c);
        e
    }

    pub fn add_term(&mut self, m: Mono, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn add_assign(&mut self, other: &Elem) {
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c.clone());
        }
    }

    pub fn add_scaled(&mut self, other: &Elem, s: &Q) {
        if s.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            self.add_term(m.clone(), c * s);
        }
    }

    pub fn scale(&self, s: &Q) -> Elem {
        let mut e = Elem::zero();
        e.add_scaled(self, s);
        e
    }

    pub fn add(&self, other: &Elem) -> Elem {
        let mut e = self.clone();
        e.add_assign(other);
        e
    }

    pub fn sub(&self, other: &Elem) -> Elem {
        let mut e = self.clone();
        e.add_scaled(other, &-Q::one());
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the scalar if the element is a multiple of the unit.
    pub fn as_scalar(&self, ngen: usize) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => {
                let (m, c) = self.terms.iter().next().unwrap();
                if m.iter().all(|&e| e == 0) && m.len() == ngen {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// Clifford-Weyl algebra on an ordered list of basis elements of a Lie superalgebra.
///
/// Generators satisfy `a b = -(-1)^{p(a)p(b)} b a + 2 B(a, b)`; even generators
/// square to `B(a, a)` and odd generators are polynomial variables.
#[derive(Clone, Debug)]
pub struct CwAlgebra {
    pub labels: Vec<String>,
    pub parity: Vec<u8>,
    /// Index of each generator in the basis of the ambient algebra.
    pub alg_index: Vec<usize>,
    pub gram: Matrix,
}

/// Colour sign for passing a homogeneous element of bidegree `(c1, p1)` past `(c2, p2)`.
pub fn chi(c1: u32, p1: u8, c2: u32, p2: u8) -> Q {
    if (c1 * c2 + u32::from(p1 * p2)).is_multiple_of(2) {
        Q::one()
    } else {
        -Q::one()
    }
}

impl CwAlgebra {
    pub fn new(alg: &LieSuperalgebra, gens: &[usize]) -> Self {
        let k = gens.len();
        let mut gram = Matrix::zeros(k, k);
        for (i, &a) in gens.iter().enumerate() {
            for (j, &b) in gens.iter().enumerate() {
                gram.set(i, j, alg.form.get(a, b).clone());
            }
        }
        CwAlgebra {
            labels: gens.iter().map(|&a| alg.label(a).to_string()).collect(),
            parity: gens.iter().map(|&a| alg.parity(a)).collect(),
            alg_index: gens.to_vec(),
            gram,
        }
    }

    pub fn ngen(&self) -> usize {
        self.parity.len()
    }

    pub fn position(&self, alg_idx: usize) -> Option<usize> {
        self.alg_index.iter().position(|&a| a == alg_idx)
    }

    pub fn one(&self) -> Elem {
        Elem::from_mono(vec![0; self.ngen()], Q::one())
    }

    pub fn scalar(&self, c: Q) -> Elem {
        Elem::from_mono(vec![0; self.ngen()], c)
    }

    pub fn gen(&self, i: usize) -> Elem {
        let mut m = vec![0; self.ngen()];
        m[i] = 1;
        Elem::from_mono(m, Q::one())
    }

    /// Linear combination of generators with the given coefficients.
    pub fn vector(&self, coeffs: &[Q]) -> Elem {
        let mut e = Elem::zero();
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let mut m = vec![0; self.ngen()];
                m[i] = 1;
                e.add_term(m, c.clone());
            }
        }
        e
    }

    /// Re-expresses an ambient-algebra coordinate vector over the generators.
    pub fn coords_from_alg(&self, x: &[Q]) -> Result<Vec<Q>> {
        let mut out = vec![Q::zero(); self.ngen()];
        for (a, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let i = self
                .position(a)
                .ok_or_else(|| Error::SubspaceNotStable(format!("basis element {} is not among the generators", a)))?;
            out[i] = c.clone();
        }
        Ok(out)
    }

    pub fn bidegree(&self, m: &Mono) -> (u32, u8) {
        let mut c = 0u32;
        let mut p = 0u8;
        for (i, &e) in m.iter().enumerate() {
            c += u32::from(e);
            p ^= self.parity[i] * (e as u8 & 1);
        }
        (c, p)
    }

    /// Word of generator indices of a monomial, in normal order.
    pub fn word(m: &Mono) -> Vec<usize> {
        let mut w = Vec::new();
        for (i, &e) in m.iter().enumerate() {
            for _ in 0..e {
                w.push(i);
            }
        }
        w
    }

    /// Product of a normal-ordered monomial with one generator on the right.
    fn mul_gen(&self, a: &Mono, g: usize, coeff: &Q, out: &mut Elem) {
        let last = a.iter().rposition(|&e| e > 0);
        match last {
            None => {
                let mut m = a.clone();
                m[g] += 1;
                out.add_term(m, coeff.clone());
            }
            Some(h) if h < g => {
                let mut m = a.clone();
                m[g] += 1;
                out.add_term(m, coeff.clone());
            }
            Some(h) if h == g => {
                if self.parity[g] == 1 {
                    let mut m = a.clone();
                    m[g] += 1;
                    out.add_term(m, coeff.clone());
                } else {
                    let b = self.gram.get(g, g);
                    if !b.is_zero() {
                        let mut m = a.clone();
                        m[g] -= 1;
                        out.add_term(m, coeff * b);
                    }
                }
            }
            Some(h) => {
                let mut rest = a.clone();
                rest[h] -= 1;
                let s = -chi(0, self.parity[h], 0, self.parity[g]);
                let mut tmp = Elem::zero();
                self.mul_gen(&rest, g, &(coeff * &s), &mut tmp);
                for (m, c) in tmp.terms {
                    self.mul_gen(&m, h, &c, out);
                }
                let b = self.gram.get(h, g);
                if !b.is_zero() {
                    out.add_term(rest, coeff * q(2) * b);
                }
            }
        }
    }

    pub fn mul(&self, x: &Elem, y: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for (my, cy) in &y.terms {
            let w = Self::word(my);
            let mut cur = x.scale(cy);
            for &g in &w {
                let mut next = Elem::zero();
                for (m, c) in &cur.terms {
                    self.mul_gen(m, g, c, &mut next);
                }
                cur = next;
            }
            acc.add_assign(&cur);
        }
        acc
    }

    /// Product of a sequence of generators.
    pub fn word_product(&self, w: &[usize]) -> Elem {
        let mut cur = self.one();
        for &g in w {
            let mut next = Elem::zero();
            for (m, c) in &cur.terms {
                self.mul_gen(m, g, c, &mut next);
            }
            cur = next;
        }
        cur
    }

    /// Splits an element into bidegree-homogeneous parts keyed by (Clifford degree mod 2, parity).
    pub fn homogeneous_parts(&self, x: &Elem) -> BTreeMap<(u32, u8), Elem> {
        let mut out: BTreeMap<(u32, u8), Elem> = BTreeMap::new();
        for (m, c) in &x.terms {
            let (d, p) = self.bidegree(m);
            out.entry((d % 2, p)).or_default().add_term(m.clone(), c.clone());
        }
        out
    }

    /// Colour commutator `[x, y] = xy - χ(x, y) yx`, extended bilinearly over homogeneous parts.
    pub fn bracket(&self, x: &Elem, y: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for ((c1, p1), xh) in self.homogeneous_parts(x) {
            for ((c2, p2), yh) in self.homogeneous_parts(y) {
                let s = chi(c1, p1, c2, p2);
                acc.add_assign(&self.mul(&xh, &yh));
                acc.add_scaled(&self.mul(&yh, &xh), &-s);
            }
        }
        acc
    }

    /// Colour sign of reordering a word by a permutation (product over inverted pairs).
    fn perm_sign(&self, word: &[usize], perm: &[usize]) -> Q {
        let mut s = Q::one();
        for i in 0..perm.len() {
            for j in i + 1..perm.len() {
                if perm[i] > perm[j] {
                    let (a, b) = (word[perm[i]], word[perm[j]]);
                    s *= chi(1, self.parity[a], 1, self.parity[b]);
                }
            }
        }
        s
    }

    /// Quantization map from the super exterior algebra, by graded symmetrization.
    pub fn quantize(&self, w: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for (m, c) in &w.terms {
            let word = Self::word(m);
            let k = word.len();
            let perms = all_perms(k);
            let norm = c / factorial(k as u32);
            for p in &perms {
                let s = self.perm_sign(&word, p);
                let seq: Vec<usize> = p.iter().map(|&i| word[i]).collect();
                acc.add_scaled(&self.word_product(&seq), &(&norm * s));
            }
        }
        acc
    }

    /// Super exterior product of monomials.
    pub fn wedge_mono(&self, a: &Mono, b: &Mono) -> Option<(Mono, Q)> {
        let mut sign = Q::one();
        let mut out = a.clone();
        for (j, &eb) in b.iter().enumerate() {
            if eb == 0 {
                continue;
            }
            if self.parity[j] == 0 && (out[j] + eb) > 1 {
                return None;
            }
            for (i, &ea) in a.iter().enumerate().skip(j + 1) {
                if ea > 0 && (ea * eb) % 2 == 1 {
                    sign *= chi(1, self.parity[i], 1, self.parity[j]);
                }
            }
            out[j] += eb;
        }
        Some((out, sign))
    }

    pub fn wedge(&self, x: &Elem, y: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for (ma, ca) in &x.terms {
            for (mb, cb) in &y.terms {
                if let Some((m, s)) = self.wedge_mono(ma, mb) {
                    acc.add_term(m, ca * cb * s);
                }
            }
        }
        acc
    }

    /// Contraction `ι_x` (bidegree `(1, p(x))`) applied as a derivation to a monomial word.
    /// The result is valid in the exterior algebra and in the Clifford algebra alike.
    pub fn contract(&self, x: &[Q], parity_x: u8, e: &Elem) -> Elem {
        let mut acc = Elem::zero();
        for (m, c) in &e.terms {
            let word = Self::word(m);
            let mut sign = Q::one();
            for &g in &word {
                let mut bxg = Q::zero();
                for (i, xi) in x.iter().enumerate() {
                    if !xi.is_zero() {
                        bxg += xi * self.gram.get(i, g);
                    }
                }
                if !bxg.is_zero() {
                    let mut rest = m.clone();
                    rest[g] -= 1;
                    acc.add_term(rest, c * &sign * bxg);
                }
                sign *= chi(1, parity_x, 1, self.parity[g]);
            }
        }
        acc
    }

    /// Lie derivative along a derivation of bidegree `(0, parity)` given by its matrix on generators.
    /// `exterior` selects exterior (true) or Clifford (false) products when reassembling.
    pub fn lie_derivative(&self, ad: &Matrix, parity: u8, e: &Elem, exterior: bool) -> Elem {
        let mut acc = Elem::zero();
        for (m, c) in &e.terms {
            let word = Self::word(m);
            let mut sign = Q::one();
            for pos in 0..word.len() {
                let g = word[pos];
                let image = self.vector(&ad.col(g));
                if !image.is_zero() {
                    let mut prod = self.one();
                    for (k, &h) in word.iter().enumerate() {
                        let factor = if k == pos { image.clone() } else { self.gen(h) };
                        prod = if exterior {
                            self.wedge(&prod, &factor)
                        } else {
                            self.mul(&prod, &factor)
                        };
                    }
                    acc.add_scaled(&prod, &(c * &sign));
                }
                sign *= chi(0, parity, 1, self.parity[g]);
            }
        }
        acc
    }

    /// Matrix of `ad(x)` restricted to the generator span, or an error if the span is not stable.
    pub fn ad_on_generators(&self, alg: &LieSuperalgebra, x: &[Q]) -> Result<Matrix> {
        let k = self.ngen();
        let mut m = Matrix::zeros(k, k);
        for j in 0..k {
            let img = alg.bracket(x, &alg.unit(self.alg_index[j]));
            let c = self.coords_from_alg(&img)?;
            for (i, v) in c.into_iter().enumerate() {
                m.set(i, j, v);
            }
        }
        Ok(m)
    }

    /// Dual basis of the generators, expressed over the generators: `B(g_a, g^b) = δ_ab`.
    pub fn dual_coords(&self) -> Result<Vec<Vec<Q>>> {
        let inv = self
            .gram
            .inverse()
            .ok_or_else(|| Error::DegenerateSubspace("form restricted to the generators is singular".into()))?;
        Ok((0..self.ngen()).map(|b| inv.col(b)).collect())
    }

    /// `λ(T) = -1/2 Σ_a T(e^a) ∧ e_a` as an element of the exterior square.
    pub fn lambda_map(&self, t: &Matrix) -> Result<Elem> {
        let duals = self.dual_coords()?;
        let mut acc = Elem::zero();
        for (a, da) in duals.iter().enumerate() {
            let img = t.mul_vec(da);
            let w = self.wedge(&self.vector(&img), &self.gen(a));
            acc.add_scaled(&w, &Q::new((-1).into(), 2.into()));
        }
        Ok(acc)
    }

    /// `γ'(x) = q(λ(ad_x))` on the generator span.
    pub fn gamma_prime(&self, alg: &LieSuperalgebra, x: &[Q]) -> Result<Elem> {
        let ad = self.ad_on_generators(alg, x)?;
        Ok(self.quantize(&self.lambda_map(&ad)?))
    }

    /// Spin-type action `ν_*(x) = -1/2 γ'(x)`.
    pub fn nu_star(&self, alg: &LieSuperalgebra, x: &[Q]) -> Result<Elem> {
        Ok(self.gamma_prime(alg, x)?.scale(&Q::new((-1).into(), 2.into())))
    }

    /// Cubic element `φ` of the generator span:
    /// `-1/12 Σ (-1)^{p_a p_b + p_c} B([e_a, e_b], e_c) e^a ∧ e^b ∧ e^c`.
    pub fn cubic_element(&self, alg: &LieSuperalgebra) -> Result<Elem> {
        let k = self.ngen();
        let duals = self.dual_coords()?;
        let dual_elems: Vec<Elem> = duals.iter().map(|d| self.vector(d)).collect();
        let mut acc = Elem::zero();
        let coef = Q::new((-1).into(), 12.into());
        for a in 0..k {
            for b in 0..k {
                let br = alg.bracket_basis(self.alg_index[a], self.alg_index[b]);
                if br.is_empty() {
                    continue;
                }
                let brv = alg.dense(br);
                let ab = self.wedge(&dual_elems[a], &dual_elems[b]);
                if ab.is_zero() {
                    continue;
                }
                for (c, dc) in dual_elems.iter().enumerate().take(k) {
                    let f = alg.b(&brv, &alg.unit(self.alg_index[c]));
                    if f.is_zero() {
                        continue;
                    }
                    let e = self.parity[a] * self.parity[b] + self.parity[c];
                    let s = if e.is_multiple_of(2) { Q::one() } else { -Q::one() };
                    acc.add_scaled(&self.wedge(&ab, dc), &(&coef * s * f));
                }
            }
        }
        Ok(acc)
    }

    /// Quantized cubic element `q(φ)`.
    pub fn cubic_term(&self, alg: &LieSuperalgebra) -> Result<Elem> {
        Ok(self.quantize(&self.cubic_element(alg)?))
    }
}

fn all_perms(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_perms(k - 1) {
        for pos in 0..=p.len() {
            let mut v = p.clone();
            v.insert(pos, k - 1);
            out.push(v);
        }
    }
    out
}
