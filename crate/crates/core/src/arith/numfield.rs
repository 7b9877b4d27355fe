//! Number fields ℚ(a₁,…,aₙ) built one simple extension at a time.
//!
//! Elements are dense coordinate vectors on the power basis
//! a₁^e₁ ⋯ aₙ^eₙ (0 ≤ eⱼ < deg aⱼ), indexed in mixed radix with a₁ fastest.
//! The coordinates of a subfield element are a prefix of the coordinates in
//! any extension, so embedding is zero padding.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use num_traits::{One, Signed, Zero};

use super::{q, Field, Ring, Q};

#[derive(Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct NfElem(pub Vec<Q>);

impl NfElem {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.0[0].is_one() && self.0[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element lies in ℚ.
    pub fn as_rational(&self) -> Option<&Q> {
        if self.0[1..].iter().all(Zero::is_zero) {
            Some(&self.0[0])
        } else {
            None
        }
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn nonzero_count(&self) -> usize {
        self.0.iter().filter(|c| !c.is_zero()).count()
    }
}

#[derive(Clone, Debug)]
pub struct NumberField {
    degrees: Vec<usize>,
    dim: usize,
    /// Minimal polynomial coefficients c₀..c_{d-1} of each generator (monic,
    /// leading coefficient implicit), as elements of the field below.
    minpolys: Vec<Vec<NfElem>>,
    /// `table[i][j]` is the sparse product of basis elements i and j.
    table: Vec<Vec<Vec<(usize, Q)>>>,
    /// Images of the basis elements under a ring map to 𝔽_p sending each
    /// generator to a simple root of its minimal polynomial, when one exists.
    modp: Option<(Fp, Vec<u64>)>,
}

/// Arithmetic modulo a word-size prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fp(pub u64);

/// Primes tried, in order, for modular images.
const PRIMES: [u64; 8] = [1_000_003, 1_000_033, 1_000_037, 1_000_039, 1_000_081, 1_000_099, 1_000_117, 1_000_121];

impl Fp {
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.0
    }

    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.0 - b) % self.0
    }

    pub fn mul(self, a: u64, b: u64) -> u64 {
        a * b % self.0
    }

    pub fn pow(self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    pub fn inv(self, a: u64) -> u64 {
        self.pow(a, self.0 - 2)
    }

    /// Image of a rational, if its denominator is prime to p.
    pub fn rational(self, c: &Q) -> Option<u64> {
        use num_bigint::BigInt;
        use num_traits::ToPrimitive;
        let p = BigInt::from(self.0);
        let red = |n: &BigInt| -> u64 {
            let r = n % &p;
            let r = if r.sign() == num_bigint::Sign::Minus { r + &p } else { r };
            r.to_u64().unwrap()
        };
        let d = red(c.denom());
        if d == 0 {
            return None;
        }
        Some(self.mul(red(c.numer()), self.inv(d)))
    }

    /// Horner evaluation, coefficients low to high.
    pub fn eval(self, f: &[u64], x: u64) -> u64 {
        f.iter().rev().fold(0, |acc, c| self.add(self.mul(acc, x), *c))
    }
}

/// Basis images for a tower of minimal polynomials over 𝔽_p, choosing a
/// simple root for each generator in turn.
fn basis_images(fp: Fp, degrees: &[usize], minpolys: &[Vec<NfElem>]) -> Option<Vec<u64>> {
    let mut basis = vec![1u64];
    for (d, coeffs) in degrees.iter().zip(minpolys) {
        let reduce = |a: &NfElem| -> Option<u64> {
            let mut acc = 0;
            for (c, b) in a.0.iter().zip(&basis) {
                if !c.is_zero() {
                    acc = fp.add(acc, fp.mul(fp.rational(c)?, *b));
                }
            }
            Some(acc)
        };
        let mut f: Vec<u64> = coeffs.iter().map(reduce).collect::<Option<_>>()?;
        f.push(1);
        let df: Vec<u64> = (1..f.len()).map(|i| fp.mul(f[i], i as u64)).collect();
        let r = (0..fp.0).find(|&x| fp.eval(&f, x) == 0 && fp.eval(&df, x) != 0)?;
        let low = basis.len();
        basis = (0..low * d).map(|i| fp.mul(basis[i % low], fp.pow(r, (i / low) as u64))).collect();
    }
    Some(basis)
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.degrees == other.degrees && self.minpolys == other.minpolys
    }
}

impl NumberField {
    pub fn rationals() -> Self {
        NumberField {
            degrees: Vec::new(),
            dim: 1,
            minpolys: Vec::new(),
            table: vec![vec![vec![(0, q(1))]]],
            modp: Some((Fp(PRIMES[0]), vec![1])),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn generator_count(&self) -> usize {
        self.degrees.len()
    }

    pub fn minpoly(&self, gen: usize) -> &[NfElem] {
        &self.minpolys[gen]
    }

    /// Adjoins a root of `T^d + c_{d-1} T^{d-1} + ... + c_0` where the
    /// coefficients live in `self`.
    pub fn extend(&self, coeffs: &[NfElem]) -> NumberField {
        let d = coeffs.len();
        assert!(d >= 1, "minimal polynomial must have positive degree");
        let low = self.dim;
        let dim = low * d;
        // powers[e][m]: coefficient (in the field below) of a^m in a^e
        let mut powers: Vec<Vec<NfElem>> = Vec::with_capacity(2 * d);
        for e in 0..d {
            let mut row = vec![self.zero(); d];
            row[e] = self.one();
            powers.push(row);
        }
        while powers.len() < 2 * d - 1 {
            let prev = powers.last().unwrap();
            let top = prev[d - 1].clone();
            let mut row = vec![self.zero(); d];
            row[1..d].clone_from_slice(&prev[..d - 1]);
            for m in 0..d {
                let t = self.mul(&top, &coeffs[m]);
                row[m] = self.sub(&row[m], &t);
            }
            powers.push(row);
        }
        let mut table = vec![vec![Vec::new(); dim]; dim];
        for i in 0..dim {
            let (l1, e1) = (i % low, i / low);
            for j in 0..dim {
                let (l2, e2) = (j % low, j / low);
                let mut acc = vec![Q::zero(); dim];
                for (l, c) in &self.table[l1][l2] {
                    for m in 0..d {
                        let pm = &powers[e1 + e2][m];
                        if pm.is_zero() {
                            continue;
                        }
                        // basis_l * pm, both in the field below
                        for (k, ck) in pm.0.iter().enumerate() {
                            if ck.is_zero() {
                                continue;
                            }
                            for (r, cr) in &self.table[*l][k] {
                                acc[r + low * m] += c * ck * cr;
                            }
                        }
                    }
                }
                table[i][j] = acc
                    .into_iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .collect();
            }
        }
        let mut degrees = self.degrees.clone();
        degrees.push(d);
        let mut minpolys = self.minpolys.clone();
        minpolys.push(coeffs.to_vec());
        let modp = PRIMES.iter().find_map(|&p| basis_images(Fp(p), &degrees, &minpolys).map(|b| (Fp(p), b)));
        NumberField { degrees, dim, minpolys, table, modp }
    }

    /// The prime of the modular image, if there is one.
    pub fn mod_field(&self) -> Option<Fp> {
        self.modp.as_ref().map(|(fp, _)| *fp)
    }

    /// Image of an element in 𝔽_p.
    pub fn reduce_mod(&self, a: &NfElem) -> Option<u64> {
        let (fp, basis) = self.modp.as_ref()?;
        let mut acc = 0;
        for (c, b) in a.0.iter().zip(basis) {
            if !c.is_zero() {
                acc = fp.add(acc, fp.mul(fp.rational(c)?, *b));
            }
        }
        Some(acc)
    }

    pub fn from_rational(&self, c: Q) -> NfElem {
        let mut v = vec![Q::zero(); self.dim];
        v[0] = c;
        NfElem(v)
    }

    pub fn from_int(&self, n: i64) -> NfElem {
        self.from_rational(q(n))
    }

    /// The generator with index `gen` (0-based among algebraic generators).
    pub fn generator(&self, gen: usize) -> NfElem {
        let mut v = vec![Q::zero(); self.dim];
        let stride: usize = self.degrees[..gen].iter().product();
        if self.degrees[gen] == 1 {
            // degree-one "extension": the generator is the rational root
            return self.neg(&self.embed_from(&self.minpolys[gen][0]));
        }
        v[stride] = q(1);
        NfElem(v)
    }

    /// Zero-pads an element of a subfield (a prefix of this tower).
    pub fn embed_from(&self, a: &NfElem) -> NfElem {
        let mut v = a.0.clone();
        v.resize(self.dim, Q::zero());
        NfElem(v)
    }

    /// Exponent vector of a basis index.
    pub fn basis_exponents(&self, mut idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.degrees.len());
        for d in &self.degrees {
            out.push(idx % d);
            idx /= d;
        }
        out
    }

    pub fn scale(&self, a: &NfElem, c: &Q) -> NfElem {
        NfElem(a.0.iter().map(|x| x * c).collect())
    }

    /// Evaluates a univariate polynomial (coefficients low to high) at `x`.
    pub fn eval_univariate(&self, coeffs: &[NfElem], x: &NfElem) -> NfElem {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.add(&self.mul(&acc, x), c);
        }
        acc
    }

    pub fn format(&self, a: &NfElem, names: &[String]) -> String {
        let mut s = String::new();
        let mut first = true;
        for (idx, c) in a.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let exps = self.basis_exponents(idx);
            let mut mono = String::new();
            for (g, e) in exps.iter().enumerate() {
                if *e == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                let name = names.get(g).map(String::as_str).unwrap_or("a");
                if *e == 1 {
                    mono.push_str(name);
                } else {
                    let _ = write!(mono, "{name}^{e}");
                }
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            first = false;
            if mono.is_empty() {
                let _ = write!(s, "{abs}");
            } else if abs.is_one() {
                s.push_str(&mono);
            } else {
                let _ = write!(s, "{abs}*{mono}");
            }
        }
        if first {
            s.push('0');
        }
        s
    }
}

impl Ring for NumberField {
    type Elem = NfElem;

    fn zero(&self) -> NfElem {
        NfElem(vec![Q::zero(); self.dim])
    }

    fn one(&self) -> NfElem {
        self.from_int(1)
    }

    fn is_zero(&self, a: &NfElem) -> bool {
        a.is_zero()
    }

    fn add(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect())
    }

    fn sub(&self, a: &NfElem, b: &NfElem) -> NfElem {
        NfElem(a.0.iter().zip(&b.0).map(|(x, y)| x - y).collect())
    }

    fn neg(&self, a: &NfElem) -> NfElem {
        NfElem(a.0.iter().map(|x| -x).collect())
    }

    fn mul(&self, a: &NfElem, b: &NfElem) -> NfElem {
        if self.dim == 1 {
            return NfElem(vec![&a.0[0] * &b.0[0]]);
        }
        let mut out = vec![Q::zero(); self.dim];
        for (i, x) in a.0.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                let xy = x * y;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &xy * c;
                }
            }
        }
        NfElem(out)
    }
}

impl Field for NumberField {
    fn inv(&self, a: &NfElem) -> Option<NfElem> {
        if a.is_zero() {
            return None;
        }
        if self.dim == 1 {
            return Some(NfElem(vec![a.0[0].recip()]));
        }
        if let Some(r) = a.as_rational() {
            return Some(self.from_rational(r.recip()));
        }
        // Solve (multiplication by a) x = 1 on the power basis.
        let n = self.dim;
        let mut m: Vec<Vec<Q>> = vec![vec![Q::zero(); n + 1]; n];
        for j in 0..n {
            for (i, x) in a.0.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                for (k, c) in &self.table[i][j] {
                    m[*k][j] += x * c;
                }
            }
        }
        m[0][n] = q(1);
        solve_dense(m).map(NfElem)
    }
}

/// Gauss-Jordan on an augmented n×(n+1) matrix; `None` if singular.
fn solve_dense(mut m: Vec<Vec<Q>>) -> Option<Vec<Q>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in col..=n {
                    let t = &m[col][c] * &f;
                    m[r][c] -= t;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n].clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sqrt2() -> NumberField {
        let qf = NumberField::rationals();
        qf.extend(&[qf.from_int(-2), qf.from_int(0)])
    }

    #[test]
    fn sqrt2_squares_to_two() {
        let k = sqrt2();
        let r = k.generator(0);
        assert_eq!(k.mul(&r, &r), k.from_int(2));
    }

    #[test]
    fn inverse_of_one_plus_sqrt2() {
        let k = sqrt2();
        let r = k.generator(0);
        let a = k.add(&k.one(), &r);
        let inv = k.inv(&a).unwrap();
        assert_eq!(inv, k.sub(&r, &k.one()));
        assert_eq!(k.mul(&a, &inv), k.one());
    }

    #[test]
    fn two_step_tower() {
        // Q(sqrt2)(i), i^2 + 1 = 0
        let k = sqrt2();
        let k2 = k.extend(&[k.from_int(1), k.from_int(0)]);
        let i = k2.generator(1);
        let r = k2.generator(0);
        assert_eq!(k2.mul(&i, &i), k2.from_int(-1));
        let ri = k2.mul(&r, &i);
        assert_eq!(k2.mul(&ri, &ri), k2.from_int(-2));
        let x = k2.add(&ri, &k2.from_int(3));
        let xi = k2.inv(&x).unwrap();
        assert_eq!(k2.mul(&x, &xi), k2.one());
    }

    #[test]
    fn tower_over_algebraic_coefficients() {
        // Q(r)(s) with s^2 = r, r^2 = 2: s is a fourth root of 2
        let k = sqrt2();
        let r = k.generator(0);
        let k2 = k.extend(&[k.neg(&r), k.zero()]);
        let s = k2.generator(1);
        let s2 = k2.mul(&s, &s);
        let s4 = k2.mul(&s2, &s2);
        assert_eq!(s4, k2.from_int(2));
    }

    #[test]
    fn cubic_extension_inverse() {
        let qf = NumberField::rationals();
        // T^3 - T - 1
        let k = qf.extend(&[qf.from_int(-1), qf.from_int(-1), qf.from_int(0)]);
        let a = k.generator(0);
        let x = k.add(&k.mul(&a, &a), &k.from_int(2));
        let xi = k.inv(&x).unwrap();
        assert_eq!(k.mul(&x, &xi), k.one());
    }
}
