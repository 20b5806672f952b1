//! The tower `F_q ⊂ F_{q^m} ⊂ F_{q^{mu}}`.
//!
//! `F_{q^m}` elements ([`MidElem`]) are polynomials over `F_q` modulo a
//! monic irreducible of degree `m`, packed into a `u128` with a fixed
//! number of bits per base-`q` digit. For `q = 2` this is one bit per
//! coefficient and multiplication is a shift-and-xor loop.
//!
//! `F_{q^{mu}}` elements ([`TopElem`]) are polynomials over `F_{q^m}` modulo
//! a monic irreducible of degree `u`; their coordinates are taken with
//! respect to the polynomial basis `γ = (1, δ, …, δ^{u-1})`, δ the class of
//! the indeterminate.

use rand::Rng;

use crate::error::FieldError;
use crate::field::{is_prime, Field, PrimeField};
use crate::linalg::{self, Matrix};
use crate::poly;

/// Largest packed width of an `F_{q^m}` element in bits. One bit of the
/// `u128` is kept free so the full modulus (degree `m`) still fits.
const MAX_MID_BITS: u32 = 127;
/// Largest supported top-extension degree.
const MAX_TOP_DEGREE: usize = 32;

/// An element of `F_{q^m}`; meaningful only together with its [`MidField`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct MidElem(pub(crate) u128);

/// `F_{q^m}` as `F_q[x]/(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MidField {
    q: u8,
    m: usize,
    bits: u32,
    digit_mask: u128,
    mask: u128,
    /// All `m + 1` coefficients of the monic modulus, low degree first.
    modulus: Vec<u8>,
    /// Low `m` coefficients of the modulus, packed.
    low: u128,
}

impl MidField {
    fn new(q: u8, modulus: Vec<u8>) -> Result<Self, FieldError> {
        let m = modulus.len().saturating_sub(1);
        if m == 0 || modulus[m] != 1 {
            return Err(FieldError::InvalidElement("modulus must be monic of degree >= 1".into()));
        }
        let bits = digit_bits(q);
        check_mid_width(q, m)?;
        if modulus.iter().any(|&d| d >= q) {
            return Err(FieldError::InvalidElement("modulus digit out of range".into()));
        }
        let total = bits * m as u32;
        let mask = if total >= 128 { u128::MAX } else { (1u128 << total) - 1 };
        let mut field = MidField {
            q,
            m,
            bits,
            digit_mask: (1u128 << bits) - 1,
            mask,
            modulus: modulus.clone(),
            low: 0,
        };
        field.low = field.pack(&modulus[..m]);
        Ok(field)
    }

    pub fn q(&self) -> u8 {
        self.q
    }

    /// Extension degree `m` over `F_q`.
    pub fn degree(&self) -> usize {
        self.m
    }

    /// Monic modulus coefficients, low degree first (length `m + 1`).
    pub fn modulus(&self) -> &[u8] {
        &self.modulus
    }

    fn pack(&self, digits: &[u8]) -> u128 {
        digits
            .iter()
            .enumerate()
            .fold(0u128, |acc, (i, &d)| acc | (u128::from(d) << (i as u32 * self.bits)))
    }

    fn unpack(&self, a: u128) -> [u8; 128] {
        let mut out = [0u8; 128];
        for (i, d) in out.iter_mut().enumerate().take(self.m) {
            *d = ((a >> (i as u32 * self.bits)) & self.digit_mask) as u8;
        }
        out
    }

    /// Base-`q` coordinates in the polynomial basis, low degree first.
    pub fn digits(&self, a: MidElem) -> Vec<u8> {
        self.unpack(a.0)[..self.m].to_vec()
    }

    pub fn from_digits(&self, digits: &[u8]) -> Result<MidElem, FieldError> {
        if digits.len() != self.m {
            return Err(FieldError::InvalidElement(format!(
                "expected {} digits, got {}",
                self.m,
                digits.len()
            )));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= self.q) {
            return Err(FieldError::InvalidElement(format!("digit {d} >= q = {}", self.q)));
        }
        Ok(MidElem(self.pack(digits)))
    }

    /// Position in base-`q` counting order (low-degree digit least significant).
    pub fn index(&self, a: MidElem) -> u128 {
        if self.q == 2 {
            return a.0;
        }
        let d = self.unpack(a.0);
        (0..self.m).rev().fold(0u128, |acc, i| acc * u128::from(self.q) + u128::from(d[i]))
    }

    /// Inverse of [`MidField::index`]; `idx` must be below `q^m`.
    pub fn from_index(&self, mut idx: u128) -> MidElem {
        if self.q == 2 {
            return MidElem(idx & self.mask);
        }
        let mut digits = vec![0u8; self.m];
        for d in digits.iter_mut() {
            *d = (idx % u128::from(self.q)) as u8;
            idx /= u128::from(self.q);
        }
        MidElem(self.pack(&digits))
    }

    /// Embeds a prime-field element.
    pub fn embed(&self, c: u8) -> MidElem {
        MidElem(u128::from(c % self.q))
    }

    /// The class of the indeterminate (the element usually written β).
    pub fn generator(&self) -> MidElem {
        if self.m == 1 {
            // F_q[x]/(x - c): the indeterminate equals c.
            let c = (self.q - self.modulus[0]) % self.q;
            return MidElem(u128::from(c));
        }
        MidElem(1u128 << self.bits)
    }

    fn mul_binary(&self, a: u128, b: u128) -> u128 {
        if a == 0 || b == 0 {
            return 0;
        }
        let top = 1u128 << (self.m - 1);
        let mut acc = 0u128;
        let hi = 127 - b.leading_zeros() as usize;
        for i in (0..=hi).rev() {
            let carry = acc & top != 0;
            acc = (acc << 1) & self.mask;
            if carry {
                acc ^= self.low;
            }
            if (b >> i) & 1 == 1 {
                acc ^= a;
            }
        }
        acc
    }

    fn mul_generic(&self, a: u128, b: u128) -> u128 {
        let m = self.m;
        let q = u32::from(self.q);
        let da = self.unpack(a);
        let db = self.unpack(b);
        let mut prod = [0u32; 256];
        for i in 0..m {
            if da[i] == 0 {
                continue;
            }
            for j in 0..m {
                prod[i + j] += u32::from(da[i]) * u32::from(db[j]);
            }
        }
        for d in (m..2 * m - 1).rev() {
            let c = prod[d] % q;
            if c != 0 {
                let neg = q - c;
                for j in 0..m {
                    prod[d - m + j] += neg * u32::from(self.modulus[j]);
                }
            }
        }
        let digits: Vec<u8> = prod[..m].iter().map(|&x| (x % q) as u8).collect();
        self.pack(&digits)
    }

    fn digitwise(&self, a: u128, b: u128, sub: bool) -> u128 {
        let q = u16::from(self.q);
        let da = self.unpack(a);
        let db = self.unpack(b);
        let digits: Vec<u8> = (0..self.m)
            .map(|i| {
                let (x, y) = (u16::from(da[i]), u16::from(db[i]));
                (if sub { (x + q - y) % q } else { (x + y) % q }) as u8
            })
            .collect();
        self.pack(&digits)
    }

    fn inv_binary(&self, a: u128) -> Option<u128> {
        if a == 0 {
            return None;
        }
        // Full modulus including the leading bit at position m (< 128).
        let f = self.low | (1u128 << self.m);
        let deg = |x: u128| 127 - x.leading_zeros() as i32;
        let (mut r, mut s) = (a, f);
        let (mut g1, mut g2) = (1u128, 0u128);
        while r != 1 {
            let mut j = deg(r) - deg(s);
            if j < 0 {
                std::mem::swap(&mut r, &mut s);
                std::mem::swap(&mut g1, &mut g2);
                j = -j;
            }
            r ^= s << j;
            g1 ^= g2 << j;
        }
        Some(g1 & self.mask)
    }

    /// Multiply by a prime-field scalar.
    pub fn scale(&self, a: MidElem, c: u8) -> MidElem {
        match c % self.q {
            0 => MidElem(0),
            1 => a,
            c => self.mul(&a, &self.embed(c)),
        }
    }
}

fn digit_bits(q: u8) -> u32 {
    (8 - (q - 1).leading_zeros()).max(1)
}

fn check_mid_width(q: u8, m: usize) -> Result<(), FieldError> {
    let total = digit_bits(q) as usize * m;
    if total > MAX_MID_BITS as usize {
        return Err(FieldError::DegreeOverflow(format!(
            "F_{q}^{m} needs {total} packed bits, limit is {MAX_MID_BITS}"
        )));
    }
    Ok(())
}

impl Field for MidField {
    type Elem = MidElem;

    fn zero(&self) -> MidElem {
        MidElem(0)
    }

    fn one(&self) -> MidElem {
        MidElem(1)
    }

    fn is_zero(&self, a: &MidElem) -> bool {
        a.0 == 0
    }

    #[inline]
    fn add(&self, a: &MidElem, b: &MidElem) -> MidElem {
        if self.q == 2 {
            MidElem(a.0 ^ b.0)
        } else {
            MidElem(self.digitwise(a.0, b.0, false))
        }
    }

    #[inline]
    fn sub(&self, a: &MidElem, b: &MidElem) -> MidElem {
        if self.q == 2 {
            MidElem(a.0 ^ b.0)
        } else {
            MidElem(self.digitwise(a.0, b.0, true))
        }
    }

    fn neg(&self, a: &MidElem) -> MidElem {
        if self.q == 2 {
            *a
        } else {
            MidElem(self.digitwise(0, a.0, true))
        }
    }

    #[inline]
    fn mul(&self, a: &MidElem, b: &MidElem) -> MidElem {
        if self.q == 2 {
            MidElem(self.mul_binary(a.0, b.0))
        } else {
            MidElem(self.mul_generic(a.0, b.0))
        }
    }

    fn inv(&self, a: &MidElem) -> Option<MidElem> {
        if self.q == 2 {
            return self.inv_binary(a.0).map(MidElem);
        }
        if a.0 == 0 {
            return None;
        }
        let base = PrimeField::new(self.q);
        let inv = poly::inverse_mod(&base, &self.digits(*a), &self.modulus)?;
        let mut digits = inv;
        digits.resize(self.m, 0);
        Some(MidElem(self.pack(&digits)))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> MidElem {
        if self.q == 2 {
            MidElem(rng.random::<u128>() & self.mask)
        } else {
            let digits: Vec<u8> = (0..self.m).map(|_| rng.random_range(0..self.q)).collect();
            MidElem(self.pack(&digits))
        }
    }

    fn characteristic(&self) -> u32 {
        u32::from(self.q)
    }

    fn prime_degree(&self) -> usize {
        self.m
    }

    fn frobenius(&self, a: &MidElem) -> MidElem {
        if self.q == 2 {
            MidElem(self.mul_binary(a.0, a.0))
        } else {
            self.pow(a, u128::from(self.q))
        }
    }
}

/// An element of `F_{q^{mu}}`: `u` coordinates over `F_{q^m}` in the basis γ.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TopElem(pub(crate) Vec<MidElem>);

impl TopElem {
    pub fn coeffs(&self) -> &[MidElem] {
        &self.0
    }
}

/// `F_{q^{mu}}` as `F_{q^m}[y]/(h)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TopField {
    mid: MidField,
    u: usize,
    /// All `u + 1` coefficients of the monic modulus.
    modulus: Vec<MidElem>,
    /// `Tr(δ^i)` for `i < u`, making the trace a `u`-term dot product.
    trace_of_powers: Vec<MidElem>,
}

impl TopField {
    fn new(mid: MidField, modulus: Vec<MidElem>) -> Self {
        let u = modulus.len() - 1;
        let mut top = TopField { mid, u, modulus, trace_of_powers: Vec::new() };
        top.trace_of_powers = (0..u)
            .map(|i| {
                let mut delta_i = top.zero();
                delta_i.0[i] = top.mid.one();
                top.trace_slow(&delta_i)
            })
            .collect();
        top
    }

    pub fn mid(&self) -> &MidField {
        &self.mid
    }

    /// Extension degree `u` over `F_{q^m}`.
    pub fn degree(&self) -> usize {
        self.u
    }

    pub fn modulus(&self) -> &[MidElem] {
        &self.modulus
    }

    pub fn from_coeffs(&self, coeffs: Vec<MidElem>) -> Result<TopElem, FieldError> {
        if coeffs.len() != self.u {
            return Err(FieldError::InvalidElement(format!(
                "expected {} coordinates, got {}",
                self.u,
                coeffs.len()
            )));
        }
        Ok(TopElem(coeffs))
    }

    /// Embeds `F_{q^m}` into `F_{q^{mu}}`.
    pub fn embed(&self, a: MidElem) -> TopElem {
        let mut out = self.zero();
        out.0[0] = a;
        out
    }

    /// Multiplies by an `F_{q^m}` scalar.
    pub fn scale(&self, a: &TopElem, c: MidElem) -> TopElem {
        TopElem(a.0.iter().map(|x| self.mid.mul(x, &c)).collect())
    }

    /// `a^(q^m)`, the generator of `Gal(F_{q^{mu}} / F_{q^m})`.
    pub fn relative_frobenius(&self, a: &TopElem) -> TopElem {
        let mut out = a.clone();
        for _ in 0..self.mid.m {
            out = self.frobenius(&out);
        }
        out
    }

    fn trace_slow(&self, a: &TopElem) -> MidElem {
        let mut acc = self.zero();
        let mut conj = a.clone();
        for j in 0..self.u {
            if j > 0 {
                conj = self.relative_frobenius(&conj);
            }
            acc = self.add(&acc, &conj);
        }
        debug_assert!(acc.0[1..].iter().all(|c| self.mid.is_zero(c)));
        acc.0[0]
    }

    /// `Tr_{q^{mu}/q^m}(a)`.
    pub fn trace(&self, a: &TopElem) -> MidElem {
        a.0.iter()
            .zip(&self.trace_of_powers)
            .fold(MidElem(0), |acc, (x, t)| self.mid.add(&acc, &self.mid.mul(x, t)))
    }
}

impl Field for TopField {
    type Elem = TopElem;

    fn zero(&self) -> TopElem {
        TopElem(vec![MidElem(0); self.u])
    }

    fn one(&self) -> TopElem {
        self.embed(MidElem(1))
    }

    fn is_zero(&self, a: &TopElem) -> bool {
        a.0.iter().all(|c| c.0 == 0)
    }

    fn add(&self, a: &TopElem, b: &TopElem) -> TopElem {
        TopElem(a.0.iter().zip(&b.0).map(|(x, y)| self.mid.add(x, y)).collect())
    }

    fn sub(&self, a: &TopElem, b: &TopElem) -> TopElem {
        TopElem(a.0.iter().zip(&b.0).map(|(x, y)| self.mid.sub(x, y)).collect())
    }

    fn mul(&self, a: &TopElem, b: &TopElem) -> TopElem {
        let u = self.u;
        let f = &self.mid;
        let mut prod = vec![MidElem(0); 2 * u - 1];
        for (i, x) in a.0.iter().enumerate() {
            if f.is_zero(x) {
                continue;
            }
            for (j, y) in b.0.iter().enumerate() {
                prod[i + j] = f.add(&prod[i + j], &f.mul(x, y));
            }
        }
        for d in (u..2 * u - 1).rev() {
            let c = prod[d];
            if f.is_zero(&c) {
                continue;
            }
            for j in 0..u {
                prod[d - u + j] = f.sub(&prod[d - u + j], &f.mul(&c, &self.modulus[j]));
            }
        }
        prod.truncate(u);
        TopElem(prod)
    }

    fn inv(&self, a: &TopElem) -> Option<TopElem> {
        if self.is_zero(a) {
            return None;
        }
        let mut inv = poly::inverse_mod(&self.mid, &a.0, &self.modulus)?;
        inv.resize(self.u, MidElem(0));
        Some(TopElem(inv))
    }

    fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> TopElem {
        TopElem((0..self.u).map(|_| self.mid.random(rng)).collect())
    }

    fn characteristic(&self) -> u32 {
        u32::from(self.mid.q)
    }

    fn prime_degree(&self) -> usize {
        self.mid.m * self.u
    }
}

/// The full tower together with the basis γ of `F_{q^{mu}}` over `F_{q^m}`
/// and its trace-dual basis γ*.
#[derive(Debug, Clone)]
pub struct FieldTower {
    base: PrimeField,
    top: TopField,
    gamma: Vec<TopElem>,
    gamma_dual: Vec<TopElem>,
}

impl FieldTower {
    /// Builds the tower with deterministically chosen moduli.
    ///
    /// The `F_{q^m}` modulus is the smallest monic irreducible of degree `m`
    /// in base-`q` counting order (constant coefficient least significant).
    /// The `F_{q^{mu}}` modulus is searched the same way, but with the
    /// coefficients first restricted to `F_{q^m}` elements of index below
    /// `q^1`, then `q^2`, and so on; once that bound reaches `q^m` this is the
    /// plain counting order. Restricting first keeps the search short when a
    /// whole leading family is reducible (e.g. every `y^2 + c` in
    /// characteristic 2).
    pub fn build(q: u32, m: usize, u: usize) -> Result<Self, FieldError> {
        let q8 = check_base(q)?;
        if m == 0 || u == 0 {
            return Err(FieldError::DegreeOverflow("degrees must be at least 1".into()));
        }
        check_mid_width(q8, m)?;
        check_top_degree(u)?;
        let mid_modulus = smallest_irreducible_prime(q8, m);
        let mid = MidField::new(q8, mid_modulus)?;
        let top_modulus = smallest_irreducible_over_mid(&mid, u);
        Self::assemble(q8, mid, top_modulus)
    }

    /// Rebuilds a tower from explicit moduli, verifying irreducibility.
    pub fn from_moduli(
        q: u32,
        mid_modulus: &[u8],
        top_modulus: &[MidElem],
    ) -> Result<Self, FieldError> {
        let q8 = check_base(q)?;
        let m = mid_modulus.len().saturating_sub(1);
        check_mid_width(q8, m.max(1))?;
        let mid = MidField::new(q8, mid_modulus.to_vec())?;
        if !poly::is_irreducible(&PrimeField::new(q8), mid_modulus) {
            return Err(FieldError::ReducibleModulus);
        }
        let u = top_modulus.len().saturating_sub(1);
        if u == 0 || top_modulus[u] != mid.one() {
            return Err(FieldError::InvalidElement("top modulus must be monic of degree >= 1".into()));
        }
        check_top_degree(u)?;
        if top_modulus.iter().any(|c| c.0 & !mid.mask != 0) {
            return Err(FieldError::InvalidElement("top modulus coefficient out of range".into()));
        }
        if !poly::is_irreducible(&mid, top_modulus) {
            return Err(FieldError::ReducibleModulus);
        }
        Self::assemble(q8, mid, top_modulus.to_vec())
    }

    fn assemble(q: u8, mid: MidField, top_modulus: Vec<MidElem>) -> Result<Self, FieldError> {
        let top = TopField::new(mid, top_modulus);
        let gamma: Vec<TopElem> = (0..top.u)
            .map(|i| {
                let mut e = top.zero();
                e.0[i] = top.mid.one();
                e
            })
            .collect();
        let mut tower = FieldTower { base: PrimeField::new(q), top, gamma, gamma_dual: Vec::new() };
        tower.gamma_dual = tower.dual_basis(&tower.gamma)?;
        Ok(tower)
    }

    pub fn q(&self) -> u32 {
        u32::from(self.base.order())
    }

    pub fn m(&self) -> usize {
        self.top.mid.m
    }

    pub fn u(&self) -> usize {
        self.top.u
    }

    pub fn base(&self) -> &PrimeField {
        &self.base
    }

    pub fn mid(&self) -> &MidField {
        &self.top.mid
    }

    pub fn top(&self) -> &TopField {
        &self.top
    }

    pub fn gamma(&self) -> &[TopElem] {
        &self.gamma
    }

    pub fn gamma_dual(&self) -> &[TopElem] {
        &self.gamma_dual
    }

    /// `a^(q^i)` in `F_{q^m}`.
    pub fn frobenius(&self, a: MidElem, i: usize) -> MidElem {
        self.mid().frobenius_pow(&a, i)
    }

    pub fn trace_to_mid(&self, a: &TopElem) -> MidElem {
        self.top.trace(a)
    }

    /// Trace-dual basis: returns `b*` with `Tr(b_i b*_j) = δ_ij`.
    pub fn dual_basis(&self, basis: &[TopElem]) -> Result<Vec<TopElem>, FieldError> {
        let u = self.u();
        if basis.len() != u {
            return Err(FieldError::NotABasis);
        }
        let mid = self.mid();
        let gram = Matrix::from_fn(u, u, |i, j| self.top.trace(&self.top.mul(&basis[i], &basis[j])));
        let c = linalg::inverse(mid, &gram).ok_or(FieldError::NotABasis)?;
        Ok((0..u)
            .map(|j| {
                (0..u).fold(self.top.zero(), |acc, l| {
                    self.top.add(&acc, &self.top.scale(&basis[l], *c.get(j, l)))
                })
            })
            .collect())
    }

    /// Coordinates `(Tr(γ_1 a), …, Tr(γ_u a))`, so that `a = Σ_i coord_i γ*_i`.
    pub fn dual_coordinates(&self, a: &TopElem) -> Vec<MidElem> {
        self.gamma.iter().map(|g| self.top.trace(&self.top.mul(g, a))).collect()
    }

    /// Inverse of [`FieldTower::dual_coordinates`]: `Σ_i c_i γ*_i`.
    pub fn from_dual_coordinates(&self, coords: &[MidElem]) -> TopElem {
        coords.iter().zip(&self.gamma_dual).fold(self.top.zero(), |acc, (c, g)| {
            self.top.add(&acc, &self.top.scale(g, *c))
        })
    }

    /// `Σ_i γ*_i`, the multiplier that makes all dual coordinates equal.
    pub fn gamma_dual_sum(&self) -> TopElem {
        self.gamma_dual.iter().fold(self.top.zero(), |acc, g| self.top.add(&acc, g))
    }
}

fn check_base(q: u32) -> Result<u8, FieldError> {
    if !is_prime(q) {
        return Err(FieldError::NonPrimeModulus(q));
    }
    u8::try_from(q).map_err(|_| FieldError::DegreeOverflow(format!("q = {q} exceeds one-byte digits")))
}

fn check_top_degree(u: usize) -> Result<(), FieldError> {
    if u > MAX_TOP_DEGREE {
        return Err(FieldError::DegreeOverflow(format!("u = {u} exceeds {MAX_TOP_DEGREE}")));
    }
    Ok(())
}

fn smallest_irreducible_prime(q: u8, m: usize) -> Vec<u8> {
    let f = PrimeField::new(q);
    let mut digits = vec![0u8; m];
    loop {
        let mut candidate = digits.clone();
        candidate.push(1);
        if poly::is_irreducible(&f, &candidate) {
            return candidate;
        }
        // Increment in base q, low digit first.
        let mut i = 0;
        loop {
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
            i += 1;
            assert!(i < m, "irreducible polynomials of every degree exist");
        }
    }
}

fn smallest_irreducible_over_mid(mid: &MidField, u: usize) -> Vec<MidElem> {
    let q = u128::from(mid.q);
    let mut bound = q;
    loop {
        let mut idx = vec![0u128; u];
        loop {
            let mut candidate: Vec<MidElem> = idx.iter().map(|&i| mid.from_index(i)).collect();
            candidate.push(mid.one());
            if poly::is_irreducible(mid, &candidate) {
                return candidate;
            }
            let mut i = 0;
            loop {
                if i == u {
                    break;
                }
                idx[i] += 1;
                if idx[i] < bound {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
            if i == u {
                break;
            }
        }
        assert!(bound.checked_mul(q).is_some(), "irreducible polynomials of every degree exist");
        let full = q.checked_pow(mid.m as u32);
        assert!(full != Some(bound), "irreducible polynomials of every degree exist");
        bound *= q;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn f4() -> FieldTower {
        FieldTower::build(2, 2, 1).unwrap()
    }

    #[test]
    fn f4_modulus_and_frobenius() {
        let t = f4();
        assert_eq!(t.mid().modulus(), &[1, 1, 1]);
        let beta = t.mid().generator();
        let beta_plus_one = t.mid().from_digits(&[1, 1]).unwrap();
        assert_eq!(t.frobenius(beta, 1), beta_plus_one);
        assert_eq!(t.frobenius(beta, 0), beta);
        assert_eq!(t.frobenius(t.mid().one(), 5), t.mid().one());
    }

    #[test]
    fn f16_over_f4_top_modulus() {
        // Exhaustive scan oracle: smallest irreducible y^2 + c1 y + c0 over F_4
        // in counting order is y^2 + y + β.
        let t = FieldTower::build(2, 2, 2).unwrap();
        let mid = t.mid();
        let beta = mid.generator();
        assert_eq!(t.top().modulus(), &[beta, mid.one(), mid.one()]);
        // Oracle: scan all 16 monic quadratics for roots.
        let elems: Vec<MidElem> = (0..4).map(|i| mid.from_index(i)).collect();
        let mut first = None;
        'outer: for c1 in 0..4u128 {
            for c0 in 0..4u128 {
                let (a, b) = (mid.from_index(c0), mid.from_index(c1));
                let has_root = elems.iter().any(|x| {
                    let v = mid.add(&mid.add(&mid.mul(x, x), &mid.mul(&b, x)), &a);
                    mid.is_zero(&v)
                });
                if !has_root {
                    first = Some((c0, c1));
                    break 'outer;
                }
            }
        }
        assert_eq!(first, Some((2, 1)));
    }

    #[test]
    fn prime_field_tower() {
        let t = FieldTower::build(3, 1, 1).unwrap();
        assert_eq!(t.mid().modulus().len(), 2);
        let two = t.mid().embed(2);
        assert_eq!(t.mid().mul(&two, &two), t.mid().one());
        assert_eq!(t.mid().add(&two, &two), t.mid().embed(1));
    }

    #[test]
    fn construction_errors() {
        assert_eq!(FieldTower::build(4, 2, 1).unwrap_err(), FieldError::NonPrimeModulus(4));
        assert!(matches!(FieldTower::build(2, 128, 1), Err(FieldError::DegreeOverflow(_))));
        assert!(matches!(FieldTower::build(257, 1, 1), Err(FieldError::DegreeOverflow(_))));
        assert!(matches!(FieldTower::build(2, 4, 0), Err(FieldError::DegreeOverflow(_))));
    }

    #[test]
    fn trace_examples() {
        let t = FieldTower::build(2, 2, 2).unwrap();
        let top = t.top();
        assert_eq!(t.trace_to_mid(&top.zero()), t.mid().zero());
        let delta = t.gamma()[1].clone();
        // Oracle: δ + δ^4 by repeated squaring.
        let d4 = top.mul(&top.mul(&delta, &delta), &top.mul(&delta, &delta));
        let slow = top.add(&delta, &d4);
        assert_eq!(slow, top.one());
        assert_eq!(t.trace_to_mid(&delta), t.mid().one());
        // Subfield elements: Tr(a) = u·a = 0 in characteristic 2 with u = 2.
        let beta = top.embed(t.mid().generator());
        assert_eq!(t.trace_to_mid(&beta), t.mid().zero());
    }

    #[test]
    fn dual_basis_small() {
        let t = FieldTower::build(2, 2, 2).unwrap();
        let top = t.top();
        let dual = t.gamma_dual();
        for (i, g) in t.gamma().iter().enumerate() {
            for (j, d) in dual.iter().enumerate() {
                let tr = t.trace_to_mid(&top.mul(g, d));
                let want = if i == j { t.mid().one() } else { t.mid().zero() };
                assert_eq!(tr, want);
            }
        }
        assert_eq!(t.dual_basis(dual).unwrap(), t.gamma());
        let trivial = FieldTower::build(2, 3, 1).unwrap();
        assert_eq!(trivial.gamma_dual(), &[trivial.top().one()]);
        let dependent = vec![top.one(), top.one()];
        assert_eq!(t.dual_basis(&dependent).unwrap_err(), FieldError::NotABasis);
    }

    #[test]
    fn binary_inverse_matches_generic() {
        let t = FieldTower::build(2, 13, 1).unwrap();
        let mid = t.mid();
        let mut rng = ChaCha20Rng::seed_from_u64(3);
        for _ in 0..200 {
            let a = mid.random(&mut rng);
            if mid.is_zero(&a) {
                continue;
            }
            let inv = mid.inv(&a).unwrap();
            assert_eq!(mid.mul(&a, &inv), mid.one());
            let fermat = mid.pow(&a, (1u128 << 13) - 2);
            assert_eq!(inv, fermat);
        }
    }

    #[test]
    fn moduli_roundtrip() {
        let t = FieldTower::build(3, 4, 2).unwrap();
        let again = FieldTower::from_moduli(3, t.mid().modulus(), t.top().modulus()).unwrap();
        assert_eq!(again.top(), t.top());
        let reducible = [1u8, 0, 1]; // x^2 + 1 = (x+1)^2 over F_2
        assert_eq!(
            FieldTower::from_moduli(2, &reducible, &[MidElem(1), MidElem(1)]).unwrap_err(),
            FieldError::ReducibleModulus
        );
    }

    #[test]
    fn table_scale_towers_build() {
        for (m, u) in [(61, 3), (63, 3), (82, 4)] {
            let t = FieldTower::build(2, m, u).unwrap();
            assert_eq!(t.m(), m);
            assert_eq!(t.u(), u);
            let top = t.top();
            let g = t.gamma_dual_sum();
            assert!(!top.is_zero(&g));
        }
    }
}
