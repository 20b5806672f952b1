//! Parameters, key generation, encryption and decryption.

use std::fmt;

use rand::Rng;

use crate::error::FlError;
use crate::field::{is_prime, Field};
use crate::gabidulin::GabidulinCode;
use crate::linalg::{self, Matrix};
use crate::rank;
use crate::tower::{FieldTower, MidElem, TopElem};

/// System parameters. `t_pub` is always derived.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemParams {
    pub q: u32,
    pub m: usize,
    pub u: usize,
    pub n: usize,
    pub k: usize,
    pub w: usize,
}

impl SystemParams {
    pub fn new(q: u32, m: usize, u: usize, n: usize, k: usize, w: usize) -> Self {
        SystemParams { q, m, u, n, k, w }
    }

    /// `⌊(n - w - k)/2⌋`, zero when `n < w + k`.
    pub fn t_pub(&self) -> usize {
        self.n.saturating_sub(self.w + self.k) / 2
    }

    /// `n - k - w`, the stacked-Moore rank that repaired keys are built to hit.
    pub fn phi_repaired(&self) -> usize {
        self.n.saturating_sub(self.k + self.w)
    }

    /// Number of free plaintext positions, `k - u`.
    pub fn message_len(&self) -> usize {
        self.k.saturating_sub(self.u)
    }
}

impl fmt::Display for SystemParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "q={} m={} u={} n={} k={} w={} t_pub={}",
            self.q,
            self.m,
            self.u,
            self.n,
            self.k,
            self.w,
            self.t_pub()
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    /// Constraints needed for encryption and decryption to work.
    Functional,
    /// Constraints needed to block the known structural attacks.
    Security,
    Both,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParamViolation {
    NonPrimeQ { q: u32 },
    UNotBelowK { u: usize, k: usize },
    KNotBelowN { k: usize, n: usize },
    NExceedsM { n: usize, m: usize },
    WTooSmall { w: usize, half_redundancy: usize },
    WTooLarge { w: usize, redundancy: usize },
    NoPublicError,
    InterleavingTooSmall { u: usize },
    LinearizationBound { w: usize, u: usize, redundancy: usize },
    OverbeckBound { w: usize },
}

impl ParamViolation {
    pub fn tier(&self) -> Tier {
        match self {
            ParamViolation::InterleavingTooSmall { .. }
            | ParamViolation::LinearizationBound { .. }
            | ParamViolation::OverbeckBound { .. } => Tier::Security,
            _ => Tier::Functional,
        }
    }
}

impl fmt::Display for ParamViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParamViolation::NonPrimeQ { q } => write!(f, "q = {q} is not prime"),
            ParamViolation::UNotBelowK { u, k } => write!(f, "need u < k (u = {u}, k = {k})"),
            ParamViolation::KNotBelowN { k, n } => write!(f, "need k < n (k = {k}, n = {n})"),
            ParamViolation::NExceedsM { n, m } => write!(f, "need n <= m (n = {n}, m = {m})"),
            ParamViolation::WTooSmall { w, half_redundancy } => {
                write!(f, "need w > floor((n-k)/2) = {half_redundancy} (w = {w})")
            }
            ParamViolation::WTooLarge { w, redundancy } => write!(f, "need w < n-k = {redundancy} (w = {w})"),
            ParamViolation::NoPublicError => write!(f, "t_pub = floor((n-w-k)/2) must be at least 1"),
            ParamViolation::InterleavingTooSmall { u } => write!(f, "need u >= 2 (u = {u})"),
            ParamViolation::LinearizationBound { w, u, redundancy } => {
                write!(f, "linearization attack applies: need w(u+2) < u(n-k), got {} >= {}", w * (u + 2), u * redundancy)
            }
            ParamViolation::OverbeckBound { w } => {
                write!(f, "Overbeck-like attack applies: need w >= n-k-(k-u)/(u-1) (w = {w})")
            }
        }
    }
}

/// Every violated constraint of the requested tier.
pub fn validate(p: &SystemParams, tier: Tier) -> Vec<ParamViolation> {
    let mut out = Vec::new();
    if matches!(tier, Tier::Functional | Tier::Both) {
        if !is_prime(p.q) {
            out.push(ParamViolation::NonPrimeQ { q: p.q });
        }
        if p.u == 0 || p.u >= p.k {
            out.push(ParamViolation::UNotBelowK { u: p.u, k: p.k });
        }
        if p.k >= p.n {
            out.push(ParamViolation::KNotBelowN { k: p.k, n: p.n });
        }
        if p.n > p.m {
            out.push(ParamViolation::NExceedsM { n: p.n, m: p.m });
        }
        let redundancy = p.n.saturating_sub(p.k);
        if p.w <= redundancy / 2 {
            out.push(ParamViolation::WTooSmall { w: p.w, half_redundancy: redundancy / 2 });
        }
        if p.w >= redundancy {
            out.push(ParamViolation::WTooLarge { w: p.w, redundancy });
        }
        if p.t_pub() == 0 {
            out.push(ParamViolation::NoPublicError);
        }
    }
    if matches!(tier, Tier::Security | Tier::Both) {
        let (u, n, k, w) = (p.u as i64, p.n as i64, p.k as i64, p.w as i64);
        if u < 2 {
            out.push(ParamViolation::InterleavingTooSmall { u: p.u });
        }
        if w * (u + 2) >= u * (n - k) {
            out.push(ParamViolation::LinearizationBound { w: p.w, u: p.u, redundancy: p.n.saturating_sub(p.k) });
        }
        if (u - 1) * w < (u - 1) * (n - k) - (k - u) {
            out.push(ParamViolation::OverbeckBound { w: p.w });
        }
    }
    out
}

/// Public key size and information rate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyMetrics {
    /// `(u + 1)·n·m·log2(q)/8`: `g` plus `k_pub`.
    pub key_size_bytes: f64,
    /// `(k - u)/n`.
    pub rate: f64,
}

pub fn key_metrics(p: &SystemParams) -> KeyMetrics {
    let bits = ((p.u + 1) * p.n * p.m) as f64 * f64::from(p.q).log2();
    KeyMetrics { key_size_bytes: bits / 8.0, rate: p.message_len() as f64 / p.n as f64 }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublicKey {
    pub params: SystemParams,
    pub g: Vec<MidElem>,
    pub k_pub: Vec<TopElem>,
}

impl PublicKey {
    pub fn t_pub(&self) -> usize {
        self.params.t_pub()
    }
}

/// `x`, `z`, and the `P`, `s` used to build `z = (s | 0)·P⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrivateKey {
    pub x: Vec<TopElem>,
    pub z: Vec<TopElem>,
    pub p: Matrix<u8>,
    pub s: Vec<TopElem>,
}

/// A length-`k` message whose last `u` positions are zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plaintext(Vec<MidElem>);

impl Plaintext {
    /// Checks the zero suffix.
    pub fn new(values: Vec<MidElem>, u: usize) -> Result<Self, FlError> {
        let free = values.len().saturating_sub(u);
        if values.len() < u || values[free..].iter().any(|v| v.0 != 0) {
            return Err(FlError::InvalidPlaintext { expected: free });
        }
        Ok(Plaintext(values))
    }

    /// Appends the `u` zeros to the `k - u` free symbols.
    pub fn from_free(mut free: Vec<MidElem>, u: usize) -> Self {
        free.extend(std::iter::repeat_n(MidElem::default(), u));
        Plaintext(free)
    }

    pub fn values(&self) -> &[MidElem] {
        &self.0
    }

    /// The first `k - u` symbols.
    pub fn free(&self, u: usize) -> &[MidElem] {
        &self.0[..self.0.len() - u]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ciphertext(pub Vec<MidElem>);

/// A parameter set together with its field tower.
#[derive(Debug, Clone)]
pub struct FlSystem {
    params: SystemParams,
    tower: FieldTower,
}

impl FlSystem {
    /// Checks the functional tier and builds the default tower.
    pub fn new(params: SystemParams) -> Result<Self, FlError> {
        let violations = validate(&params, Tier::Functional);
        if !violations.is_empty() {
            return Err(FlError::ParameterViolation(violations));
        }
        let tower = FieldTower::build(params.q, params.m, params.u)?;
        Ok(FlSystem { params, tower })
    }

    /// Like [`FlSystem::new`] but with an explicit tower (e.g. read from a key file).
    pub fn with_tower(params: SystemParams, tower: FieldTower) -> Result<Self, FlError> {
        let violations = validate(&params, Tier::Functional);
        if !violations.is_empty() {
            return Err(FlError::ParameterViolation(violations));
        }
        if (tower.q(), tower.m(), tower.u()) != (params.q, params.m, params.u) {
            return Err(FlError::KeyMismatch("tower degrees differ from the parameters".into()));
        }
        Ok(FlSystem { params, tower })
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    /// `Moore_k(g)`.
    pub fn generator(&self, g: &[MidElem]) -> Matrix<MidElem> {
        rank::moore_matrix(self.tower.mid(), g, self.params.k)
    }

    /// The original key generation: `s` is an arbitrary vector of rank `w`.
    pub fn keygen_original<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(PrivateKey, PublicKey), FlError> {
        let s = rank::sample_full_rank_top(&self.tower, self.params.w, rng)?;
        self.keygen_with_s(s, rng)
    }

    /// The repaired key generation: `s = s_1 · Σ γ*_i` with `s_1` over
    /// `F_{q^m}`, so all trace components of `z` coincide.
    pub fn keygen_repaired<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(PrivateKey, PublicKey), FlError> {
        let top = self.tower.top();
        let s1 = rank::sample_full_rank_vector(self.tower.mid(), self.params.w, rng)?;
        let sum = self.tower.gamma_dual_sum();
        let s = s1.iter().map(|c| top.scale(&sum, *c)).collect();
        self.keygen_with_s(s, rng)
    }

    fn keygen_with_s<R: Rng + ?Sized>(&self, s: Vec<TopElem>, rng: &mut R) -> Result<(PrivateKey, PublicKey), FlError> {
        let SystemParams { n, k, u, .. } = self.params;
        let t = &self.tower;
        let g = rank::sample_full_rank_vector(t.mid(), n, rng)?;
        let x = loop {
            let x: Vec<TopElem> = (0..k).map(|_| t.top().random(rng)).collect();
            let suffix = Matrix::from_fn(u, u, |i, j| x[k - u + i].coeffs()[j]);
            if linalg::rank(t.mid(), &suffix) == u {
                break x;
            }
        };
        let p = rank::sample_invertible(t.base(), n, rng);
        let p_inv = linalg::inverse(t.base(), &p).expect("sampled invertible");
        let mut padded = s.clone();
        padded.resize(n, t.top().zero());
        let z = rank::top_times_base(t, &padded, &p_inv);
        let k_pub = self.public_vector(&x, &g, &z);
        let pk = PublicKey { params: self.params, g, k_pub };
        Ok((PrivateKey { x, z, p, s }, pk))
    }

    /// `x · Moore_k(g) + z`.
    pub fn public_vector(&self, x: &[TopElem], g: &[MidElem], z: &[TopElem]) -> Vec<TopElem> {
        let top = self.tower.top();
        let gen = self.generator(g);
        (0..g.len())
            .map(|j| {
                x.iter()
                    .enumerate()
                    .fold(z[j].clone(), |acc, (i, xi)| top.add(&acc, &top.scale(xi, *gen.get(i, j))))
            })
            .collect()
    }

    /// The `u × n` matrix whose row `i` is `Tr(γ_i k_pub) = x_i G + z_i`.
    pub fn public_matrix(&self, pk: &PublicKey) -> Vec<Vec<MidElem>> {
        rank::expand_top_to_mid(&self.tower, &pk.k_pub).row_vecs()
    }

    /// An error vector of rank exactly `t`.
    pub fn sample_rank_error<R: Rng + ?Sized>(&self, t: usize, rng: &mut R) -> Result<Vec<MidElem>, FlError> {
        Ok(sample_rank_error(&self.tower, self.params.n, t, rng)?)
    }

    pub fn encrypt<R: Rng + ?Sized>(&self, pk: &PublicKey, msg: &Plaintext, rng: &mut R) -> Result<Ciphertext, FlError> {
        let alpha = self.tower.top().random(rng);
        let e = self.sample_rank_error(pk.t_pub(), rng)?;
        self.encrypt_with(pk, msg, &alpha, &e)
    }

    /// Deterministic encryption with caller-chosen `α` and error `e`.
    pub fn encrypt_with(
        &self,
        pk: &PublicKey,
        msg: &Plaintext,
        alpha: &TopElem,
        e: &[MidElem],
    ) -> Result<Ciphertext, FlError> {
        self.check_public(pk)?;
        let SystemParams { n, k, u, .. } = self.params;
        if msg.values().len() != k {
            return Err(FlError::InvalidPlaintext { expected: k - u });
        }
        if e.len() != n {
            return Err(FlError::Code(crate::error::CodeError::LengthMismatch { expected: n, got: e.len() }));
        }
        let f = self.tower.mid();
        let top = self.tower.top();
        let mg = linalg::vec_mul(f, msg.values(), &self.generator(&pk.g));
        let c = (0..n)
            .map(|j| {
                let tr = self.tower.trace_to_mid(&top.mul(alpha, &pk.k_pub[j]));
                f.add(&f.add(&mg[j], &tr), &e[j])
            })
            .collect();
        Ok(Ciphertext(c))
    }

    pub fn decrypt(&self, sk: &PrivateKey, pk: &PublicKey, c: &Ciphertext) -> Result<Plaintext, FlError> {
        self.check_public(pk)?;
        let SystemParams { n, k, u, w, .. } = self.params;
        if c.0.len() != n || sk.x.len() != k || sk.p.rows() != n || sk.p.cols() != n {
            return Err(FlError::KeyMismatch("ciphertext or private key has the wrong shape".into()));
        }
        let t = &self.tower;
        let f = t.mid();
        let top = t.top();
        let cp = rank::mid_times_base(f, &c.0, &sk.p);
        let gp = rank::mid_times_base(f, &pk.g, &sk.p);
        let code = GabidulinCode::new(f, gp[w..].to_vec(), k)?;
        let (m_prime, _) = code.decode(&cp[w..]).map_err(|_| FlError::DecryptionFailure)?;
        let dual = t.dual_basis(&sk.x[k - u..])?;
        let alpha = m_prime[k - u..]
            .iter()
            .zip(&dual)
            .fold(top.zero(), |acc, (mi, d)| top.add(&acc, &top.scale(d, *mi)));
        let msg = m_prime
            .iter()
            .zip(&sk.x)
            .map(|(mi, xi)| f.sub(mi, &t.trace_to_mid(&top.mul(&alpha, xi))))
            .collect();
        Plaintext::new(msg, u).map_err(|_| FlError::DecryptionFailure)
    }

    /// Shape and parameter consistency of a public key.
    pub fn check_public(&self, pk: &PublicKey) -> Result<(), FlError> {
        if pk.params != self.params {
            return Err(FlError::KeyMismatch("public key parameters differ".into()));
        }
        if pk.g.len() != self.params.n || pk.k_pub.len() != self.params.n {
            return Err(FlError::KeyMismatch("public key vectors have the wrong length".into()));
        }
        if pk.k_pub.iter().any(|e| e.coeffs().len() != self.params.u) {
            return Err(FlError::KeyMismatch("public key element has the wrong degree".into()));
        }
        Ok(())
    }
}

/// `e = a·B` with `a` of rank weight `t` and `B` a full-rank `t × n` matrix
/// over `F_q`, so `rank_q(e) = t`.
pub fn sample_rank_error<R: Rng + ?Sized>(
    tower: &FieldTower,
    n: usize,
    t: usize,
    rng: &mut R,
) -> Result<Vec<MidElem>, crate::error::InfeasibleRank> {
    let a = rank::sample_full_rank_vector(tower.mid(), t, rng)?;
    let b = rank::sample_full_rank_matrix(tower.base(), t, n, rng)?;
    Ok(rank::mid_times_base(tower.mid(), &a, &b))
}
