//! The `FLRK` container shared by key, ciphertext and plaintext files.
//!
//! Layout: magic `FLRK`, version `0x01`, a role byte, seven big-endian `u16`
//! header fields `q, m, u, n, k, w, t_pub`, the `F_{q^m}` modulus (`m + 1`
//! digits), the `F_{q^{mu}}` modulus (`u + 1` elements of `m` digits), then
//! the payload. Every element is written as base-`q` digits, one byte each,
//! low degree first; `F_{q^{mu}}` elements as their `u` coordinates in turn.

use faure_loidreau::system::{validate, PrivateKey, PublicKey};
use faure_loidreau::{Ciphertext, FieldTower, Matrix, MidElem, SystemParams, Tier, TopElem};

pub const MAGIC: &[u8; 4] = b"FLRK";
pub const VERSION: u8 = 0x01;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    Public = 0x01,
    Private = 0x02,
    Ciphertext = 0x03,
    Plaintext = 0x04,
}

impl Role {
    fn from_byte(b: u8) -> Option<Role> {
        match b {
            0x01 => Some(Role::Public),
            0x02 => Some(Role::Private),
            0x03 => Some(Role::Ciphertext),
            0x04 => Some(Role::Plaintext),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("malformed file: {0}")]
pub struct Malformed(pub String);

fn bad(msg: impl Into<String>) -> Malformed {
    Malformed(msg.into())
}

/// Header plus the tower it describes.
#[derive(Debug, Clone)]
pub struct Header {
    pub role: Role,
    pub params: SystemParams,
    pub tower: FieldTower,
}

#[derive(Debug, Clone)]
pub enum Payload {
    Public(PublicKey),
    Private(PrivateKey),
    Ciphertext(Ciphertext),
    /// The `k - u` free symbols.
    Plaintext(Vec<MidElem>),
}

impl Payload {
    fn role(&self) -> Role {
        match self {
            Payload::Public(_) => Role::Public,
            Payload::Private(_) => Role::Private,
            Payload::Ciphertext(_) => Role::Ciphertext,
            Payload::Plaintext(_) => Role::Plaintext,
        }
    }
}

struct Writer<'a> {
    tower: &'a FieldTower,
    out: Vec<u8>,
}

impl Writer<'_> {
    fn mid(&mut self, a: MidElem) {
        self.out.extend(self.tower.mid().digits(a));
    }

    fn mids(&mut self, v: &[MidElem]) {
        v.iter().for_each(|a| self.mid(*a));
    }

    fn tops(&mut self, v: &[TopElem]) {
        v.iter().for_each(|a| self.mids(a.coeffs()));
    }
}

pub fn encode(params: &SystemParams, tower: &FieldTower, payload: &Payload) -> Vec<u8> {
    let mut w = Writer { tower, out: Vec::new() };
    w.out.extend_from_slice(MAGIC);
    w.out.push(VERSION);
    w.out.push(payload.role() as u8);
    let fields = [params.q as usize, params.m, params.u, params.n, params.k, params.w, params.t_pub()];
    for v in fields {
        w.out.extend_from_slice(&(v as u16).to_be_bytes());
    }
    w.out.extend_from_slice(tower.mid().modulus());
    w.mids(tower.top().modulus());
    match payload {
        Payload::Public(pk) => {
            w.mids(&pk.g);
            w.tops(&pk.k_pub);
        }
        Payload::Private(sk) => {
            w.tops(&sk.x);
            w.tops(&sk.z);
            for i in 0..sk.p.rows() {
                w.out.extend_from_slice(sk.p.row(i));
            }
            w.tops(&sk.s);
        }
        Payload::Ciphertext(c) => w.mids(&c.0),
        Payload::Plaintext(v) => w.mids(v),
    }
    w.out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize) -> Result<&'a [u8], Malformed> {
        let end = self.pos.checked_add(len).filter(|&e| e <= self.bytes.len()).ok_or_else(|| bad("truncated"))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u16(&mut self) -> Result<usize, Malformed> {
        let b = self.take(2)?;
        Ok(usize::from(u16::from_be_bytes([b[0], b[1]])))
    }
}

struct ElemReader<'a, 'b> {
    r: &'b mut Reader<'a>,
    tower: &'b FieldTower,
}

impl ElemReader<'_, '_> {
    fn mid(&mut self) -> Result<MidElem, Malformed> {
        let m = self.tower.m();
        let digits = self.r.take(m)?;
        self.tower.mid().from_digits(digits).map_err(|e| bad(e.to_string()))
    }

    fn mids(&mut self, len: usize) -> Result<Vec<MidElem>, Malformed> {
        (0..len).map(|_| self.mid()).collect()
    }

    fn tops(&mut self, len: usize) -> Result<Vec<TopElem>, Malformed> {
        (0..len)
            .map(|_| {
                let c = self.mids(self.tower.u())?;
                self.tower.top().from_coeffs(c).map_err(|e| bad(e.to_string()))
            })
            .collect()
    }
}

/// Parses a whole file, rejecting trailing bytes.
pub fn decode(bytes: &[u8]) -> Result<(Header, Payload), Malformed> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(4)? != MAGIC {
        return Err(bad("wrong magic"));
    }
    let version = r.take(1)?[0];
    if version != VERSION {
        return Err(bad(format!("unsupported version {version:#04x}")));
    }
    let role = Role::from_byte(r.take(1)?[0]).ok_or_else(|| bad("unknown role"))?;
    let mut h = [0usize; 7];
    for v in &mut h {
        *v = r.u16()?;
    }
    let params = SystemParams::new(h[0] as u32, h[1], h[2], h[3], h[4], h[5]);
    let violations = validate(&params, Tier::Functional);
    if let Some(v) = violations.first() {
        return Err(bad(format!("header parameters: {v}")));
    }
    if h[6] != params.t_pub() {
        return Err(bad("t_pub does not match the parameters"));
    }
    let q = params.q;
    let mid_modulus = r.take(params.m + 1)?.to_vec();
    if mid_modulus.iter().any(|&d| u32::from(d) >= q) {
        return Err(bad("modulus digit out of range"));
    }
    let mut top_modulus = Vec::with_capacity(params.u + 1);
    for _ in 0..=params.u {
        let digits = r.take(params.m)?;
        if digits.iter().any(|&d| u32::from(d) >= q) {
            return Err(bad("modulus digit out of range"));
        }
        top_modulus.push(digits.to_vec());
    }
    let provisional = FieldTower::build(q, params.m, 1).map_err(|e| bad(e.to_string()))?;
    let tm: Vec<MidElem> = top_modulus
        .iter()
        .map(|d| provisional.mid().from_digits(d))
        .collect::<Result<_, _>>()
        .map_err(|e| bad(e.to_string()))?;
    let tower = FieldTower::from_moduli(q, &mid_modulus, &tm).map_err(|e| bad(e.to_string()))?;
    if tower.m() != params.m || tower.u() != params.u {
        return Err(bad("moduli degrees do not match the header"));
    }

    let SystemParams { n, k, u, .. } = params;
    let mut e = ElemReader { r: &mut r, tower: &tower };
    let payload = match role {
        Role::Public => Payload::Public(PublicKey { params, g: e.mids(n)?, k_pub: e.tops(n)? }),
        Role::Private => {
            let x = e.tops(k)?;
            let z = e.tops(n)?;
            let digits = e.r.take(n * n)?;
            if digits.iter().any(|&d| u32::from(d) >= q) {
                return Err(bad("matrix entry out of range"));
            }
            let p = Matrix::from_fn(n, n, |i, j| digits[i * n + j]);
            let s = e.tops(params.w)?;
            Payload::Private(PrivateKey { x, z, p, s })
        }
        Role::Ciphertext => Payload::Ciphertext(Ciphertext(e.mids(n)?)),
        Role::Plaintext => Payload::Plaintext(e.mids(k - u)?),
    };
    if r.pos != bytes.len() {
        return Err(bad("trailing bytes"));
    }
    Ok((Header { role, params, tower }, payload))
}
