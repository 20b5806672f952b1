//! Dense univariate polynomials over a [`Field`], little-endian coefficient
//! vectors. Only what modulus search and inversion need.

use crate::field::Field;

pub(crate) fn trim<F: Field>(f: &F, p: &mut Vec<F::Elem>) {
    while p.last().is_some_and(|c| f.is_zero(c)) {
        p.pop();
    }
}

pub(crate) fn degree<F: Field>(f: &F, p: &[F::Elem]) -> Option<usize> {
    p.iter().rposition(|c| !f.is_zero(c))
}

pub(crate) fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let len = a.len().max(b.len());
    let zero = f.zero();
    let mut out: Vec<F::Elem> = (0..len)
        .map(|i| f.sub(a.get(i).unwrap_or(&zero), b.get(i).unwrap_or(&zero)))
        .collect();
    trim(f, &mut out);
    out
}

pub(crate) fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if f.is_zero(ai) {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] = f.add(&out[i + j], &f.mul(ai, bj));
        }
    }
    trim(f, &mut out);
    out
}

/// Quotient and remainder; `d` must be nonzero.
pub(crate) fn divrem<F: Field>(
    f: &F,
    a: &[F::Elem],
    d: &[F::Elem],
) -> (Vec<F::Elem>, Vec<F::Elem>) {
    let dd = degree(f, d).expect("division by zero polynomial");
    let lead_inv = f.inv(&d[dd]).expect("nonzero leading coefficient");
    let mut r: Vec<F::Elem> = a.to_vec();
    trim(f, &mut r);
    if r.len() <= dd {
        return (Vec::new(), r);
    }
    let mut quot = vec![f.zero(); r.len() - dd];
    while let Some(rd) = degree(f, &r) {
        if rd < dd {
            break;
        }
        let c = f.mul(&r[rd], &lead_inv);
        let shift = rd - dd;
        for (j, dj) in d[..=dd].iter().enumerate() {
            r[shift + j] = f.sub(&r[shift + j], &f.mul(&c, dj));
        }
        quot[shift] = c;
        trim(f, &mut r);
    }
    trim(f, &mut quot);
    (quot, r)
}

pub(crate) fn rem<F: Field>(f: &F, a: &[F::Elem], d: &[F::Elem]) -> Vec<F::Elem> {
    divrem(f, a, d).1
}

pub(crate) fn mulmod<F: Field>(
    f: &F,
    a: &[F::Elem],
    b: &[F::Elem],
    modulus: &[F::Elem],
) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), modulus)
}

pub(crate) fn powmod<F: Field>(
    f: &F,
    a: &[F::Elem],
    mut e: u128,
    modulus: &[F::Elem],
) -> Vec<F::Elem> {
    let mut base = rem(f, a, modulus);
    let mut acc = rem(f, &[f.one()], modulus);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, modulus);
        }
        e >>= 1;
        if e > 0 {
            base = mulmod(f, &base, &base, modulus);
        }
    }
    acc
}

fn make_monic<F: Field>(f: &F, p: &mut [F::Elem]) {
    if let Some(d) = degree(f, p) {
        let inv = f.inv(&p[d]).expect("nonzero");
        for c in p.iter_mut() {
            *c = f.mul(c, &inv);
        }
    }
}

pub(crate) fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    make_monic(f, &mut x);
    x
}

/// Inverse of `a` modulo `modulus` via the extended Euclidean algorithm.
pub(crate) fn inverse_mod<F: Field>(
    f: &F,
    a: &[F::Elem],
    modulus: &[F::Elem],
) -> Option<Vec<F::Elem>> {
    let mut r0 = modulus.to_vec();
    let mut r1 = rem(f, a, modulus);
    trim(f, &mut r0);
    if r1.is_empty() {
        return None;
    }
    let mut s0: Vec<F::Elem> = Vec::new();
    let mut s1: Vec<F::Elem> = vec![f.one()];
    while !r1.is_empty() {
        let (qt, r) = divrem(f, &r0, &r1);
        let s = sub(f, &s0, &mul(f, &qt, &s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    // r0 is the gcd; invertible only if it is a constant.
    if degree(f, &r0) != Some(0) {
        return None;
    }
    let c = f.inv(&r0[0])?;
    let out: Vec<F::Elem> = s0.iter().map(|x| f.mul(x, &c)).collect();
    Some(rem(f, &out, modulus))
}

/// `p^Q mod modulus` where `Q = q^prime_degree` is the field order.
fn pow_field_order<F: Field>(f: &F, p: &[F::Elem], modulus: &[F::Elem]) -> Vec<F::Elem> {
    let q = u128::from(f.characteristic());
    let mut out = p.to_vec();
    for _ in 0..f.prime_degree() {
        out = powmod(f, &out, q, modulus);
    }
    out
}

/// Ben-Or irreducibility test: `gcd(x^(Q^i) - x, p) = 1` for all
/// `1 <= i <= deg/2`.
pub(crate) fn is_irreducible<F: Field>(f: &F, p: &[F::Elem]) -> bool {
    let Some(d) = degree(f, p) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    if d == 1 {
        return true;
    }
    let x = vec![f.zero(), f.one()];
    let mut h = rem(f, &x, p);
    for _ in 1..=d / 2 {
        h = pow_field_order(f, &h, p);
        let g = gcd(f, &sub(f, &h, &x), p);
        if degree(f, &g) != Some(0) {
            return false;
        }
    }
    true
}
