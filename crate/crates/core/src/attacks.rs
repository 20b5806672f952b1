//! Executable forms of the structural attacks: interleaved key recovery,
//! the key-quality condition it hinges on, linearization feasibility, and
//! the close-error attack.

use rand::Rng;

use crate::error::AttackError;
use crate::field::Field;
use crate::gabidulin::GabidulinCode;
use crate::interleaved::{error_rank_condition, InterleavedCode};
use crate::linalg::{self, Matrix};
use crate::rank;
use crate::system::{Ciphertext, FlSystem, PublicKey};
use crate::tower::{MidElem, TopElem};

/// A candidate private key `(x, z)` with `k_pub = x·G + z`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecoveredKey {
    pub x: Vec<TopElem>,
    pub z: Vec<TopElem>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Stacked-Moore rank of the decoded error rows, when known.
    pub phi: Option<usize>,
    /// `F_q`-rank of the decoded error.
    pub error_rank: Option<usize>,
    pub trials: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AttackOutcome {
    pub succeeded: bool,
    pub recovered: Option<RecoveredKey>,
    pub diagnostics: Diagnostics,
}

impl AttackOutcome {
    fn failed(trials: u64) -> Self {
        AttackOutcome { succeeded: false, recovered: None, diagnostics: Diagnostics { trials, ..Default::default() } }
    }
}

fn interleaved_code(sys: &FlSystem, pk: &PublicKey) -> Result<InterleavedCode, AttackError> {
    sys.check_public(pk).map_err(|e| AttackError::Precondition(e.to_string()))?;
    let code = GabidulinCode::new(sys.tower().mid(), pk.g.clone(), sys.params().k)
        .map_err(|e| AttackError::Precondition(e.to_string()))?;
    Ok(InterleavedCode::new(code, sys.params().u))
}

/// Decodes `rows` as an interleaved word and maps the result back to a
/// candidate `(x, z')`, where `z'` are the decoded error rows.
fn decode_key(
    sys: &FlSystem,
    code: &InterleavedCode,
    rows: &[Vec<MidElem>],
) -> Option<(Vec<TopElem>, Vec<Vec<MidElem>>, usize)> {
    let out = code.decode(rows).ok()?;
    let x = rank::recombine_mid_to_top(sys.tower(), &Matrix::from_rows(out.messages, sys.params().k));
    Some((x, out.error_rows, out.error_rank))
}

/// Runs the interleaved decoder on the `u × n` expansion of `k_pub`.
pub fn attack_interleaved_key_recovery(sys: &FlSystem, pk: &PublicKey) -> Result<AttackOutcome, AttackError> {
    let code = interleaved_code(sys, pk)?;
    let rows = sys.public_matrix(pk);
    let Some((x, z_rows, error_rank)) = decode_key(sys, &code, &rows) else {
        return Ok(AttackOutcome::failed(1));
    };
    let n = sys.params().n;
    let z = rank::recombine_mid_to_top(sys.tower(), &Matrix::from_rows(z_rows.clone(), n));
    if sys.public_vector(&x, &pk.g, &z) != pk.k_pub {
        return Ok(AttackOutcome::failed(1));
    }
    let phi = error_rank_condition(sys.tower().mid(), &z_rows, sys.params().phi_repaired().max(1));
    Ok(AttackOutcome {
        succeeded: true,
        recovered: Some(RecoveredKey { x, z }),
        diagnostics: Diagnostics { phi: Some(phi), error_rank: Some(error_rank), trials: 1 },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GokCondition {
    /// `rank_{q^m} Moore_{n-k-w}(Z)`, `Z` the trace expansion of `z`.
    pub phi: usize,
    /// Whether `phi = w`, i.e. whether key recovery succeeds.
    pub would_succeed: bool,
}

/// Audits a private `z`: builds `Z` with rows `Tr(γ_i z)` and returns the
/// rank of its stacked `Moore_{n-k-w}` matrix.
pub fn gok_condition(sys: &FlSystem, z: &[TopElem]) -> GokCondition {
    gok_condition_with_basis(sys, z, sys.tower().gamma())
}

/// [`gok_condition`] with rows `Tr(b_i z)` for an arbitrary basis `b`.
pub fn gok_condition_with_basis(sys: &FlSystem, z: &[TopElem], basis: &[TopElem]) -> GokCondition {
    let t = sys.tower();
    let rows = trace_rows(sys, z, basis);
    let s = sys.params().phi_repaired();
    let phi = if s == 0 { 0 } else { error_rank_condition(t.mid(), &rows, s) };
    GokCondition { phi, would_succeed: phi == sys.params().w }
}

/// Rows `Tr(b_i v)` for each basis element.
pub fn trace_rows(sys: &FlSystem, v: &[TopElem], basis: &[TopElem]) -> Vec<Vec<MidElem>> {
    let t = sys.tower();
    basis.iter().map(|b| v.iter().map(|x| t.trace_to_mid(&t.top().mul(b, x))).collect()).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LinearizationReport {
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    /// Dimension of the left kernel of `M`.
    pub kernel_dim: usize,
    /// The attack extracts the message only when the left kernel is one-dimensional.
    pub feasible: bool,
}

/// The matrix
/// `M = [Moore_{t+1}(c); -Moore_{t+1}(k_pub^(1)); …; -Moore_{t+1}(k_pub^(u)); -Moore_{k+t-u}(g)]`
/// with `t = t_pub` and `k_pub^(i) = Tr(γ_i k_pub)`.
pub fn linearization_matrix(sys: &FlSystem, pk: &PublicKey, c: &Ciphertext) -> Matrix<MidElem> {
    let f = sys.tower().mid();
    let p = sys.params();
    let t = p.t_pub();
    let n = p.n;
    let neg = |m: Matrix<MidElem>| m.map(|x| f.neg(x));
    let mut m = rank::moore_matrix(f, &c.0, t + 1);
    for row in sys.public_matrix(pk) {
        m = m.vstack(&neg(rank::moore_matrix(f, &row, t + 1)));
    }
    let g_rows = (p.k + t).saturating_sub(p.u);
    m.vstack(&neg(Matrix::from_rows(rank::moore_rows(f, &pk.g, g_rows), n)))
}

pub fn linearization_feasibility(
    sys: &FlSystem,
    pk: &PublicKey,
    c: &Ciphertext,
) -> Result<LinearizationReport, AttackError> {
    sys.check_public(pk).map_err(|e| AttackError::Precondition(e.to_string()))?;
    if c.0.len() != sys.params().n {
        return Err(AttackError::Precondition("ciphertext length differs from n".into()));
    }
    let m = linearization_matrix(sys, pk, c);
    let rank = linalg::rank(sys.tower().mid(), &m);
    let kernel_dim = m.rows() - rank;
    Ok(LinearizationReport { rows: m.rows(), cols: m.cols(), rank, kernel_dim, feasible: kernel_dim == 1 })
}

/// `φ + k + 2 t_pub - u` for repaired keys.
pub fn linearization_rank_bound(sys: &FlSystem) -> usize {
    let p = sys.params();
    (p.phi_repaired() + p.k + 2 * p.t_pub()).saturating_sub(p.u)
}

/// Number of independent `F_q^n` vectors the close-error attack guesses,
/// `2w - n + k`, or `None` when that is not positive.
pub fn close_error_guess_count(sys: &FlSystem) -> Option<usize> {
    let p = sys.params();
    (2 * p.w + p.k).checked_sub(p.n).filter(|&c| c >= 1)
}

/// Guesses `2w - n + k` independent vectors, places them as the leading
/// base-field rows of a shift `Y` of the public matrix (row `i·m + j` of the
/// `um × n` expansion is digit `j` of row `i`), and decodes `K + Y`. Succeeds
/// once the decoded `(x, z' - Y)` reproduces `k_pub` with `rank_q(z) ≤ w`.
pub fn close_error_attack<R: Rng + ?Sized>(
    sys: &FlSystem,
    pk: &PublicKey,
    max_trials: u64,
    rng: &mut R,
) -> Result<AttackOutcome, AttackError> {
    let Some(count) = close_error_guess_count(sys) else {
        return Err(AttackError::Precondition("2w - n + k must be positive".into()));
    };
    let p = *sys.params();
    let t = sys.tower();
    let f = t.mid();
    if count > p.m * p.u {
        return Err(AttackError::Precondition("more guesses than base-field rows".into()));
    }
    let code = interleaved_code(sys, pk)?;
    let rows = sys.public_matrix(pk);
    for trial in 1..=max_trials {
        let guess = rank::sample_full_rank_matrix(t.base(), count, p.n, rng)
            .map_err(|e| AttackError::Precondition(e.to_string()))?;
        let shift = shift_rows(sys, &guess);
        let shifted: Vec<Vec<MidElem>> = rows
            .iter()
            .zip(&shift)
            .map(|(r, y)| r.iter().zip(y).map(|(a, b)| f.add(a, b)).collect())
            .collect();
        let Some((x, z_shifted, error_rank)) = decode_key(sys, &code, &shifted) else {
            continue;
        };
        let z_rows: Vec<Vec<MidElem>> = z_shifted
            .iter()
            .zip(&shift)
            .map(|(r, y)| r.iter().zip(y).map(|(a, b)| f.sub(a, b)).collect())
            .collect();
        if rank::rank_weight_stacked(f, &z_rows) > p.w {
            continue;
        }
        let z = rank::recombine_mid_to_top(t, &Matrix::from_rows(z_rows, p.n));
        if sys.public_vector(&x, &pk.g, &z) != pk.k_pub {
            continue;
        }
        let phi = error_rank_condition(f, &z_shifted, p.phi_repaired().max(1));
        return Ok(AttackOutcome {
            succeeded: true,
            recovered: Some(RecoveredKey { x, z }),
            diagnostics: Diagnostics { phi: Some(phi), error_rank: Some(error_rank), trials: trial },
        });
    }
    Err(AttackError::TrialBudgetExhausted { trials: max_trials })
}

/// The `u × n` shift over `F_{q^m}` whose base expansion starts with `guess`.
fn shift_rows(sys: &FlSystem, guess: &Matrix<u8>) -> Vec<Vec<MidElem>> {
    let p = sys.params();
    let f = sys.tower().mid();
    let mut digits = vec![vec![vec![0u8; p.m]; p.n]; p.u];
    for r in 0..guess.rows() {
        let (i, j) = (r / p.m, r % p.m);
        for (col, d) in guess.row(r).iter().enumerate() {
            digits[i][col][j] = *d;
        }
    }
    digits
        .iter()
        .map(|row| row.iter().map(|d| f.from_digits(d).expect("digits below q")).collect())
        .collect()
}
