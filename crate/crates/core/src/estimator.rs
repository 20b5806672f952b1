//! Closed-form work factors (all in log2), key sizes and the comparison table.

use std::fmt::Write as _;

use num_bigint::BigUint;

use crate::error::FlError;
use crate::system::{key_metrics, validate, SystemParams, Tier};

/// log2 of the cost of every analysed attack on the repaired system.
#[derive(Debug, Clone, PartialEq)]
pub struct WorkFactorReport {
    pub params: SystemParams,
    pub t_pub: usize,
    /// `n - k - w`.
    pub phi: usize,
    /// Brute force over `α`.
    pub wf_alpha: f64,
    /// Generic syndrome decoding of the ciphertext.
    pub wf_dec: f64,
    /// Linearization with the repaired key structure taken into account.
    pub wf_lin_repaired: f64,
    /// Linearization against a random-looking public key.
    pub wf_lin_random: f64,
    /// Number of possible `z`; approximate, it rests on an unproven bound
    /// on the decoder failure probability.
    pub wf_z: f64,
    /// Interleaved decoding.
    pub wf_ild: f64,
    /// The gcd-based algebraic attack.
    pub wf_alg: f64,
    /// Moving to another close error.
    pub wf_err: f64,
    /// log2 of the Gröbner system's variable count `binom(n, k + 2 t_pub - u + 1)`.
    pub groebner_np_log2: f64,
    /// Gröbner degree `(q^(t_pub+1) - 1)/(q - 1)`.
    pub groebner_dp: BigUint,
    /// Minimum over `wf_err, wf_alg, wf_dec, wf_lin_repaired, wf_ild, wf_alpha`.
    pub min_security: f64,
    /// Name of the attack attaining the minimum.
    pub min_attack: &'static str,
    pub key_size_bytes: f64,
    pub rate: f64,
}

impl WorkFactorReport {
    /// `(name, value)` for every attack entering the minimum.
    pub fn minimized(&self) -> [(&'static str, f64); 6] {
        [
            ("wf_err", self.wf_err),
            ("wf_alg", self.wf_alg),
            ("wf_dec", self.wf_dec),
            ("wf_lin_repaired", self.wf_lin_repaired),
            ("wf_ild", self.wf_ild),
            ("wf_alpha", self.wf_alpha),
        ]
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "parameters: {}", self.params);
        let _ = writeln!(s, "phi = n-k-w = {}", self.phi);
        for (name, v) in self.minimized() {
            let mark = if name == self.min_attack { "  <- minimum" } else { "" };
            let _ = writeln!(s, "  {name:<16} {}{mark}", fmt2(v));
        }
        let _ = writeln!(s, "  {:<16} {}", "wf_lin_random", fmt2(self.wf_lin_random));
        let _ = writeln!(s, "  {:<16} {}  (approximate count of z)", "wf_z", fmt2(self.wf_z));
        let _ = writeln!(s, "  groebner n_p    2^{}", fmt2(self.groebner_np_log2));
        let _ = writeln!(s, "  groebner d_p    {}", self.groebner_dp);
        let _ = writeln!(s, "security level: {} ({})", fmt2(self.min_security), self.min_attack);
        let _ = writeln!(s, "key size: {} KB", fmt2(self.key_size_bytes / 1000.0));
        let _ = writeln!(s, "rate: {}", fmt2(self.rate));
        s
    }
}

/// log2 of a positive big integer, accurate to about 1e-15 relative.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 64 {
        return (x.iter_u64_digits().next().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 64;
    let top: BigUint = x >> shift;
    (top.iter_u64_digits().next().unwrap_or(0) as f64).log2() + shift as f64
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::from(1u32);
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn log2_binomial(n: u64, k: u64) -> f64 {
    log2_big(&binomial(n, k))
}

/// Every work factor for a parameter set, assuming a repaired key (`φ = n - k - w`).
pub fn estimate_fl(p: &SystemParams) -> Result<WorkFactorReport, FlError> {
    let violations = validate(p, Tier::Functional);
    if !violations.is_empty() {
        return Err(FlError::ParameterViolation(violations));
    }
    let lq = f64::from(p.q).log2();
    let (q, m, u, n, k, w) = (p.q, p.m as i64, p.u as i64, p.n as i64, p.k as i64, p.w as i64);
    let t = p.t_pub() as i64;
    let phi = p.phi_repaired() as i64;

    let wf_alpha = (m * u) as f64 * lq;
    let ceil = ((k + 1) * m + n - 1) / n;
    let prefactor = 3.0 * ((n - k) as f64).log2() + 3.0 * (m as f64).log2();
    let wf_dec = prefactor + (t * ceil - m) as f64 * lq;
    let wf_lin_repaired = (m * (u * t + u + 1 - phi)) as f64 * lq;
    let wf_lin_random = (m * (t * (u + 2) - n + k + 1)) as f64 * lq;
    let wf_z = 2.0 * 0.288f64.log2() + (m * w + n * n) as f64 * lq;
    let wf_ild = (m * (w - phi)) as f64 * lq;
    // (Q^(t+1) - 1)/(Q - 1) = Σ_{i ≤ t} Q^i with Q = q^m.
    let big_q = BigUint::from(q).pow(p.m as u32);
    let geometric = (0..=t as u32).fold(BigUint::ZERO, |acc, i| acc + big_q.pow(i));
    let wf_alg = (m * (u - 1)) as f64 * lq + log2_big(&geometric);
    let wf_err = ((2 * w - n + k) * (n - w)) as f64 * lq;
    let np_k = (k + 2 * t - u + 1).max(0) as u64;
    let groebner_np_log2 = log2_binomial(n as u64, np_k);
    let groebner_dp = (BigUint::from(q).pow(t as u32 + 1) - 1u32) / BigUint::from(q - 1);

    let metrics = key_metrics(p);
    let mut report = WorkFactorReport {
        params: *p,
        t_pub: t as usize,
        phi: phi as usize,
        wf_alpha,
        wf_dec,
        wf_lin_repaired,
        wf_lin_random,
        wf_z,
        wf_ild,
        wf_alg,
        wf_err,
        groebner_np_log2,
        groebner_dp,
        min_security: f64::INFINITY,
        min_attack: "",
        key_size_bytes: metrics.key_size_bytes,
        rate: metrics.rate,
    };
    let (name, value) = report
        .minimized()
        .into_iter()
        .fold(("", f64::INFINITY), |best, cur| if cur.1 < best.1 { cur } else { best });
    report.min_security = value;
    report.min_attack = name;
    Ok(report)
}

/// McEliece with a binary Goppa code: minimum over `p` of
/// `½·C(n,τ)·C(n-k,τ-p)⁻¹·C(k,p)^(-1/2)`, in log2.
pub fn estimate_mceliece(n: u64, k: u64, tau: u64) -> f64 {
    (0..=tau.min(k))
        .filter(|&p| tau - p <= n - k)
        .map(|p| -1.0 + log2_binomial(n, tau) - log2_binomial(n - k, tau - p) - 0.5 * log2_binomial(k, p))
        .fold(f64::INFINITY, f64::min)
}

/// Loidreau's system: `m³·q^((t-1)·⌊k·min(m,n)/n⌋)`, in log2.
pub fn estimate_loidreau(q: u32, m: u64, k: u64, n: u64, t_loi: u64) -> f64 {
    let exponent = t_loi.saturating_sub(1) * (k * m.min(n) / n);
    3.0 * (m as f64).log2() + exponent as f64 * f64::from(q).log2()
}

/// Rounds to two decimals, halves away from zero.
pub fn fmt2(x: f64) -> String {
    format!("{:.2}", (x * 100.0).round() / 100.0)
}

/// `num/den` to two decimals, halves rounded up, computed exactly.
pub fn fmt2_ratio(num: u128, den: u128) -> String {
    let hundredths = (200 * num + den) / (2 * den);
    format!("{}.{:02}", hundredths / 100, hundredths % 100)
}

/// A row of the comparison table with the values printed there.
#[derive(Debug, Clone, PartialEq)]
pub enum Scheme {
    McEliece { n: u64, k: u64, m: u64, tau: u64 },
    Loidreau { n: u64, k: u64, m: u64, t_loi: u64, lambda: u64 },
    RepairedFl(SystemParams),
    /// Cited constants only; nothing is computed.
    QcMdpc { n: u64, k: u64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub scheme: Scheme,
    pub printed_security: &'static str,
    pub printed_rate: &'static str,
    pub printed_key_kb: &'static str,
}

/// The twelve rows of the published comparison, in order.
pub fn table1_rows() -> Vec<TableRow> {
    use Scheme::*;
    let row = |scheme, printed_security, printed_rate, printed_key_kb| TableRow {
        scheme,
        printed_security,
        printed_rate,
        printed_key_kb,
    };
    vec![
        row(McEliece { n: 1876, k: 1436, m: 11, tau: 41 }, "80.04", "0.77", "78.98"),
        row(Loidreau { n: 50, k: 32, m: 50, t_loi: 3, lambda: 3 }, "80.93", "0.64", "3.60"),
        row(RepairedFl(SystemParams::new(2, 61, 3, 61, 31, 16)), "90.00", "0.46", "1.86"),
        row(QcMdpc { n: 9602, k: 4801 }, "80.00", "0.50", "0.60"),
        row(McEliece { n: 3262, k: 2482, m: 12, tau: 66 }, "128.02", "0.76", "242.00"),
        row(Loidreau { n: 64, k: 40, m: 96, t_loi: 4, lambda: 3 }, "139.75", "0.63", "11.52"),
        row(RepairedFl(SystemParams::new(2, 63, 3, 63, 31, 18)), "141.56", "0.44", "1.98"),
        row(QcMdpc { n: 19714, k: 9857 }, "128.00", "0.50", "1.23"),
        row(McEliece { n: 7008, k: 5318, m: 13, tau: 133 }, "257.47", "0.76", "1123.43"),
        row(Loidreau { n: 120, k: 80, m: 128, t_loi: 4, lambda: 5 }, "261.00", "0.67", "51.20"),
        row(RepairedFl(SystemParams::new(2, 82, 4, 82, 48, 20)), "262.35", "0.54", "4.20"),
        row(QcMdpc { n: 65542, k: 32771 }, "256.00", "0.50", "4.10"),
    ]
}

/// One rendered line of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportLine {
    pub method: &'static str,
    pub params: String,
    /// Computed security in log2; `None` for pass-through rows.
    pub security: Option<f64>,
    pub security_display: String,
    /// Which formula produced the security value.
    pub source: String,
    pub rate_display: String,
    pub key_kb_display: String,
    pub row: TableRow,
    /// Full work-factor breakdown for repaired rows.
    pub fl_report: Option<WorkFactorReport>,
}

impl ReportLine {
    /// Columns whose computed value differs from the printed one.
    pub fn mismatches(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        if let Some(sec) = self.security {
            let printed: f64 = self.row.printed_security.parse().expect("numeric");
            if (sec - printed).abs() > SECURITY_TOLERANCE {
                out.push("security");
            }
        }
        if self.rate_display != self.row.printed_rate {
            out.push("rate");
        }
        if self.key_kb_display != self.row.printed_key_kb {
            out.push("key size");
        }
        out
    }
}

/// Largest difference in bits tolerated before a security value is flagged.
pub const SECURITY_TOLERANCE: f64 = 0.05;

pub fn table_report(rows: &[TableRow]) -> Vec<ReportLine> {
    rows.iter().map(report_line).collect()
}

fn report_line(row: &TableRow) -> ReportLine {
    let line = |method, params, security: Option<f64>, display: String, source: &str, rate, key| ReportLine {
        method,
        params,
        security,
        security_display: display,
        source: source.to_string(),
        rate_display: rate,
        key_kb_display: key,
        row: row.clone(),
        fl_report: None,
    };
    match &row.scheme {
        Scheme::McEliece { n, k, m, tau } => {
            let sec = estimate_mceliece(*n, *k, *tau);
            let key_bits = u128::from(*k) * u128::from(n - k);
            line(
                "McEliece",
                format!("q=2 k={k} n={n} m={m} tau={tau}"),
                Some(sec),
                fmt2(sec),
                "WF_ME",
                fmt2_ratio(u128::from(*k), u128::from(*n)),
                fmt2_ratio(key_bits, 8000),
            )
        }
        Scheme::Loidreau { n, k, m, t_loi, lambda } => {
            let sec = estimate_loidreau(2, *m, *k, *n, *t_loi);
            let key_bits = u128::from(*k) * u128::from(n - k) * u128::from(*m);
            line(
                "Loidreau",
                format!("q=2 k={k} n={n} m={m} t_Loi={t_loi} lambda={lambda}"),
                Some(sec),
                fmt2(sec),
                "WF_Loi",
                fmt2_ratio(u128::from(*k), u128::from(*n)),
                fmt2_ratio(key_bits, 8000),
            )
        }
        Scheme::RepairedFl(p) => {
            let report = estimate_fl(p).expect("table rows are valid");
            let key_bits = ((p.u + 1) * p.n * p.m) as u128;
            let mut l = line(
                "Repaired FL",
                format!("q={} u={} k={} n={} m={} w={}", p.q, p.u, p.k, p.n, p.m, p.w),
                Some(report.min_security),
                fmt2(report.min_security),
                report.min_attack,
                fmt2_ratio(p.message_len() as u128, p.n as u128),
                fmt2_ratio(key_bits, 8000),
            );
            l.fl_report = Some(report);
            l
        }
        Scheme::QcMdpc { n, k } => line(
            "QC-MDPC",
            format!("q=2 k={k} n={n}"),
            None,
            row.printed_security.to_string(),
            "cited",
            row.printed_rate.to_string(),
            row.printed_key_kb.to_string(),
        ),
    }
}

/// Aligned plain-text table followed by the full breakdown of every repaired row.
pub fn render_text(lines: &[ReportLine]) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "{:<12} {:<40} {:>9} {:<16} {:>6} {:>10}  check",
        "method", "parameters", "security", "source", "rate", "key (KB)"
    );
    for l in lines {
        let mism = l.mismatches();
        let check = if mism.is_empty() {
            "ok".to_string()
        } else {
            format!(
                "MISMATCH {} (printed: security {}, rate {}, key {} KB)",
                mism.join(", "),
                l.row.printed_security,
                l.row.printed_rate,
                l.row.printed_key_kb
            )
        };
        let _ = writeln!(
            s,
            "{:<12} {:<40} {:>9} {:<16} {:>6} {:>10}  {}",
            l.method, l.params, l.security_display, l.source, l.rate_display, l.key_kb_display, check
        );
    }
    for l in lines.iter().filter(|l| l.fl_report.is_some()) {
        let _ = writeln!(s);
        let _ = write!(s, "{}", l.fl_report.as_ref().expect("filtered").render());
    }
    s
}

pub fn render_csv(lines: &[ReportLine]) -> String {
    let mut s = String::from(
        "method,parameters,security,source,rate,key_kb,printed_security,printed_rate,printed_key_kb,mismatch\n",
    );
    for l in lines {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            l.method,
            l.params,
            l.security_display,
            l.source,
            l.rate_display,
            l.key_kb_display,
            l.row.printed_security,
            l.row.printed_rate,
            l.row.printed_key_kb,
            l.mismatches().join(";")
        );
    }
    s
}
