//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use faure_loidreau::attacks::{
    attack_interleaved_key_recovery, close_error_attack, gok_condition, linearization_feasibility,
    linearization_rank_bound,
};
use faure_loidreau::estimator::{estimate_mceliece, estimate_loidreau, fmt2, table1_rows, table_report, Scheme};
use faure_loidreau::field::Field;
use faure_loidreau::rank::{self, moore_matrix};
use faure_loidreau::{
    linalg, ChaCha20Rng, FailureDetected, FieldTower, FlSystem, GabidulinCode, InterleavedCode, Matrix, MidElem,
    Plaintext, SeedableRng, SystemParams,
};

const ROUND_TRIP_LIMIT: Duration = Duration::from_secs(30);
const CLOSE_ERROR_LIMIT: Duration = Duration::from_secs(300);
const CLOSE_ERROR_BUDGET: u64 = 10 << 14;
const COMPARISON_TOLERANCE: f64 = 0.05;

type Outcome = Result<String, String>;

fn small_params(w: usize) -> SystemParams {
    SystemParams::new(2, 16, 3, 16, 7, w)
}

fn random_plaintext(sys: &FlSystem, rng: &mut ChaCha20Rng) -> Plaintext {
    let f = sys.tower().mid();
    let p = sys.params();
    Plaintext::from_free((0..p.message_len()).map(|_| f.random(rng)).collect(), p.u)
}

fn c1_round_trip() -> Outcome {
    let start = Instant::now();
    let sys = FlSystem::new(small_params(5)).map_err(|e| e.to_string())?;
    let mut ok = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(1_000 + seed);
        let (sk, pk) = sys.keygen_repaired(&mut rng).map_err(|e| e.to_string())?;
        for _ in 0..10 {
            let msg = random_plaintext(&sys, &mut rng);
            let c = sys.encrypt(&pk, &msg, &mut rng).map_err(|e| e.to_string())?;
            if sys.decrypt(&sk, &pk, &c).ok() == Some(msg) {
                ok += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    let detail = format!("{ok}/1000 decrypted in {elapsed:.2?}");
    if ok == 1000 && elapsed < ROUND_TRIP_LIMIT {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// `(would_succeed, attack_succeeded)` per key, shared by criteria 2 to 4.
struct KeyAudit {
    repaired: Vec<(bool, bool)>,
    original: Vec<(bool, bool)>,
}

fn c2_repair(audit: &mut KeyAudit) -> Outcome {
    let p = small_params(5);
    let sys = FlSystem::new(p).map_err(|e| e.to_string())?;
    let mut bad = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(2_000 + seed);
        let (sk, pk) = sys.keygen_repaired(&mut rng).map_err(|e| e.to_string())?;
        let gok = gok_condition(&sys, &sk.z);
        let code = GabidulinCode::new(sys.tower().mid(), pk.g.clone(), p.k).map_err(|e| e.to_string())?;
        let decoded = InterleavedCode::new(code, p.u).decode(&sys.public_matrix(&pk));
        if gok.phi != p.n - p.k - p.w || decoded != Err(FailureDetected) {
            bad += 1;
        }
        let attack = attack_interleaved_key_recovery(&sys, &pk).map_err(|e| e.to_string())?;
        audit.repaired.push((gok.would_succeed, attack.succeeded));
    }
    let detail = format!("{} of 100 keys with phi = {} and FailureDetected", 100 - bad, p.n - p.k - p.w);
    if bad == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c3_break_original(audit: &mut KeyAudit) -> Outcome {
    let sys = FlSystem::new(small_params(6)).map_err(|e| e.to_string())?;
    let mut ok = 0;
    for seed in 0..200u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(3_000 + seed);
        let (sk, pk) = sys.keygen_original(&mut rng).map_err(|e| e.to_string())?;
        let out = attack_interleaved_key_recovery(&sys, &pk).map_err(|e| e.to_string())?;
        let verified = out
            .recovered
            .as_ref()
            .is_some_and(|r| sys.public_vector(&r.x, &pk.g, &r.z) == pk.k_pub);
        if out.succeeded && verified {
            ok += 1;
        }
        audit.original.push((gok_condition(&sys, &sk.z).would_succeed, out.succeeded));
    }
    let detail = format!("{ok}/200 keys recovered and verified (need >= 180)");
    if ok >= 180 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c4_equivalence(audit: &KeyAudit) -> Outcome {
    let all: Vec<&(bool, bool)> = audit.repaired.iter().chain(&audit.original).collect();
    let exceptions = all.iter().filter(|(a, b)| a != b).count();
    let detail = format!("{} keys, {exceptions} exceptions", all.len());
    if exceptions == 0 && all.len() == 300 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c5_decoder_oracle() -> Outcome {
    let tower = FieldTower::build(2, 4, 1).map_err(|e| e.to_string())?;
    let f = tower.mid();
    let beta = f.generator();
    let g: Vec<MidElem> = (0..4).map(|i| f.pow(&beta, i)).collect();
    let code = GabidulinCode::new(f, g, 2).map_err(|e| e.to_string())?;
    let elems: Vec<MidElem> = (0..16).map(|i| f.from_index(i)).collect();
    let book: Vec<(Vec<MidElem>, Vec<MidElem>)> = elems
        .iter()
        .flat_map(|a| elems.iter().map(move |b| vec![*a, *b]))
        .map(|m| {
            let c = code.encode(&m).expect("length k");
            (m, c)
        })
        .collect();
    // All vectors of rank weight at most one: zero and every a·b with a ≠ 0, b ≠ 0 over F_2.
    let mut errors = vec![vec![f.zero(); 4]];
    for a in &elems[1..] {
        for bits in 1..16u8 {
            errors.push((0..4).map(|j| if (bits >> j) & 1 == 1 { *a } else { f.zero() }).collect());
        }
    }
    let sub = |x: &[MidElem], y: &[MidElem]| -> Vec<MidElem> { x.iter().zip(y).map(|(a, b)| f.sub(a, b)).collect() };
    let mut checked = 0u64;
    let mut disagreements = 0u64;
    for (_, c) in &book {
        for e in &errors {
            let y: Vec<MidElem> = c.iter().zip(e).map(|(a, b)| f.add(a, b)).collect();
            let mut best = usize::MAX;
            let mut nearest = Vec::new();
            for (m, cw) in &book {
                let d = rank::rank_weight(f, &sub(&y, cw));
                if d < best {
                    best = d;
                    nearest.clear();
                }
                if d == best {
                    nearest.push((m.clone(), sub(&y, cw)));
                }
            }
            checked += 1;
            let oracle = if best <= 1 && nearest.len() == 1 { Some(nearest.pop().expect("one")) } else { None };
            if code.decode(&y).ok() != oracle || oracle.is_none() {
                disagreements += 1;
            }
        }
    }
    let detail = format!("{checked} received words (256 codewords x {} errors), {disagreements} disagreements", errors.len());
    if disagreements == 0 && checked == 256 * 226 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c6_table() -> Outcome {
    let lines = table_report(&table1_rows());
    let fl: Vec<_> = lines.iter().filter(|l| matches!(l.row.scheme, Scheme::RepairedFl(_))).collect();
    let keys: Vec<&str> = fl.iter().map(|l| l.key_kb_display.as_str()).collect();
    let rates: Vec<&str> = fl.iter().map(|l| l.rate_display.as_str()).collect();
    let row1 = fl[0].fl_report.as_ref().ok_or("missing row-1 report")?;
    let row1_ok = fmt2(row1.min_security) == "90.00" && row1.wf_err == 90.0 && row1.min_attack == "wf_err";
    let flagged = fl[1..].iter().all(|l| l.mismatches() == vec!["security"] && l.fl_report.is_some());
    let detail = format!(
        "keys {keys:?} KB, rates {rates:?}, row-1 security {} via {}, rows 2-3 computed {} / {} and flagged: {flagged}",
        fmt2(row1.min_security),
        row1.min_attack,
        fl[1].security_display,
        fl[2].security_display
    );
    if keys == ["1.86", "1.98", "4.20"] && rates == ["0.46", "0.44", "0.54"] && row1_ok && flagged {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c7_comparison() -> Outcome {
    let me = [
        (estimate_mceliece(1876, 1436, 41), 80.04),
        (estimate_mceliece(3262, 2482, 66), 128.02),
        (estimate_mceliece(7008, 5318, 133), 257.47),
    ];
    let loi = [
        (estimate_loidreau(2, 50, 32, 50, 3), 80.93),
        (estimate_loidreau(2, 96, 40, 64, 4), 139.75),
        (estimate_loidreau(2, 128, 80, 120, 4), 261.00),
    ];
    let ok = me.iter().chain(&loi).all(|(got, want)| (got - want).abs() <= COMPARISON_TOLERANCE);
    let show = |v: &[(f64, f64)]| v.iter().map(|(g, _)| format!("{g:.3}")).collect::<Vec<_>>().join(" / ");
    let detail = format!("McEliece {}, Loidreau {}", show(&me), show(&loi));
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c8_close_error() -> Outcome {
    let start = Instant::now();
    let sys = FlSystem::new(SystemParams::new(2, 12, 3, 12, 4, 5)).map_err(|e| e.to_string())?;
    let mut successes = 0;
    let mut trials = Vec::new();
    for seed in 0..20u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(8_000 + seed);
        let (_, pk) = sys.keygen_repaired(&mut rng).map_err(|e| e.to_string())?;
        if let Ok(out) = close_error_attack(&sys, &pk, CLOSE_ERROR_BUDGET, &mut rng) {
            let rec = out.recovered.as_ref().ok_or("success without key")?;
            let z_rank = rank::rank_weight_top(sys.tower(), &rec.z);
            if sys.public_vector(&rec.x, &pk.g, &rec.z) == pk.k_pub && z_rank <= sys.params().w {
                successes += 1;
            }
            trials.push(out.diagnostics.trials);
        }
    }
    let elapsed = start.elapsed();
    let mean = trials.iter().sum::<u64>() as f64 / trials.len().max(1) as f64;
    let detail = format!("{successes}/20 runs succeeded (mean {mean:.0} trials, budget {CLOSE_ERROR_BUDGET}) in {elapsed:.2?}");
    if successes >= 19 && elapsed < CLOSE_ERROR_LIMIT {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c9_linearization() -> Outcome {
    let sys = FlSystem::new(small_params(5)).map_err(|e| e.to_string())?;
    let bound = linearization_rank_bound(&sys);
    let mut violations = 0;
    let mut small_kernel = 0;
    let mut max_rank = 0;
    for seed in 0..100u64 {
        let mut rng = ChaCha20Rng::seed_from_u64(9_000 + seed);
        let (_, pk) = sys.keygen_repaired(&mut rng).map_err(|e| e.to_string())?;
        let msg = random_plaintext(&sys, &mut rng);
        let c = sys.encrypt(&pk, &msg, &mut rng).map_err(|e| e.to_string())?;
        let rep = linearization_feasibility(&sys, &pk, &c).map_err(|e| e.to_string())?;
        max_rank = max_rank.max(rep.rank);
        if rep.rank > bound {
            violations += 1;
        }
        if rep.kernel_dim <= 1 {
            small_kernel += 1;
        }
    }
    let detail = format!(
        "rank(M) <= {bound} violated on {violations}/100 keys (max rank {max_rank}); kernel dim <= 1 on {small_kernel}/100"
    );
    if violations == 0 && small_kernel == 0 {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c10_properties() -> Outcome {
    let mut rng = ChaCha20Rng::seed_from_u64(10_000);
    let mut failures: Vec<&str> = Vec::new();

    for (q, m, u) in [(2, 16, 3), (3, 5, 2), (2, 61, 3)] {
        let t = FieldTower::build(q, m, u).map_err(|e| e.to_string())?;
        let (mid, top) = (t.mid(), t.top());
        for _ in 0..1000 {
            let (a, b, c) = (mid.random(&mut rng), mid.random(&mut rng), mid.random(&mut rng));
            let assoc = mid.mul(&mid.mul(&a, &b), &c) == mid.mul(&a, &mid.mul(&b, &c));
            let dist = mid.mul(&a, &mid.add(&b, &c)) == mid.add(&mid.mul(&a, &b), &mid.mul(&a, &c));
            let inv = mid.is_zero(&a) || mid.mul(&a, &mid.inv(&a).expect("nonzero")) == mid.one();
            let (x, y, z) = (top.random(&mut rng), top.random(&mut rng), top.random(&mut rng));
            let tassoc = top.mul(&top.mul(&x, &y), &z) == top.mul(&x, &top.mul(&y, &z));
            let tdist = top.mul(&x, &top.add(&y, &z)) == top.add(&top.mul(&x, &y), &top.mul(&x, &z));
            let tinv = top.is_zero(&x) || top.mul(&x, &top.inv(&x).expect("nonzero")) == top.one();
            if !(assoc && dist && inv && tassoc && tdist && tinv) {
                failures.push("field axioms");
            }
            let lam = mid.random(&mut rng);
            let lin = t.trace_to_mid(&top.add(&top.scale(&x, lam), &y))
                == mid.add(&mid.mul(&lam, &t.trace_to_mid(&x)), &t.trace_to_mid(&y));
            if !lin {
                failures.push("trace linearity");
            }
        }
        for (i, g) in t.gamma().iter().enumerate() {
            for (j, d) in t.gamma_dual().iter().enumerate() {
                let want = if i == j { mid.one() } else { mid.zero() };
                if t.trace_to_mid(&top.mul(g, d)) != want {
                    failures.push("dual basis");
                }
            }
        }
    }

    // Frobenius: automorphism on all pairs of F_2^8, fixed field exactly F_2 in F_2^16.
    let t8 = FieldTower::build(2, 8, 1).map_err(|e| e.to_string())?;
    let f8 = t8.mid();
    for i in 0..256 {
        for j in 0..256 {
            let (a, b) = (f8.from_index(i), f8.from_index(j));
            let fr = |x: &MidElem| f8.frobenius(x);
            if fr(&f8.mul(&a, &b)) != f8.mul(&fr(&a), &fr(&b)) || fr(&f8.add(&a, &b)) != f8.add(&fr(&a), &fr(&b)) {
                failures.push("frobenius automorphism");
            }
        }
    }
    let t16 = FieldTower::build(2, 16, 1).map_err(|e| e.to_string())?;
    let fixed = (0..1u128 << 16).filter(|&i| {
        let a = t16.mid().from_index(i);
        t16.mid().frobenius(&a) == a
    });
    if fixed.count() != 2 {
        failures.push("frobenius fixed field");
    }

    // Trace surjectivity onto F_2^8 from F_2^16.
    let t82 = FieldTower::build(2, 8, 2).map_err(|e| e.to_string())?;
    let mut image = vec![false; 256];
    for a in 0..256u128 {
        for b in 0..256u128 {
            let x = t82.top().from_coeffs(vec![t82.mid().from_index(a), t82.mid().from_index(b)]).expect("u = 2");
            image[t82.mid().index(t82.trace_to_mid(&x)) as usize] = true;
        }
    }
    if !image.iter().all(|&b| b) {
        failures.push("trace surjectivity");
    }

    // Moore rank, Moore/P commutation, rank-weight invariance.
    let f = t16.mid();
    let base = *t16.base();
    for _ in 0..50 {
        let n = 12;
        let a = rank::sample_full_rank_vector(f, n, &mut rng).map_err(|e| e.to_string())?;
        for s in [1, 5, 12, 14] {
            if linalg::rank(f, &moore_matrix(f, &a, s)) != s.min(n) {
                failures.push("moore rank");
            }
        }
        let p = rank::sample_invertible(&base, n, &mut rng);
        let lhs = linalg::mul(f, &moore_matrix(f, &a, 4), &rank::embed_base_matrix(f, &p));
        let rhs = moore_matrix(f, &rank::mid_times_base(f, &a, &p), 4);
        if lhs != rhs {
            failures.push("moore commutation");
        }
        let v: Vec<MidElem> = (0..n).map(|_| f.random(&mut rng)).collect();
        let v = rank::mid_times_base(f, &v, &Matrix::from_fn(n, n, |i, j| u8::from(i == j && i % 3 != 0)));
        if rank::rank_weight(f, &v) != rank::rank_weight(f, &rank::mid_times_base(f, &v, &p)) {
            failures.push("rank invariance");
        }
    }

    failures.dedup();
    if failures.is_empty() {
        Ok("axioms, Frobenius, trace, dual basis, Moore rank/commutation, rank invariance".into())
    } else {
        Err(format!("failed: {}", failures.join(", ")))
    }
}

fn main() -> ExitCode {
    let mut audit = KeyAudit { repaired: Vec::new(), original: Vec::new() };
    let results: Vec<(&str, Outcome)> = vec![
        ("1 round-trip correctness", c1_round_trip()),
        ("2 repair guarantee", c2_repair(&mut audit)),
        ("3 break of the original system", c3_break_original(&mut audit)),
        ("4 key-recovery equivalence", c4_equivalence(&audit)),
        ("5 decoder vs exhaustive oracle", c5_decoder_oracle()),
        ("6 comparison table reproduction", c6_table()),
        ("7 comparison formulas", c7_comparison()),
        ("8 close-error attack", c8_close_error()),
        ("9 linearization rank bound", c9_linearization()),
        ("10 property suites", c10_properties()),
    ];
    let mut failed = 0;
    for (name, res) in &results {
        match res {
            Ok(d) => println!("PASS  criterion {name}: {d}"),
            Err(d) => {
                failed += 1;
                println!("FAIL  criterion {name}: {d}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
