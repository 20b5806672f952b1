use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use faure_loidreau::{ChaCha20Rng, SeedableRng};
use fl_cli::format::{self, Payload};
use rand::Rng;

fn fl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fl")).current_dir(dir).args(args).output().expect("spawn fl")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fl-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const SMALL: [&str; 12] = ["--q", "2", "--m", "16", "--u", "3", "--n", "16", "--k", "7", "--w", "5"];

fn keygen(dir: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["keygen"];
    args.extend_from_slice(&SMALL);
    args.extend_from_slice(extra);
    fl(dir, &args)
}

#[test]
fn keygen_is_deterministic_and_reports_phi() {
    let dir = scratch("keygen");
    let o = keygen(&dir, &["--repaired", "--seed", "42", "--out-prefix", "a"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("phi: 4"), "{}", stdout(&o));
    assert_eq!(code(&keygen(&dir, &["--repaired", "--seed", "42", "--out-prefix", "b"])), 0);
    assert_eq!(std::fs::read(dir.join("a.pub")).unwrap(), std::fs::read(dir.join("b.pub")).unwrap());
    assert_eq!(std::fs::read(dir.join("a.sec")).unwrap(), std::fs::read(dir.join("b.sec")).unwrap());
}

#[test]
fn keygen_rejects_small_w() {
    let dir = scratch("smallw");
    let o = fl(&dir, &["keygen", "--q", "2", "--m", "16", "--u", "3", "--n", "16", "--k", "7", "--w", "4", "--seed", "1"]);
    assert_eq!(code(&o), 2);
    assert!(!dir.join("key.pub").exists());
}

#[test]
fn keygen_reports_table_key_size() {
    let dir = scratch("row1");
    let args = ["keygen", "--q", "2", "--m", "61", "--u", "3", "--n", "61", "--k", "31", "--w", "16", "--seed", "5"];
    let o = fl(&dir, &args);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("1.86 KB"), "{}", stdout(&o));
}

#[test]
fn encrypt_decrypt_round_trip_and_failures() {
    let dir = scratch("roundtrip");
    assert_eq!(code(&keygen(&dir, &["--seed", "7", "--out-prefix", "k"])), 0);
    assert_eq!(code(&fl(&dir, &["plaintext", "--key", "k.pub", "--out", "m.pt", "--values", "1,2,3,65535"])), 0);
    assert_eq!(code(&fl(&dir, &["encrypt", "--key", "k.pub", "--in", "m.pt", "--out", "c.ct", "--seed", "3"])), 0);
    assert_eq!(code(&fl(&dir, &["decrypt", "--key", "k.sec", "--in", "c.ct", "--out", "d.pt"])), 0);
    assert_eq!(std::fs::read(dir.join("m.pt")).unwrap(), std::fs::read(dir.join("d.pt")).unwrap());

    assert_eq!(code(&fl(&dir, &["encrypt", "--key", "k.pub", "--in", "m.pt", "--out", "c2.ct", "--seed", "3"])), 0);
    assert_eq!(std::fs::read(dir.join("c.ct")).unwrap(), std::fs::read(dir.join("c2.ct")).unwrap());

    let ct = std::fs::read(dir.join("c.ct")).unwrap();
    std::fs::write(dir.join("short.ct"), &ct[..ct.len() - 3]).unwrap();
    assert_eq!(code(&fl(&dir, &["decrypt", "--key", "k.sec", "--in", "short.ct", "--out", "x.pt"])), 5);

    // Overwrite the payload with random digits: far outside the decoding radius.
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    let payload_start = ct.len() - 16 * 16;
    let mut tampered = ct.clone();
    tampered[payload_start..].iter_mut().for_each(|d| *d = rng.random_range(0..2));
    std::fs::write(dir.join("bad.ct"), &tampered).unwrap();
    assert_eq!(code(&fl(&dir, &["decrypt", "--key", "k.sec", "--pub", "k.pub", "--in", "bad.ct", "--out", "x.pt"])), 4);

    assert_eq!(code(&fl(&dir, &["decrypt", "--key", "k.sec", "--in", "missing.ct", "--out", "x.pt"])), 3);
    assert_eq!(code(&fl(&dir, &["encrypt", "--key", "k.sec", "--in", "m.pt", "--out", "x.ct"])), 5);
}

#[test]
fn attacks_report_exit_codes() {
    let dir = scratch("attacks");
    assert_eq!(code(&keygen(&dir, &["--repaired", "--seed", "11", "--out-prefix", "r"])), 0);
    let o = fl(&dir, &["attack", "--key", "r.pub", "--method", "interleaved"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("failure condition holds"));

    let mut args = vec!["keygen", "--original", "--seed", "11", "--out-prefix", "o"];
    args.extend_from_slice(&SMALL[..10]);
    args.extend_from_slice(&["--w", "6"]);
    assert_eq!(code(&fl(&dir, &args)), 0);
    let o = fl(&dir, &["attack", "--key", "o.pub", "--method", "interleaved"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("x: "));

    assert_eq!(code(&fl(&dir, &["plaintext", "--key", "r.pub", "--out", "m.pt", "--seed", "1"])), 0);
    assert_eq!(code(&fl(&dir, &["encrypt", "--key", "r.pub", "--in", "m.pt", "--out", "c.ct", "--seed", "1"])), 0);
    let o = fl(&dir, &["attack", "--key", "r.pub", "--method", "linearization", "--ciphertext", "c.ct"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("feasible: false"));

    let tiny = ["keygen", "--q", "2", "--m", "12", "--u", "3", "--n", "12", "--k", "4", "--w", "5", "--seed", "2", "--out-prefix", "t"];
    assert_eq!(code(&fl(&dir, &tiny)), 0);
    let o = fl(&dir, &["attack", "--key", "t.pub", "--method", "close-error", "--seed", "3"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let o = fl(&dir, &["attack", "--key", "t.pub", "--method", "close-error", "--seed", "3", "--budget", "1"]);
    assert!([0, 1].contains(&code(&o)));
}

#[test]
fn analyze_table_and_params() {
    let dir = scratch("analyze");
    let o = fl(&dir, &["analyze", "--table1"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    for needle in ["90.00 wf_err", "1.86", "1.98", "4.20", "80.93", "MISMATCH"] {
        assert!(text.contains(needle), "missing {needle}");
    }
    let o = fl(&dir, &["analyze", "--table1", "--csv"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().count() >= 13);
    let o = fl(&dir, &["analyze", "--q", "2", "--m", "61", "--u", "3", "--n", "61", "--k", "31", "--w", "16"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("security level: 90.00 (wf_err)"));
    let o = fl(&dir, &["analyze", "--q", "4", "--m", "61", "--u", "3", "--n", "61", "--k", "31", "--w", "16"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn format_round_trips_and_survives_fuzzing() {
    let dir = scratch("fuzz");
    assert_eq!(code(&keygen(&dir, &["--seed", "4", "--out-prefix", "k"])), 0);
    let mut rng = ChaCha20Rng::seed_from_u64(1);
    for name in ["k.pub", "k.sec"] {
        let bytes = std::fs::read(dir.join(name)).unwrap();
        let (h, payload) = format::decode(&bytes).unwrap();
        assert_eq!(format::encode(&h.params, &h.tower, &payload), bytes);
        assert!(matches!(
            (name, &payload),
            ("k.pub", Payload::Public(_)) | ("k.sec", Payload::Private(_))
        ));
        for _ in 0..2000 {
            let mut fuzzed = bytes.clone();
            let pos = rng.random_range(0..40.min(fuzzed.len()));
            fuzzed[pos] = rng.random();
            if rng.random_bool(0.2) {
                fuzzed.truncate(rng.random_range(0..fuzzed.len()));
            }
            let _ = format::decode(&fuzzed);
        }
    }
    let bytes = std::fs::read(dir.join("k.pub")).unwrap();
    let mut wrong = bytes.clone();
    wrong[0] = b'X';
    assert!(format::decode(&wrong).is_err());
    let mut wrong = bytes.clone();
    wrong[4] = 2;
    assert!(format::decode(&wrong).is_err());
    let mut wrong = bytes.clone();
    wrong[5] = 9;
    assert!(format::decode(&wrong).is_err());
    let mut longer = bytes;
    longer.push(0);
    assert!(format::decode(&longer).is_err());
}
