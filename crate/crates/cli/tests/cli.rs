use qlock_cli::{run, CommandResult};

fn qlock(args: &[&str]) -> CommandResult {
    run(std::iter::once("qlock").chain(args.iter().copied()))
}

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("qlock-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn help_and_usage_errors() {
    let r = qlock(&["--help"]);
    assert_eq!(r.exit_code, 0);
    assert!(r.stdout.contains("verify-maurer"));
    for bad in [
        vec!["frobnicate"],
        vec!["keygen"],
        vec!["keygen", "--K", "-3"],
        vec!["fig2", "--n", "5:5"],
        vec!["moments", "--n", "2", "--mode", "bogus"],
        vec!["moments", "--n", "2", "--probe", "bogus"],
        vec!["keygen", "--K", "0"],
        vec!["codebook", "--n", "2", "--K", "2", "--delta", "1.5"],
        vec!["--seed", "xyz", "keygen", "--K", "4"],
        vec!["--jobs", "0", "moments", "--n", "2", "--samples", "10"],
        vec![
            "encrypt",
            "--codebook",
            "/nonexistent/cb",
            "--key",
            "0",
            "--x",
            "0",
        ],
    ] {
        let r = qlock(&bad);
        assert_eq!(r.exit_code, 1, "{bad:?}: {}", r.stderr);
        assert!(r.stdout.is_empty());
        assert!(!r.stderr.is_empty());
    }
}

#[test]
fn missing_seed_is_reported() {
    let r = qlock(&["keygen", "--K", "16"]);
    assert_eq!(r.exit_code, 0);
    let hex = r.stderr.trim().strip_prefix("seed=").unwrap();
    let again = qlock(&["--seed", hex, "keygen", "--K", "16"]);
    assert_eq!(again.stdout, r.stdout);
    assert!(again.stderr.is_empty());
}

#[test]
fn encrypt_decrypt_through_files() {
    let cb = tmp("cb.txt");
    let ct = tmp("ct.txt");
    let r = qlock(&[
        "--seed",
        "77",
        "--out",
        cb.to_str().unwrap(),
        "codebook",
        "--n",
        "6",
        "--K",
        "5",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    assert!(r.stdout.is_empty());
    let cbs = cb.to_str().unwrap();
    let r = qlock(&[
        "--out",
        ct.to_str().unwrap(),
        "encrypt",
        "--codebook",
        cbs,
        "--key",
        "4",
        "--x",
        "110010",
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    let cts = ct.to_str().unwrap();

    let r = qlock(&["decrypt", "--codebook", cbs, "--key", "4", "--cipher", cts]);
    assert_eq!(r.stdout, "110010 deterministic=true\n");
    let r = qlock(&[
        "--csv",
        "decrypt",
        "--codebook",
        cbs,
        "--key",
        "4",
        "--cipher",
        cts,
    ]);
    assert_eq!(r.stdout, "bits,deterministic,seed\n110010,true,\n");

    let r = qlock(&[
        "--seed",
        "9",
        "decrypt",
        "--codebook",
        cbs,
        "--key",
        "1",
        "--cipher",
        cts,
    ]);
    assert_eq!(r.exit_code, 0);
    assert!(
        r.stdout
            .ends_with(" deterministic=false seed=00000000000000000000000000000009\n"),
        "{}",
        r.stdout
    );

    for (args, code) in [
        (
            vec!["decrypt", "--codebook", cbs, "--key", "5", "--cipher", cts],
            1,
        ),
        (
            vec!["encrypt", "--codebook", cbs, "--key", "0", "--x", "101"],
            1,
        ),
        (
            vec!["decrypt", "--codebook", cts, "--key", "0", "--cipher", cts],
            1,
        ),
    ] {
        assert_eq!(qlock(&args).exit_code, code, "{args:?}");
    }
    let mut tampered = std::fs::read_to_string(&ct).unwrap();
    tampered.push_str("junk\n");
    std::fs::write(&ct, tampered).unwrap();
    assert_eq!(
        qlock(&["decrypt", "--codebook", cbs, "--key", "4", "--cipher", cts]).exit_code,
        1
    );
}

#[test]
fn csv_outputs_have_fixed_columns() {
    let cases: [(&[&str], &str, usize); 6] = [
        (&["keygen", "--K", "8"], "k,key_bits", 1),
        (&["codebook", "--n", "2", "--K", "3"], "k,circuit", 3),
        (
            &["moments", "--n", "1", "--mode", "single"],
            "ensemble,d,samples,mean2,stderr2,mean4,stderr4,gamma,gamma_bound,pass",
            1,
        ),
        (
            &["fig2", "--n", "10:40:10", "--hmin-frac", "0.6,1"],
            "n,logK_exact,logK_asymptotic,qotp,approx_otp,hmin_frac,epsilon",
            6,
        ),
        (
            &["keylen", "--n", "8", "--eps", "0.01"],
            "quantity,value",
            8,
        ),
        (
            &["verify-chernoff", "--n", "2", "--trials", "3"],
            "row,lambda_max,empirical_epsilon,violated,violations,frequency,p1_exponent,p1_bound,K",
            4,
        ),
    ];
    for (args, header, rows) in cases {
        let mut a = vec!["--csv", "--seed", "1"];
        a.extend(args);
        let r = qlock(&a);
        assert_eq!(r.exit_code, 0, "{args:?}: {}", r.stderr);
        let lines: Vec<&str> = r.stdout.lines().collect();
        assert_eq!(lines[0], header, "{args:?}");
        assert_eq!(lines.len(), rows + 1, "{args:?}");
        let cols = header.split(',').count();
        let mut rdr = csv::Reader::from_reader(r.stdout.as_bytes());
        for rec in rdr.records() {
            assert_eq!(rec.unwrap().len(), cols);
        }
    }
}

#[test]
fn exhaustive_moments_are_exact() {
    let r = qlock(&["--csv", "moments", "--n", "1", "--mode", "single"]);
    let row = r.stdout.lines().nth(1).unwrap();
    let f: Vec<&str> = row.split(',').collect();
    assert_eq!(f[0], "single-qubit-exhaustive");
    assert_eq!((f[1], f[2]), ("2", "24"));
    assert_eq!(f[3], "0.5");
    assert_eq!(f[5], "0.333333333333");
    assert_eq!(f[7], "1.33333333333");
    assert_eq!(f[9], "true");
}

#[test]
fn keylen_matches_threshold_formulas() {
    let r = qlock(&[
        "--csv", "keylen", "--n", "3", "--eps", "0.1", "--gamma", "2", "--K", "832",
    ]);
    let get = |k: &str| -> f64 {
        r.stdout
            .lines()
            .find_map(|l| l.strip_prefix(&format!("{k},")))
            .unwrap()
            .parse()
            .unwrap()
    };
    let k1 = 4.0 * 3.0 * 8.0 * (1.0 / 8.0) * std::f64::consts::LN_2 / 0.01;
    assert!((get("chernoff_threshold") / k1 - 1.0).abs() < 1e-11);
    assert!(get("p1_exponent") < 0.0);
    assert!(get("k_min") >= get("chernoff_threshold"));
}

#[test]
fn prior_file_feeds_chernoff() {
    let p = tmp("prior.txt");
    std::fs::write(&p, "# skewed\n00 0.5\n01 0.25\n10 0.125\n11 0.125\n").unwrap();
    let r = qlock(&[
        "--seed",
        "3",
        "verify-chernoff",
        "--n",
        "2",
        "--K",
        "40",
        "--trials",
        "5",
        "--prior-file",
        p.to_str().unwrap(),
    ]);
    assert_eq!(r.exit_code, 0, "{}", r.stderr);
    let r = qlock(&[
        "verify-chernoff",
        "--n",
        "3",
        "--trials",
        "1",
        "--prior-file",
        p.to_str().unwrap(),
    ]);
    assert_eq!(r.exit_code, 1);
}
