use std::io::Read;
use std::path::Path;

use rayon::prelude::*;

use qlock::dense::StateVector;
use qlock::design::{
    check_design, exact_moments, gamma_bound, gamma_bound_dim, gamma_of, gamma_stderr,
    MomentAccumulator, MomentEstimate, Probe,
};
use qlock::protocol::{decrypt, encrypt, keygen, CipherState, Codebook, SecretKey};
use qlock::sampling::{
    sample_circuit, sample_uniform_clifford, single_qubit_cliffords, MasterSeed, SamplerConfig,
    SamplerMode,
};
use qlock::security::{
    chernoff_p1, chernoff_threshold, chernoff_trial, draw_circuits, failure_bound, fig2_row,
    key_length_bits, key_threshold, locking_probe, maurer_p2, maurer_trial, ChernoffReport,
    MaurerReport, Measurement, PriorDistribution, SecurityParams,
};
use qlock::BitString;

use crate::output::{f, invalid, CommandResult, Failure, Table};
use crate::range::{parse_float_list, parse_range};
use crate::{Cli, Command, GlobalOpts, MomentOpts, SamplerOpts};

/// Samples per independently seeded block in moment estimation.
const BLOCK: u64 = 4096;
/// Streams reserved for auxiliary draws, far above any trial index.
const PROBE_STREAM: u64 = u64::MAX;
const GAMMA_STREAM_BASE: u64 = 1 << 62;
const HAAR_BASIS_BASE: u64 = 1 << 61;
const CLIFFORD_BASIS_BASE: u64 = 1 << 60;

struct Ctx<'a> {
    opts: &'a GlobalOpts,
    stderr: String,
}

impl Ctx<'_> {
    /// The `--seed` value, or a fresh one that is reported on stderr.
    fn seed(&mut self) -> Result<MasterSeed, Failure> {
        match &self.opts.seed {
            Some(s) => Ok(MasterSeed::from_hex(s)?),
            None => {
                let s = MasterSeed::random(&mut rand::rng());
                self.stderr.push_str(&format!("seed={s}\n"));
                Ok(s)
            }
        }
    }

    fn pool(&self) -> Result<rayon::ThreadPool, Failure> {
        if self.opts.jobs == 0 {
            return Err(invalid("--jobs must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.opts.jobs)
            .build()
            .map_err(|e| invalid(e.to_string()))
    }
}

pub fn execute(cli: Cli) -> CommandResult {
    let mut ctx = Ctx {
        opts: &cli.global,
        stderr: String::new(),
    };
    let result = dispatch(&cli.command, &mut ctx).and_then(|out| match &cli.global.out {
        Some(path) => std::fs::write(path, out)
            .map(|_| String::new())
            .map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => Ok(out),
    });
    match result {
        Ok(stdout) => CommandResult {
            exit_code: 0,
            stdout,
            stderr: ctx.stderr,
        },
        Err(fail) => CommandResult {
            exit_code: fail.code,
            stdout: String::new(),
            stderr: format!("{}error: {}\n", ctx.stderr, fail.msg),
        },
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        return Ok(s);
    }
    std::fs::read_to_string(path)
        .map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn bits(s: &str, n: usize, what: &str) -> Result<BitString, Failure> {
    let b: BitString = s.parse()?;
    if b.len() != n {
        return Err(invalid(format!(
            "{what} must have {n} bits, got {}",
            b.len()
        )));
    }
    Ok(b)
}

fn bits_or_zeros(s: &Option<String>, n: usize, what: &str) -> Result<BitString, Failure> {
    match s {
        Some(s) => bits(s, n, what),
        None => Ok(BitString::zeros(n)),
    }
}

fn sampler(opts: &SamplerOpts, n: usize) -> Result<SamplerConfig, Failure> {
    let cfg = SamplerConfig {
        n,
        delta: opts.delta,
        depth_factor: opts.depth_factor,
        mode: opts.mode.parse()?,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn prior(path: &Option<std::path::PathBuf>, n: usize) -> Result<PriorDistribution, Failure> {
    match path {
        Some(p) => {
            let prior = PriorDistribution::parse(&read_file(p)?)?;
            if prior.n() != n {
                return Err(invalid(format!(
                    "prior is over {} bits, expected {n}",
                    prior.n()
                )));
            }
            Ok(prior)
        }
        None => Ok(PriorDistribution::uniform(n)?),
    }
}

fn kv_table(rows: Vec<(&str, String)>) -> Table {
    let mut t = Table::new(&["quantity", "value"]);
    for (k, v) in rows {
        t.push(vec![k.to_string(), v]);
    }
    t
}

fn dispatch(cmd: &Command, ctx: &mut Ctx) -> Result<String, Failure> {
    let csv = ctx.opts.csv;
    match cmd {
        Command::Keygen { k } => {
            let key = keygen(*k, &mut ctx.seed()?.stream(0))?;
            if csv {
                let mut t = Table::new(&["k", "key_bits"]);
                t.push(vec![key.index().to_string(), key.key_bits().to_string()]);
                t.to_csv()
            } else {
                Ok(format!("{}\n", key.index()))
            }
        }
        Command::Codebook { n, k, delta } => {
            let cb = Codebook::build(*n, *k, *delta, ctx.seed()?)?;
            if csv {
                let mut t = Table::new(&["k", "circuit"]);
                for (i, c) in cb.circuits().iter().enumerate() {
                    t.push(vec![i.to_string(), c.to_string()]);
                }
                t.to_csv()
            } else {
                Ok(cb.to_text())
            }
        }
        Command::Encrypt { codebook, key, x } => {
            let cb = Codebook::parse(&read_file(codebook)?)?;
            let key = SecretKey::new(*key, cb.key_count() as u64)?;
            let x = bits(x, cb.n(), "x")?;
            let cipher = encrypt(&cb, &key, &x)?;
            if csv {
                let t = cipher.tableau();
                let mut table = Table::new(&["row", "x", "z", "sign"]);
                for r in 0..2 * t.n() {
                    let p = t.row(r);
                    let tag = if r < t.n() { 'D' } else { 'S' };
                    let sign = if p.negative { "-" } else { "+" };
                    table.push(vec![
                        format!("{tag}{}", r % t.n()),
                        p.x.to_string(),
                        p.z.to_string(),
                        sign.into(),
                    ]);
                }
                table.to_csv()
            } else {
                Ok(cipher.to_text())
            }
        }
        Command::Decrypt {
            codebook,
            key,
            cipher,
        } => {
            let cb = Codebook::parse(&read_file(codebook)?)?;
            let key = SecretKey::new(*key, cb.key_count() as u64)?;
            let c = CipherState::parse(&read_file(cipher)?)?;
            // the seed is printed with the result, so no stderr note
            let seed = match &ctx.opts.seed {
                Some(s) => MasterSeed::from_hex(s)?,
                None => MasterSeed::random(&mut rand::rng()),
            };
            let out = decrypt(&cb, &key, &c, &mut seed.stream(0))?;
            if csv {
                let mut t = Table::new(&["bits", "deterministic", "seed"]);
                let s = if out.deterministic {
                    String::new()
                } else {
                    seed.to_string()
                };
                t.push(vec![out.bits.to_string(), out.deterministic.to_string(), s]);
                t.to_csv()
            } else if out.deterministic {
                Ok(format!("{} deterministic=true\n", out.bits))
            } else {
                Ok(format!("{} deterministic=false seed={seed}\n", out.bits))
            }
        }
        Command::Moments(opts) => moments(opts, ctx),
        Command::Gamma(opts) => gamma(opts, ctx),
        Command::Keylen {
            n,
            epsilon,
            hmin,
            m,
            delta,
            gamma,
            k,
        } => {
            let nf = *n as f64;
            let g = match gamma {
                Some(g) => *g,
                None => gamma_bound(*delta)?,
            };
            let p_max = (-hmin.unwrap_or(nf)).exp2();
            let params =
                SecurityParams::new(*n, *epsilon, *delta, p_max, m.unwrap_or(nf.exp2()), g)?;
            let th = key_threshold(&params);
            let len = key_length_bits(&params);
            let mut rows = vec![
                ("k_min", f(th.k_min)),
                ("branch", th.branch.name().to_string()),
                ("chernoff_threshold", f(th.chernoff)),
                ("maurer_threshold", f(th.maurer)),
                ("log2_k_exact", f(len.exact)),
                ("log2_k_asymptotic", f(len.asymptotic)),
                ("gamma", f(g)),
                ("h_min", f(params.min_entropy())),
            ];
            if let Some(k) = k {
                let (p1, p2) = (chernoff_p1(&params, *k), maurer_p2(&params, *k));
                rows.extend([
                    ("K", f(*k)),
                    ("p1_exponent", f(p1.exponent)),
                    ("p1_bound", f(p1.bound)),
                    ("p2_exponent", f(p2.exponent)),
                    ("p2_bound", f(p2.bound)),
                    ("failure_bound", f(failure_bound(&params, *k))),
                ]);
            }
            kv_table(rows).render(csv)
        }
        Command::Fig2 {
            epsilon,
            hmin_frac,
            n,
            gamma,
        } => {
            let ns = parse_range(n)?;
            let fracs = parse_float_list(hmin_frac)?;
            let mut t = Table::new(&[
                "n",
                "logK_exact",
                "logK_asymptotic",
                "qotp",
                "approx_otp",
                "hmin_frac",
                "epsilon",
            ]);
            for &frac in &fracs {
                for &n in &ns {
                    let r = fig2_row(n, *epsilon, frac, *gamma)?;
                    t.push(vec![
                        r.n.to_string(),
                        f(r.log_k_exact),
                        f(r.log_k_asymptotic),
                        f(r.qotp),
                        f(r.approx_otp),
                        f(r.hmin_frac),
                        f(r.epsilon),
                    ]);
                }
            }
            t.render(csv)
        }
        Command::VerifyChernoff {
            n,
            k,
            epsilon,
            trials,
            prior_file,
            sampler: s,
        } => {
            let cfg = sampler(s, *n)?;
            let prior = prior(prior_file, *n)?;
            let params =
                SecurityParams::new(*n, *epsilon, 0.0, prior.p_max(), prior.support_size(), 2.0)?;
            let k = match k {
                Some(k) => *k,
                None => chernoff_threshold(&params).ceil() as usize,
            };
            if *trials == 0 {
                return Err(invalid("--trials must be at least 1"));
            }
            let seed = ctx.seed()?;
            let results = ctx.pool()?.install(|| {
                (0..*trials as u64)
                    .into_par_iter()
                    .map(|t| chernoff_trial(&cfg, k, &prior, &mut seed.stream(t)))
                    .collect::<qlock::Result<Vec<_>>>()
            })?;
            let rep = ChernoffReport::summarize(results, *n, k, &prior, *epsilon)?;
            if csv {
                let mut t = Table::new(&[
                    "row",
                    "lambda_max",
                    "empirical_epsilon",
                    "violated",
                    "violations",
                    "frequency",
                    "p1_exponent",
                    "p1_bound",
                    "K",
                ]);
                for (i, tr) in rep.trials.iter().enumerate() {
                    t.push(vec![
                        i.to_string(),
                        f(tr.lambda_max),
                        f(tr.empirical_epsilon),
                        (tr.empirical_epsilon > rep.epsilon).to_string(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                        String::new(),
                    ]);
                }
                t.push(vec![
                    "summary".into(),
                    String::new(),
                    f(rep
                        .trials
                        .iter()
                        .map(|t| t.empirical_epsilon)
                        .fold(f64::MIN, f64::max)),
                    String::new(),
                    rep.violations.to_string(),
                    f(rep.frequency),
                    f(rep.p1.exponent),
                    f(rep.p1.bound),
                    k.to_string(),
                ]);
                t.to_csv()
            } else {
                let worst = rep
                    .trials
                    .iter()
                    .map(|t| t.empirical_epsilon)
                    .fold(f64::MIN, f64::max);
                kv_table(vec![
                    ("K", k.to_string()),
                    ("trials", rep.trials.len().to_string()),
                    ("epsilon", f(rep.epsilon)),
                    ("max_empirical_epsilon", f(worst)),
                    ("violations", rep.violations.to_string()),
                    ("frequency", f(rep.frequency)),
                    ("p1_exponent", f(rep.p1.exponent)),
                    ("p1_bound", f(rep.p1.bound)),
                ])
                .render(false)
            }
        }
        Command::VerifyMaurer {
            n,
            k,
            x,
            phi,
            tau,
            gamma,
            gamma_samples,
            trials,
            sampler: s,
        } => {
            let cfg = sampler(s, *n)?;
            let x = bits_or_zeros(x, *n, "x")?;
            let phi_bits = bits_or_zeros(phi, *n, "phi")?;
            let phi = StateVector::basis(&phi_bits)?;
            if *trials == 0 {
                return Err(invalid("--trials must be at least 1"));
            }
            let seed = ctx.seed()?;
            let pool = ctx.pool()?;
            let (g, g_source) = match gamma {
                Some(g) => (*g, "given"),
                None => {
                    let probe = Probe::basis(phi_bits.clone(), x.clone())?;
                    let est = ensemble_moments(
                        &cfg,
                        &probe,
                        *gamma_samples,
                        seed,
                        GAMMA_STREAM_BASE,
                        &pool,
                    )?;
                    // gamma >= 1 holds for any ensemble; sampling noise can dip below it
                    (gamma_of(&est)?.max(1.0), "estimated")
                }
            };
            let values = pool.install(|| {
                (0..*trials as u64)
                    .into_par_iter()
                    .map(|t| maurer_trial(&cfg, *k, &x, &phi, &mut seed.stream(t)))
                    .collect::<qlock::Result<Vec<_>>>()
            })?;
            let rep = MaurerReport::summarize(values, *n, *k, *tau, g)?;
            if csv {
                let mut t = Table::new(&[
                    "row",
                    "value",
                    "below_threshold",
                    "tail_count",
                    "frequency",
                    "bound",
                    "sigma",
                    "gamma",
                    "within_3sigma",
                ]);
                for (i, v) in rep.values.iter().enumerate() {
                    let mut row = vec![i.to_string(), f(*v), (*v < rep.threshold).to_string()];
                    row.resize(9, String::new());
                    t.push(row);
                }
                t.push(vec![
                    "summary".into(),
                    f(rep.threshold),
                    String::new(),
                    rep.tail_count.to_string(),
                    f(rep.frequency),
                    f(rep.bound),
                    f(rep.sigma),
                    f(rep.gamma),
                    rep.within(3.0).to_string(),
                ]);
                t.to_csv()
            } else {
                kv_table(vec![
                    ("K", k.to_string()),
                    ("trials", rep.values.len().to_string()),
                    ("tau", f(rep.tau)),
                    ("threshold", f(rep.threshold)),
                    ("tail_count", rep.tail_count.to_string()),
                    ("frequency", f(rep.frequency)),
                    ("gamma", format!("{} ({g_source})", f(rep.gamma))),
                    ("bound", f(rep.bound)),
                    ("sigma", f(rep.sigma)),
                    ("within_3sigma", rep.within(3.0).to_string()),
                ])
                .render(false)
            }
        }
        Command::LockProbe {
            n,
            k,
            epsilon,
            haar_bases,
            clifford_bases,
            prior_file,
            sampler: s,
        } => {
            let cfg = sampler(s, *n)?;
            let prior = prior(prior_file, *n)?;
            let seed = ctx.seed()?;
            let circuits = draw_circuits(&cfg, *k, &mut seed.stream(0))?;
            let mut meas = vec![("computational".to_string(), Measurement::computational(*n)?)];
            for i in 0..*clifford_bases as u64 {
                let c = sample_uniform_clifford(*n, &mut seed.stream(CLIFFORD_BASIS_BASE + i));
                meas.push((format!("clifford{i}"), Measurement::clifford_rotated(&c)?));
            }
            let haar = ctx.pool()?.install(|| {
                (0..*haar_bases as u64)
                    .into_par_iter()
                    .map(|i| Measurement::haar_basis(*n, &mut seed.stream(HAAR_BASIS_BASE + i)))
                    .collect::<qlock::Result<Vec<_>>>()
            })?;
            meas.extend(
                haar.into_iter()
                    .enumerate()
                    .map(|(i, m)| (format!("haar{i}"), m)),
            );
            let rep = locking_probe(&circuits, &prior, &meas, *epsilon)?;
            let mut t = Table::new(&["quantity", "measurement", "value"]);
            t.push(vec!["holevo".into(), String::new(), f(rep.holevo)]);
            for (label, mi) in &rep.measured {
                t.push(vec!["measured_mi".into(), label.clone(), f(*mi)]);
            }
            for (name, v) in [
                ("max_measured_mi", rep.max_measured),
                ("gap", rep.gap),
                ("reference_2n_eps", rep.reference),
                ("prior_entropy", rep.prior_entropy),
            ] {
                t.push(vec![name.into(), String::new(), f(v)]);
            }
            t.render(csv)
        }
    }
}

/// Moments over `samples` draws, split into fixed blocks seeded by
/// `stream_base + block` so the result does not depend on the pool size.
fn ensemble_moments(
    cfg: &SamplerConfig,
    probe: &Probe,
    samples: u64,
    seed: MasterSeed,
    stream_base: u64,
    pool: &rayon::ThreadPool,
) -> Result<MomentEstimate, Failure> {
    if cfg.mode == SamplerMode::SingleQubitExhaustive {
        return Ok(exact_moments(single_qubit_cliffords(), probe)?);
    }
    if samples == 0 {
        return Err(invalid("--samples must be at least 1"));
    }
    let blocks = samples.div_ceil(BLOCK);
    let accs = pool.install(|| {
        (0..blocks)
            .into_par_iter()
            .map(|b| {
                let mut rng = seed.stream(stream_base + b);
                let mut acc = MomentAccumulator::default();
                for _ in 0..BLOCK.min(samples - b * BLOCK) {
                    acc.push(probe.overlap(&sample_circuit(cfg, &mut rng)?)?);
                }
                Ok(acc)
            })
            .collect::<qlock::Result<Vec<_>>>()
    })?;
    let mut total = MomentAccumulator::default();
    accs.iter().for_each(|a| total.merge(a));
    Ok(total.finish(probe.n())?)
}

fn moment_setup(
    opts: &MomentOpts,
    ctx: &mut Ctx,
) -> Result<(SamplerConfig, MomentEstimate), Failure> {
    let cfg = sampler(&opts.sampler, opts.n)?;
    let seed = ctx.seed()?;
    let probe = match opts.probe.as_str() {
        "basis" => Probe::basis(
            bits_or_zeros(&opts.alpha, opts.n, "alpha")?,
            bits_or_zeros(&opts.beta, opts.n, "beta")?,
        )?,
        "haar" => Probe::haar(opts.n, &mut seed.stream(PROBE_STREAM))?,
        other => {
            return Err(invalid(format!(
                "unknown probe {other:?}; use basis or haar"
            )))
        }
    };
    let est = ensemble_moments(&cfg, &probe, opts.samples, seed, 0, &ctx.pool()?)?;
    Ok((cfg, est))
}

fn moments(opts: &MomentOpts, ctx: &mut Ctx) -> Result<String, Failure> {
    let (cfg, est) = moment_setup(opts, ctx)?;
    let rep = check_design(&est, cfg.delta, opts.z);
    let mut t = Table::new(&[
        "ensemble",
        "d",
        "samples",
        "mean2",
        "stderr2",
        "mean4",
        "stderr4",
        "gamma",
        "gamma_bound",
        "pass",
    ]);
    t.push(vec![
        cfg.mode.to_string(),
        f(est.d()),
        est.samples.to_string(),
        f(est.mean2),
        f(est.stderr2),
        f(est.mean4),
        f(est.stderr4),
        f(gamma_of(&est)?),
        f(gamma_bound(cfg.delta)?),
        rep.pass().to_string(),
    ]);
    if ctx.opts.csv {
        return t.to_csv();
    }
    let mut out = t.to_text();
    for c in [rep.first, rep.second] {
        out.push_str(&format!(
            "moment {}: mean {} haar {} band [{}, {}] margin {} {}\n",
            c.order,
            f(c.mean),
            f(c.haar),
            f(c.lower),
            f(c.upper),
            f(c.margin),
            if c.pass { "pass" } else { "FAIL" }
        ));
    }
    Ok(out)
}

fn gamma(opts: &MomentOpts, ctx: &mut Ctx) -> Result<String, Failure> {
    let (cfg, est) = moment_setup(opts, ctx)?;
    let g = gamma_of(&est)?;
    let se = gamma_stderr(&est)?;
    let d = est.d();
    let bound = gamma_bound(cfg.delta)?;
    let mut t = Table::new(&[
        "ensemble",
        "d",
        "samples",
        "gamma",
        "gamma_stderr",
        "haar_gamma",
        "gamma_bound",
        "gamma_bound_dim",
        "within_bound",
    ]);
    t.push(vec![
        cfg.mode.to_string(),
        f(d),
        est.samples.to_string(),
        f(g),
        f(se),
        f(2.0 * d / (d + 1.0)),
        f(bound),
        f(gamma_bound_dim(cfg.delta, d)?),
        (g <= bound + opts.z * se).to_string(),
    ]);
    t.render(ctx.opts.csv)
}
