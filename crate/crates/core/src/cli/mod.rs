//! System files, reports, and the command dispatcher behind the `locint`
//! binary.

mod format;
mod report;

pub use format::{
    format_scalar, parse_system, BackendChoice, EigenToken, SystemFile, SystemOptions, Terms,
};
pub use report::{digest, strip_timing, Report};

use std::time::Instant;

use crate::algebra::{with_precision_doubling, Scalar, TruncSeries, Valuation, MAX_PRECISION};
use crate::dynlab::{conservation_drift, integrate, FloatField};
use crate::error::{Error, Result};
use crate::field::VectorField;
use crate::integral::{build_first_integral, nonintegrability_report, FirstIntegralResult};
use crate::locus::{nonisolated_check, solve_curve, straighten, Verdict};
use crate::smalldiv::{
    counterexample_field, divergence_certificate, h2_coefficients, liouville_zeta,
    LiouvilleSchedule,
};
use crate::spectral::{certify_tail_nonresonant, resonance_lattice, TailCheck, DEFAULT_CAP};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Resonance,
    Curve,
    CheckNonisolated,
    Straighten,
    Integral,
    Nonint,
    Counterexample,
    CertifyDivergence,
    Verify,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Resonance,
        Command::Curve,
        Command::CheckNonisolated,
        Command::Straighten,
        Command::Integral,
        Command::Nonint,
        Command::Counterexample,
        Command::CertifyDivergence,
        Command::Verify,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Resonance => "resonance",
            Command::Curve => "curve",
            Command::CheckNonisolated => "check-nonisolated",
            Command::Straighten => "straighten",
            Command::Integral => "integral",
            Command::Nonint => "nonint",
            Command::Counterexample => "counterexample",
            Command::CertifyDivergence => "certify-divergence",
            Command::Verify => "verify",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        Command::ALL.into_iter().find(|c| c.name() == s)
    }

    fn needs_system(self) -> bool {
        !matches!(self, Command::Counterexample | Command::CertifyDivergence)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunOptions {
    pub degree: Option<usize>,
    pub cap: Option<usize>,
    pub kmax: Option<usize>,
    pub precision: Option<u32>,
    /// Initial distance from the origin for `verify`.
    pub radius: f64,
    pub time: f64,
    pub step: f64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            degree: None,
            cap: None,
            kmax: None,
            precision: None,
            radius: 0.1,
            time: 5.0,
            step: 1e-3,
        }
    }
}

impl RunOptions {
    fn fingerprint(&self, cmd: Command) -> String {
        format!(
            "{} degree={:?} cap={:?} kmax={:?} precision={:?} radius={} time={} step={}",
            cmd.name(),
            self.degree,
            self.cap,
            self.kmax,
            self.precision,
            self.radius,
            self.time,
            self.step
        )
    }
}

/// Output text and process exit code.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub exit_code: i32,
}

/// 0 for success, 2 for a mathematical obstruction, 1 otherwise.
pub fn exit_code(err: &Error) -> i32 {
    if err.is_obstruction() {
        2
    } else {
        1
    }
}

pub fn run(cmd: Command, input: Option<&str>, opts: &RunOptions) -> Result<Outcome> {
    let start = Instant::now();
    let text = input.unwrap_or("");
    let system = match input {
        Some(t) => Some(parse_system(t)?),
        None if cmd.needs_system() => {
            return Err(Error::InvalidArgument(format!("'{}' needs a system file", cmd.name())))
        }
        None => None,
    };
    let mut report = Report::new(cmd.name(), digest(text, &opts.fingerprint(cmd)));
    let ctx = Context {
        system: system.as_ref(),
        opts,
    };
    let mut exit = 0;
    match cmd {
        Command::Resonance => ctx.resonance(&mut report)?,
        Command::Curve => ctx.curve(&mut report)?,
        Command::CheckNonisolated => exit = ctx.check_nonisolated(&mut report)?,
        Command::Straighten => {
            let out = ctx.straighten()?;
            let mut s = String::new();
            s.push_str(&format!("# command = {}\n", cmd.name()));
            s.push_str(&format!("# input_digest = {}\n", report.input_digest));
            s.push_str(&out.serialize());
            return Ok(Outcome {
                text: s,
                exit_code: 0,
            });
        }
        Command::Integral => ctx.integral(&mut report)?,
        Command::Nonint => ctx.nonint(&mut report)?,
        Command::Counterexample => ctx.counterexample(&mut report)?,
        Command::CertifyDivergence => ctx.certify_divergence(&mut report)?,
        Command::Verify => ctx.verify(&mut report)?,
    }
    report.elapsed = start.elapsed();
    Ok(Outcome {
        text: report.render(),
        exit_code: exit,
    })
}

struct Context<'a> {
    system: Option<&'a SystemFile>,
    opts: &'a RunOptions,
}

fn valuation_text(v: Valuation, n: usize) -> String {
    match v {
        Valuation::Finite(d) if d <= n => d.to_string(),
        _ => format!("> {}", n),
    }
}

impl Context<'_> {
    fn sys(&self) -> &SystemFile {
        self.system.expect("checked by run")
    }

    fn precision(&self) -> u32 {
        self.opts
            .precision
            .or(self.system.map(|s| s.options.precision))
            .unwrap_or(crate::algebra::DEFAULT_PRECISION)
    }

    fn degree(&self) -> usize {
        self.opts
            .degree
            .or(self.system.map(|s| s.options.trunc))
            .unwrap_or(12)
    }

    /// Runs `f` on the file's field, doubling precision for certified input.
    fn with_field<T>(&self, mut f: impl FnMut(&VectorField) -> Result<T>) -> Result<(u32, T)> {
        let sys = self.sys();
        sys.backend()?;
        let mut used = self.precision();
        let out = with_precision_doubling(self.precision(), MAX_PRECISION, |bits| {
            used = bits;
            f(&sys.vector_field(bits)?)
        })?;
        Ok((used, out))
    }

    fn write_backend(&self, report: &mut Report, bits: u32) {
        if self.sys().has_zeta() || self.sys().options.backend == BackendChoice::Certified {
            report.kv("backend", "certified");
            report.kv("precision", bits);
        } else {
            report.kv("backend", "exact");
        }
    }

    fn resonance(&self, report: &mut Report) -> Result<()> {
        let cap = self.opts.cap.unwrap_or(DEFAULT_CAP);
        let lam = self.sys().eigenvalues(self.precision())?;
        let lattice = resonance_lattice(&lam, cap)?;
        report.section("lattice");
        report.kv("cap", cap);
        report.kv("count", lattice.points.len());
        for p in &lattice.points {
            report.kv("m", p);
        }
        report.section("tail");
        match certify_tail_nonresonant(&lam[1..], cap)? {
            TailCheck::Certified(c) => {
                report.kv("nonresonant", "yes");
                for (i, b) in c.min_divisor.iter().enumerate() {
                    report.kv(&format!("min_divisor[{}]", i + 1), b);
                }
            }
            TailCheck::Resonant(m) => {
                report.kv("nonresonant", "no");
                report.kv("witness", m);
            }
        }
        Ok(())
    }

    fn curve(&self, report: &mut Report) -> Result<()> {
        let n = self.degree();
        let (bits, phi) = self.with_field(|vf| solve_curve(vf, n))?;
        report.section("curve");
        self.write_backend(report, bits);
        report.kv("truncation", n);
        for (i, c) in phi.components().iter().enumerate() {
            report.series(&format!("phi{}", i + 2), c);
        }
        Ok(())
    }

    fn check_nonisolated(&self, report: &mut Report) -> Result<i32> {
        let n = self.degree();
        let (_, verdict) = self.with_field(|vf| {
            let phi = solve_curve(vf, n)?;
            nonisolated_check(vf, &phi, n)
        })?;
        report.section("verdict");
        Ok(match verdict {
            Verdict::NonIsolated { degree } => {
                report.kv("verdict", "nonisolated");
                report.kv("checked_through", degree);
                0
            }
            Verdict::Isolated {
                degree,
                coefficient,
            } => {
                report.kv("verdict", "isolated");
                report.kv("obstruction_degree", degree);
                report.kv("obstruction_coefficient", format_scalar(&coefficient));
                2
            }
        })
    }

    fn straighten(&self) -> Result<SystemFile> {
        let n = self.degree();
        let sys = self.sys();
        if sys.backend()? != crate::algebra::Backend::ExactRational {
            return Err(Error::InvalidArgument(
                "straighten writes a system file and needs exact coefficients".into(),
            ));
        }
        let vf = sys.vector_field(self.precision())?;
        let st = straightened(&vf, n)?;
        sys.with_field(&st)
    }

    fn integral(&self, report: &mut Report) -> Result<()> {
        let n = self.degree();
        let (bits, (was, res)) = self.with_field(|vf| {
            let st = straightened(vf, n)?;
            Ok((vf.is_straightened(), build_first_integral(&st, n, 1, &Scalar::one())?))
        })?;
        report.section("integral");
        self.write_backend(report, bits);
        report.kv("straightened_on_input", if was { "yes" } else { "no" });
        write_integral(report, &res, n);
        Ok(())
    }

    fn nonint(&self, report: &mut Report) -> Result<()> {
        let n = self.degree();
        let mut used = self.precision();
        let sys = self.sys();
        let rep = with_precision_doubling(self.precision(), MAX_PRECISION, |bits| {
            used = bits;
            nonintegrability_report(&sys.eigenvalues(bits)?, n)
        })?;
        report.section("nonint");
        report.kv("degree", n);
        report.kv("kernel", "trivial");
        if let Some(p) = rep.precision {
            report.kv("precision", p);
        }
        for b in &rep.bounds {
            report.kv(&format!("min_divisor[{}]", b.degree), &b.min_divisor);
        }
        Ok(())
    }

    fn counterexample(&self, report: &mut Report) -> Result<()> {
        let n = self.degree();
        let (terms, from_file) = match self.system {
            Some(sys) => match sys.lambda.get(2) {
                Some(EigenToken::Zeta {
                    terms,
                    negated: true,
                }) if sys.nvars == 3 => (*terms, true),
                _ => {
                    return Err(Error::InvalidArgument(
                        "counterexample file must declare lambda 0 1 -zeta(K=k)".into(),
                    ))
                }
            },
            None => (3, false),
        };
        let zeta = liouville_zeta(&LiouvilleSchedule::new(), terms)?;
        let mut used = self.precision();
        let (res, width) = with_precision_doubling(self.precision(), MAX_PRECISION, |bits| {
            used = bits;
            let vf = match self.system {
                Some(sys) if from_file => sys.vector_field(bits)?,
                _ => counterexample_field(&zeta.scalar(bits), n)?,
            };
            let res = build_first_integral(&vf, n, 1, &Scalar::one())?;
            let width = cross_check(&res.h, &zeta.scalar(bits), n)?;
            Ok((res, width))
        })?;
        report.section("counterexample");
        report.kv("zeta_terms", terms);
        report.kv("precision", used);
        report.kv("source", if from_file { "file" } else { "generated" });
        report.kv("cross_check_max_width_log2", format!("{:.3}", width));
        write_integral(report, &res, n);
        Ok(())
    }

    fn certify_divergence(&self, report: &mut Report) -> Result<()> {
        let kmax = self.opts.kmax.unwrap_or(3);
        let schedule = LiouvilleSchedule::new();
        let cert = divergence_certificate(&schedule, kmax)?;
        report.section("divergence");
        report.kv("kmax", kmax);
        report.kv("increasing", if cert.is_increasing() { "yes" } else { "no" });
        for r in &cert.records {
            report.section(&format!("k={}", r.k));
            report.kv("p", &r.p);
            report.kv("q", format!("2^{}", r.q_log2));
            report.kv("degree", &r.degree);
            report.kv("log2_divisor", &r.divisor_log2);
            report.kv("log2_divisor_slack", format!("2^{}", r.divisor_slack_log2));
            report.kv(
                "log2_root_norm",
                format!("[{:.9}, {:.9}]", r.log2_root_norm.lo, r.log2_root_norm.hi),
            );
        }
        let zeta = liouville_zeta(&schedule, kmax)?;
        report.section("liouville");
        for inst in zeta.liouville_instances()? {
            report.kv(
                &format!("instance[{}]", inst.k),
                format!(
                    "{} (gap < 2^{}, bound 2^{})",
                    if inst.holds() { "holds" } else { "fails" },
                    inst.gap_log2_upper,
                    inst.bound_log2
                ),
            );
        }
        Ok(())
    }

    fn verify(&self, report: &mut Report) -> Result<()> {
        let n = self.degree();
        let sys = self.sys();
        if sys.backend()? != crate::algebra::Backend::ExactRational {
            return Err(Error::InvalidArgument("verify needs an exact system".into()));
        }
        let vf = sys.vector_field(self.precision())?;
        let st = straightened(&vf, n)?;
        let res = build_first_integral(&st, n, 1, &Scalar::one())?;
        let (d_full, d_half) = drift_pair(&st, &res.h, self.opts)?;
        report.section("verify");
        report.kv("degree", n);
        report.kv("radius", self.opts.radius);
        report.kv("time", self.opts.time);
        report.kv("step", self.opts.step);
        report.kv("drift_r", format!("{:.6e}", d_full));
        report.kv("drift_half_r", format!("{:.6e}", d_half));
        let ratio = d_full / d_half;
        report.kv("ratio", format!("{:.3}", ratio));
        let expected = 2f64.powi(n as i32 + 1);
        report.kv("expected_ratio", expected);
        report.kv(
            "within_factor_4",
            if ratio >= expected / 4.0 && ratio <= expected * 4.0 { "yes" } else { "no" },
        );
        Ok(())
    }
}

/// The field itself if already straightened, otherwise curve, check and
/// straighten through degree `n`.
pub fn straightened(vf: &VectorField, n: usize) -> Result<VectorField> {
    if vf.is_straightened() {
        return Ok(vf.clone());
    }
    let phi = solve_curve(vf, n)?;
    if let Verdict::Isolated { degree, .. } = nonisolated_check(vf, &phi, n)? {
        return Err(Error::IsolatedSingularPoint { degree });
    }
    straighten(vf, &phi, n)
}

/// Drifts of `h` along trajectories started at distance `r` and `r/2` on the
/// diagonal.
pub fn drift_pair(vf: &VectorField, h: &TruncSeries, opts: &RunOptions) -> Result<(f64, f64)> {
    let ff = FloatField::from_field(vf, 1.0)?;
    let nv = vf.dim() as f64;
    let run = |r: f64| -> Result<f64> {
        let x0 = vec![r / nv.sqrt(); vf.dim()];
        let traj = integrate(&ff, &x0, opts.time, opts.step)?;
        conservation_drift(h, &traj)
    };
    Ok((run(opts.radius)?, run(opts.radius / 2.0)?))
}

fn write_integral(report: &mut Report, res: &FirstIntegralResult, n: usize) {
    report.kv("leading_degree", res.leading_degree);
    report.kv("leading_coefficient", format_scalar(&res.leading_coeff));
    report.kv("truncation", n);
    report.kv("residual_valuation", valuation_text(res.residual_valuation, n));
    report.section("H");
    report.series("H", &res.h);
    report.section("norms");
    for (d, s) in res.sup_norms.iter().enumerate().skip(1) {
        report.kv(&format!("sup[{}]", d), format!("{:.6e}", s));
    }
}

/// Compares every pure-`y` coefficient of `h` against the closed form and
/// returns the largest `log2` enclosure width seen.
fn cross_check(h: &TruncSeries, zeta: &Scalar, n: usize) -> Result<f64> {
    let mut worst = f64::NEG_INFINITY;
    for d in 2..=n {
        let mstars: Vec<(u64, u64)> = (0..=d as u64).map(|m2| (m2, d as u64 - m2)).collect();
        let closed = h2_coefficients(zeta, 1, &Scalar::one(), &mstars)?;
        for (&(m2, m3), c) in mstars.iter().zip(&closed) {
            let e = crate::algebra::ExponentVec::new(vec![0, m2 as u32, m3 as u32]);
            let got = h.coeff(&e).cloned().unwrap_or_else(Scalar::zero);
            let diff = &got - c;
            if diff.is_certainly_nonzero() {
                return Err(Error::InvalidArgument(format!(
                    "recursion and closed form disagree at {}",
                    e
                )));
            }
            worst = worst.max(got.width_log2()).max(c.width_log2());
        }
    }
    Ok(worst)
}
