//! Sampling harness for j-values of parity-preserving isogenous families.
//!
//! * `OddReal`: `τ_{m,n} = (1 + i(m/n)y)/2` for odd `m, n ≤ N`, the image of
//!   the odd base `(1 + iy)/2` under `[[m, (n−m)/2], [0, n]] ∈ G`.
//! * `EvenReal`: `(m/n)√d` on the imaginary axis and `1/2 + (m/n)√d`
//!   (odd `m, n` when `d ≡ 1 mod 4`), for the field `Q(√d)` of an even base.
//! * `Complex`: seeded random Möbius images of the base under `G`.
//!
//! Reports are sorted by label before they are returned, so output does not
//! depend on evaluation order.

use std::collections::BTreeSet;
use std::fmt;
use std::io::Write;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::Ratio;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::cm::TauExact;
use crate::enumeration::CMClassPoint;
use crate::isogeny::{moebius, odd_isogeny_in, random_g_matrix, RatMatrix2};
use crate::modular::{j_minus_1728, j_numeric, Branch, UHPoint};
use crate::num::{lit, Int};
use crate::quadratic::Parity;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DensityMode {
    OddReal,
    EvenReal,
    Complex,
}

impl DensityMode {
    pub fn as_str(self) -> &'static str {
        match self {
            DensityMode::OddReal => "odd",
            DensityMode::EvenReal => "even",
            DensityMode::Complex => "complex",
        }
    }
}

/// Rectangle of the complex plane binned in `Complex` mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub re: (f64, f64),
    pub im: (f64, f64),
}

impl Default for Window {
    fn default() -> Self {
        Self {
            re: (-5000.0, 5000.0),
            im: (-5000.0, 5000.0),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct DensityConfig<I = BigInt> {
    pub mode: DensityMode,
    pub base: TauExact<I>,
    /// `N`: bound on `m, n` in the real modes, on denominators in `Complex`.
    pub denom_bound: u64,
    pub bin_width: f64,
    pub seed: u64,
    /// Number of random matrices drawn in `Complex` mode.
    pub draws: usize,
    /// Bound on numerators of random matrices in `Complex` mode.
    pub num_bound: i64,
    pub window: Window,
}

impl<I: Int> DensityConfig<I> {
    pub fn new(mode: DensityMode, base: TauExact<I>, denom_bound: u64) -> Self {
        Self {
            mode,
            base,
            denom_bound,
            bin_width: 100.0,
            seed: 42,
            draws: 1000,
            num_bound: 40,
            window: Window::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.denom_bound == 0 {
            return Err(Error::InvalidConfig("denominator bound must be positive".into()));
        }
        if !(self.bin_width > 0.0 && self.bin_width.is_finite()) {
            return Err(Error::InvalidConfig(format!("bin width {} must be positive", self.bin_width)));
        }
        if self.mode == DensityMode::Complex {
            if self.num_bound < 1 {
                return Err(Error::InvalidConfig("numerator bound must be positive".into()));
            }
            let w = self.window;
            if !(w.re.0 < w.re.1 && w.im.0 < w.im.1) {
                return Err(Error::InvalidConfig("empty complex window".into()));
            }
        }
        match self.mode {
            DensityMode::OddReal => {
                if self.base.parity() != Parity::Odd {
                    return Err(Error::BadBase(format!("{} is even; odd mode needs an odd base", self.base)));
                }
                if self.base.b().clone() != -self.base.a().clone() {
                    return Err(Error::BadBase(format!(
                        "{} is not of the form (1 + iy)/2",
                        self.base
                    )));
                }
            }
            DensityMode::EvenReal => {
                if self.base.parity() != Parity::Even {
                    return Err(Error::BadBase(format!("{} is odd; even mode needs an even base", self.base)));
                }
            }
            DensityMode::Complex => {}
        }
        Ok(())
    }
}

/// Identifies a sample; the derived order is the output order.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SampleLabel {
    /// `(m, n)` family point on a branch of the real-j locus.
    Pair { branch: Branch, m: u64, n: u64 },
    /// Enumerated point `1/2 + √D/(2β)`.
    Beta(u64),
    /// `k`-th random matrix.
    Matrix { index: usize, entries: String },
}

impl fmt::Display for SampleLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SampleLabel::Pair { branch, m, n } => write!(f, "{branch}:{m}/{n}"),
            SampleLabel::Beta(b) => write!(f, "beta={b}"),
            SampleLabel::Matrix { index, entries } => write!(f, "M{index}{entries}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Sample<I = BigInt> {
    pub label: SampleLabel,
    pub tau: TauExact<I>,
    pub j: Complex64,
    /// `Re(j − 1728)` from `E₆²/Δ`; its sign decides which side of 1728 `j` is on.
    pub j_minus_1728: f64,
    pub branch: Option<Branch>,
    pub parity: Parity,
    /// Degree of the odd isogeny to the base, when the sample comes from `M ∈ G`.
    pub degree: Option<I>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BranchCounts {
    pub t1: usize,
    pub t2: usize,
    pub off_locus: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport<I = BigInt> {
    pub mode: Option<DensityMode>,
    pub seed: Option<u64>,
    pub samples: Vec<Sample<I>>,
    /// Extremes of `Re j` over the samples whose `j` is finite in `f64`.
    pub min_j: Option<f64>,
    pub max_j: Option<f64>,
    /// Samples whose `j` lies beyond the `f64` range.
    pub overflowed: usize,
    pub bins_hit: usize,
    pub all_below_1728: bool,
    pub branch_counts: BranchCounts,
}

enum Binning {
    Real(f64),
    Plane(f64, Window),
}

impl<I: Int> CoverageReport<I> {
    fn assemble(mode: Option<DensityMode>, seed: Option<u64>, mut samples: Vec<Sample<I>>, binning: Binning) -> Self {
        samples.sort_by(|a, b| a.label.cmp(&b.label));
        let finite = || samples.iter().map(|s| s.j.re).filter(|x| x.is_finite());
        let overflowed = samples.iter().filter(|s| !s.j.re.is_finite()).count();
        let min_j = finite().min_by(f64::total_cmp);
        let max_j = finite().max_by(f64::total_cmp);
        let bins_hit = match binning {
            Binning::Real(w) => samples
                .iter()
                .filter(|s| s.j.re.is_finite())
                .map(|s| (s.j.re / w).floor() as i64)
                .collect::<BTreeSet<_>>()
                .len(),
            Binning::Plane(w, win) => samples
                .iter()
                .filter(|s| {
                    (win.re.0..win.re.1).contains(&s.j.re) && (win.im.0..win.im.1).contains(&s.j.im)
                })
                .map(|s| (((s.j.re - win.re.0) / w) as i64, ((s.j.im - win.im.0) / w) as i64))
                .collect::<BTreeSet<_>>()
                .len(),
        };
        let mut branch_counts = BranchCounts::default();
        for s in &samples {
            match s.branch {
                Some(Branch::T1) => branch_counts.t1 += 1,
                Some(Branch::T2) => branch_counts.t2 += 1,
                None => branch_counts.off_locus += 1,
            }
        }
        let all_below_1728 = samples.iter().all(|s| s.j_minus_1728 < 0.0);
        Self {
            mode,
            seed,
            samples,
            min_j,
            max_j,
            overflowed,
            bins_hit,
            all_below_1728,
            branch_counts,
        }
    }

    /// Report over an enumeration of real CM j-invariants, one row per `β`.
    pub fn from_enumeration(points: &[CMClassPoint<I>], bin_width: f64) -> Self {
        let samples = points
            .iter()
            .map(|p| {
                let mut s = evaluate(
                    SampleLabel::Beta(p.beta.to_u64().expect("β fits u64")),
                    p.tau.clone(),
                    Some(Branch::T2),
                    None,
                );
                s.j = Complex64::new(p.j_estimate, s.j.im);
                s
            })
            .collect();
        Self::assemble(None, None, samples, Binning::Real(bin_width))
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn has_sample_at_or_above_1728(&self) -> bool {
        self.samples.iter().any(|s| s.j_minus_1728 >= -JUNCTION_EPS)
    }

    pub fn has_sample_below_1728(&self) -> bool {
        self.samples.iter().any(|s| s.j_minus_1728 < -JUNCTION_EPS)
    }

    pub fn summary_line(&self) -> String {
        let fmt_opt = |v: Option<f64>| v.map(sig12).unwrap_or_else(|| "none".into());
        format!(
            "samples={} min_j={} max_j={} overflowed={} bins_hit={} all_below_1728={} t1={} t2={} off_locus={}",
            self.samples.len(),
            fmt_opt(self.min_j),
            fmt_opt(self.max_j),
            self.overflowed,
            self.bins_hit,
            self.all_below_1728,
            self.branch_counts.t1,
            self.branch_counts.t2,
            self.branch_counts.off_locus,
        )
    }
}

/// `j = 1728` up to this absolute error counts as attaining 1728.
const JUNCTION_EPS: f64 = 1e-9;

fn evaluate<I: Int>(label: SampleLabel, tau: TauExact<I>, branch: Option<Branch>, degree: Option<I>) -> Sample<I> {
    let p = UHPoint::<f64>::from_tau(&tau);
    Sample {
        label,
        j: j_numeric(p),
        j_minus_1728: j_minus_1728(p).re,
        branch,
        parity: tau.parity(),
        tau,
        degree,
    }
}

fn check_parity<I: Int>(s: &Sample<I>, base: Parity) -> Result<()> {
    if s.parity != base {
        return Err(Error::Invariant(format!(
            "parity transport violated at {}: {} vs base {}",
            s.label, s.parity, base
        )));
    }
    Ok(())
}

fn require_mode<I: Int>(cfg: &DensityConfig<I>, mode: DensityMode) -> Result<()> {
    if cfg.mode != mode {
        return Err(Error::InvalidConfig(format!(
            "expected mode {}, got {}",
            mode.as_str(),
            cfg.mode.as_str()
        )));
    }
    cfg.validate()
}

fn odd_upto(n: u64) -> impl Iterator<Item = u64> + Clone {
    (1..=n).step_by(2)
}

/// Odd family `τ_{m,n}` above an odd base `(1 + iy)/2`.
pub fn sample_odd<I: Int>(cfg: &DensityConfig<I>) -> Result<CoverageReport<I>> {
    require_mode(cfg, DensityMode::OddReal)?;
    let base = &cfg.base;
    let field = base.field()?;
    // y² = |Δ|/a²; admissible iff (m/n)·y > 1
    let abs_disc = base.discriminant().abs();
    let a2 = base.a().clone() * base.a().clone();
    let pairs: Vec<(u64, u64)> = odd_upto(cfg.denom_bound)
        .flat_map(|m| odd_upto(cfg.denom_bound).map(move |n| (m, n)))
        .filter(|&(m, n)| {
            let (m, n) = (lit::<I>(m as i64), lit::<I>(n as i64));
            m.clone() * m * abs_disc.clone() > n.clone() * n * a2.clone()
        })
        .collect();
    let samples = pairs
        .into_par_iter()
        .map(|(m, n)| {
            let (mi, ni) = (lit::<I>(m as i64), lit::<I>(n as i64));
            let shift = (ni.clone() - mi.clone()) / lit(2);
            let mat = RatMatrix2::from_integers(mi, shift, I::zero(), ni);
            let iso = odd_isogeny_in(&mat, base, field.clone())?;
            let tau = moebius(&mat, base);
            let s = evaluate(
                SampleLabel::Pair { branch: Branch::T2, m, n },
                tau,
                Some(Branch::T2),
                Some(iso.degree),
            );
            check_parity(&s, Parity::Odd)?;
            if s.j_minus_1728 >= 0.0 {
                return Err(Error::Invariant(format!("odd sample {} has j ≥ 1728", s.label)));
            }
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverageReport::assemble(
        Some(DensityMode::OddReal),
        None,
        samples,
        Binning::Real(cfg.bin_width),
    ))
}

/// Even families on both branches of the real-j locus in the field of an even base.
pub fn sample_even<I: Int>(cfg: &DensityConfig<I>) -> Result<CoverageReport<I>> {
    require_mode(cfg, DensityMode::EvenReal)?;
    let d = cfg.base.field()?;
    let abs_d = d.value().abs();
    let n_max = cfg.denom_bound;
    let all: Vec<(u64, u64)> = (1..=n_max).flat_map(|m| (1..=n_max).map(move |n| (m, n))).collect();
    let int = |v: u64| lit::<I>(v as i64);

    let mut jobs: Vec<(Branch, u64, u64)> = Vec::new();
    // T1: τ = i(m/n)√|d| with (m/n)√|d| ≥ 1
    jobs.extend(
        all.iter()
            .filter(|&&(m, n)| int(m) * int(m) * abs_d.clone() >= int(n) * int(n))
            .map(|&(m, n)| (Branch::T1, m, n)),
    );
    // T2: τ = 1/2 + i(m/n)√|d| with (m/n)√|d| > 1/2
    let odd_only = d.is_one_mod_four();
    jobs.extend(
        all.iter()
            .filter(|&&(m, n)| !odd_only || (m % 2 == 1 && n % 2 == 1))
            .filter(|&&(m, n)| lit::<I>(4) * int(m) * int(m) * abs_d.clone() > int(n) * int(n))
            .map(|&(m, n)| (Branch::T2, m, n)),
    );

    let samples = jobs
        .into_par_iter()
        .map(|(branch, m, n)| {
            let (mi, ni) = (int(m), int(n));
            let m2d = mi.clone() * mi * abs_d.clone();
            let n2 = ni.clone() * ni;
            let tau = match branch {
                Branch::T1 => TauExact::new(n2, I::zero(), m2d),
                Branch::T2 => {
                    let four = lit::<I>(4);
                    TauExact::new(four.clone() * n2.clone(), -(four.clone() * n2.clone()), n2 + four * m2d)
                }
            }?;
            let s = evaluate(SampleLabel::Pair { branch, m, n }, tau, Some(branch), None);
            check_parity(&s, Parity::Even)?;
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverageReport::assemble(
        Some(DensityMode::EvenReal),
        None,
        samples,
        Binning::Real(cfg.bin_width),
    ))
}

fn matrix_label<I: Int>(m: &RatMatrix2<I>) -> String {
    let [a, b, c, d] = m.entries();
    format!("[{a} {b}; {c} {d}]")
}

/// Random Möbius images of the base under `G`, drawn from `cfg.seed`.
pub fn sample_complex<I: Int>(cfg: &DensityConfig<I>) -> Result<CoverageReport<I>> {
    require_mode(cfg, DensityMode::Complex)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let den_bound = i64::try_from(cfg.denom_bound).unwrap_or(i64::MAX);
    let matrices: Vec<RatMatrix2<I>> = (0..cfg.draws)
        .map(|_| random_g_matrix(&mut rng, cfg.num_bound, den_bound))
        .collect();
    sample_complex_with(cfg, &matrices)
}

/// `Complex` mode over an explicit list of matrices.
pub fn sample_complex_with<I: Int>(cfg: &DensityConfig<I>, matrices: &[RatMatrix2<I>]) -> Result<CoverageReport<I>> {
    require_mode(cfg, DensityMode::Complex)?;
    let base = &cfg.base;
    let base_parity = base.parity();
    let field = if matrices.is_empty() { None } else { Some(base.field()?) };
    let samples = matrices
        .par_iter()
        .enumerate()
        .map(|(index, m)| {
            let field = field.clone().expect("nonempty");
            let iso = odd_isogeny_in(m, base, field)?;
            let tau = moebius(m, base);
            let branch = locus_branch(&tau);
            let s = evaluate(
                SampleLabel::Matrix { index, entries: matrix_label(m) },
                tau,
                branch,
                Some(iso.degree),
            );
            check_parity(&s, base_parity)?;
            Ok(s)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CoverageReport::assemble(
        Some(DensityMode::Complex),
        Some(cfg.seed),
        samples,
        Binning::Plane(cfg.bin_width, cfg.window),
    ))
}

/// Branch of the real-j locus the exact point lies on, if any.
fn locus_branch<I: Int>(t: &TauExact<I>) -> Option<Branch> {
    let re = t.real_part();
    // Im τ = √|Δ|/2a; compare squares: t ≥ 1 ⇔ |Δ| ≥ 4a², t > 1/2 ⇔ |Δ| > a²
    let abs_disc = t.discriminant().abs();
    let a2 = t.a().clone() * t.a().clone();
    if re.is_zero() && abs_disc >= lit::<I>(4) * a2.clone() {
        Some(Branch::T1)
    } else if re == Ratio::new(I::one(), lit(2)) && abs_disc > a2 {
        Some(Branch::T2)
    } else {
        None
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Csv,
    Json,
}

/// Shortest decimal form of `x` rounded to 12 significant digits.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("valid float");
    // normalizes -0.0
    ryu_like(if rounded == 0.0 { 0.0 } else { rounded })
}

fn ryu_like(x: f64) -> String {
    serde_json::Number::from_f64(x)
        .map(|n| n.to_string())
        .unwrap_or_else(|| format!("{x}"))
}

fn int_json<I: Int>(n: &I) -> Value {
    serde_json::from_str(&n.to_string()).unwrap_or_else(|_| Value::String(n.to_string()))
}

fn float_json(x: f64) -> Value {
    serde_json::from_str(&sig12(x)).unwrap_or(Value::Null)
}

pub const CSV_HEADER: [&str; 6] = ["label", "re_j", "im_j", "branch", "parity", "degree"];

/// Writes the report; rows follow the report's (sorted) sample order.
pub fn emit<I: Int, W: Write>(report: &CoverageReport<I>, format: EmitFormat, out: W) -> Result<()> {
    match format {
        EmitFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for s in &report.samples {
                w.write_record([
                    s.label.to_string(),
                    sig12(s.j.re),
                    sig12(s.j.im),
                    s.branch.map(|b| b.to_string()).unwrap_or_default(),
                    s.parity.to_string(),
                    s.degree.as_ref().map(|d| d.to_string()).unwrap_or_default(),
                ])?;
            }
            w.flush()?;
        }
        EmitFormat::Json => {
            let samples: Vec<Value> = report
                .samples
                .iter()
                .map(|s| {
                    let (a, b, c) = s.tau.coefficients();
                    json!({
                        "label": s.label.to_string(),
                        "a": int_json(&a),
                        "b": int_json(&b),
                        "c": int_json(&c),
                        "re_j": float_json(s.j.re),
                        "im_j": float_json(s.j.im),
                        "branch": s.branch.map(|b| b.as_str()),
                        "parity": s.parity.as_str(),
                        "degree": s.degree.as_ref().map(int_json),
                    })
                })
                .collect();
            let doc = json!({
                "mode": report.mode.map(|m| m.as_str()),
                "seed": report.seed,
                "count": report.samples.len(),
                "min_j": report.min_j.map(float_json),
                "max_j": report.max_j.map(float_json),
                "overflowed": report.overflowed,
                "bins_hit": report.bins_hit,
                "all_below_1728": report.all_below_1728,
                "branch_counts": {
                    "T1": report.branch_counts.t1,
                    "T2": report.branch_counts.t2,
                    "off_locus": report.branch_counts.off_locus,
                },
                "samples": samples,
            });
            let mut out = out;
            serde_json::to_writer_pretty(&mut out, &doc)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}
