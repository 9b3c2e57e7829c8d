//! Run configuration: `key = value` lines, `#` starts a comment.

use std::fmt::{self, Write as _};
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::CliError;
use crate::table::num;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Mirror,
    Cavity,
    Subwavelength,
    Optical,
    Lindblad,
    Validate,
    Figure,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureId {
    MirrorDielectric,
    MirrorPlasmonic,
    SubwlDielectricVsR,
    SubwlDielectricVsD,
    SubwlPlasmonicVsR,
    SubwlPlasmonicVsD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodSel {
    Closed,
    Quadrature,
    Series,
    Limit,
    All,
}

/// Which parameter a `grid` sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    K0d,
    DOverLambda,
    R,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Distance {
    K0d(f64),
    DOverLambda(f64),
}

impl Distance {
    pub fn k0d(self) -> f64 {
        match self {
            Distance::K0d(x) => x,
            Distance::DOverLambda(x) => std::f64::consts::TAU * x,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    return self.stop;
                }
                let s = i as f64 / (n - 1) as f64;
                if self.log {
                    (self.start.ln() + s * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + s * (self.stop - self.start)
                }
            })
            .collect()
    }
}

impl FromStr for Grid {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        let bad = || CliError::Config(format!("grid must be start:stop:count[:log], got {s:?}"));
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        if !(3..=4).contains(&parts.len()) {
            return Err(bad());
        }
        let log = match parts.get(3) {
            None | Some(&"lin") => false,
            Some(&"log") => true,
            Some(_) => return Err(bad()),
        };
        Ok(Grid {
            start: parts[0].parse().map_err(|_| bad())?,
            stop: parts[1].parse().map_err(|_| bad())?,
            count: parts[2].parse().map_err(|_| bad())?,
            log,
        })
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", num(self.start), num(self.stop), self.count)?;
        if self.log {
            f.write_str(":log")?;
        }
        Ok(())
    }
}

macro_rules! keyword_enum {
    ($ty:ident { $($variant:ident => $name:literal),+ $(,)? }) => {
        impl $ty {
            pub const ALL: &'static [$ty] = &[$($ty::$variant),+];

            pub fn as_str(self) -> &'static str {
                match self { $($ty::$variant => $name),+ }
            }
        }

        impl FromStr for $ty {
            type Err = CliError;

            fn from_str(s: &str) -> Result<Self, CliError> {
                match s {
                    $($name => Ok($ty::$variant),)+
                    _ => Err(CliError::Config(format!(
                        "unknown {} {s:?}, expected one of: {}",
                        stringify!($ty),
                        [$($name),+].join(", ")
                    ))),
                }
            }
        }

        impl fmt::Display for $ty {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }
    };
}

keyword_enum!(Target {
    Mirror => "mirror",
    Cavity => "cavity",
    Subwavelength => "subwavelength",
    Optical => "optical",
    Lindblad => "lindblad",
    Validate => "validate",
    Figure => "figure",
});

keyword_enum!(FigureId {
    MirrorDielectric => "mirror_dielectric",
    MirrorPlasmonic => "mirror_plasmonic",
    SubwlDielectricVsR => "subwl_dielectric_vs_r",
    SubwlDielectricVsD => "subwl_dielectric_vs_d",
    SubwlPlasmonicVsR => "subwl_plasmonic_vs_r",
    SubwlPlasmonicVsD => "subwl_plasmonic_vs_d",
});

keyword_enum!(MethodSel {
    Closed => "closed",
    Quadrature => "quadrature",
    Series => "series",
    Limit => "limit",
    All => "all",
});

keyword_enum!(Axis {
    K0d => "k0d",
    DOverLambda => "d-over-lambda",
    R => "r",
});

impl MethodSel {
    pub fn includes(self, m: MethodSel) -> bool {
        self == MethodSel::All || self == m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub target: Target,
    pub figure: Option<FigureId>,
    /// Real reflection rate.
    pub r: f64,
    pub distance: Distance,
    pub grid: Option<Grid>,
    pub axis: Axis,
    pub method: MethodSel,
    pub tol: f64,
    pub n_traj: usize,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub quick: bool,
    pub g: f64,
    pub kappa: f64,
    pub gamma: f64,
    /// Rate of the single-rate model; defaults to the adiabatic `Γ + 4g²/κ`.
    pub gamma_cav: Option<f64>,
    pub dt: Option<f64>,
    pub n_fock: usize,
    /// Additive offset applied to the kernel of the mirror closed form.
    pub perturb_kernel: f64,
}

impl SweepConfig {
    pub fn new(target: Target) -> Self {
        Self {
            target,
            figure: None,
            r: 0.5,
            distance: Distance::K0d(1.0),
            grid: None,
            axis: Axis::K0d,
            method: MethodSel::All,
            tol: 1e-10,
            n_traj: 10_000,
            seed: 0,
            out: None,
            quick: false,
            g: 1.0,
            kappa: 20.0,
            gamma: 1.0,
            gamma_cav: None,
            dt: None,
            n_fock: 5,
            perturb_kernel: 0.0,
        }
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T, CliError> {
            v.parse().map_err(|_| CliError::Config(format!("invalid value {v:?} for {key}")))
        }
        let v = value.trim();
        match key.trim().replace('-', "_").as_str() {
            "target" => self.target = v.parse()?,
            "figure" => self.figure = Some(v.parse()?),
            "r" => self.r = num(key, v)?,
            "k0d" => self.distance = Distance::K0d(num(key, v)?),
            "d_over_lambda" => self.distance = Distance::DOverLambda(num(key, v)?),
            "grid" => self.grid = Some(v.parse()?),
            "axis" => self.axis = v.parse()?,
            "method" => self.method = v.parse()?,
            "tol" => self.tol = num(key, v)?,
            "n_traj" => self.n_traj = num(key, v)?,
            "seed" => self.seed = num(key, v)?,
            "out" => self.out = Some(PathBuf::from(v)),
            "quick" => self.quick = num(key, v)?,
            "g" => self.g = num(key, v)?,
            "kappa" => self.kappa = num(key, v)?,
            "gamma" => self.gamma = num(key, v)?,
            "gamma_cav" => self.gamma_cav = Some(num(key, v)?),
            "dt" => self.dt = Some(num(key, v)?),
            "n_fock" => self.n_fock = num(key, v)?,
            "perturb_kernel" => self.perturb_kernel = num(key, v)?,
            other => return Err(CliError::Config(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies every `key = value` line of `text`.
    pub fn apply_text(&mut self, text: &str) -> Result<(), CliError> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = strip_comment(raw).trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| CliError::Config(format!("line {}: expected key = value, got {raw:?}", lineno + 1)))?;
            self.set(k, v)
                .map_err(|e| CliError::Config(format!("line {}: {e}", lineno + 1)))?;
        }
        Ok(())
    }

    pub fn parse(text: &str, target: Target) -> Result<Self, CliError> {
        let mut cfg = Self::new(target);
        cfg.apply_text(text)?;
        Ok(cfg)
    }

    /// Text that [`SweepConfig::parse`] maps back to `self`.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        let mut line = |k: &str, v: &dyn fmt::Display| {
            let _ = writeln!(s, "{k} = {v}");
        };
        line("target", &self.target);
        if let Some(f) = self.figure {
            line("figure", &f);
        }
        line("r", &num(self.r));
        match self.distance {
            Distance::K0d(x) => line("k0d", &num(x)),
            Distance::DOverLambda(x) => line("d_over_lambda", &num(x)),
        }
        if let Some(g) = self.grid {
            line("grid", &g);
        }
        line("axis", &self.axis);
        line("method", &self.method);
        line("tol", &num(self.tol));
        line("n_traj", &self.n_traj);
        line("seed", &self.seed);
        if let Some(out) = &self.out {
            line("out", &out.display());
        }
        line("quick", &self.quick);
        line("g", &num(self.g));
        line("kappa", &num(self.kappa));
        line("gamma", &num(self.gamma));
        if let Some(x) = self.gamma_cav {
            line("gamma_cav", &num(x));
        }
        if let Some(x) = self.dt {
            line("dt", &num(x));
        }
        line("n_fock", &self.n_fock);
        if self.perturb_kernel != 0.0 {
            line("perturb_kernel", &num(self.perturb_kernel));
        }
        s
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |msg: String| Err(CliError::Config(msg));
        let finite = |x: f64| x.is_finite();
        if !(self.tol > 0.0 && finite(self.tol)) {
            return fail(format!("tol must be > 0, got {}", self.tol));
        }
        if !(self.r.abs() <= 1.0) {
            return fail(format!("r must lie in [-1, 1], got {}", self.r));
        }
        let d = match self.distance {
            Distance::K0d(x) | Distance::DOverLambda(x) => x,
        };
        if !(d >= 0.0 && finite(d)) {
            return fail(format!("distance must be finite and >= 0, got {d}"));
        }
        if let Some(g) = self.grid {
            if g.count < 2 {
                return fail(format!("grid count must be >= 2, got {}", g.count));
            }
            if !(finite(g.start) && finite(g.stop) && g.stop > g.start) {
                return fail(format!("grid needs finite stop > start, got {g}"));
            }
            if g.log && !(g.start > 0.0) {
                return fail(format!("log grid needs start > 0, got {g}"));
            }
            match (self.target, self.axis) {
                (Target::Lindblad, _) => {
                    if g.start != 0.0 {
                        return fail(format!("lindblad time grid must start at 0, got {g}"));
                    }
                }
                (_, Axis::R) if g.start < -1.0 || g.stop > 1.0 => {
                    return fail(format!("r grid must lie within [-1, 1], got {g}"));
                }
                (_, Axis::K0d | Axis::DOverLambda) if g.start < 0.0 => {
                    return fail(format!("distance grid must be >= 0, got {g}"));
                }
                _ => {}
            }
        }
        if self.n_traj == 0 {
            return fail("n_traj must be >= 1".into());
        }
        if self.n_fock == 0 {
            return fail("n_fock must be >= 1".into());
        }
        if !finite(self.g) || !(self.kappa >= 0.0 && finite(self.kappa)) || !(self.gamma >= 0.0 && finite(self.gamma)) {
            return fail("g must be finite and kappa, gamma finite and >= 0".into());
        }
        if let Some(x) = self.gamma_cav {
            if !(x >= 0.0 && finite(x)) {
                return fail(format!("gamma_cav must be finite and >= 0, got {x}"));
            }
        }
        if let Some(x) = self.dt {
            if !(x > 0.0 && finite(x)) {
                return fail(format!("dt must be > 0, got {x}"));
            }
        }
        if !finite(self.perturb_kernel) {
            return fail("perturb_kernel must be finite".into());
        }
        if self.target == Target::Figure && self.figure.is_none() {
            return fail("figure target needs a figure id".into());
        }
        Ok(())
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    }
}
