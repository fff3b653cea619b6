use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{parse_rational, Rational};
use crate::field::{is_prime, PrimeField};
use crate::rng::{rng_from_seed, stream_seed};
use crate::sets::FpSet;
use crate::sumprod::{Method, Signs};

fn bad(msg: impl Into<String>) -> Error {
    Error::BadParameter(msg.into())
}

fn parse_num<T: FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| bad(format!("cannot parse {what} from {s:?}")))
}

/// How the base set `A` of each trial is generated.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    /// Uniformly random `n`-subset.
    Random,
    /// `{a0, ..., a0 + n - 1}`.
    Interval { a0: u64 },
    /// `{a0, a0 r, ..., a0 r^{n-1}}`; `None` means the field's generator.
    Geometric { ratio: Option<u64>, a0: u64 },
    /// Multiplicative subgroup of order `d`; without `d`, the largest
    /// subgroup of order at most `n`.
    Subgroup { d: Option<usize> },
    /// A fixed list of residues, reduced mod `p`.
    Elements(Vec<u64>),
}

impl Family {
    /// Builds the set for one trial; `seed` is used only by random families.
    pub fn build(&self, field: &Arc<PrimeField>, n: usize, seed: u64) -> Result<FpSet> {
        match self {
            Family::Random => FpSet::random_uniform(field, n, seed),
            Family::Interval { a0 } => FpSet::interval(field, field.elem(*a0), n),
            Family::Geometric { ratio, a0 } => {
                let r = ratio.map_or(field.generator(), |r| field.elem(r));
                FpSet::geometric(field, r, field.elem(*a0), n)
            }
            Family::Subgroup { d: Some(d) } => FpSet::subgroup(field, *d),
            Family::Subgroup { d: None } => {
                let order = field.group_order();
                let d = (1..=n.min(order))
                    .rev()
                    .find(|d| order.is_multiple_of(*d))
                    .unwrap_or(1);
                FpSet::subgroup(field, d)
            }
            Family::Elements(v) => Ok(FpSet::from_elements(field, v.iter().copied())),
        }
    }

    pub fn is_random(&self) -> bool {
        matches!(self, Family::Random)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Random => write!(f, "random"),
            Family::Interval { a0 } => write!(f, "interval:{a0}"),
            Family::Geometric { ratio: None, a0 } => write!(f, "geometric:g,{a0}"),
            Family::Geometric { ratio: Some(r), a0 } => write!(f, "geometric:{r},{a0}"),
            Family::Subgroup { d: None } => write!(f, "subgroup"),
            Family::Subgroup { d: Some(d) } => write!(f, "subgroup:{d}"),
            Family::Elements(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "elements:{}", parts.join(";"))
            }
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `random`, `interval[:a0]`, `geometric[:r|g[,a0]]`, `subgroup[:d]`,
    /// `elements:x,y,...` (`;` is accepted as a separator too).
    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        let list = |a: &str| -> Vec<String> {
            a.split([',', ';'])
                .map(|x| x.trim().to_string())
                .filter(|x| !x.is_empty())
                .collect()
        };
        match (name, args) {
            ("random", None) => Ok(Family::Random),
            ("interval", None) => Ok(Family::Interval { a0: 0 }),
            ("interval", Some(a)) => Ok(Family::Interval {
                a0: parse_num(a, "interval start")?,
            }),
            ("geometric", args) => {
                let parts = args.map(list).unwrap_or_default();
                let ratio = match parts.first().map(String::as_str) {
                    None | Some("g") => None,
                    Some(r) => Some(parse_num(r, "geometric ratio")?),
                };
                let a0 = match parts.get(1) {
                    Some(a) => parse_num(a, "geometric start")?,
                    None => 1,
                };
                if parts.len() > 2 {
                    return Err(bad(format!("geometric takes at most two arguments: {s:?}")));
                }
                Ok(Family::Geometric { ratio, a0 })
            }
            ("subgroup", None) => Ok(Family::Subgroup { d: None }),
            ("subgroup", Some(d)) => Ok(Family::Subgroup {
                d: Some(parse_num(d, "subgroup order")?),
            }),
            ("elements", Some(a)) => {
                let v = list(a)
                    .iter()
                    .map(|x| parse_num(x, "element"))
                    .collect::<Result<Vec<u64>>>()?;
                if v.is_empty() {
                    return Err(bad("elements family needs at least one element"));
                }
                Ok(Family::Elements(v))
            }
            _ => Err(bad(format!("unknown family {s:?}"))),
        }
    }
}

/// Size of `A` as a function of `p`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SizeRule {
    Absolute(usize),
    /// `n = ⌈C p^α⌉`, clamped to `[1, p]`.
    Power {
        alpha: f64,
        constant: f64,
    },
}

impl Default for SizeRule {
    fn default() -> Self {
        SizeRule::Power {
            alpha: 0.625,
            constant: 1.0,
        }
    }
}

impl SizeRule {
    pub fn size(&self, p: u64) -> usize {
        match *self {
            SizeRule::Absolute(n) => n,
            SizeRule::Power { alpha, constant } => {
                let n = (constant * (p as f64).powf(alpha)).ceil();
                n.clamp(1.0, p as f64) as usize
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            SizeRule::Absolute(0) => Err(bad("size must be at least 1")),
            SizeRule::Power { alpha, .. } if !(alpha > 0.0 && alpha <= 1.0) => {
                Err(bad(format!("alpha must lie in (0, 1], got {alpha}")))
            }
            SizeRule::Power { constant, .. } if !(constant > 0.0 && constant.is_finite()) => Err(
                bad(format!("size constant must be positive, got {constant}")),
            ),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for SizeRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SizeRule::Absolute(n) => write!(f, "{n}"),
            SizeRule::Power { alpha, constant } => write!(f, "alpha:{alpha},const:{constant}"),
        }
    }
}

impl FromStr for SizeRule {
    type Err = Error;

    /// `n`, or `alpha:α[,const:C]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.contains(':') {
            return Ok(SizeRule::Absolute(parse_num(s, "size")?));
        }
        let mut alpha = None;
        let mut constant = 1.0;
        for part in s.split(',') {
            let (key, value) = part
                .split_once(':')
                .ok_or_else(|| bad(format!("malformed size rule {s:?}")))?;
            match key.trim() {
                "alpha" => alpha = Some(parse_alpha(value)?),
                "const" | "c" | "C" => constant = parse_num(value, "size constant")?,
                other => return Err(bad(format!("unknown size key {other:?}"))),
            }
        }
        let alpha = alpha.ok_or_else(|| bad(format!("size rule {s:?} lacks alpha")))?;
        Ok(SizeRule::Power { alpha, constant })
    }
}

/// Accepts decimals and fractions such as `5/8`.
fn parse_alpha(s: &str) -> Result<f64> {
    parse_rational(s)
        .map(|r| crate::exact::to_f64(&r))
        .ok_or_else(|| bad(format!("cannot parse alpha from {s:?}")))
}

/// The dilation set `X` for the energy-sum experiments.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum XRule {
    /// `{1, ..., m}`.
    First(usize),
    /// `m` distinct uniformly random nonzero elements.
    Random(usize),
    /// `F_p^*`.
    #[default]
    All,
    /// `{ξ : E_+(A, ξA) > |A|³/K}`.
    Large(Rational),
}

impl XRule {
    /// Builds `X`; `large` resolves [`XRule::Large`] from the trial's spectrum.
    pub fn build(
        &self,
        field: &Arc<PrimeField>,
        seed: u64,
        large: impl FnOnce(&Rational) -> Result<FpSet>,
    ) -> Result<FpSet> {
        let units = field.group_order();
        match self {
            XRule::First(m) => {
                check_m(*m, units)?;
                Ok(FpSet::from_elements(field, 1..=*m as u64))
            }
            XRule::Random(m) => {
                check_m(*m, units)?;
                let mut rng = rng_from_seed(stream_seed(seed, 2));
                let picks = rand::seq::index::sample(&mut rng, units, *m);
                Ok(FpSet::from_elements(
                    field,
                    picks.iter().map(|i| i as u64 + 1),
                ))
            }
            XRule::All => Ok(FpSet::from_elements(field, 1..field.p())),
            XRule::Large(k) => large(k),
        }
    }
}

fn check_m(m: usize, units: usize) -> Result<()> {
    if m == 0 || m > units {
        return Err(bad(format!("|X| = {m} must lie in [1, {units}]")));
    }
    Ok(())
}

impl fmt::Display for XRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            XRule::First(m) => write!(f, "first:{m}"),
            XRule::Random(m) => write!(f, "random:{m}"),
            XRule::All => write!(f, "all"),
            XRule::Large(k) => write!(f, "large:{k}"),
        }
    }
}

impl FromStr for XRule {
    type Err = Error;

    /// `first:m` (alias `first-m-dilates:m`), `random:m`, `all`, `large:K`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, arg) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a.trim())),
            None => (s.trim(), None),
        };
        match (name, arg) {
            ("all", None) => Ok(XRule::All),
            ("first" | "first-m-dilates", Some(m)) => Ok(XRule::First(parse_num(m, "|X|")?)),
            ("random", Some(m)) => Ok(XRule::Random(parse_num(m, "|X|")?)),
            ("large", Some(k)) => {
                let k =
                    parse_rational(k).ok_or_else(|| bad(format!("cannot parse K from {k:?}")))?;
                Ok(XRule::Large(k))
            }
            _ => Err(bad(format!("unknown X rule {s:?}"))),
        }
    }
}

/// Which solution-count algorithms to run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodChoice {
    One(Method),
    All,
}

impl Default for MethodChoice {
    fn default() -> Self {
        MethodChoice::One(Method::Transform)
    }
}

impl MethodChoice {
    pub fn methods(self) -> Vec<Method> {
        match self {
            MethodChoice::One(m) => vec![m],
            MethodChoice::All => Method::ALL.to_vec(),
        }
    }
}

impl FromStr for MethodChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim() == "all" {
            Ok(MethodChoice::All)
        } else {
            s.trim().parse().map(MethodChoice::One)
        }
    }
}

/// Parses a `K` list such as `2,4,8` or `3/2,auto`; `auto` stands for the
/// default threshold where a command has one.
pub fn parse_k_list(s: &str) -> Result<Vec<Option<Rational>>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            if t == "auto" {
                Ok(None)
            } else {
                parse_rational(t)
                    .map(Some)
                    .ok_or_else(|| bad(format!("cannot parse K from {t:?}")))
            }
        })
        .collect()
}

pub fn parse_primes(s: &str) -> Result<Vec<u64>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| parse_num(t, "prime"))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub primes: Vec<u64>,
    pub family: Family,
    pub size: SizeRule,
    pub trials: usize,
    pub base_seed: u64,
    pub signs: Signs,
    /// Draw `B, C, D` as random affine images of `A` instead of `A` itself.
    pub affine: bool,
    /// Threshold list for census and split; `None` entries mean the default.
    pub k_list: Vec<Option<Rational>>,
    pub x_rule: XRule,
    pub method: MethodChoice,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            primes: vec![101],
            family: Family::Random,
            size: SizeRule::default(),
            trials: 1,
            base_seed: 0,
            signs: Signs::MM,
            affine: false,
            k_list: Vec::new(),
            x_rule: XRule::All,
            method: MethodChoice::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.primes.is_empty() {
            return Err(bad("at least one prime is required"));
        }
        for &p in &self.primes {
            if !is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        if self.trials == 0 {
            return Err(bad("trials must be at least 1"));
        }
        self.size.validate()?;
        for k in self.k_list.iter().flatten() {
            if *k <= Rational::from_integer(0.into()) {
                return Err(bad(format!("K must be positive, got {k}")));
            }
        }
        match &self.x_rule {
            XRule::First(0) | XRule::Random(0) => return Err(bad("|X| must be at least 1")),
            XRule::Large(k) if *k < Rational::from_integer(1.into()) => {
                return Err(bad(format!("large-X threshold needs K >= 1, got {k}")))
            }
            _ => {}
        }
        Ok(())
    }
}
