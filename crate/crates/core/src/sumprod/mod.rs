//! Products of sum/difference sets `(A ± B)(C ± D)` and exact counts of
//! solutions to `(a ± b)(c ± d) = (a' ± b')(c' ± d')`.

mod character;
mod lemmas;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;

pub use character::char_fourth_moment;
pub use lemmas::{
    adden_check, adden_check_with_maps, coverage_lower_bound, exi2_check, proposition_split,
    AddenRecord, CoverageRecord, DyadicSplitReport, Exi2Record, SplitThreshold,
};

use crate::error::{Error, Result};
use crate::exact::{big, ratio, to_f64, Rational};
use crate::field::{FieldElement, PrimeField};
use crate::sets::{FpSet, Sign};
use crate::transform::{self, naive_additive_rep, Domain, RepFn};

/// Largest `|A||B||C||D|` the brute-force counter will enumerate.
pub const BRUTE_BUDGET: u128 = 10_000_000;

/// The sign pattern of `(A ± B)(C ± D)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Signs(pub Sign, pub Sign);

impl Signs {
    pub const MM: Signs = Signs(Sign::Minus, Sign::Minus);
    pub const ALL: [Signs; 4] = [
        Signs(Sign::Minus, Sign::Minus),
        Signs(Sign::Minus, Sign::Plus),
        Signs(Sign::Plus, Sign::Minus),
        Signs(Sign::Plus, Sign::Plus),
    ];
}

impl Default for Signs {
    fn default() -> Self {
        Signs::MM
    }
}

impl fmt::Display for Signs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c = |s: Sign| match s {
            Sign::Minus => 'm',
            Sign::Plus => 'p',
        };
        write!(f, "{}{}", c(self.0), c(self.1))
    }
}

impl FromStr for Signs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let sign = |c: char| match c {
            'm' => Ok(Sign::Minus),
            'p' => Ok(Sign::Plus),
            _ => Err(Error::BadParameter(format!(
                "signs must be mm|mp|pm|pp, got {s:?}"
            ))),
        };
        let chars: Vec<char> = s.chars().collect();
        if chars.len() != 2 {
            return Err(Error::BadParameter(format!(
                "signs must be mm|mp|pm|pp, got {s:?}"
            )));
        }
        Ok(Signs(sign(chars[0])?, sign(chars[1])?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    /// Direct enumeration of `(a, b, c, d)` into a histogram of products.
    Brute,
    /// Pair-enumerated `r_{A±B}`, `r_{C±D}` multiplied over all of `F_p × F_p`.
    RepFn,
    /// Convolution over `F_p^*` with the zero fibre counted in closed form.
    Transform,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::Brute, Method::RepFn, Method::Transform];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Brute => "brute",
            Method::RepFn => "repfn",
            Method::Transform => "transform",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(Method::Brute),
            "repfn" => Ok(Method::RepFn),
            "transform" => Ok(Method::Transform),
            _ => Err(Error::BadParameter(format!(
                "method must be brute|repfn|transform, got {s:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolutionCountRecord {
    pub p: u64,
    /// `|A||B||C||D|`, the total mass of `r`.
    pub mass: u128,
    pub n_total: u128,
    pub n_zero: u128,
    pub n_nonzero: u128,
    pub method: Method,
    /// `(|A||B||C||D|)² / p`.
    pub main_term: Rational,
    pub support_size: usize,
}

impl SolutionCountRecord {
    fn from_rep(r: &RepFn, mass: u128, method: Method) -> Result<Self> {
        let p = r.field().p();
        let n_total = r.sum_of_squares()?;
        let n_zero = r.values()[0] * r.values()[0];
        Ok(SolutionCountRecord {
            p,
            mass,
            n_total,
            n_zero,
            n_nonzero: n_total - n_zero,
            method,
            main_term: ratio(big(mass) * big(mass), p),
            support_size: r.support_size(),
        })
    }

    /// `N p / (|A||B||C||D|)²`; at least 1 by Cauchy–Schwarz.
    pub fn main_term_ratio(&self) -> f64 {
        to_f64(&ratio(
            big(self.n_total) * BigInt::from(self.p),
            big(self.mass) * big(self.mass),
        ))
    }

    /// `(N - main_term) / (p^{2/3} (|A||B||C||D|)^{4/3})`, which for four sets
    /// of size `n` is the error term normalised by `p^{2/3} n^{16/3}`.
    pub fn residual(&self) -> f64 {
        let excess = to_f64(&(Rational::from_integer(big(self.n_total)) - &self.main_term));
        excess / ((self.p as f64).powf(2.0 / 3.0) * (self.mass as f64).powf(4.0 / 3.0))
    }
}

fn check_operands(sets: [&FpSet; 4]) -> Result<u128> {
    for s in &sets[1..] {
        sets[0].same_field(s)?;
    }
    if sets.iter().any(|s| s.is_empty()) {
        return Err(Error::EmptySet);
    }
    Ok(sets.iter().map(|s| s.len() as u128).product())
}

fn combine(f: &PrimeField, x: FieldElement, y: FieldElement, sign: Sign) -> FieldElement {
    match sign {
        Sign::Plus => f.add(x, y),
        Sign::Minus => f.sub(x, y),
    }
}

/// `r(x) = #{(a, b, c, d) : (a ± b)(c ± d) = x}` for every `x ∈ F_p`.
pub fn diff_product_rep(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, signs: Signs) -> Result<RepFn> {
    let mass = check_operands([a, b, c, d])?;
    let u = transform::additive_rep(a, b, signs.0)?.nonzero_part();
    let v = transform::additive_rep(c, d, signs.1)?.nonzero_part();
    let product = transform::mult_convolution(&u, &v)?;
    let mut values = product.values().to_vec();
    values[0] = mass - u.total() * v.total();
    RepFn::new(a.field(), Domain::Additive, values)
}

/// `|(A ± B)(C ± D)|`.
pub fn support_size(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, signs: Signs) -> Result<usize> {
    Ok(diff_product_rep(a, b, c, d, signs)?.support_size())
}

fn brute_rep(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, signs: Signs) -> Result<RepFn> {
    let f = a.field();
    let mut hist = vec![0u128; f.size()];
    for &x in a.elements() {
        for &y in b.elements() {
            let s = combine(f, x, y, signs.0);
            for &z in c.elements() {
                for &w in d.elements() {
                    hist[f.mul(s, combine(f, z, w, signs.1)).index()] += 1;
                }
            }
        }
    }
    RepFn::new(f, Domain::Additive, hist)
}

fn pairwise_rep(a: &FpSet, b: &FpSet, c: &FpSet, d: &FpSet, signs: Signs) -> Result<RepFn> {
    let f = a.field();
    let u = naive_additive_rep(a, b, signs.0)?;
    let v = naive_additive_rep(c, d, signs.1)?;
    let mut out = vec![0u128; f.size()];
    for s in f.elements().filter(|&s| u.get(s) != 0) {
        for t in f.elements().filter(|&t| v.get(t) != 0) {
            out[f.mul(s, t).index()] += u.get(s) * v.get(t);
        }
    }
    RepFn::new(f, Domain::Additive, out)
}

/// `N = #{(a, b, c, d, a', b', c', d') : (a ± b)(c ± d) = (a' ± b')(c' ± d')}`.
pub fn solution_count(
    a: &FpSet,
    b: &FpSet,
    c: &FpSet,
    d: &FpSet,
    signs: Signs,
    method: Method,
) -> Result<SolutionCountRecord> {
    let mass = check_operands([a, b, c, d])?;
    let r = match method {
        Method::Brute => {
            if mass > BRUTE_BUDGET {
                return Err(Error::BudgetExceeded {
                    work: mass,
                    budget: BRUTE_BUDGET,
                });
            }
            brute_rep(a, b, c, d, signs)?
        }
        Method::RepFn => pairwise_rep(a, b, c, d, signs)?,
        Method::Transform => diff_product_rep(a, b, c, d, signs)?,
    };
    SolutionCountRecord::from_rep(&r, mass, method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::transform::values_at;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::sync::Arc;

    fn field(p: u64) -> Arc<PrimeField> {
        Arc::new(PrimeField::new(p).unwrap())
    }

    #[test]
    fn signs_round_trip() {
        for s in Signs::ALL {
            assert_eq!(s.to_string().parse::<Signs>().unwrap(), s);
        }
        assert!("mx".parse::<Signs>().is_err());
        assert!("mmm".parse::<Signs>().is_err());
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
    }

    #[test]
    fn diff_product_examples() {
        let f5 = field(5);
        let a = FpSet::from_elements(&f5, [1, 2]);
        let r = diff_product_rep(&a, &a, &a, &a, Signs::MM).unwrap();
        assert_eq!(values_at(&r, &[0, 1, 2, 3, 4]), vec![12, 2, 0, 0, 2]);

        let f7 = field(7);
        let s = |v| FpSet::from_elements(&f7, [v]);
        let r = diff_product_rep(&s(5), &s(1), &s(3), &s(6), Signs::MM).unwrap();
        let hit = f7.mul(f7.elem(4), f7.elem_signed(-3));
        for x in f7.elements() {
            assert_eq!(r.get(x), u128::from(x == hit));
        }

        let b = FpSet::from_elements(&f7, [1, 2, 4]);
        let r = diff_product_rep(&b, &b, &b, &b, Signs::MM).unwrap();
        assert_eq!(r.total(), 81);
        assert_eq!(support_size(&a, &a, &a, &a, Signs::MM).unwrap(), 3);
        assert_eq!(support_size(&b, &b, &b, &b, Signs::MM).unwrap(), 7);
        assert_eq!(
            support_size(&s(1), &s(2), &s(3), &s(4), Signs::MM).unwrap(),
            1
        );
        assert_eq!(
            diff_product_rep(&a, &FpSet::empty(&f5), &a, &a, Signs::MM).unwrap_err(),
            Error::EmptySet
        );
        assert!(matches!(
            diff_product_rep(&a, &b, &a, &a, Signs::MM),
            Err(Error::FieldMismatch(..))
        ));
    }

    #[test]
    fn solution_count_examples() {
        let f5 = field(5);
        let a = FpSet::from_elements(&f5, [1, 2]);
        for m in Method::ALL {
            let rec = solution_count(&a, &a, &a, &a, Signs::MM, m).unwrap();
            assert_eq!((rec.n_total, rec.n_zero, rec.n_nonzero), (152, 144, 8));
            assert_eq!(rec.support_size, 3);
            assert_eq!(rec.main_term, ratio(256, 5));
        }
        let one = FpSet::from_elements(&f5, [3]);
        assert_eq!(
            solution_count(&one, &one, &one, &one, Signs::MM, Method::Transform)
                .unwrap()
                .n_total,
            1
        );

        // Frozen from an independent enumeration of all 3^8 tuples.
        let f7 = field(7);
        let b = FpSet::from_elements(&f7, [1, 2, 4]);
        for m in Method::ALL {
            let rec = solution_count(&b, &b, &b, &b, Signs::MM, m).unwrap();
            assert_eq!((rec.n_total, rec.n_zero, rec.n_nonzero), (2241, 2025, 216));
        }
    }

    #[test]
    fn brute_budget_enforced() {
        let f = field(101);
        let a = FpSet::interval(&f, f.elem(0), 57).unwrap();
        assert_eq!(
            solution_count(&a, &a, &a, &a, Signs::MM, Method::Brute).unwrap_err(),
            Error::BudgetExceeded {
                work: 57u128.pow(4),
                budget: BRUTE_BUDGET
            }
        );
        let a = FpSet::interval(&f, f.elem(0), 56).unwrap();
        assert!(solution_count(&a, &a, &a, &a, Signs::MM, Method::Brute).is_ok());
    }

    #[test]
    fn methods_agree_on_random_instances() {
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        for p in [2u64, 3, 5, 7, 11, 13, 29, 61] {
            let f = field(p);
            for _ in 0..6 {
                let mut pick = || {
                    FpSet::random_uniform(&f, rng.gen_range(1..=8.min(p as usize)), rng.gen())
                        .unwrap()
                };
                let sets = [pick(), pick(), pick(), pick()];
                for signs in Signs::ALL {
                    let recs: Vec<_> = Method::ALL
                        .iter()
                        .map(|&m| {
                            solution_count(&sets[0], &sets[1], &sets[2], &sets[3], signs, m)
                                .unwrap()
                        })
                        .collect();
                    for rec in &recs[1..] {
                        assert_eq!(rec.n_total, recs[0].n_total);
                        assert_eq!(rec.n_zero, recs[0].n_zero);
                        assert_eq!(rec.support_size, recs[0].support_size);
                    }
                    assert!(recs[0].main_term_ratio() >= 1.0);
                }
            }
        }
    }
}
