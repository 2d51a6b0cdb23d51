//! Truth-value algebras over exact rationals.
//!
//! Every family interprets `∧` as min and `∨` as max; they differ in the
//! strong conjunction `&` and its residuum `→`:
//!
//! | family      | `x & y`            | `x → y`                         |
//! |-------------|--------------------|---------------------------------|
//! | Łukasiewicz | `max(0, x + y − 1)`| `min(1, 1 − x + y)`             |
//! | Gödel       | `min(x, y)`        | `1` if `x ≤ y`, else `y`        |
//! | Product     | `x · y`            | `1` if `x ≤ y`, else `y / x`    |
//! | Classical   | `min(x, y)`        | `1` if `x ≤ y`, else `y`        |
//!
//! Carriers are either the whole unit interval or the chain
//! `{0, 1/(n−1), …, 1}`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// An exact rational in `[0, 1]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TruthValue(Rational);

impl TruthValue {
    pub fn new(r: Rational) -> Result<Self> {
        if r.is_negative() || r > Rational::one() {
            return Err(Error::OutOfUnitInterval(fmt_rational(&r)));
        }
        Ok(TruthValue(r))
    }

    pub fn ratio(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Invalid("zero denominator".into()));
        }
        Self::new(Rational::new(num.into(), den.into()))
    }

    pub fn zero() -> Self {
        TruthValue(Rational::zero())
    }

    pub fn one() -> Self {
        TruthValue(Rational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_rational(&self) -> &Rational {
        &self.0
    }

    pub fn into_rational(self) -> Rational {
        self.0
    }

    /// Lossy conversion, for reporting only.
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.0)
    }
}

pub(crate) fn ratio_to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

pub(crate) fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p/q`, an integer, or a finite decimal such as `0.8`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::Invalid(format!("not a rational number: `{s}`"));
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let int: BigInt = if int.is_empty() { BigInt::zero() } else { int.parse().map_err(|_| bad())? };
        let digits: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        return Ok(Rational::from_integer(int) + Rational::new(digits, scale));
    }
    let n: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_rational(&self.0))
    }
}

impl fmt::Debug for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for TruthValue {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TruthValue::new(parse_rational(s)?)
    }
}

impl serde::Serialize for TruthValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for TruthValue {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Binary connectives of the object language. Negation is `φ → 0̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Connective {
    Meet,
    Join,
    Strong,
    Implies,
}

impl Connective {
    pub const ALL: [Connective; 4] = [Connective::Meet, Connective::Join, Connective::Strong, Connective::Implies];

    pub fn arity(self) -> usize {
        2
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Connective::Meet => "/\\",
            Connective::Join => "\\/",
            Connective::Strong => "&",
            Connective::Implies => "->",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Lukasiewicz,
    Godel,
    Product,
    Classical,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Carrier {
    FullInterval,
    /// `{0, 1/(n−1), …, 1}`, `n ≥ 2`.
    FiniteChain(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Algebra {
    family: Family,
    carrier: Carrier,
}

impl Algebra {
    pub fn new(family: Family, carrier: Carrier) -> Result<Self> {
        match (family, carrier) {
            (_, Carrier::FiniteChain(n)) if n < 2 => Err(Error::UnsupportedAlgebra(format!("chain of {n} values"))),
            (Family::Product, Carrier::FiniteChain(n)) if n > 2 => {
                Err(Error::UnsupportedAlgebra(format!("product logic has no {n}-valued version")))
            }
            (Family::Classical, Carrier::FiniteChain(2)) => Ok(Algebra { family, carrier }),
            (Family::Classical, _) => Err(Error::UnsupportedAlgebra("classical algebra is two-valued".into())),
            _ => Ok(Algebra { family, carrier }),
        }
    }

    pub fn lukasiewicz() -> Self {
        Algebra { family: Family::Lukasiewicz, carrier: Carrier::FullInterval }
    }

    pub fn godel() -> Self {
        Algebra { family: Family::Godel, carrier: Carrier::FullInterval }
    }

    pub fn product() -> Self {
        Algebra { family: Family::Product, carrier: Carrier::FullInterval }
    }

    pub fn classical() -> Self {
        Algebra { family: Family::Classical, carrier: Carrier::FiniteChain(2) }
    }

    pub fn lukasiewicz_n(n: usize) -> Result<Self> {
        Self::new(Family::Lukasiewicz, Carrier::FiniteChain(n))
    }

    pub fn godel_n(n: usize) -> Result<Self> {
        Self::new(Family::Godel, Carrier::FiniteChain(n))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn carrier(&self) -> Carrier {
        self.carrier
    }

    pub fn is_finite(&self) -> bool {
        matches!(self.carrier, Carrier::FiniteChain(_))
    }

    pub fn carrier_size(&self) -> Option<usize> {
        match self.carrier {
            Carrier::FiniteChain(n) => Some(n),
            Carrier::FullInterval => None,
        }
    }

    pub fn contains(&self, v: &TruthValue) -> bool {
        match self.carrier {
            Carrier::FullInterval => true,
            Carrier::FiniteChain(n) => {
                // v = k/(n-1) for an integer k
                let scaled = v.as_rational() * Rational::from_integer(BigInt::from(n - 1));
                scaled.is_integer()
            }
        }
    }

    pub fn check_member(&self, v: &TruthValue) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::OutsideCarrier(v.to_string()))
        }
    }

    /// The carrier in increasing order.
    pub fn enumerate_carrier(&self) -> Result<Vec<TruthValue>> {
        match self.carrier {
            Carrier::FullInterval => Err(Error::InfiniteCarrier(self.to_string())),
            Carrier::FiniteChain(n) => {
                Ok((0..n).map(|k| TruthValue(Rational::new(BigInt::from(k), BigInt::from(n - 1)))).collect())
            }
        }
    }

    pub fn apply(&self, conn: Connective, args: &[TruthValue]) -> Result<TruthValue> {
        if args.len() != conn.arity() {
            return Err(Error::Arity {
                what: format!("connective {}", conn.symbol()),
                expected: conn.arity(),
                found: args.len(),
            });
        }
        for a in args {
            self.check_member(a)?;
        }
        Ok(self.op(conn, &args[0], &args[1]))
    }

    /// Unchecked binary operation; arguments are assumed to lie in the carrier.
    pub fn op(&self, conn: Connective, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match conn {
            Connective::Meet => x.min(y).clone(),
            Connective::Join => x.max(y).clone(),
            Connective::Strong => self.strong(x, y),
            Connective::Implies => self.implies(x, y),
        }
    }

    pub fn strong(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        match self.family {
            Family::Lukasiewicz => {
                let s = x.as_rational() + y.as_rational() - Rational::one();
                if s.is_negative() {
                    TruthValue::zero()
                } else {
                    TruthValue(s)
                }
            }
            Family::Godel | Family::Classical => x.min(y).clone(),
            Family::Product => TruthValue(x.as_rational() * y.as_rational()),
        }
    }

    pub fn implies(&self, x: &TruthValue, y: &TruthValue) -> TruthValue {
        if x <= y {
            return TruthValue::one();
        }
        match self.family {
            Family::Lukasiewicz => TruthValue(Rational::one() - x.as_rational() + y.as_rational()),
            Family::Godel | Family::Classical => y.clone(),
            Family::Product => TruthValue(y.as_rational() / x.as_rational()),
        }
    }

    pub fn negate(&self, x: &TruthValue) -> TruthValue {
        self.implies(x, &TruthValue::zero())
    }

    /// Operation tables over carrier indices, for finite chains.
    pub fn chain_tables(&self) -> Result<ChainTables> {
        let values = self.enumerate_carrier()?;
        let n = values.len();
        let index = |v: &TruthValue| values.binary_search(v).expect("carrier is closed") as u16;
        let mut strong = Vec::with_capacity(n * n);
        let mut implies = Vec::with_capacity(n * n);
        for x in &values {
            for y in &values {
                strong.push(index(&self.strong(x, y)));
                implies.push(index(&self.implies(x, y)));
            }
        }
        Ok(ChainTables { values, strong, implies })
    }
}

/// Index-level operation tables of a finite chain. Index order is value order,
/// so meet and join are `min` and `max` on indices.
#[derive(Clone, Debug)]
pub struct ChainTables {
    pub values: Vec<TruthValue>,
    strong: Vec<u16>,
    implies: Vec<u16>,
}

impl ChainTables {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index_of(&self, v: &TruthValue) -> Option<u16> {
        self.values.binary_search(v).ok().map(|i| i as u16)
    }

    pub fn op(&self, conn: Connective, x: u16, y: u16) -> u16 {
        let n = self.values.len();
        match conn {
            Connective::Meet => x.min(y),
            Connective::Join => x.max(y),
            Connective::Strong => self.strong[x as usize * n + y as usize],
            Connective::Implies => self.implies[x as usize * n + y as usize],
        }
    }
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.family, self.carrier) {
            (Family::Classical, _) => f.write_str("classical"),
            (Family::Lukasiewicz, Carrier::FullInterval) => f.write_str("lukasiewicz"),
            (Family::Godel, Carrier::FullInterval) => f.write_str("godel"),
            (Family::Product, Carrier::FullInterval) => f.write_str("product"),
            (Family::Lukasiewicz, Carrier::FiniteChain(n)) => write!(f, "l{n}"),
            (Family::Godel, Carrier::FiniteChain(n)) => write!(f, "g{n}"),
            (Family::Product, Carrier::FiniteChain(n)) => write!(f, "p{n}"),
        }
    }
}

impl FromStr for Algebra {
    type Err = Error;

    /// `lukasiewicz | godel | product | classical | l<n> | g<n>`
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lukasiewicz" => return Ok(Algebra::lukasiewicz()),
            "godel" => return Ok(Algebra::godel()),
            "product" => return Ok(Algebra::product()),
            "classical" => return Ok(Algebra::classical()),
            _ => {}
        }
        let bad = || Error::Invalid(format!("unknown algebra `{s}`"));
        let (family, digits) = match s.split_at_checked(1) {
            Some(("l", d)) => (Family::Lukasiewicz, d),
            Some(("g", d)) => (Family::Godel, d),
            Some(("p", d)) => (Family::Product, d),
            _ => return Err(bad()),
        };
        let n: usize = digits.parse().map_err(|_| bad())?;
        Algebra::new(family, Carrier::FiniteChain(n))
    }
}

/// Exact minimum of a nonempty finite family.
pub fn inf_fin(vals: &[TruthValue]) -> Result<TruthValue> {
    vals.iter().min().cloned().ok_or(Error::EmptyInput("inf_fin"))
}

/// Exact maximum of a nonempty finite family.
pub fn sup_fin(vals: &[TruthValue]) -> Result<TruthValue> {
    vals.iter().max().cloned().ok_or(Error::EmptyInput("sup_fin"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn tv(s: &str) -> TruthValue {
        s.parse().unwrap()
    }

    fn families() -> Vec<Algebra> {
        let mut out = vec![Algebra::classical(), Algebra::product().with_chain(2)];
        for n in 2..=6 {
            out.push(Algebra::lukasiewicz_n(n).unwrap());
            out.push(Algebra::godel_n(n).unwrap());
        }
        out
    }

    impl Algebra {
        fn with_chain(self, n: usize) -> Algebra {
            Algebra::new(self.family, Carrier::FiniteChain(n)).unwrap()
        }
    }

    #[test]
    fn lukasiewicz_strong_half_half() {
        let l = Algebra::lukasiewicz();
        assert_eq!(l.apply(Connective::Strong, &[tv("1/2"), tv("1/2")]).unwrap(), tv("0"));
        assert_eq!(l.apply(Connective::Implies, &[tv("3/4"), tv("1/4")]).unwrap(), tv("1/2"));
    }

    #[test]
    fn godel_implication_drops_to_consequent() {
        let g = Algebra::godel();
        assert_eq!(g.apply(Connective::Implies, &[tv("7/10"), tv("3/10")]).unwrap(), tv("3/10"));
    }

    #[test]
    fn product_operations() {
        let p = Algebra::product();
        assert_eq!(p.apply(Connective::Strong, &[tv("1/2"), tv("2/3")]).unwrap(), tv("1/3"));
        assert_eq!(p.apply(Connective::Implies, &[tv("1/2"), tv("1/4")]).unwrap(), tv("1/2"));
    }

    #[test]
    fn residuum_identity() {
        for alg in [Algebra::lukasiewicz(), Algebra::godel(), Algebra::product()] {
            for x in ["0", "1/3", "1/2", "1"] {
                assert!(alg.apply(Connective::Implies, &[tv(x), tv(x)]).unwrap().is_one());
            }
        }
    }

    #[test]
    fn apply_errors() {
        let l3 = Algebra::lukasiewicz_n(3).unwrap();
        assert!(matches!(l3.apply(Connective::Meet, &[tv("1")]), Err(Error::Arity { expected: 2, found: 1, .. })));
        assert!(matches!(l3.apply(Connective::Meet, &[tv("1/3"), tv("1")]), Err(Error::OutsideCarrier(_))));
    }

    #[test]
    fn inf_sup() {
        assert_eq!(inf_fin(&[tv("3/10"), tv("7/10")]).unwrap(), tv("3/10"));
        assert_eq!(sup_fin(&[tv("0"), tv("1")]).unwrap(), tv("1"));
        assert_eq!(inf_fin(&[tv("2/5")]).unwrap(), tv("2/5"));
        assert_eq!(inf_fin(&[]), Err(Error::EmptyInput("inf_fin")));
        assert_eq!(sup_fin(&[]), Err(Error::EmptyInput("sup_fin")));
    }

    #[test]
    fn carriers() {
        let l3: Algebra = "l3".parse().unwrap();
        assert_eq!(l3.enumerate_carrier().unwrap(), vec![tv("0"), tv("1/2"), tv("1")]);
        let g4: Algebra = "g4".parse().unwrap();
        assert_eq!(g4.enumerate_carrier().unwrap(), vec![tv("0"), tv("1/3"), tv("2/3"), tv("1")]);
        assert_eq!(Algebra::classical().enumerate_carrier().unwrap(), vec![tv("0"), tv("1")]);
        assert!(matches!(Algebra::godel().enumerate_carrier(), Err(Error::InfiniteCarrier(_))));
    }

    #[test]
    fn tokens() {
        for tok in ["lukasiewicz", "godel", "product", "classical", "l3", "g4", "l7"] {
            let a: Algebra = tok.parse().unwrap();
            assert_eq!(a.to_string(), tok);
        }
        assert!("p3".parse::<Algebra>().is_err());
        assert!("l1".parse::<Algebra>().is_err());
        assert!("x3".parse::<Algebra>().is_err());
    }

    #[test]
    fn chains_are_closed() {
        for alg in families() {
            let carrier = alg.enumerate_carrier().unwrap();
            for x in &carrier {
                for y in &carrier {
                    for c in Connective::ALL {
                        let v = alg.apply(c, &[x.clone(), y.clone()]).unwrap();
                        assert!(alg.contains(&v), "{alg}: {x} {} {y} = {v}", c.symbol());
                    }
                }
            }
        }
    }

    #[test]
    fn lukasiewicz_excluded_middle_conjunction_on_chains() {
        for n in 2..=6 {
            let alg = Algebra::lukasiewicz_n(n).unwrap();
            for x in alg.enumerate_carrier().unwrap() {
                let nx = TruthValue::new(Rational::one() - x.as_rational()).unwrap();
                assert!(alg.strong(&x, &nx).is_zero());
            }
        }
    }

    #[test]
    fn chain_tables_agree_with_apply() {
        for alg in families() {
            let t = alg.chain_tables().unwrap();
            for (i, x) in t.values.iter().enumerate() {
                for (j, y) in t.values.iter().enumerate() {
                    for c in Connective::ALL {
                        let k = t.op(c, i as u16, j as u16);
                        assert_eq!(t.values[k as usize], alg.op(c, x, y));
                    }
                }
            }
        }
    }

    #[test]
    fn decimal_and_fraction_parsing() {
        assert_eq!(tv("0.8"), tv("4/5"));
        assert_eq!(tv(".5"), tv("1/2"));
        assert_eq!(tv("2/4").to_string(), "1/2");
        assert!("3/2".parse::<TruthValue>().is_err());
        assert!("1/0".parse::<TruthValue>().is_err());
    }

    fn unit_rational() -> impl Strategy<Value = TruthValue> {
        (1i64..=60).prop_flat_map(|d| (0..=d).prop_map(move |n| TruthValue::ratio(n, d).unwrap()))
    }

    proptest! {
        #[test]
        fn lukasiewicz_strong_with_complement_is_zero(x in unit_rational()) {
            let nx = TruthValue::new(Rational::one() - x.as_rational()).unwrap();
            prop_assert!(Algebra::lukasiewicz().strong(&x, &nx).is_zero());
        }

        #[test]
        fn godel_implication_is_one_iff_leq(x in unit_rational(), y in unit_rational()) {
            prop_assert_eq!(Algebra::godel().implies(&x, &y).is_one(), x <= y);
        }

        #[test]
        fn lattice_laws(x in unit_rational(), y in unit_rational(), z in unit_rational()) {
            let a = Algebra::lukasiewicz();
            let m = |p: &TruthValue, q: &TruthValue| a.op(Connective::Meet, p, q);
            let j = |p: &TruthValue, q: &TruthValue| a.op(Connective::Join, p, q);
            prop_assert_eq!(m(&x, &x), x.clone());
            prop_assert_eq!(j(&x, &x), x.clone());
            prop_assert_eq!(m(&x, &y), m(&y, &x));
            prop_assert_eq!(j(&x, &y), j(&y, &x));
            prop_assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
            prop_assert_eq!(j(&j(&x, &y), &z), j(&x, &j(&y, &z)));
        }
    }
}
