use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::perm_group::PermGroup;
use super::subgroup::Subgroup;
use crate::algebra::{format_decimal, format_rational, parse_rational};
use crate::error::{Error, Result};

/// Inner products against loaded tables are accepted within this distance of an integer.
pub fn tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(1_000_000))
}

/// One class-function value: exact, or a complex number given by decimal strings.
///
/// Decimal values are parsed exactly, so arithmetic on them is exact too;
/// only the comparison with loaded tables uses the tolerance.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CharValue {
    Exact(BigRational),
    Decimal { re: BigRational, im: BigRational },
}

impl CharValue {
    pub fn int(v: i64) -> CharValue {
        CharValue::Exact(BigRational::from_integer(v.into()))
    }

    pub fn zero() -> CharValue {
        CharValue::int(0)
    }

    pub fn parts(&self) -> (BigRational, BigRational) {
        match self {
            CharValue::Exact(q) => (q.clone(), BigRational::zero()),
            CharValue::Decimal { re, im } => (re.clone(), im.clone()),
        }
    }

    fn from_parts(re: BigRational, im: BigRational, exact: bool) -> CharValue {
        if exact {
            debug_assert!(im.is_zero());
            CharValue::Exact(re)
        } else {
            CharValue::Decimal { re, im }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CharValue::Exact(_))
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            CharValue::Exact(q) => Some(q),
            CharValue::Decimal { .. } => None,
        }
    }

    pub fn add(&self, other: &CharValue) -> CharValue {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        CharValue::from_parts(a + c, b + d, self.is_exact() && other.is_exact())
    }

    pub fn sub(&self, other: &CharValue) -> CharValue {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> CharValue {
        let (a, b) = self.parts();
        CharValue::from_parts(-a, -b, self.is_exact())
    }

    pub fn mul(&self, other: &CharValue) -> CharValue {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        CharValue::from_parts(&a * &c - &b * &d, a * d + b * c, self.is_exact() && other.is_exact())
    }

    pub fn scale(&self, q: &BigRational) -> CharValue {
        let (a, b) = self.parts();
        CharValue::from_parts(a * q, b * q, self.is_exact())
    }

    pub fn conj(&self) -> CharValue {
        let (a, b) = self.parts();
        CharValue::from_parts(a, -b, self.is_exact())
    }

    /// Both parts within `tol` of the other value's parts.
    pub fn approx_eq(&self, other: &CharValue, tol: &BigRational) -> bool {
        let (a, b) = self.parts();
        let (c, d) = other.parts();
        (a - c).abs() <= *tol && (b - d).abs() <= *tol
    }

    pub fn to_json(&self) -> Value {
        match self {
            CharValue::Exact(q) => Value::String(format_rational(q)),
            CharValue::Decimal { re, im } => json!({
                "re": format_decimal(re, 30),
                "im": format_decimal(im, 30),
            }),
        }
    }

    /// Accepts `"p/q"`, a bare number, or `{"re": "...", "im": "..."}`.
    pub fn from_json(v: &Value) -> Result<CharValue> {
        match v {
            Value::String(s) => Ok(CharValue::Exact(parse_rational(s)?)),
            Value::Number(n) => Ok(CharValue::Exact(parse_rational(&n.to_string())?)),
            Value::Object(map) => {
                let part = |key: &str| -> Result<BigRational> {
                    match map.get(key) {
                        Some(Value::String(s)) => parse_rational(s),
                        Some(Value::Number(n)) => parse_rational(&n.to_string()),
                        None => Ok(BigRational::zero()),
                        _ => Err(Error::Schema(format!("bad {key} part in {v}"))),
                    }
                };
                let re = part("re")?;
                let im = part("im")?;
                Ok(CharValue::Decimal { re, im })
            }
            _ => Err(Error::Schema(format!("bad character value {v}"))),
        }
    }
}

impl fmt::Display for CharValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharValue::Exact(q) => f.write_str(&format_rational(q)),
            CharValue::Decimal { re, im } => {
                let im = format_decimal(im, 6);
                let sep = if im.starts_with('-') { "" } else { "+" };
                write!(f, "{}{sep}{im}i", format_decimal(re, 6))
            }
        }
    }
}

/// A function on the conjugacy classes of a group, one value per class in the
/// group's class order.
#[derive(Clone)]
pub struct ClassFunction {
    group: Arc<PermGroup>,
    values: Vec<CharValue>,
}

impl fmt::Debug for ClassFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let vals: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "ClassFunction[{}]", vals.join(", "))
    }
}

impl PartialEq for ClassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.group.same_as(&other.group) && self.values == other.values
    }
}

impl ClassFunction {
    pub fn new(group: &Arc<PermGroup>, values: Vec<CharValue>) -> Result<ClassFunction> {
        if values.len() != group.num_classes() {
            return Err(Error::DimensionMismatch(format!(
                "{} values for {} classes",
                values.len(),
                group.num_classes()
            )));
        }
        Ok(ClassFunction {
            group: group.clone(),
            values,
        })
    }

    pub fn from_rationals(group: &Arc<PermGroup>, values: Vec<BigRational>) -> Result<ClassFunction> {
        ClassFunction::new(group, values.into_iter().map(CharValue::Exact).collect())
    }

    pub fn from_ints(group: &Arc<PermGroup>, values: &[i64]) -> Result<ClassFunction> {
        ClassFunction::new(group, values.iter().map(|&v| CharValue::int(v)).collect())
    }

    /// Evaluates `f` on each class representative.
    pub fn from_element_fn(group: &Arc<PermGroup>, mut f: impl FnMut(usize) -> BigRational) -> ClassFunction {
        let values = group
            .class_representatives()
            .into_iter()
            .map(|g| CharValue::Exact(f(g)))
            .collect();
        ClassFunction {
            group: group.clone(),
            values,
        }
    }

    pub fn zero(group: &Arc<PermGroup>) -> ClassFunction {
        ClassFunction {
            group: group.clone(),
            values: vec![CharValue::zero(); group.num_classes()],
        }
    }

    pub fn trivial(group: &Arc<PermGroup>) -> ClassFunction {
        ClassFunction {
            group: group.clone(),
            values: vec![CharValue::int(1); group.num_classes()],
        }
    }

    pub fn regular(group: &Arc<PermGroup>) -> ClassFunction {
        let n = group.order() as i64;
        ClassFunction::from_element_fn(group, |g| {
            BigRational::from_integer(if g == PermGroup::IDENTITY { n } else { 0 }.into())
        })
    }

    pub fn group(&self) -> &Arc<PermGroup> {
        &self.group
    }

    pub fn values(&self) -> &[CharValue] {
        &self.values
    }

    pub fn value(&self, class: usize) -> &CharValue {
        &self.values[class]
    }

    pub fn value_at(&self, element: usize) -> &CharValue {
        &self.values[self.group.class_of(element)]
    }

    /// Value at the identity class.
    pub fn degree(&self) -> &CharValue {
        self.value_at(PermGroup::IDENTITY)
    }

    pub fn is_exact(&self) -> bool {
        self.values.iter().all(CharValue::is_exact)
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|v| {
            let (a, b) = v.parts();
            a.is_zero() && b.is_zero()
        })
    }

    pub fn rationals(&self) -> Option<Vec<BigRational>> {
        self.values.iter().map(|v| v.as_rational().cloned()).collect()
    }

    fn check_group(&self, other: &ClassFunction) -> Result<()> {
        if self.group.same_as(&other.group) {
            Ok(())
        } else {
            Err(Error::GroupMismatch("class functions on different groups".into()))
        }
    }

    fn zip(&self, other: &ClassFunction, f: impl Fn(&CharValue, &CharValue) -> CharValue) -> Result<ClassFunction> {
        self.check_group(other)?;
        Ok(ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().zip(&other.values).map(|(a, b)| f(a, b)).collect(),
        })
    }

    pub fn add(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.zip(other, CharValue::add)
    }

    pub fn sub(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.zip(other, CharValue::sub)
    }

    /// Pointwise product, the tensor product of characters.
    pub fn mul(&self, other: &ClassFunction) -> Result<ClassFunction> {
        self.zip(other, CharValue::mul)
    }

    pub fn scale(&self, q: &BigRational) -> ClassFunction {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(|v| v.scale(q)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> ClassFunction {
        self.scale(&BigRational::from_integer(k.into()))
    }

    pub fn neg(&self) -> ClassFunction {
        self.scale_int(-1)
    }

    pub fn conj(&self) -> ClassFunction {
        ClassFunction {
            group: self.group.clone(),
            values: self.values.iter().map(CharValue::conj).collect(),
        }
    }

    /// `⟨self, other⟩ = (1/|G|) Σ_g self(g) · conj(other(g))` as exact real and imaginary parts.
    pub fn inner(&self, other: &ClassFunction) -> Result<(BigRational, BigRational)> {
        self.check_group(other)?;
        let mut acc = CharValue::zero();
        for (k, size) in self.group.class_sizes().into_iter().enumerate() {
            let term = self.values[k].mul(&other.values[k].conj());
            acc = acc.add(&term.scale(&BigRational::from_integer(size.into())));
        }
        let (re, im) = acc.parts();
        let n = BigRational::from_integer(self.group.order().into());
        Ok((re / &n, im / n))
    }

    pub fn approx_eq(&self, other: &ClassFunction, tol: &BigRational) -> bool {
        self.group.same_as(&other.group)
            && self.values.iter().zip(&other.values).all(|(a, b)| a.approx_eq(b, tol))
    }

    /// Restriction to `h`, as a class function on `h.as_group()`.
    pub fn restrict(&self, h: &Subgroup) -> Result<ClassFunction> {
        if !h.parent().same_as(&self.group) {
            return Err(Error::GroupMismatch("restriction to a subgroup of another group".into()));
        }
        let local = h.as_group();
        let emb = h.embedding();
        let values = local
            .class_representatives()
            .into_iter()
            .map(|x| self.value_at(emb[x]).clone())
            .collect();
        ClassFunction::new(local, values)
    }

    /// Inflation along a class map: `chi` lives on `source`, and `f` sends
    /// elements of `self.group` to elements of `source`.
    pub fn pull_back(group: &Arc<PermGroup>, chi: &ClassFunction, f: impl Fn(usize) -> usize) -> ClassFunction {
        let values = group
            .class_representatives()
            .into_iter()
            .map(|g| chi.value_at(f(g)).clone())
            .collect();
        ClassFunction {
            group: group.clone(),
            values,
        }
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.values.iter().map(CharValue::to_json).collect())
    }
}

/// Frobenius induction from `h` to its parent group.
///
/// Uses `χ↑(g) = (|G| / (|H|·|C|)) Σ_{x ∈ H ∩ C} χ(x)` for the class `C` of `g`,
/// which is the defining sum `(1/|H|) Σ_{y ∈ G, ygy⁻¹ ∈ H} χ(ygy⁻¹)` grouped by fibres.
pub fn induce_class_function(h: &Subgroup, chi: &ClassFunction) -> Result<ClassFunction> {
    let local = h.as_group();
    if !chi.group().same_as(local) {
        return Err(Error::GroupMismatch("character is not on the subgroup".into()));
    }
    let g = h.parent();
    let mut sums = vec![CharValue::zero(); g.num_classes()];
    for (x, &gx) in h.embedding().iter().enumerate() {
        let c = g.class_of(gx);
        sums[c] = sums[c].add(chi.value_at(x));
    }
    let sizes = g.class_sizes();
    let values = sums
        .into_iter()
        .enumerate()
        .map(|(c, s)| {
            let factor = BigRational::new(g.order().into(), (h.order() * sizes[c]).into());
            s.scale(&factor)
        })
        .collect();
    ClassFunction::new(g, values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::perm::Perm;

    fn s3() -> Arc<PermGroup> {
        PermGroup::from_cycle_strings(3, &["(0 1)", "(0 1 2)"]).unwrap()
    }

    fn class_of_perm(g: &PermGroup, s: &str) -> usize {
        g.class_of(g.index_of(&Perm::parse_cycles(s, g.degree()).unwrap()).unwrap())
    }

    /// The defining sum over all of G, evaluated literally.
    fn frobenius_oracle(h: &Subgroup, chi: &ClassFunction) -> Vec<BigRational> {
        let g = h.parent();
        g.class_representatives()
            .into_iter()
            .map(|x| {
                let mut acc = BigRational::zero();
                for y in 0..g.order() {
                    let c = g.conjugate(y, x);
                    if let Some(local) = h.local_index(c) {
                        acc += chi.value_at(local).as_rational().unwrap();
                    }
                }
                acc / BigRational::from_integer(h.order().into())
            })
            .collect()
    }

    #[test]
    fn induction_examples() {
        let g = s3();
        let a3 = Subgroup::from_perms(&g, &[Perm::parse_cycles("(0 1 2)", 3).unwrap()]).unwrap();
        let ind = induce_class_function(&a3, &ClassFunction::trivial(a3.as_group())).unwrap();
        let expect = |s: &str| ind.value(class_of_perm(&g, s)).clone();
        assert_eq!(expect("()"), CharValue::int(2));
        assert_eq!(expect("(0 1)"), CharValue::int(0));
        assert_eq!(expect("(0 1 2)"), CharValue::int(2));
        assert_eq!(ind.rationals().unwrap(), frobenius_oracle(&a3, &ClassFunction::trivial(a3.as_group())));

        let whole = Subgroup::whole(&g);
        let triv = ClassFunction::trivial(whole.as_group());
        assert_eq!(induce_class_function(&whole, &triv).unwrap(), ClassFunction::trivial(&g));

        let one = Subgroup::trivial(&g);
        let reg = induce_class_function(&one, &ClassFunction::trivial(one.as_group())).unwrap();
        assert_eq!(reg, ClassFunction::regular(&g));
    }

    #[test]
    fn induction_is_transitive() {
        let g = PermGroup::from_cycle_strings(4, &["(0 1)", "(0 1 2 3)"]).unwrap();
        let k = Subgroup::from_perms(&g, &[Perm::parse_cycles("(0 1)", 4).unwrap(), Perm::parse_cycles("(2 3)", 4).unwrap()]).unwrap();
        let h = Subgroup::from_perms(&g, &[Perm::parse_cycles("(0 1)", 4).unwrap()]).unwrap();
        // h inside k, as subgroups of the local copy of k
        let kg = k.as_group().clone();
        let h_in_k = Subgroup::from_perms(&kg, &[Perm::parse_cycles("(0 1)", 4).unwrap()]).unwrap();
        // sign character of h
        let sign = ClassFunction::from_element_fn(h.as_group(), |x| {
            BigRational::from_integer(if x == 0 { 1 } else { -1 }.into())
        });
        let sign_local = ClassFunction::from_element_fn(h_in_k.as_group(), |x| {
            BigRational::from_integer(if x == 0 { 1 } else { -1 }.into())
        });
        let direct = induce_class_function(&h, &sign).unwrap();
        let step = induce_class_function(&h_in_k, &sign_local).unwrap();
        // step lives on kg, which is k.as_group(); re-home and induce again
        let step = ClassFunction::new(k.as_group(), step.values().to_vec()).unwrap();
        let twice = induce_class_function(&k, &step).unwrap();
        assert_eq!(direct, twice);
        assert_eq!(direct.rationals().unwrap(), frobenius_oracle(&h, &sign));
    }

    #[test]
    fn inner_products() {
        let g = s3();
        let reg = ClassFunction::regular(&g);
        let triv = ClassFunction::trivial(&g);
        assert_eq!(reg.inner(&triv).unwrap().0, BigRational::one());
        assert_eq!(reg.inner(&reg).unwrap().0, BigRational::from_integer(6.into()));
        let z = CharValue::Decimal {
            re: parse_rational("-0.5").unwrap(),
            im: parse_rational("1.3228756555322952952508078768196302128").unwrap(),
        };
        let sq = z.mul(&z.conj());
        assert!(sq.approx_eq(&CharValue::int(2), &tolerance()));
    }
}
