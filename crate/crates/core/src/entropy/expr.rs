//! Linear combinations of joint entropies over a small named ground set.
//!
//! Subsets are bitmasks over the ground-set order, so an expression is a
//! sparse vector indexed by nonempty masks. Conditional entropies and mutual
//! informations are expanded into this basis on construction; everything
//! downstream (the LP, the sampler, the certificate checker) works on the
//! flat coefficient view.

use crate::rational::Rat;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use std::fmt;
use thiserror::Error;

/// Bitmask representation caps the ground set; 2^10 - 1 coordinates is
/// already more than the LP ever needs here.
pub const MAX_VARIABLES: usize = 10;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExprError {
    #[error("ground set must hold 1..={MAX_VARIABLES} variables, got {0}")]
    GroundSize(usize),
    #[error("duplicate variable {0}")]
    Duplicate(String),
    #[error("unknown variable {0}")]
    Unknown(String),
    #[error("empty variable list")]
    EmptyList,
    #[error("expressions use different ground sets")]
    GroundMismatch,
}

/// Ordered list of distinct variable names; bit i of a mask refers to the
/// i-th name.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroundSet {
    names: Vec<String>,
}

impl GroundSet {
    pub fn new<S: Into<String>>(names: Vec<S>) -> Result<Self, ExprError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() || names.len() > MAX_VARIABLES {
            return Err(ExprError::GroundSize(names.len()));
        }
        for (i, n) in names.iter().enumerate() {
            if names[..i].contains(n) {
                return Err(ExprError::Duplicate(n.clone()));
            }
        }
        Ok(Self { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// All variables present.
    pub fn full_mask(&self) -> u16 {
        (1u16 << self.len()) - 1
    }

    /// Mask of the listed variables; duplicates within the list collapse.
    pub fn mask_of<I>(&self, vars: I) -> Result<u16, ExprError>
    where
        I: IntoIterator,
        I::Item: AsRef<str>,
    {
        let mut mask = 0u16;
        let mut any = false;
        for v in vars {
            let name = v.as_ref();
            let idx = self
                .index(name)
                .ok_or_else(|| ExprError::Unknown(name.to_string()))?;
            mask |= 1 << idx;
            any = true;
        }
        if !any {
            return Err(ExprError::EmptyList);
        }
        Ok(mask)
    }

    /// Names selected by a mask, in ground-set order.
    pub fn subset_names(&self, mask: u16) -> Vec<&str> {
        (0..self.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| self.names[i].as_str())
            .collect()
    }

    pub fn label(&self, mask: u16) -> String {
        self.subset_names(mask).join(",")
    }
}

/// Sparse rational combination of H(subset) terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EntropyExpression {
    ground: GroundSet,
    terms: BTreeMap<u16, Rat>,
}

impl EntropyExpression {
    pub fn zero(ground: &GroundSet) -> Self {
        Self {
            ground: ground.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// H(vars).
    pub fn entropy(ground: &GroundSet, vars: &[&str]) -> Result<Self, ExprError> {
        let mut e = Self::zero(ground);
        let mask = ground.mask_of(vars)?;
        e.add_term(mask, &Rat::one());
        Ok(e)
    }

    /// H(a | b) = H(a,b) - H(b). The condition may be empty.
    pub fn conditional(ground: &GroundSet, a: &[&str], b: &[&str]) -> Result<Self, ExprError> {
        let mut e = Self::zero(ground);
        let amask = ground.mask_of(a)?;
        let bmask = if b.is_empty() { 0 } else { ground.mask_of(b)? };
        e.add_term(amask | bmask, &Rat::one());
        if bmask != 0 {
            e.add_term(bmask, &(-Rat::one()));
        }
        Ok(e)
    }

    /// I(a ; b | c) = H(a,c) + H(b,c) - H(a,b,c) - H(c). The condition may
    /// be empty.
    pub fn mutual(
        ground: &GroundSet,
        a: &[&str],
        b: &[&str],
        c: &[&str],
    ) -> Result<Self, ExprError> {
        let mut e = Self::zero(ground);
        let amask = ground.mask_of(a)?;
        let bmask = ground.mask_of(b)?;
        let cmask = if c.is_empty() { 0 } else { ground.mask_of(c)? };
        e.add_term(amask | cmask, &Rat::one());
        e.add_term(bmask | cmask, &Rat::one());
        e.add_term(amask | bmask | cmask, &(-Rat::one()));
        if cmask != 0 {
            e.add_term(cmask, &(-Rat::one()));
        }
        Ok(e)
    }

    pub fn ground(&self) -> &GroundSet {
        &self.ground
    }

    pub fn terms(&self) -> &BTreeMap<u16, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds coeff * H(mask), dropping the coordinate if it cancels.
    pub fn add_term(&mut self, mask: u16, coeff: &Rat) {
        assert!(mask != 0 && mask <= self.ground.full_mask(), "bad mask");
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(mask).or_insert_with(Rat::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&mask);
        }
    }

    /// self += scale * other. Ground sets must match.
    pub fn add_scaled(&mut self, other: &Self, scale: &Rat) -> Result<(), ExprError> {
        if self.ground != other.ground {
            return Err(ExprError::GroundMismatch);
        }
        for (&mask, coeff) in &other.terms {
            self.add_term(mask, &(coeff * scale));
        }
        Ok(())
    }

    pub fn scaled(&self, scale: &Rat) -> Self {
        let mut out = Self::zero(&self.ground);
        for (&mask, coeff) in &self.terms {
            out.add_term(mask, &(coeff * scale));
        }
        out
    }

    pub fn negated(&self) -> Self {
        self.scaled(&(-Rat::one()))
    }

    /// Evaluates against any set function f(mask); f need not be entropy.
    pub fn eval(&self, f: impl Fn(u16) -> Rat) -> Rat {
        self.terms
            .iter()
            .map(|(&mask, coeff)| coeff * f(mask))
            .sum()
    }

    /// Dense coefficient vector indexed by mask - 1, length 2^n - 1.
    pub fn to_vector(&self) -> Vec<Rat> {
        let mut v = vec![Rat::zero(); (1usize << self.ground.len()) - 1];
        for (&mask, coeff) in &self.terms {
            v[mask as usize - 1] = coeff.clone();
        }
        v
    }

    pub fn from_vector(ground: &GroundSet, v: &[Rat]) -> Self {
        assert_eq!(v.len(), (1usize << ground.len()) - 1, "vector length");
        let mut e = Self::zero(ground);
        for (i, coeff) in v.iter().enumerate() {
            e.add_term((i + 1) as u16, coeff);
        }
        e
    }
}

fn magnitude(coeff: &Rat, label: &str) -> String {
    let mag = if coeff < &Rat::zero() {
        -coeff.clone()
    } else {
        coeff.clone()
    };
    if mag.is_one() {
        format!("H({label})")
    } else {
        format!("{mag}*H({label})")
    }
}

impl fmt::Display for EntropyExpression {
    /// Canonical joint-entropy form, terms ascending by mask. Reparsing the
    /// output against the same ground set reproduces the coefficients.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0*H({})", self.ground.names()[0]);
        }
        for (i, (&mask, coeff)) in self.terms.iter().enumerate() {
            let mag = magnitude(coeff, &self.ground.label(mask));
            if i == 0 {
                let sign = if coeff < &Rat::zero() { "-" } else { "" };
                write!(f, "{sign}{mag}")?;
            } else if coeff < &Rat::zero() {
                write!(f, " - {mag}")?;
            } else {
                write!(f, " + {mag}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, rat};

    fn xyz() -> GroundSet {
        GroundSet::new(vec!["X", "Y", "Z"]).unwrap()
    }

    #[test]
    fn ground_set_rejects_bad_inputs() {
        assert!(matches!(
            GroundSet::new(Vec::<String>::new()),
            Err(ExprError::GroundSize(0))
        ));
        assert!(matches!(
            GroundSet::new(vec!["a"; 11]),
            Err(ExprError::Duplicate(_)) | Err(ExprError::GroundSize(11))
        ));
        assert!(matches!(
            GroundSet::new(vec!["X", "X"]),
            Err(ExprError::Duplicate(_))
        ));
    }

    #[test]
    fn masks_and_labels() {
        let g = xyz();
        assert_eq!(g.mask_of(["X", "Z"]).unwrap(), 0b101);
        assert_eq!(g.mask_of(["Z", "X", "Z"]).unwrap(), 0b101);
        assert_eq!(g.label(0b101), "X,Z");
        assert!(matches!(g.mask_of(["W"]), Err(ExprError::Unknown(_))));
        assert_eq!(g.full_mask(), 0b111);
    }

    #[test]
    fn mutual_information_expansion() {
        let g = GroundSet::new(vec!["W1", "W4"]).unwrap();
        let e = EntropyExpression::mutual(&g, &["W1"], &["W4"], &[]).unwrap();
        // H(W1) + H(W4) - H(W1,W4)
        assert_eq!(e.terms().get(&0b01), Some(&rat(1)));
        assert_eq!(e.terms().get(&0b10), Some(&rat(1)));
        assert_eq!(e.terms().get(&0b11), Some(&rat(-1)));
    }

    #[test]
    fn conditional_expansion() {
        let g = GroundSet::new(vec!["Y1", "W1", "W4"]).unwrap();
        let e = EntropyExpression::conditional(&g, &["Y1"], &["W1", "W4"]).unwrap();
        assert_eq!(e.terms().get(&0b111), Some(&rat(1)));
        assert_eq!(e.terms().get(&0b110), Some(&rat(-1)));
        assert_eq!(e.terms().len(), 2);
    }

    #[test]
    fn terms_cancel_to_zero() {
        let g = xyz();
        let mut e = EntropyExpression::entropy(&g, &["X"]).unwrap();
        e.add_term(0b001, &rat(1));
        e.add_term(0b001, &rat(-2));
        assert!(e.is_zero());
        // self-information collapses: I(X;X) = H(X)
        let ii = EntropyExpression::mutual(&g, &["X"], &["X"], &[]).unwrap();
        assert_eq!(ii, EntropyExpression::entropy(&g, &["X"]).unwrap());
    }

    #[test]
    fn vector_round_trip() {
        let g = xyz();
        let mut e = EntropyExpression::zero(&g);
        e.add_term(0b011, &frac(3, 2));
        e.add_term(0b100, &rat(-1));
        let v = e.to_vector();
        assert_eq!(v.len(), 7);
        assert_eq!(v[0b011 - 1], frac(3, 2));
        assert_eq!(EntropyExpression::from_vector(&g, &v), e);
    }

    #[test]
    fn eval_applies_coefficients() {
        let g = xyz();
        let mut e = EntropyExpression::zero(&g);
        e.add_term(0b001, &rat(2));
        e.add_term(0b111, &rat(-1));
        // f counts the variables in the mask
        let v = e.eval(|m| rat(m.count_ones() as i64));
        assert_eq!(v, rat(-1));
    }

    #[test]
    fn display_is_canonical() {
        let g = xyz();
        let mut e = EntropyExpression::zero(&g);
        e.add_term(0b001, &rat(-1));
        e.add_term(0b011, &frac(3, 2));
        e.add_term(0b100, &rat(1));
        assert_eq!(e.to_string(), "-H(X) + 3/2*H(X,Y) + H(Z)");
        assert_eq!(
            EntropyExpression::zero(&g).to_string(),
            "0*H(X)"
        );
    }
}
