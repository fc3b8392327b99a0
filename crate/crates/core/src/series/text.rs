//! Text forms of a series.
//!
//! Canonical form: terms in ascending graded-lex order joined by ` + `,
//! each written `(a/b+c/d*i)` followed by `*var` or `*var^e` factors, and
//! a closing `O(T+1)` marker for the unknown tail. The zero series prints
//! as `0 + O(T+1)`. This form is stable and used for golden files.

use alloc::string::String;
use core::fmt;

use num_traits::{One, Zero};

use super::{Monomial, TruncatedSeries};
use crate::coeff::GaussianRational;

fn monomial_text(s: &TruncatedSeries, m: &Monomial) -> String {
    s.context().monomial_name(m)
}

pub(super) fn canonical(s: &TruncatedSeries) -> String {
    let mut out = String::new();
    for (m, c) in s.terms() {
        if !out.is_empty() {
            out.push_str(" + ");
        }
        out.push('(');
        out.push_str(&c.to_canonical_string());
        out.push(')');
        let mono = monomial_text(s, m);
        if !mono.is_empty() {
            out.push('*');
            out.push_str(&mono);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out.push_str(&alloc::format!(" + O({})", s.order() as u64 + 1));
    out
}

fn coeff_prefix(c: &GaussianRational) -> (bool, String) {
    let negative_real = c.im.is_zero() && c.re < num_rational::BigRational::zero();
    let negative_imag = c.re.is_zero() && c.im < num_rational::BigRational::zero();
    let negative = negative_real || negative_imag;
    let mag = if negative { -c.clone() } else { c.clone() };
    let text = if mag.is_one() {
        String::new()
    } else if mag.re.is_zero() || mag.im.is_zero() {
        alloc::format!("{}", mag)
    } else {
        alloc::format!("({})", mag)
    };
    (negative, text)
}

/// Human-readable form, e.g. `t3 - 2i*t1*t2 + 2i*t2*t3`. No order marker.
impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms().enumerate() {
            let (negative, coeff) = coeff_prefix(c);
            let mono = monomial_text(self, m);
            let body = match (coeff.is_empty(), mono.is_empty()) {
                (true, true) => String::from("1"),
                (true, false) => mono,
                (false, true) => coeff,
                (false, false) => alloc::format!("{}*{}", coeff, mono),
            };
            match (k, negative) {
                (0, false) => write!(f, "{}", body)?,
                (0, true) => write!(f, "-{}", body)?,
                (_, false) => write!(f, " + {}", body)?,
                (_, true) => write!(f, " - {}", body)?,
            }
        }
        Ok(())
    }
}
