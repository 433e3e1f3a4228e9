//! Human-readable rendering of elements of `K` and of matrices over `K`.

use super::{Backend, BackendKind, KElement};
use crate::algebra::{Matrix2, Poly, RatFunc};

impl Backend {
    fn variable_name(&self) -> &'static str {
        match self.kind() {
            BackendKind::EllipticDelta1 => "x",
            _ => "t",
        }
    }

    fn format_poly(&self, p: &Poly) -> String {
        if p.is_zero() {
            return "0".into();
        }
        let var = self.variable_name();
        let mut terms = Vec::new();
        for (i, c) in p.coeffs().iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            terms.push(match (c.0, mono.is_empty()) {
                (_, true) => c.to_string(),
                (1, false) => mono,
                (_, false) => format!("{c}*{mono}"),
            });
        }
        terms.join(" + ")
    }

    fn format_ratfunc(&self, r: &RatFunc) -> String {
        let num = self.format_poly(r.num());
        if r.den().is_one() {
            return num;
        }
        let wrap = |s: String, p: &Poly| if p.coeffs().iter().filter(|c| !c.is_zero()).count() > 1 { format!("({s})") } else { s };
        format!("{}/{}", wrap(num, r.num()), wrap(self.format_poly(r.den()), r.den()))
    }

    /// `z` as an expression in `t` or in `x, y`; constants print as field
    /// labels.
    pub fn format_element(&self, z: &KElement) -> String {
        if z.b.is_zero() {
            return self.format_ratfunc(&z.a);
        }
        let b = if z.b == RatFunc::one() {
            "y".to_string()
        } else if let Some(c) = KElement::from_ratfunc(z.b.clone()).as_constant() {
            format!("{c}*y")
        } else {
            format!("({})*y", self.format_ratfunc(&z.b))
        };
        if z.a.is_zero() {
            b
        } else {
            format!("{} + {b}", self.format_ratfunc(&z.a))
        }
    }

    /// `[[a, b], [c, d]]` with formatted entries.
    pub fn format_matrix(&self, m: &Matrix2<KElement>) -> String {
        let e: Vec<String> = m.entries().iter().map(|x| self.format_element(x)).collect();
        format!("[[{}, {}], [{}, {}]]", e[0], e[1], e[2], e[3])
    }
}
