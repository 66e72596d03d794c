//! Sign normalization and the text/math/structured renderings.
//!
//! The text format is a stability surface: golden tests pin it byte for byte.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use super::SymbolicFormula;

/// `(1 ± x^(2^level n) z^(z_exp n))` with `z_exp < 2^(k-1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RenderedFactor {
    pub level: u32,
    pub negated: bool,
    pub z_exp: u64,
}

/// A term in `±` form; a zero multiplier means no `z` prefix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RenderedTerm {
    pub multiplier: u64,
    pub factors: Vec<RenderedFactor>,
}

/// Folds `z^(2^(k-1) n) = -1` into factor signs.
pub fn normalize_signs(f: &SymbolicFormula) -> Vec<RenderedTerm> {
    let half = 1u64 << (f.k() - 1);
    f.terms()
        .iter()
        .map(|term| RenderedTerm {
            multiplier: term.multiplier,
            factors: term
                .factors
                .iter()
                .map(|factor| {
                    let negated = factor.z_exp >= half;
                    RenderedFactor {
                        level: factor.level,
                        negated,
                        z_exp: if negated { factor.z_exp - half } else { factor.z_exp },
                    }
                })
                .collect(),
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// `2^-2 * x^((n+1)/2) * [ ... ]`
    Text,
    /// LaTeX.
    Math,
    /// JSON mirroring [`SymbolicFormula`].
    Structured,
}

/// `x^(mn)` / `z^(mn)` in either text or LaTeX style.
struct Power {
    var: char,
    mult: u64,
    math: bool,
}

impl fmt::Display for Power {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.math, self.mult) {
            (false, 1) => write!(f, "{}^(n)", self.var),
            (false, m) => write!(f, "{}^({m}n)", self.var),
            (true, 1) => write!(f, "{}^n", self.var),
            (true, m) => write!(f, "{}^{{{m}n}}", self.var),
        }
    }
}

fn write_term(out: &mut String, term: &RenderedTerm, math: bool) {
    let sep = if math { " " } else { "*" };
    let mut parts = Vec::with_capacity(term.factors.len() + 1);
    if term.multiplier != 0 {
        parts.push(Power { var: 'z', mult: term.multiplier, math }.to_string());
    }
    for factor in &term.factors {
        let sign = if factor.negated { '-' } else { '+' };
        let x = Power { var: 'x', mult: 1 << factor.level, math };
        let mut s = format!("(1 {sign} {x}");
        if factor.z_exp != 0 {
            let _ = write!(s, " {}", Power { var: 'z', mult: factor.z_exp, math });
        }
        s.push(')');
        parts.push(s);
    }
    if parts.is_empty() {
        out.push('1');
    } else {
        out.push_str(&parts.join(sep));
    }
}

/// Renders the sign-normalized formula.
pub fn render(f: &SymbolicFormula, format: Format) -> String {
    let k = f.k();
    match format {
        Format::Structured => serde_json::to_string_pretty(f).expect("formula serializes"),
        Format::Text | Format::Math if k == 1 => match format {
            Format::Text => "x^((n+1)/2)".to_string(),
            _ => "x^{(n+1)/2}".to_string(),
        },
        Format::Text | Format::Math => {
            let math = format == Format::Math;
            let mut out = if math {
                format!("2^{{-{}}} x^{{(n+1)/2}} \\left[ ", k - 1)
            } else {
                format!("2^-{} * x^((n+1)/2) * [ ", k - 1)
            };
            for (i, term) in normalize_signs(f).iter().enumerate() {
                if i > 0 {
                    out.push_str(" + ");
                }
                write_term(&mut out, term, math);
            }
            out.push_str(if math { " \\right]" } else { " ]" });
            out
        }
    }
}

impl fmt::Display for RenderedTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_term(&mut s, self, false);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::synthesize;

    #[test]
    fn normalize_examples() {
        let f3 = normalize_signs(&synthesize(3).unwrap());
        // t = 1, level 0: (1 + x^n z^6n) -> (1 - x^n z^2n)
        assert_eq!(f3[1].factors[1], RenderedFactor { level: 0, negated: true, z_exp: 2 });
        let f4 = normalize_signs(&synthesize(4).unwrap());
        // t = 1, level 2: (1 + x^4n z^8n) -> (1 - x^4n)
        assert_eq!(f4[1].factors[0], RenderedFactor { level: 2, negated: true, z_exp: 0 });
        assert!(f4[0].factors.iter().all(|f| !f.negated && f.z_exp == 0));
    }

    #[test]
    fn text_golden() {
        assert_eq!(render(&synthesize(1).unwrap(), Format::Text), "x^((n+1)/2)");
        assert_eq!(
            render(&synthesize(2).unwrap(), Format::Text),
            "2^-1 * x^((n+1)/2) * [ (1 + x^(n)) + z^(n)*(1 - x^(n)) ]"
        );
        assert_eq!(
            render(&synthesize(3).unwrap(), Format::Text),
            "2^-2 * x^((n+1)/2) * [ (1 + x^(2n))*(1 + x^(n)) \
             + z^(3n)*(1 - x^(2n))*(1 - x^(n) z^(2n)) \
             + z^(2n)*(1 + x^(2n))*(1 - x^(n)) \
             + z^(n)*(1 - x^(2n))*(1 + x^(n) z^(2n)) ]"
        );
    }

    #[test]
    fn math_golden() {
        assert_eq!(render(&synthesize(1).unwrap(), Format::Math), "x^{(n+1)/2}");
        assert_eq!(
            render(&synthesize(3).unwrap(), Format::Math),
            "2^{-2} x^{(n+1)/2} \\left[ (1 + x^{2n}) (1 + x^n) \
             + z^{3n} (1 - x^{2n}) (1 - x^n z^{2n}) \
             + z^{2n} (1 + x^{2n}) (1 - x^n) \
             + z^n (1 - x^{2n}) (1 + x^n z^{2n}) \\right]"
        );
    }

    #[test]
    fn structured_has_one_record_per_term() {
        let json = render(&synthesize(4).unwrap(), Format::Structured);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["k"], 4);
        assert_eq!(v["terms"].as_array().unwrap().len(), 8);
        assert_eq!(v["terms"][1]["e"], 7);
        assert_eq!(v["terms"][1]["factors"][0]["c"], 8);
    }
}
