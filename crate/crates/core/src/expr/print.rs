//! Canonical text form.

use std::fmt;

use crate::scalar::Scalar;
use crate::state::{Monomial, State};
use crate::algebra::FreeAlgebraSpec;

fn factor_text(alg: &FreeAlgebraSpec, gen: usize, deriv: u32) -> String {
    let name = &alg.generator(gen).name;
    match deriv {
        0 => name.clone(),
        1 => format!("D {name}"),
        k => format!("D^{k} {name}"),
    }
}

pub(crate) fn monomial_text(alg: &FreeAlgebraSpec, m: &Monomial) -> String {
    let parts: Vec<String> = m.expanded().map(|(g, k)| factor_text(alg, g, k)).collect();
    match parts.len() {
        0 => "1".to_string(),
        1 => parts.into_iter().next().unwrap(),
        _ => format!(":{}:", parts.join(" ")),
    }
}

/// Coefficient text as it appears in front of `*`.
pub fn scalar_coefficient(c: &Scalar) -> String {
    if c.is_compound() {
        format!("({})", c.to_literal())
    } else {
        c.to_literal()
    }
}

/// Writes `Σ c·m` as `c*m + c*m - …`; a unit coefficient is omitted except
/// for a leading `-1`, and vacuum terms print as bare scalars.
pub(crate) fn write_sum<'a, I>(terms: I, mut body: impl FnMut(&'a Monomial) -> (bool, String)) -> String
where
    I: Iterator<Item = (&'a Monomial, &'a Scalar)>,
{
    let mut out = String::new();
    for (i, (m, c)) in terms.enumerate() {
        let (is_unit_basis, text) = body(m);
        let (neg, mag) = if !c.is_compound() && c.is_negative() { (true, -c) } else { (false, c.clone()) };
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        if is_unit_basis {
            out.push_str(&scalar_coefficient(&mag));
        } else if mag.is_one() && !(i == 0 && neg) {
            out.push_str(&text);
        } else {
            out.push_str(&scalar_coefficient(&mag));
            out.push('*');
            out.push_str(&text);
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

pub fn print_state(s: &State) -> String {
    let alg = s.algebra().clone();
    write_sum(s.terms().iter(), |m| (m.is_vacuum(), monomial_text(&alg, m)))
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&print_state(self))
    }
}
