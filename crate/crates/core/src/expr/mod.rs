//! Expression language over states, scalars, Weyl elements and polynomials
//! in `x1…xn, xp1…xpn`.
//!
//! State mode knows the generator names of the algebra (`beta1`, `gamma1`,
//! `b1`, `c1`, `j1`, …), `D^k`, `: … :`, `circ` and the builtins `L_S[i]`,
//! `W_S[i]`, `L_H`, `W_H`, `L_E`, `W_E`, `theta[i]`, `phi[i]`,
//! `omega[l1,…,ln]` and `Lalpha`. Weyl mode has `x_i`, `d_i`, `e_i`,
//! `omega[…]` and `tau[i]`, with juxtaposition as the Weyl product.

mod parse;
mod print;

pub use parse::{parse, Expr, Mode};
pub use print::{print_state, scalar_coefficient};

use crate::algebra::Algebra;
use crate::commutant::DiagonalAction;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::state::State;
use crate::transvect::PolyElement;
use crate::weyl::WeylElement;

/// Everything an expression may refer to.
#[derive(Clone, Debug)]
pub struct Context {
    alg: Algebra,
    action: Option<DiagonalAction>,
    alpha: Option<Vec<Scalar>>,
    /// Rank for Weyl and polynomial mode.
    n: usize,
}

impl Context {
    pub fn new(alg: &Algebra) -> Self {
        Context { alg: alg.clone(), action: None, alpha: None, n: alg.bg_pairs() }
    }

    /// Context over the βγ algebra of the action.
    pub fn for_action(act: &DiagonalAction) -> Self {
        Context { alg: act.algebra().clone(), action: Some(act.clone()), alpha: None, n: act.n() }
    }

    /// Weyl or polynomial context of rank `n` without an algebra of states.
    pub fn rank(n: usize) -> Self {
        Context::new(&crate::algebra::FreeAlgebraSpec::beta_gamma(n))
    }

    pub fn with_alpha(mut self, alpha: Vec<Scalar>) -> Result<Self> {
        if alpha.len() != self.alg.bg_pairs() {
            return Err(Error::InvalidInput(format!(
                "α has {} entries but the algebra has {} βγ pairs",
                alpha.len(),
                self.alg.bg_pairs()
            )));
        }
        self.alpha = Some(alpha);
        Ok(self)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn action(&self) -> Option<&DiagonalAction> {
        self.action.as_ref()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// α, defaulting to ½ on every pair.
    pub fn alpha_or_default(&self) -> Vec<Scalar> {
        self.alpha.clone().unwrap_or_else(|| vec![Scalar::from_ratio(1, 2); self.alg.bg_pairs()])
    }

    pub fn state(&self, text: &str) -> Result<State> {
        parse(text, self, Mode::State)?.to_state(self)
    }

    pub fn weyl(&self, text: &str) -> Result<WeylElement> {
        parse(text, self, Mode::Weyl)?.to_weyl(self)
    }

    pub fn poly(&self, text: &str) -> Result<PolyElement> {
        parse(text, self, Mode::Poly)?.to_poly(self)
    }
}

pub fn print_weyl(w: &WeylElement) -> String {
    w.to_text()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FreeAlgebraSpec;
    use crate::w3::build_ls_ws;

    fn bg1() -> Context {
        Context::for_action(&DiagonalAction::from_ints(&[&[1]]).unwrap())
    }

    #[test]
    fn theta_forms() {
        let ctx = bg1();
        let theta = ctx.state("theta[1]").unwrap();
        assert_eq!(ctx.state("-1 * : gamma1 beta1 :").unwrap(), theta);
        assert_eq!(ctx.state(": beta1 gamma1 :").unwrap(), -&theta);
        assert_eq!(theta.to_string(), "-1*:beta1 gamma1:");
        assert_eq!(ctx.state("theta[1] circ 1 theta[1]").unwrap().to_string(), "-1");
        assert_eq!(ctx.state("0").unwrap().to_string(), "0");
    }

    #[test]
    fn builtins_and_circ() {
        let ctx = bg1();
        let (l, w) = build_ls_ws(ctx.algebra(), 0).unwrap();
        assert_eq!(ctx.state("L_S[1] circ 1 L_S[1]").unwrap(), l.scale(&Scalar::from_int(2)));
        assert_eq!(ctx.state("W_S[1]").unwrap(), w);
        assert_eq!(ctx.state("omega[-2]").unwrap().to_string(), ":beta1 beta1:");
        // circ is left associative and binds weakest
        let a = ctx.state("beta1 circ 0 gamma1 + beta1 circ -1 gamma1").unwrap();
        assert_eq!(a, ctx.state("(beta1 circ 0 (gamma1 + beta1)) circ -1 gamma1").unwrap());
    }

    #[test]
    fn nested_normal_orders() {
        let ctx = bg1();
        let flat = ctx.state(":beta1 beta1 gamma1:").unwrap();
        assert_eq!(ctx.state(":beta1 :beta1 gamma1::").unwrap(), flat);
        assert_eq!(ctx.state(":beta1 (:beta1 gamma1:):").unwrap(), flat);
        let l = ctx.state("L_S[1]").unwrap();
        let ll = ctx.state(":L_S[1] L_S[1]:").unwrap();
        assert_eq!(ll, crate::ope::wick(&l, &l).unwrap());
        assert_eq!(ctx.state("D^2 beta1").unwrap(), ctx.state("D D beta1").unwrap());
    }

    #[test]
    fn scalars() {
        let ctx = bg1();
        let s = ctx.state("(1/2 - 3*sqrt6) * beta1 + 2 sqrt6 * gamma1").unwrap();
        assert_eq!(s.to_string(), "(1/2-3*sqrt6)*beta1 + 2*sqrt6*gamma1");
        assert_eq!(ctx.state(&s.to_string()).unwrap(), s);
        assert_eq!(ctx.state("3/2").unwrap().as_scalar(), Some(Scalar::from_ratio(3, 2)));
    }

    #[test]
    fn round_trips() {
        let alg = FreeAlgebraSpec::new(1, 1, vec![Scalar::one()]).shared();
        let ctx = Context::new(&alg);
        for text in ["L_S[1]", "W_S[1]", "L_H", "W_H", "L_E", "W_E", "Lalpha", ":W_S[1] L_S[1]: - D^3 gamma1"] {
            let s = ctx.state(text).unwrap();
            assert_eq!(ctx.state(&s.to_string()).unwrap(), s, "{text}");
        }
        let w = Context::rank(2);
        for text in ["d1 x1", "(x1 + d2)^3", "e1 e2 - 3/2*sqrt6", "omega[1,-2]"] {
            let v = w.weyl(text).unwrap();
            assert_eq!(w.weyl(&print_weyl(&v)).unwrap(), v, "{text}");
        }
        assert_eq!(w.weyl("d1 x1").unwrap().to_string(), "x1 d1 + 1");
        let p = w.poly("(x1 + xp2)^2 - 1").unwrap();
        assert_eq!(w.poly(&p.to_string()).unwrap(), p);
    }

    #[test]
    fn errors_carry_positions() {
        let ctx = bg1();
        let pos = |t: &str| match ctx.state(t) {
            Err(Error::Parse { line, col, .. }) => (line, col),
            other => panic!("{t}: {other:?}"),
        };
        assert_eq!(pos("beta1 + zeta1"), (1, 9));
        assert_eq!(pos("beta1 +\n  :beta1"), (2, 9));
        assert_eq!(pos("theta[2]"), (1, 1));
        assert_eq!(pos("beta1 gamma1"), (1, 7));
        assert_eq!(pos("(beta1"), (1, 7));
        assert_eq!(pos("beta1 $"), (1, 7));
        assert!(Context::new(&FreeAlgebraSpec::beta_gamma(1)).state("theta[1]").is_err());
    }
}
