//! `SL(2)` actions on rational functions: the discrete series `π_s`, the
//! principal series `T_s` and the Casselman operator `(d/dz)^(s+1)`.

use alloc::format;

use crate::error::{Error, Result};
use crate::field::PadicScalar;
use crate::rational::RationalFunction;
use crate::symplectic::SymplecticElement;

fn entries(g: &SymplecticElement) -> Result<[PadicScalar; 4]> {
    if g.n() != 1 {
        return Err(Error::DimensionMismatch("SL(2) action needs a 2 x 2 element".into()));
    }
    let m = g.matrix();
    Ok([m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)])
}

fn twisted_action(k: i64, g: &SymplecticElement, f: &RationalFunction) -> Result<RationalFunction> {
    let [a, b, c, d] = entries(g)?;
    f.compose_mobius_twisted(&d, &(-b), &(-c), &a, k)
}

/// `(π_s(g) ψ)(Z) = (-cZ + a)^(-s) ψ((dZ - b)/(-cZ + a))`.
pub fn pi_s_act(s: i64, g: &SymplecticElement, psi: &RationalFunction) -> Result<RationalFunction> {
    twisted_action(-s, g, psi)
}

/// `(T_s(g) φ)(z) = (-cz + a)^s φ((dz - b)/(-cz + a))`.
pub fn t_s_act(s: i64, g: &SymplecticElement, phi: &RationalFunction) -> Result<RationalFunction> {
    twisted_action(s, g, phi)
}

/// The `(s+1)`-fold derivative, mapping weight `s` to weight `-s-2`.
pub fn casselman(s: i64, phi: &RationalFunction) -> Result<RationalFunction> {
    if s < -1 {
        return Err(Error::InvalidParams(format!("Casselman operator needs s ≥ -1, got {s}")));
    }
    Ok(phi.nth_derivative((s + 1) as u32))
}

/// `(Z - z)^k` as a function of `z`.
pub fn point_kernel(z: PadicScalar, k: i64) -> Result<RationalFunction> {
    Ok(RationalFunction::linear_power(z, k).scale(&PadicScalar::from_i64(z.params(), -1).pow(k)?))
}

/// The value `φ(0, 1)` of a weight-`s` function: `(-1)^s` times the
/// coefficient of `z^s` at infinity.
pub fn value_at_infinity(s: i64, phi: &RationalFunction) -> Result<PadicScalar> {
    let params = phi.params();
    let Some(deg) = phi.laurent_degree_at_infinity() else {
        return Ok(PadicScalar::zero(params));
    };
    if deg > s {
        return Err(Error::InvalidParams(format!("degree {deg} at infinity exceeds the weight {s}")));
    }
    if deg < s {
        return Ok(PadicScalar::zero(params));
    }
    let lead = phi.numerator().leading().ok_or(Error::Singular)?;
    let sign = if s.rem_euclid(2) == 0 { 1 } else { -1 };
    Ok(lead.mul_int(sign))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldParams;
    use crate::poly::Poly;

    fn k() -> FieldParams {
        FieldParams::new(5, 2, 20).unwrap()
    }

    fn int(x: i64) -> PadicScalar {
        PadicScalar::from_i64(k(), x)
    }

    fn sl2(a: i64, b: i64, c: i64, d: i64) -> SymplecticElement {
        SymplecticElement::sl2(int(a), int(b), int(c), int(d)).unwrap()
    }

    #[test]
    fn weyl_discrete_series() {
        // ψ(Z) = 1/(Z - 2); π_s(J)ψ(Z) = Z^(-s) ψ(-1/Z) = Z^(1-s) / (-1 - 2Z).
        let psi = RationalFunction::linear_power(int(2), -1);
        let got = pi_s_act(3, &SymplecticElement::weyl(k(), 1), &psi).unwrap();
        let expected = RationalFunction::new(Poly::from_i64s(k(), &[1]), Poly::from_i64s(k(), &[0, 0, -1, -2])).unwrap();
        assert_eq!(got, expected);
    }

    #[test]
    fn identity_and_group_law() {
        let f = RationalFunction::new(Poly::from_i64s(k(), &[1, 3]), Poly::from_i64s(k(), &[-6, 1, 1])).unwrap();
        let id = SymplecticElement::identity(k(), 1);
        assert_eq!(pi_s_act(2, &id, &f).unwrap(), f);
        assert_eq!(t_s_act(2, &id, &f).unwrap(), f);
        let g1 = sl2(2, 1, 1, 1);
        let g2 = sl2(1, 5, 0, 1).mul(&SymplecticElement::weyl(k(), 1)).unwrap();
        let g12 = g1.mul(&g2).unwrap();
        for s in [-2, 0, 1, 3] {
            let lhs = pi_s_act(s, &g12, &f).unwrap();
            let rhs = pi_s_act(s, &g1, &pi_s_act(s, &g2, &f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = t_s_act(s, &g12, &f).unwrap();
            let rhs = t_s_act(s, &g1, &t_s_act(s, &g2, &f).unwrap()).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn casselman_kernel_and_kernel_functions() {
        assert!(casselman(1, &RationalFunction::z(k())).unwrap().is_zero());
        let z0 = int(3) + PadicScalar::pi(k());
        for s in 1..5 {
            let lhs = casselman(s - 2, &point_kernel(z0, -1).unwrap()).unwrap();
            let fact = (1..s).product::<i64>();
            assert_eq!(lhs, point_kernel(z0, -s).unwrap().scale(&int(fact)));
        }
    }

    #[test]
    fn casselman_intertwines_weyl() {
        let z0 = int(1) + PadicScalar::pi(k());
        let phi = point_kernel(z0, -1).unwrap();
        let w = SymplecticElement::weyl(k(), 1);
        let lhs = casselman(0, &t_s_act(0, &w, &phi).unwrap()).unwrap();
        let rhs = t_s_act(-2, &w, &casselman(0, &phi).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn infinity_values() {
        let z0 = PadicScalar::pi(k());
        for s in 1..4 {
            assert_eq!(value_at_infinity(-s, &point_kernel(z0, -s).unwrap()).unwrap(), int(1));
            assert_eq!(value_at_infinity(s, &point_kernel(z0, s).unwrap()).unwrap(), int(1));
        }
        assert_eq!(point_kernel(z0, 2).unwrap().laurent_degree_at_infinity(), Some(2));
        assert!(value_at_infinity(-1, &RationalFunction::one(k())).is_err());
    }
}
