//! Residue pairing, the operators `I_σ` and `J_σ` on finite-rank
//! distributions, and the identities relating them.
//!
//! Vector-valued functions are represented by their coordinates in the
//! standard basis `v_1..v_d`; functionals by coordinates in the dual basis.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::field::{FieldParams, PadicScalar};
use crate::linalg::KMatrix;
use crate::poly::Poly;
use crate::rational::{Place, RationalFunction};
use crate::series::{casselman, pi_s_act, point_kernel, t_s_act, value_at_infinity};
use crate::siegel::SiegelPoint;
use crate::symplectic::{automorphy_factor, mobius_action, right_action, sigma_r_matrix, PPair, SymplecticElement};

/// Algebraic representation of `GL(n)` used as coefficient system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RationalRepresentation {
    /// `σ(h) = det(h)^k`.
    DetPower { n: usize, k: i64 },
    /// `r`-th exterior power of `dZ ↦ h dZ ᵗh`.
    Wedge { n: usize, r: usize },
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

impl RationalRepresentation {
    pub fn n(&self) -> usize {
        match *self {
            Self::DetPower { n, .. } | Self::Wedge { n, .. } => n,
        }
    }

    pub fn dim(&self) -> usize {
        match *self {
            Self::DetPower { .. } => 1,
            Self::Wedge { n, r } => binomial(n * (n + 1) / 2, r),
        }
    }

    pub fn name(&self) -> String {
        match *self {
            Self::DetPower { k, .. } => format!("det^{k}"),
            Self::Wedge { r, .. } => format!("wedge^{r}"),
        }
    }

    /// `σ(h)`.
    pub fn matrix(&self, h: &KMatrix) -> Result<KMatrix> {
        self.check(h)?;
        match *self {
            Self::DetPower { k, .. } => Ok(KMatrix::diag(h.params(), &[h.det()?.pow(k)?])),
            Self::Wedge { r, .. } => sigma_r_matrix(h, r),
        }
    }

    /// `σ*(h)`, the contragredient, computed as `ᵗσ(h⁻¹)`.
    pub fn dual_matrix(&self, h: &KMatrix) -> Result<KMatrix> {
        self.check(h)?;
        match *self {
            Self::DetPower { k, .. } => Ok(KMatrix::diag(h.params(), &[h.det()?.pow(-k)?])),
            Self::Wedge { r, .. } => Ok(sigma_r_matrix(&h.inverse()?, r)?.transpose()),
        }
    }

    fn check(&self, h: &KMatrix) -> Result<()> {
        if !h.is_square() || h.rows() != self.n() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for a representation of GL({})",
                h.rows(),
                h.cols(),
                self.n()
            )));
        }
        if let Self::Wedge { n, r } = *self {
            if r > n * (n + 1) / 2 {
                return Err(Error::DimensionMismatch(format!("wedge power {r} for n = {n}")));
            }
        }
        Ok(())
    }
}

fn dot(a: &[PadicScalar], b: &[PadicScalar]) -> Result<PadicScalar> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::DimensionMismatch(format!("pairing vectors of length {} and {}", a.len(), b.len())));
    }
    Ok(a.iter().zip(b).fold(PadicScalar::zero(a[0].params()), |acc, (x, y)| acc + *x * *y))
}

fn basis_vector(params: FieldParams, d: usize, k: usize) -> Vec<PadicScalar> {
    (0..d).map(|i| if i == k { PadicScalar::one(params) } else { PadicScalar::zero(params) }).collect()
}

/// One Dirac atom `weight · ξ_{(X,Y), v}`.
#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub pair: PPair,
    pub v: Vec<PadicScalar>,
    pub weight: PadicScalar,
}

/// Finite combination of Dirac distributions on pairs.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Distribution {
    pub atoms: Vec<Atom>,
}

impl Distribution {
    pub fn dirac(pair: PPair, v: Vec<PadicScalar>) -> Self {
        let weight = PadicScalar::one(pair.x().params());
        Self { atoms: vec![Atom { pair, v, weight }] }
    }

    /// Evaluation at the point at infinity, the atom at `(0, 1)` for `n = 1`.
    pub fn at_infinity(params: FieldParams) -> Self {
        Self::dirac(PPair::origin(params, 1), vec![PadicScalar::one(params)])
    }

    pub fn add(&self, other: &Self) -> Self {
        Self { atoms: self.atoms.iter().chain(&other.atoms).cloned().collect() }
    }

    pub fn scale(&self, c: &PadicScalar) -> Self {
        let atoms = self.atoms.iter().map(|a| Atom { weight: a.weight * *c, ..a.clone() }).collect();
        Self { atoms }
    }

    /// `Σ weight · ⟨v, φ(X, Y)⟩` for a `V*`-valued function `φ`.
    pub fn evaluate(
        &self,
        params: FieldParams,
        mut phi: impl FnMut(&PPair) -> Result<Vec<PadicScalar>>,
    ) -> Result<PadicScalar> {
        let mut total = PadicScalar::zero(params);
        for atom in &self.atoms {
            total += atom.weight * dot(&atom.v, &phi(&atom.pair)?)?;
        }
        Ok(total)
    }

    /// `T*(g) ξ`, defined by `⟨φ, T*(g) ξ⟩ = ⟨T(g⁻¹) φ, ξ⟩`; atoms move to
    /// `(X, Y) g⁻¹`.
    pub fn translate(&self, g: &SymplecticElement) -> Result<Self> {
        let gi = g.inverse();
        let atoms = self
            .atoms
            .iter()
            .map(|a| Ok(Atom { pair: right_action(&a.pair, &gi)?, ..a.clone() }))
            .collect::<Result<_>>()?;
        Ok(Self { atoms })
    }
}

/// Finite combination `Σ c_i ⟨ψ(Z_i), w*_i⟩` of point evaluations.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct PointFunctional {
    pub terms: Vec<(SiegelPoint, Vec<PadicScalar>, PadicScalar)>,
}

impl PointFunctional {
    pub fn evaluate(
        &self,
        params: FieldParams,
        mut psi: impl FnMut(&SiegelPoint) -> Result<Vec<PadicScalar>>,
    ) -> Result<PadicScalar> {
        let mut total = PadicScalar::zero(params);
        for (z, covector, c) in &self.terms {
            total += *c * dot(&psi(z)?, covector)?;
        }
        Ok(total)
    }
}

/// `φ_{Z, v*}(X, Y) = σ*(XZ + Y) v*`.
pub fn phi_z_vstar(
    sigma: &RationalRepresentation,
    z: &SiegelPoint,
    vstar: &[PadicScalar],
    pair: &PPair,
) -> Result<Vec<PadicScalar>> {
    sigma.dual_matrix(&pair.apply_to(z.matrix())?)?.apply(vstar)
}

/// `ψ_{(X,Y), v}(Z) = σ(XZ + Y)⁻¹ v`.
pub fn psi_xy_v(
    sigma: &RationalRepresentation,
    pair: &PPair,
    v: &[PadicScalar],
    z: &SiegelPoint,
) -> Result<Vec<PadicScalar>> {
    sigma.matrix(&pair.apply_to(z.matrix())?)?.inverse()?.apply(v)
}

/// `I_σ(ξ)(Z) = Σ_k ⟨φ_{Z, v*_k}, ξ⟩ v_k`.
pub fn i_sigma_eval(sigma: &RationalRepresentation, xi: &Distribution, z: &SiegelPoint) -> Result<Vec<PadicScalar>> {
    let params = z.params();
    let d = sigma.dim();
    (0..d)
        .map(|k| {
            let vstar = basis_vector(params, d, k);
            xi.evaluate(params, |pair| phi_z_vstar(sigma, z, &vstar, pair))
        })
        .collect()
}

/// `J_σ(μ)(X, Y) = Σ_k ⟨ψ_{(X,Y), v_k}, μ⟩ v*_k`.
pub fn j_sigma_eval(sigma: &RationalRepresentation, mu: &PointFunctional, pair: &PPair) -> Result<Vec<PadicScalar>> {
    let params = pair.x().params();
    let d = sigma.dim();
    (0..d)
        .map(|k| {
            let v = basis_vector(params, d, k);
            mu.evaluate(params, |z| psi_xy_v(sigma, pair, &v, z))
        })
        .collect()
}

/// `(π_σ(g) ψ)(Z) = σ(j(g⁻¹, Z))⁻¹ ψ(g⁻¹ Z)`.
pub fn pi_sigma_eval(
    sigma: &RationalRepresentation,
    g: &SymplecticElement,
    psi: impl Fn(&SiegelPoint) -> Result<Vec<PadicScalar>>,
    z: &SiegelPoint,
) -> Result<Vec<PadicScalar>> {
    let gi = g.inverse();
    let j = automorphy_factor(&gi, z.matrix())?;
    let moved = SiegelPoint::new(mobius_action(&gi, z.matrix())?)?;
    sigma.matrix(&j)?.inverse()?.apply(&psi(&moved)?)
}

/// Two sides of one scalar identity.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingReport {
    pub identity: String,
    pub lhs: PadicScalar,
    pub rhs: PadicScalar,
    pub verdict: bool,
    /// Places or evaluation points that contributed.
    pub trace: Vec<String>,
}

impl PairingReport {
    /// Compares the sides, refusing when too few digits agree to decide.
    pub fn new(identity: impl Into<String>, lhs: PadicScalar, rhs: PadicScalar, trace: Vec<String>) -> Result<Self> {
        let verdict = lhs.certified_eq(&rhs)?;
        Ok(Self { identity: identity.into(), lhs, rhs, verdict, trace })
    }

    fn componentwise(
        identity: &str,
        lhs: Vec<PadicScalar>,
        rhs: Vec<PadicScalar>,
        trace: &[String],
    ) -> Result<Vec<Self>> {
        if lhs.len() != rhs.len() {
            return Err(Error::DimensionMismatch(format!("{} against {} components", lhs.len(), rhs.len())));
        }
        lhs.into_iter()
            .zip(rhs)
            .enumerate()
            .map(|(k, (l, r))| Self::new(format!("{identity}[{k}]"), l, r, trace.to_vec()))
            .collect()
    }
}

fn point_trace(z: &SiegelPoint) -> Vec<String> {
    vec![format!("Z = {}", z.matrix())]
}

/// `⟨J_σ(μ), ξ⟩ = ⟨I_σ(ξ), μ⟩`.
pub fn duality_check(sigma: &RationalRepresentation, mu: &PointFunctional, xi: &Distribution, params: FieldParams) -> Result<PairingReport> {
    let lhs = xi.evaluate(params, |pair| j_sigma_eval(sigma, mu, pair))?;
    let rhs = mu.evaluate(params, |z| i_sigma_eval(sigma, xi, z))?;
    let trace = mu.terms.iter().map(|(z, _, _)| format!("Z = {}", z.matrix())).collect();
    PairingReport::new("<J(mu), xi> = <I(xi), mu>", lhs, rhs, trace)
}

/// `I_σ(ξ_{(X,Y), v})(Z) = ψ_{(X,Y), v}(Z)`, one report per coordinate.
pub fn dirac_image_check(
    sigma: &RationalRepresentation,
    pair: &PPair,
    v: &[PadicScalar],
    z: &SiegelPoint,
) -> Result<Vec<PairingReport>> {
    let xi = Distribution::dirac(pair.clone(), v.to_vec());
    let lhs = i_sigma_eval(sigma, &xi, z)?;
    let rhs = psi_xy_v(sigma, pair, v, z)?;
    PairingReport::componentwise("I(dirac) = psi", lhs, rhs, &point_trace(z))
}

/// `I_σ(T*(g) ξ)(Z) = (π_σ(g) I_σ(ξ))(Z)`, one report per coordinate.
pub fn i_equivariance_check(
    sigma: &RationalRepresentation,
    g: &SymplecticElement,
    xi: &Distribution,
    z: &SiegelPoint,
) -> Result<Vec<PairingReport>> {
    let lhs = i_sigma_eval(sigma, &xi.translate(g)?, z)?;
    let rhs = pi_sigma_eval(sigma, g, |w| i_sigma_eval(sigma, xi, w), z)?;
    PairingReport::componentwise("I(T*(g) xi) = pi(g) I(xi)", lhs, rhs, &point_trace(z))
}

/// `I_s(ξ)` for `n = 1` as an exact rational function of `Z`, using
/// `(xZ + y)^(-s) = x^(-s) (Z + y/x)^(-s)`.
pub fn i_s_rational(s: i64, xi: &Distribution, params: FieldParams) -> Result<RationalFunction> {
    let mut total = RationalFunction::zero(params);
    for atom in &xi.atoms {
        if atom.pair.n() != 1 || atom.v.len() != 1 {
            return Err(Error::DimensionMismatch("symbolic I_s needs n = 1 atoms".into()));
        }
        let (x, y) = (atom.pair.x().get(0, 0), atom.pair.y().get(0, 0));
        let c = atom.weight * atom.v[0];
        let term = if x.is_zero() {
            RationalFunction::constant(y.pow(-s)?)
        } else {
            RationalFunction::linear_power(-(y * x.inv()?), -s).scale(&x.pow(-s)?)
        };
        total = total.add(&term.scale(&c));
    }
    Ok(total)
}

/// `ψ(Z) = (xZ + y)^(-s)` built from the polynomial `xZ + y`.
pub fn psi_rational(s: i64, x: &PadicScalar, y: &PadicScalar) -> Result<RationalFunction> {
    let lin = Poly::new(x.params(), vec![*y, *x]);
    if s >= 0 {
        RationalFunction::new(Poly::one(x.params()), lin.pow(s as u32))
    } else {
        Ok(RationalFunction::from_poly(lin.pow((-s) as u32)))
    }
}

/// Sum of the residues of `φ ψ dz` over the points of `P¹(F)`; poles outside
/// `F` do not contribute. Requires `φ` of weight `s - 2`.
pub fn morita_pairing(s: i64, phi: &RationalFunction, psi: &RationalFunction) -> Result<(PadicScalar, Vec<Place>)> {
    if phi.laurent_degree_at_infinity().is_some_and(|d| d > s - 2) {
        return Err(Error::InvalidParams(format!("test function grows faster than z^{}", s - 2)));
    }
    // The base-line poles of the form are those of `ψ`; a pole of `φ` that
    // cannot be told apart from one of them leaves the sum undetermined.
    let form = phi.mul(psi);
    let mut places = Vec::new();
    for (r, _) in psi.linear_poles() {
        if phi.linear_poles().any(|(q, _)| q == r) {
            return Err(Error::PrecisionLoss(format!("a pole of the test function is indistinguishable from {r}")));
        }
        if r.certify_in_base()? {
            places.push(Place::Finite(r));
        }
    }
    places.push(Place::Infinity);
    let mut total = PadicScalar::zero(phi.params());
    for place in &places {
        total += form.residue_at(place)?;
    }
    Ok((total, places))
}

fn place_trace(places: &[Place]) -> Vec<String> {
    places
        .iter()
        .map(|p| match p {
            Place::Finite(r) => format!("z = {r}"),
            Place::Infinity => "z = ∞".to_string(),
        })
        .collect()
}

/// The commutative diagram for weight `s ≥ 1`, tested on the kernel
/// `(Z - z)^(-s)` after transport by `g`:
/// `⟨(Z - z)^(-1), π_s(g) 1⟩ = ⟨T_{-s}(g⁻¹) (Z - z)^(-s), ξ_∞⟩`.
/// The right side is also compared against `(π_s(g) 1)(Z)`, and the report
/// fails if `(d/dz)^(s-1) (Z - z)^(-1) ≠ (s-1)! (Z - z)^(-s)`.
pub fn theorem_commutative_check(s: i64, g: &SymplecticElement, z: &PadicScalar) -> Result<PairingReport> {
    if s < 1 {
        return Err(Error::InvalidParams(format!("weight must be positive, got {s}")));
    }
    let params = z.params();
    let kernel_1 = point_kernel(*z, -1)?;
    let kernel_s = point_kernel(*z, -s)?;
    let factorial = PadicScalar::from_i64(params, (1..s).product());
    let preimage_ok = casselman(s - 2, &kernel_1)? == kernel_s.scale(&factorial);
    let image_of_one = pi_s_act(s, g, &RationalFunction::one(params))?;
    let (lhs, places) = morita_pairing(s, &kernel_1, &image_of_one)?;
    let rhs = value_at_infinity(-s, &t_s_act(-s, &g.inverse(), &kernel_s)?)?;
    let direct = image_of_one.eval(z)?;
    let mut report = PairingReport::new(format!("(s-1)! M_s(pi_s(g) 1) = T*(g) xi_inf, s = {s}"), lhs, rhs, place_trace(&places))?;
    report.verdict &= preimage_ok && rhs.certified_eq(&direct)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::partial_fractions;

    fn k() -> FieldParams {
        FieldParams::new(5, 2, 20).unwrap()
    }

    fn int(x: i64) -> PadicScalar {
        PadicScalar::from_i64(k(), x)
    }

    fn sample_z() -> PadicScalar {
        int(2) + PadicScalar::pi(k()) * int(3)
    }

    #[test]
    fn residue_pairings() {
        let z = sample_z();
        let (v, places) = morita_pairing(2, &point_kernel(z, -1).unwrap(), &RationalFunction::one(k())).unwrap();
        assert_eq!(v, int(1));
        assert_eq!(places, vec![Place::Infinity]);
        let f = RationalFunction::linear_power(int(3), -1);
        let (v, places) = morita_pairing(2, &RationalFunction::one(k()), &f).unwrap();
        assert_eq!(v, int(0));
        assert_eq!(places.len(), 2);
        assert_eq!(f.residue_at(&Place::Finite(int(3))).unwrap(), int(1));
        assert_eq!(f.residue_at(&Place::Infinity).unwrap(), int(-1));
    }

    #[test]
    fn representation_contragredient() {
        let h = KMatrix::from_i64(k(), 2, 2, &[2, 1, 1, 3]).unwrap();
        for sigma in [
            RationalRepresentation::DetPower { n: 2, k: -2 },
            RationalRepresentation::Wedge { n: 2, r: 1 },
            RationalRepresentation::Wedge { n: 2, r: 2 },
        ] {
            let prod = sigma.matrix(&h).unwrap().transpose().mul(&sigma.dual_matrix(&h).unwrap()).unwrap();
            assert_eq!(prod, KMatrix::identity(k(), sigma.dim()));
        }
        assert_eq!(RationalRepresentation::Wedge { n: 2, r: 2 }.dim(), 3);
    }

    #[test]
    fn infinity_atom_gives_one() {
        let z = SiegelPoint::scalar(sample_z());
        for s in 1..4 {
            let sigma = RationalRepresentation::DetPower { n: 1, k: s };
            assert_eq!(i_sigma_eval(&sigma, &Distribution::at_infinity(k()), &z).unwrap(), vec![int(1)]);
            assert_eq!(i_s_rational(s, &Distribution::at_infinity(k()), k()).unwrap(), RationalFunction::one(k()));
        }
    }

    #[test]
    fn dirac_image_symbolic() {
        let pair = PPair::from_i64(k(), 1, &[1], &[-3]).unwrap();
        let xi = Distribution::dirac(pair, vec![int(1)]);
        let got = i_s_rational(2, &xi, k()).unwrap();
        assert_eq!(got, RationalFunction::linear_power(int(3), -2));
        assert_eq!(got, psi_rational(2, &int(1), &int(-3)).unwrap());
        assert!(partial_fractions(&got).unwrap().in_n0_s(2));
    }

    #[test]
    fn weyl_equivariance_n1() {
        let g = SymplecticElement::weyl(k(), 1);
        let pair = PPair::from_i64(k(), 1, &[1], &[0]).unwrap();
        let xi = Distribution::dirac(pair, vec![int(1)]);
        let sigma = RationalRepresentation::DetPower { n: 1, k: 1 };
        for t in 0..10 {
            let z = SiegelPoint::scalar(int(t) + PadicScalar::pi(k()) * int(1 + t % 4));
            for r in i_equivariance_check(&sigma, &g, &xi, &z).unwrap() {
                assert!(r.verdict, "{r:?}");
            }
        }
    }

    #[test]
    fn commutative_diagram_generators() {
        let z = sample_z();
        let gens = [
            SymplecticElement::identity(k(), 1),
            SymplecticElement::sl2(int(1), int(1), int(0), int(1)).unwrap(),
            SymplecticElement::sl2(int(5), int(0), int(0), int(5).inv().unwrap()).unwrap(),
            SymplecticElement::weyl(k(), 1),
        ];
        for s in 1..4 {
            for g in &gens {
                let r = theorem_commutative_check(s, g, &z).unwrap();
                assert!(r.verdict, "s = {s}: {r:?}");
            }
        }
        let r = theorem_commutative_check(2, &gens[0], &z).unwrap();
        assert_eq!(r.lhs, int(1));
    }

    #[test]
    fn duality_identity_n1() {
        let sigma = RationalRepresentation::DetPower { n: 1, k: 2 };
        let xi = Distribution::dirac(PPair::from_i64(k(), 1, &[1], &[4]).unwrap(), vec![int(3)])
            .add(&Distribution::at_infinity(k()).scale(&int(-2)));
        let mu = PointFunctional {
            terms: vec![
                (SiegelPoint::scalar(sample_z()), vec![int(1)], int(2)),
                (SiegelPoint::scalar(PadicScalar::pi(k())), vec![int(7)], int(1)),
            ],
        };
        let r = duality_check(&sigma, &mu, &xi, k()).unwrap();
        assert!(r.verdict);
        let empty = PointFunctional::default();
        assert!(j_sigma_eval(&sigma, &empty, &PPair::origin(k(), 1)).unwrap()[0].is_zero());
    }
}
