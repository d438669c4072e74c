use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use siegel_core::duality::{
    dirac_image_check, duality_check, i_equivariance_check, i_s_rational, morita_pairing, phi_z_vstar, pi_sigma_eval,
    psi_rational, psi_xy_v, theorem_commutative_check, Atom, Distribution, PairingReport, PointFunctional,
    RationalRepresentation,
};
use siegel_core::sample::{gl_integral, int_vector, integer, integral_pair, sp_integral, symmetric_integral, unit_integer};
use siegel_core::series::{pi_s_act, point_kernel, t_s_act};
use siegel_core::{FieldParams, KMatrix, PadicScalar, Poly, RationalFunction, Result, SiegelPoint, SymplecticElement};

use super::series::generators;
use super::symplectic::{point_field, sample_point};
use super::{agree, agree_fn};
use crate::config::Ctx;
use crate::report::{Cases, Outcome};

pub fn run(ctx: &Ctx, cases: &mut Cases) {
    identity(ctx, cases);
    commutative(ctx, cases);
    dirac_images(ctx, cases);
    equivariance(ctx, cases);
    expansion(ctx, cases);
    phi_equivariance(ctx, cases);
    morita_vanishing(ctx, cases);
    morita_examples(ctx, cases);
    morita_invariance(ctx, cases);
}

/// Coefficient systems checked for size `n`.
pub fn representations(n: usize) -> Vec<RationalRepresentation> {
    let mut out = vec![RationalRepresentation::DetPower { n, k: -1 }, RationalRepresentation::DetPower { n, k: -2 }];
    if n == 2 {
        out.push(RationalRepresentation::Wedge { n, r: 1 });
    }
    out
}

fn slug(sigma: &RationalRepresentation) -> String {
    match *sigma {
        RationalRepresentation::DetPower { k, .. } => format!("det{k}"),
        RationalRepresentation::Wedge { r, .. } => format!("wedge{r}"),
    }
}

pub fn report_json(r: &PairingReport) -> Value {
    json!({
        "identity": r.identity,
        "lhs": r.lhs.to_string(),
        "rhs": r.rhs.to_string(),
        "verdict": r.verdict,
        "trace": r.trace,
    })
}

fn reports_outcome(reports: &[PairingReport]) -> Outcome {
    let pass = !reports.is_empty() && reports.iter().all(|r| r.verdict);
    Outcome::new(pass, Value::Array(reports.iter().map(report_json).collect()))
}

fn random_distribution(rng: &mut ChaCha8Rng, params: FieldParams, n: usize, dim: usize) -> Distribution {
    let atoms = (0..rng.gen_range(1..=3))
        .map(|_| Atom {
            pair: integral_pair(rng, params, n),
            v: int_vector(rng, params, dim),
            weight: PadicScalar::from_i64(params, unit_integer(rng, params.p(), 2)),
        })
        .collect();
    Distribution { atoms }
}

fn random_functional(rng: &mut ChaCha8Rng, params: FieldParams, n: usize, dim: usize) -> Result<PointFunctional> {
    let terms = (0..rng.gen_range(1..=3))
        .map(|_| {
            Ok((
                sample_point(rng, params, n)?,
                int_vector(rng, params, dim),
                PadicScalar::from_i64(params, unit_integer(rng, params.p(), 2)),
            ))
        })
        .collect::<Result<_>>()?;
    Ok(PointFunctional { terms })
}

/// Generators of `Sp(2n, F)` used for equivariance checks.
fn sp_generators(rng: &mut ChaCha8Rng, params: FieldParams, n: usize) -> Result<Vec<(String, SymplecticElement)>> {
    if n == 1 {
        return Ok(generators(params)?.into_iter().map(|(k, g)| (k.to_string(), g)).collect());
    }
    Ok(vec![
        ("weyl".into(), SymplecticElement::weyl(params, n)),
        ("unipotent".into(), SymplecticElement::upper_unipotent(&symmetric_integral(rng, params, n, 2))?),
        ("lower-unipotent".into(), SymplecticElement::lower_unipotent(&symmetric_integral(rng, params, n, 2))?),
        ("levi".into(), SymplecticElement::levi(&gl_integral(rng, params, n, 2))?),
    ])
}

/// Points of `Σ(1)` over a field extended as far as the sampler needs.
fn field_or_skip(ctx: &Ctx, cases: &mut Cases, n: usize, id: String, identity: &str, anchor: &str) -> Option<FieldParams> {
    match point_field(ctx, n) {
        Ok(k) => Some(k),
        Err(e) => {
            cases.skip(id, identity, anchor, e.to_string());
            None
        }
    }
}

/// `⟨J_σ(μ), ξ⟩ = ⟨I_σ(ξ), μ⟩` on finite-rank pairs.
pub fn identity(ctx: &Ctx, cases: &mut Cases) {
    let (id, anchor) = ("<J(mu), xi> = <I(xi), mu>", "duality between distributions and functionals");
    for n in ctx.dims() {
        let Some(params) = field_or_skip(ctx, cases, n, format!("duality/identity/n{n}"), id, anchor) else { continue };
        for sigma in representations(n) {
            let mut rng = ctx.rng(1400 + 10 * n as u64 + sigma.dim() as u64 + slug(&sigma).len() as u64);
            for i in 0..ctx.counts.duality {
                let xi = random_distribution(&mut rng, params, n, sigma.dim());
                let mu = random_functional(&mut rng, params, n, sigma.dim());
                cases.check(format!("duality/identity/n{n}/{}/{i:03}", slug(&sigma)), id, anchor, || {
                    let r = duality_check(&sigma, &mu?, &xi, params)?;
                    Ok(reports_outcome(&[r]))
                });
            }
        }
    }
}

/// The commutative diagram linking the pairing, the Casselman operator and
/// evaluation at infinity, on the identity and the generators.
pub fn commutative(ctx: &Ctx, cases: &mut Cases) {
    let (id, anchor) = ("(s-1)! <(Z - z)^-1, pi_s(g) 1> = <T_-s(g^-1)(Z - z)^-s, xi_inf> = 1 at g = 1", "commutative diagram");
    let Some(params) = field_or_skip(ctx, cases, 1, "duality/commutative".into(), id, anchor) else { return };
    let mut gens = vec![("identity".to_string(), SymplecticElement::identity(params, 1))];
    match generators(params) {
        Ok(g) => gens.extend(g.into_iter().map(|(k, g)| (k.to_string(), g))),
        Err(e) => {
            cases.skip("duality/commutative", id, anchor, e.to_string());
            return;
        }
    }
    let mut rng = ctx.rng(1500);
    let points: Vec<PadicScalar> = (0..ctx.counts.commutative).map(|_| off_base_point(&mut rng, params)).collect();
    for s in ctx.weights(&[1, 2, 3]).into_iter().filter(|&s| s >= 1) {
        for (i, z) in points.iter().enumerate() {
            for (name, g) in &gens {
                cases.check(format!("duality/commutative/s{s}/{i:02}/{name}"), id, anchor, || {
                    let r = theorem_commutative_check(s, g, z)?;
                    let one = PadicScalar::one(params);
                    let base = name != "identity" || (r.lhs.certified_eq(&one)? && r.rhs.certified_eq(&one)?);
                    let mut out = reports_outcome(&[r]);
                    out.pass &= base;
                    Ok(out)
                });
            }
        }
    }
}

/// `a + π u` with `a` integral and `u` a unit: a point of `Σ(1)` for `n = 1`.
fn off_base_point(rng: &mut ChaCha8Rng, params: FieldParams) -> PadicScalar {
    let a = PadicScalar::from_i64(params, integer(rng, params.p(), 2));
    let u = PadicScalar::from_i64(params, unit_integer(rng, params.p(), 2));
    a + PadicScalar::pi(params) * u
}

/// `I_σ(ξ_{(X,Y), v}) = ψ_{(X,Y), v}`: exact for `n = 1`, pointwise for `n = 2`.
pub fn dirac_images(ctx: &Ctx, cases: &mut Cases) {
    let (id, anchor) = ("I(dirac_(X,Y),v) = psi_(X,Y),v", "image of Dirac distributions");
    for n in ctx.dims() {
        let Some(params) = field_or_skip(ctx, cases, n, format!("duality/dirac/n{n}"), id, anchor) else { continue };
        let mut rng = ctx.rng(1600 + n as u64);
        if n == 1 {
            for s in ctx.weights(&[-2, -1, 1, 2, 3]) {
                for i in 0..5 {
                    let pair = integral_pair(&mut rng, params, 1);
                    let v = PadicScalar::from_i64(params, unit_integer(&mut rng, params.p(), 2));
                    cases.check(format!("duality/dirac/n1/s{s}/{i}"), id, anchor, || {
                        let (x, y) = (pair.x().get(0, 0), pair.y().get(0, 0));
                        let lhs = i_s_rational(s, &Distribution::dirac(pair.clone(), vec![v]), params)?;
                        let rhs = psi_rational(s, &x, &y)?.scale(&v);
                        Ok(Outcome::new(
                            agree_fn(&lhs, &rhs)?,
                            json!({ "s": s, "x": x.to_string(), "y": y.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string() }),
                        ))
                    });
                }
                cases.check(format!("duality/dirac/n1/s{s}/infinity"), "I_s(xi_inf) = 1", anchor, || {
                    let f = i_s_rational(s, &Distribution::at_infinity(params), params)?;
                    Ok(Outcome::new(agree_fn(&f, &RationalFunction::one(params))?, json!({ "s": s, "image": f.to_string() })))
                });
            }
        }
        for sigma in representations(n) {
            let pair = integral_pair(&mut rng, params, n);
            let v = int_vector(&mut rng, params, sigma.dim());
            for i in 0..5 {
                let z = sample_point(&mut rng, params, n);
                cases.check(format!("duality/dirac/n{n}/{}/point{i}", slug(&sigma)), id, anchor, || {
                    Ok(reports_outcome(&dirac_image_check(&sigma, &pair, &v, &z?)?))
                });
            }
        }
    }
}

/// `I_σ(T*(g) ξ) = π_σ(g) I_σ(ξ)` on generators and random integral elements.
pub fn equivariance(ctx: &Ctx, cases: &mut Cases) {
    let (id, anchor) = ("I(T*(g) xi) = pi(g) I(xi)", "equivariance of I");
    for n in ctx.dims() {
        let Some(params) = field_or_skip(ctx, cases, n, format!("duality/equivariance/n{n}"), id, anchor) else { continue };
        let mut rng = ctx.rng(1700 + n as u64);
        let mut elements = match sp_generators(&mut rng, params, n) {
            Ok(g) => g,
            Err(e) => {
                cases.skip(format!("duality/equivariance/n{n}"), id, anchor, e.to_string());
                continue;
            }
        };
        for i in 0..ctx.counts.equivariance {
            elements.push((format!("random{i}"), sp_integral(&mut rng, params, n, 3)));
        }
        if n == 1 {
            for s in ctx.weights(&[1, 2, 3]) {
                for (name, g) in &elements {
                    let xi = random_distribution(&mut rng, params, 1, 1);
                    cases.check(format!("duality/equivariance/n1/exact/s{s}/{name}"), id, anchor, || {
                        let lhs = i_s_rational(s, &xi.translate(g)?, params)?;
                        let rhs = pi_s_act(s, g, &i_s_rational(s, &xi, params)?)?;
                        Ok(Outcome::new(agree_fn(&lhs, &rhs)?, json!({ "s": s, "lhs": lhs.to_string(), "rhs": rhs.to_string() })))
                    });
                }
            }
        }
        for sigma in representations(n) {
            for (name, g) in &elements {
                let xi = random_distribution(&mut rng, params, n, sigma.dim());
                let points: Vec<Result<SiegelPoint>> = (0..3).map(|_| sample_point(&mut rng, params, n)).collect();
                cases.check(format!("duality/equivariance/n{n}/{}/{name}", slug(&sigma)), id, anchor, || {
                    let mut reports = Vec::new();
                    for z in points {
                        reports.extend(i_equivariance_check(&sigma, g, &xi, &z?)?);
                    }
                    Ok(reports_outcome(&reports))
                });
            }
        }
    }
}

/// Unipotent elements translate the argument and Levi elements twist it:
/// `π_σ(n(z)) ψ(Z) = ψ(Z - z)` and `π_σ(m(h)) ψ(Z) = σ(h) ψ(ᵗh Z h)`.
pub fn expansion(ctx: &Ctx, cases: &mut Cases) {
    let anchor = "unipotent and Levi transport";
    for n in ctx.dims() {
        let Some(params) = field_or_skip(ctx, cases, n, format!("duality/transport/n{n}"), "pi(g) psi", anchor) else {
            continue;
        };
        let mut rng = ctx.rng(1800 + n as u64);
        for sigma in representations(n) {
            for i in 0..5 {
                let pair = integral_pair(&mut rng, params, n);
                let v = int_vector(&mut rng, params, sigma.dim());
                let shift = symmetric_integral(&mut rng, params, n, 2);
                let h = gl_integral(&mut rng, params, n, 1);
                let z = sample_point(&mut rng, params, n);
                let psi = |w: &SiegelPoint| psi_xy_v(&sigma, &pair, &v, w);
                cases.check(
                    format!("duality/transport/n{n}/{}/{i}/unipotent", slug(&sigma)),
                    "pi(n(z)) psi(Z) = psi(Z - z)",
                    anchor,
                    || {
                        let z = z.clone()?;
                        let lhs = pi_sigma_eval(&sigma, &SymplecticElement::upper_unipotent(&shift)?, psi, &z)?;
                        let rhs = psi(&SiegelPoint::new(z.matrix().sub(&shift)?)?)?;
                        vectors_outcome(&lhs, &rhs)
                    },
                );
                cases.check(
                    format!("duality/transport/n{n}/{}/{i}/levi", slug(&sigma)),
                    "pi(m(h)) psi(Z) = sigma(h) psi(tZ h)",
                    anchor,
                    || {
                        let z = z?;
                        let lhs = pi_sigma_eval(&sigma, &SymplecticElement::levi(&h)?, psi, &z)?;
                        let moved = SiegelPoint::new(h.transpose().mul(z.matrix())?.mul(&h)?)?;
                        let rhs = sigma.matrix(&h)?.apply(&psi(&moved)?)?;
                        vectors_outcome(&lhs, &rhs)
                    },
                );
            }
        }
    }
}

fn vectors_outcome(lhs: &[PadicScalar], rhs: &[PadicScalar]) -> Result<Outcome> {
    let a = KMatrix::from_vec(lhs[0].params(), lhs.len(), 1, lhs.to_vec())?;
    let b = KMatrix::from_vec(rhs[0].params(), rhs.len(), 1, rhs.to_vec())?;
    Ok(Outcome::new(agree(&a, &b)?, json!({ "lhs": a.to_string(), "rhs": b.to_string() })))
}

/// `φ_{Z, v*}(hX, hY) = σ*(h) φ_{Z, v*}(X, Y)`.
pub fn phi_equivariance(ctx: &Ctx, cases: &mut Cases) {
    let (id, anchor) = ("phi(hX, hY) = sigma*(h) phi(X, Y)", "equivariance of point kernels");
    for n in ctx.dims() {
        let Some(params) = field_or_skip(ctx, cases, n, format!("duality/kernel-equivariance/n{n}"), id, anchor) else {
            continue;
        };
        let mut rng = ctx.rng(1900 + n as u64);
        for sigma in representations(n) {
            for i in 0..5 {
                let pair = integral_pair(&mut rng, params, n);
                let h = gl_integral(&mut rng, params, n, 2);
                let vstar = int_vector(&mut rng, params, sigma.dim());
                let z = sample_point(&mut rng, params, n);
                cases.check(format!("duality/kernel-equivariance/n{n}/{}/{i}", slug(&sigma)), id, anchor, || {
                    let z = z?;
                    let lhs = phi_z_vstar(&sigma, &z, &vstar, &pair.left_mul(&h)?)?;
                    let rhs = sigma.dual_matrix(&h)?.apply(&phi_z_vstar(&sigma, &z, &vstar, &pair)?)?;
                    vectors_outcome(&lhs, &rhs)
                });
            }
        }
    }
}

fn special_poles(params: FieldParams) -> Vec<(&'static str, PadicScalar)> {
    vec![
        ("0", PadicScalar::zero(params)),
        ("1", PadicScalar::one(params)),
        ("p", PadicScalar::from_i64(params, params.p() as i64)),
        ("-1", PadicScalar::from_i64(params, -1)),
    ]
}

/// `⟨z^k, ψ⟩ = 0` for `k ≤ s - 2` and every generator `ψ` of weight `s`.
pub fn morita_vanishing(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let one = PadicScalar::one(params);
    let zero = PadicScalar::zero(params);
    for s in ctx.weights(&[2, 3, 4]).into_iter().filter(|&s| s >= 2) {
        let mut gens: Vec<(String, Result<RationalFunction>)> =
            special_poles(params).into_iter().map(|(name, r)| (format!("pole{name}"), point_kernel(r, -s))).collect();
        gens.push(("infinity".into(), psi_rational(s, &zero, &one)));
        for k in 0..=(s - 2) as usize {
            let phi = RationalFunction::from_poly(Poly::monomial(one, k));
            for (name, psi) in &gens {
                cases.check(
                    format!("duality/morita-vanishing/s{s}/k{k}/{name}"),
                    "<z^k, psi>_M = 0 for k <= s - 2",
                    "pairing kills polynomials",
                    || {
                        let psi = psi.clone()?;
                        let (value, _) = morita_pairing(s, &phi, &psi)?;
                        Ok(Outcome::new(
                            value.certified_eq(&zero)?,
                            json!({ "s": s, "k": k, "psi": psi.to_string(), "value": value.to_string() }),
                        ))
                    },
                );
            }
        }
    }
}

/// Pairing values computed by hand from single residues.
pub fn morita_examples(ctx: &Ctx, cases: &mut Cases) {
    let anchor = "residue pairing values";
    let params = match ctx.field_with(2) {
        Ok(k) => k,
        Err(e) => {
            cases.skip("duality/morita-example", "pairing values", anchor, e.to_string());
            return;
        }
    };
    let one = PadicScalar::one(params);
    let mut rng = ctx.rng(2000);
    let z = off_base_point(&mut rng, params);
    let r = PadicScalar::from_i64(params, 1 + params.p() as i64);
    let examples: Vec<(&str, &str, i64, Result<(RationalFunction, RationalFunction, PadicScalar)>)> = vec![
        ("kernel-one", "<(Z - z)^-1, 1> = 1", 2, point_kernel(z, -1).map(|k| (k, RationalFunction::one(params), one))),
        (
            "constant-simple-pole",
            "<1, (z - r)^-1> = 0",
            2,
            Ok((RationalFunction::one(params), RationalFunction::linear_power(r, -1), PadicScalar::zero(params))),
        ),
        (
            "kernel-double-pole",
            "<(Z - z)^-1, (z - 1)^-2> = (Z - 1)^-2",
            2,
            point_kernel(z, -1).and_then(|k| Ok((k, RationalFunction::linear_power(one, -2), (z - one).pow(-2)?))),
        ),
        (
            "weighted-kernel-triple-pole",
            "<z (Z - z)^-1, (z - 1)^-3> = Z (Z - 1)^-3",
            3,
            point_kernel(z, -1).and_then(|k| {
                let phi = k.mul(&RationalFunction::z(params));
                Ok((phi, RationalFunction::linear_power(one, -3), z * (z - one).pow(-3)?))
            }),
        ),
    ];
    for (name, identity, s, data) in examples {
        cases.check(format!("duality/morita-example/{name}"), identity, anchor, || {
            let (phi, psi, expected) = data?;
            let (value, places) = morita_pairing(s, &phi, &psi)?;
            let report = PairingReport::new(identity, value, expected, places.iter().map(|p| format!("{p:?}")).collect())?;
            Ok(reports_outcome(&[report]))
        });
    }
}

/// `⟨T_{s-2}(g) φ, π_s(g) ψ⟩ = ⟨φ, ψ⟩` for `g` in `SL(2, F)`.
pub fn morita_invariance(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let mut rng = ctx.rng(2100);
    let gens = match generators(params) {
        Ok(g) => g,
        Err(e) => {
            cases.skip("duality/morita-invariance", "pairing is invariant", "invariance of the pairing", e.to_string());
            return;
        }
    };
    for s in ctx.weights(&[2, 3, 4]).into_iter().filter(|&s| s >= 2) {
        for i in 0..10 {
            let phi = test_function(&mut rng, params, s - 2);
            let psi = bounded_function(&mut rng, params, -s);
            let random = siegel_core::sample::sp_element(&mut rng, params, 1, 2);
            for (name, g) in gens.iter().map(|(k, g)| (k.to_string(), g.clone())).chain([("random".to_string(), random)]) {
                cases.check(
                    format!("duality/morita-invariance/s{s}/{i:02}/{name}"),
                    "<T_(s-2)(g) phi, pi_s(g) psi>_M = <phi, psi>_M",
                    "invariance of the pairing",
                    || {
                        let (before, _) = morita_pairing(s, &phi, &psi)?;
                        let (after, places) = morita_pairing(s, &t_s_act(s - 2, &g, &phi)?, &pi_s_act(s, &g, &psi)?)?;
                        let report = PairingReport::new(
                            "<T(g) phi, pi(g) psi> = <phi, psi>",
                            after,
                            before,
                            places.iter().map(|p| format!("{p:?}")).collect(),
                        )?;
                        Ok(reports_outcome(&[report]))
                    },
                );
            }
        }
    }
}

/// Random function with no pole on the base line and degree at most `bound`
/// at infinity. Poles sit at `π` and `1 + π` when `K` is ramified; otherwise
/// the function is a polynomial.
fn test_function(rng: &mut ChaCha8Rng, params: FieldParams, bound: i64) -> RationalFunction {
    let pi = PadicScalar::pi(params);
    let mut denom = RationalFunction::one(params);
    let mut total = 0i64;
    if params.e() > 1 {
        for r in [pi, PadicScalar::one(params) + pi] {
            let k = rng.gen_range(0..=2i64);
            denom = denom.mul(&RationalFunction::linear_power(r, -k));
            total += k;
        }
    }
    let coeffs = (0..=(total + bound) as usize).map(|_| PadicScalar::from_i64(params, integer(rng, params.p(), 2))).collect();
    RationalFunction::from_poly(Poly::new(params, coeffs)).mul(&denom)
}

/// Random function with poles among `0, 1, p, -1` and degree at most `bound`
/// at infinity.
fn bounded_function(rng: &mut ChaCha8Rng, params: FieldParams, bound: i64) -> RationalFunction {
    let mut denom = RationalFunction::one(params);
    let mut total = 0i64;
    for (_, r) in special_poles(params) {
        let k = rng.gen_range(0..=2i64);
        denom = denom.mul(&RationalFunction::linear_power(r, -k));
        total += k;
    }
    if total + bound < 0 {
        denom = denom.mul(&RationalFunction::linear_power(PadicScalar::one(params), bound + total));
        total = -bound;
    }
    let degree = (total + bound) as usize;
    let coeffs = (0..=degree).map(|_| PadicScalar::from_i64(params, integer(rng, params.p(), 2))).collect();
    RationalFunction::from_poly(Poly::new(params, coeffs)).mul(&denom)
}
