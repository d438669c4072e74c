use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;
use siegel_core::rational::partial_fractions;
use siegel_core::sample::{integer, rational_with_poles, sp_element, unit_integer};
use siegel_core::series::{casselman, pi_s_act, point_kernel, t_s_act};
use siegel_core::{Error, FieldParams, PadicScalar, Place, Poly, RationalFunction, Result, SymplecticElement};

use super::agree_fn;
use crate::config::Ctx;
use crate::report::{Cases, Outcome};

/// Poles drawn from `F`: small integers and `1/p`.
fn base_poles(rng: &mut ChaCha8Rng, params: FieldParams, count: usize) -> Vec<PadicScalar> {
    let p = params.p() as i64;
    let mut poles: Vec<PadicScalar> = Vec::new();
    while poles.len() < count {
        let r = if rng.gen_bool(0.25) {
            PadicScalar::from_ratio(params, integer(rng, params.p(), 1), p).expect("p invertible")
        } else {
            PadicScalar::from_i64(params, integer(rng, params.p(), 2))
        };
        if !poles.contains(&r) {
            poles.push(r);
        }
    }
    poles
}

fn random_function(rng: &mut ChaCha8Rng, params: FieldParams) -> RationalFunction {
    let count = rng.gen_range(1..=3);
    let poles = base_poles(rng, params, count);
    let degree = rng.gen_range(1..=5);
    rational_with_poles(rng, params, &poles, 3, degree)
}

pub fn generators(params: FieldParams) -> Result<Vec<(&'static str, SymplecticElement)>> {
    let one = PadicScalar::one(params);
    let zero = PadicScalar::zero(params);
    let p = PadicScalar::from_i64(params, params.p() as i64);
    Ok(vec![
        ("unipotent", SymplecticElement::sl2(one, one, zero, one)?),
        ("torus", SymplecticElement::sl2(p, zero, zero, p.inv()?)?),
        ("weyl", SymplecticElement::weyl(params, 1)),
    ])
}

pub fn run(ctx: &Ctx, cases: &mut Cases) {
    group_laws(ctx, cases);
    partial_fraction_forms(ctx, cases);
    irreducible_poles(ctx, cases);
    n0_membership(ctx, cases);
    laurent_degrees(ctx, cases);
    residues(ctx, cases);
}

type Action = fn(i64, &SymplecticElement, &RationalFunction) -> Result<RationalFunction>;

/// `π_s(gh) = π_s(g) π_s(h)` and `T_s(gh) = T_s(g) T_s(h)`.
fn group_laws(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let weights = ctx.weights(&[-2, -1, 0, 1, 2, 3]);
    let mut rng = ctx.rng(1100);
    for i in 0..ctx.counts.group_law {
        let s = weights[i % weights.len()];
        let g = sp_element(&mut rng, params, 1, 2);
        let h = sp_element(&mut rng, params, 1, 2);
        let f = random_function(&mut rng, params);
        for (name, act) in [("pi", pi_s_act as Action), ("t", t_s_act as Action)] {
            cases.check(
                format!("series/group-law/{name}/{i:03}"),
                "rho_s(gh) f = rho_s(g) rho_s(h) f",
                "representation property",
                || {
                    let gh = g.mul(&h)?;
                    let lhs = act(s, &gh, &f)?;
                    let rhs = act(s, &g, &act(s, &h, &f)?)?;
                    Ok(Outcome::new(
                        agree_fn(&lhs, &rhs)?,
                        json!({
                            "s": s,
                            "g": g.matrix().to_string(),
                            "h": h.matrix().to_string(),
                            "f": f.to_string(),
                            "lhs": lhs.to_string(),
                            "rhs": rhs.to_string(),
                        }),
                    ))
                },
            );
        }
    }
}

/// Polynomial plus principal parts reassemble to the function.
fn partial_fraction_forms(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let mut rng = ctx.rng(1200);
    for i in 0..ctx.counts.partial_fractions {
        let f = random_function(&mut rng, params);
        cases.check(
            format!("series/partial-fractions/{i:03}"),
            "f = polynomial part + sum of principal parts",
            "partial fraction decomposition",
            || {
                let form = partial_fractions(&f)?;
                let back = form.reassemble();
                let poles = f.linear_poles().count();
                Ok(Outcome::new(
                    agree_fn(&f, &back)? && form.poles.len() == poles,
                    json!({ "f": f.to_string(), "reassembled": back.to_string(), "poles": poles }),
                ))
            },
        );
    }
}

/// Poles outside `F` are refused.
fn irreducible_poles(ctx: &Ctx, cases: &mut Cases) {
    let identity = "poles outside F have no principal part over F";
    let anchor = "partial fraction decomposition";
    let params = match ctx.field_with(2) {
        Ok(k) => k,
        Err(e) => {
            cases.skip("series/irreducible-pole", identity, anchor, e.to_string());
            return;
        }
    };
    let pi = PadicScalar::pi(params);
    let cases_in: [(&str, RationalFunction); 3] = [
        ("pi", RationalFunction::linear_power(pi, -1)),
        ("minus-pi", RationalFunction::linear_power(-pi, -2)),
        (
            "pi-squared",
            RationalFunction::new(Poly::one(params), Poly::linear(pi).mul(&Poly::linear(-pi)))
                .expect("nonzero denominator"),
        ),
    ];
    for (name, f) in cases_in {
        cases.check(format!("series/irreducible-pole/{name}"), identity, anchor, || {
            let refused = matches!(partial_fractions(&f), Err(Error::IrreduciblePole));
            Ok(Outcome::new(refused, json!({ "f": f.to_string(), "e": params.e(), "refused": refused })))
        });
    }
}

/// Membership in the subspace whose principal parts have only orders `≥ s`.
fn n0_membership(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let one = PadicScalar::one(params);
    let cube = RationalFunction::from_poly(Poly::monomial(one, 3));
    let at_one = |k| RationalFunction::linear_power(one, k);
    let at_zero = |k| RationalFunction::linear_power(PadicScalar::zero(params), k);
    let examples: Vec<(&str, RationalFunction, u32, bool)> = vec![
        ("pure-order-s", at_one(-2), 2, true),
        ("with-polynomial", at_one(-3).add(&cube), 3, true),
        ("mixed-orders", at_one(-2).add(&at_one(-1)), 2, false),
        ("simple-pole-weight-one", at_one(-1).add(&at_zero(-1)), 1, true),
        ("simple-pole-weight-two", at_zero(-1), 2, false),
        ("polynomial", cube, 4, true),
    ];
    for (name, f, s, expected) in examples {
        cases.check(
            format!("series/n0/{name}"),
            "principal parts start at order s",
            "principal part filtration",
            || {
                let got = partial_fractions(&f)?.in_n0_s(s);
                Ok(Outcome::new(got == expected, json!({ "f": f.to_string(), "s": s, "member": got })))
            },
        );
    }
}

/// `deg_∞(z^a / (z - 1)^b) = a - b`.
fn laurent_degrees(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let one = PadicScalar::one(params);
    for a in 0..4usize {
        for b in 0..4i64 {
            let f = RationalFunction::from_poly(Poly::monomial(one, a)).mul(&RationalFunction::linear_power(one, -b));
            cases.check(
                format!("series/laurent-degree/a{a}-b{b}"),
                "degree at infinity of z^a / (z - 1)^b is a - b",
                "order at infinity",
                || {
                    let d = f.laurent_degree_at_infinity();
                    Ok(Outcome::new(d == Some(a as i64 - b), json!({ "f": f.to_string(), "degree": d })))
                },
            );
        }
    }
}

/// `Res_∞ (Z - z)⁻¹ dz = 1` and the residue theorem on random forms.
fn residues(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let mut rng = ctx.rng(1300);
    for i in 0..4 {
        let z = PadicScalar::from_i64(params, integer(&mut rng, params.p(), 2));
        cases.check(
            format!("series/residue-infinity/{i}"),
            "Res_inf (Z - z)^-1 dz = 1",
            "residue at infinity",
            || {
                let f = point_kernel(z, -1)?;
                let r = f.residue_at(&Place::Infinity)?;
                Ok(Outcome::new(r.certified_eq(&PadicScalar::one(params))?, json!({ "Z": z.to_string(), "residue": r.to_string() })))
            },
        );
    }
    for i in 0..ctx.counts.residues {
        let f = random_function(&mut rng, params);
        let scale = PadicScalar::from_i64(params, unit_integer(&mut rng, params.p(), 2));
        let f = f.scale(&scale);
        cases.check(
            format!("series/residue-sum/{i:03}"),
            "sum of residues of f dz over P^1 is 0",
            "residue theorem",
            || {
                let total = f.residue_sum()?;
                Ok(Outcome::new(
                    total.certified_eq(&PadicScalar::zero(params))?,
                    json!({ "f": f.to_string(), "sum": total.to_string() }),
                ))
            },
        );
    }
}

/// `D^(s+1)` intertwines `T_s` with `T_(-s-2)` and kills exactly the
/// polynomials of degree `≤ s`.
pub fn run_casselman(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let p = params.p() as i64;
    let weights: Vec<i64> = ctx.weights(&[0, 1, 2, 3]).into_iter().filter(|&s| s >= 0).collect();
    let gens = match generators(params) {
        Ok(g) => g,
        Err(e) => {
            cases.skip("casselman/intertwining", "D T_s(g) = T_(-s-2)(g) D", "Casselman operator", e.to_string());
            return;
        }
    };
    let one = PadicScalar::one(params);
    let big_z = PadicScalar::from_ratio(params, 1, p).expect("p invertible");
    let other_z = PadicScalar::from_i64(params, 1 + p);
    for &s in &weights {
        let zs = RationalFunction::from_poly(Poly::monomial(one, s as usize));
        let tests: Vec<(&str, Result<RationalFunction>)> = vec![
            ("kernel", point_kernel(big_z, -1)),
            ("kernel-squared", point_kernel(other_z, -2)),
            ("constant", Ok(RationalFunction::one(params))),
            ("monomial", Ok(zs.clone())),
            ("monomial-over-linear", Ok(zs.mul(&RationalFunction::linear_power(one, -1)))),
        ];
        for (gname, g) in &gens {
            for (fname, f) in &tests {
                cases.check(
                    format!("casselman/intertwining/s{s}/{gname}/{fname}"),
                    "D^(s+1) T_s(g) f = T_(-s-2)(g) D^(s+1) f",
                    "Casselman operator",
                    || {
                        let f = f.clone()?;
                        let lhs = casselman(s, &t_s_act(s, g, &f)?)?;
                        let rhs = t_s_act(-s - 2, g, &casselman(s, &f)?)?;
                        Ok(Outcome::new(
                            agree_fn(&lhs, &rhs)?,
                            json!({ "s": s, "f": f.to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string() }),
                        ))
                    },
                );
            }
        }
        for k in 0..=(s + 3) as usize {
            cases.check(
                format!("casselman/kernel/s{s}/k{k}"),
                "D^(s+1) z^k = 0 iff k <= s",
                "Casselman kernel",
                || {
                    let image = casselman(s, &RationalFunction::from_poly(Poly::monomial(one, k)))?;
                    let vanishes = agree_fn(&image, &RationalFunction::zero(params))?;
                    Ok(Outcome::new(vanishes == (k as i64 <= s), json!({ "s": s, "k": k, "image": image.to_string() })))
                },
            );
        }
        if s >= 1 {
            cases.check(
                format!("casselman/kernel-derivative/s{s}"),
                "D^(s-1) (Z - z)^-1 = (s-1)! (Z - z)^-s",
                "Casselman operator on point kernels",
                || {
                    let lhs = casselman(s - 2, &point_kernel(big_z, -1)?)?;
                    let factorial = (1..s).product::<i64>();
                    let rhs = point_kernel(big_z, -s)?.scale(&PadicScalar::from_i64(params, factorial));
                    Ok(Outcome::new(agree_fn(&lhs, &rhs)?, json!({ "s": s, "lhs": lhs.to_string(), "rhs": rhs.to_string() })))
                },
            );
        }
    }
}
