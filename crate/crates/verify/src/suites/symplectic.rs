use rand::Rng;
use serde_json::json;
use siegel_core::sample::{gl_integral, integral_pair, sigma_point_n1, sigma_point_n2, small_symmetric, sp_element, symmetric_integral};
use siegel_core::symplectic::{
    automorphy_factor, gram_schmidt_complete, is_symplectic, mobius_action, sigma1_matrix, sigma_r_matrix, symmetric_basis,
    u0_decompose,
};
use siegel_core::{Error, FieldParams, KMatrix, PadicScalar, Result, SiegelPoint, SymplecticElement};

use super::agree;
use crate::config::Ctx;
use crate::report::{Cases, Outcome};

pub fn run(ctx: &Ctx, cases: &mut Cases) {
    relations(ctx, cases);
    u0(ctx, cases);
    cocycle(ctx, cases);
    differentials(ctx, cases);
    gram_schmidt(ctx, cases);
    wedge_powers(ctx, cases);
}

/// Field used for sample points of `Σ(1)` in size `n`.
pub fn point_field(ctx: &Ctx, n: usize) -> Result<FieldParams> {
    ctx.field_with(if n == 1 { 2 } else { 9 })
}

pub fn sample_point<R: Rng>(rng: &mut R, params: FieldParams, n: usize) -> Result<SiegelPoint> {
    if n == 1 {
        sigma_point_n1(rng, params)
    } else {
        sigma_point_n2(rng, params)
    }
}

/// `ᵗg J g = J`, the left block relations and the right block relations
/// agree on symplectic samples and on perturbed ones.
pub fn relations(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    let p = params.p() as i64;
    for n in ctx.dims() {
        let mut rng = ctx.rng(100 + n as u64);
        for i in 0..ctx.counts.relations {
            let g = sp_element(&mut rng, params, n, 4);
            let perturbed = i % 2 == 1;
            let mut m = g.matrix().clone();
            if perturbed {
                let (r, c) = (rng.gen_range(0..2 * n), rng.gen_range(0..2 * n));
                // Sized like the largest entries, so the change is visible above
                // the precision every relation carries.
                let top = m.min_valuation().unwrap_or(0);
                let bump = PadicScalar::from_i64(params, p.pow(rng.gen_range(0..3)) * rng.gen_range(1..p))
                    * PadicScalar::pi_pow(params, top);
                m.set(r, c, m.get(r, c) + bump);
            }
            cases.check(
                format!("symplectic/relations/n{n}/{i:03}"),
                "tgJg = J <=> left block relations <=> right block relations",
                "symplectic block relations",
                || {
                    let rep = is_symplectic(&m)?;
                    let consistent = rep.defining == rep.left_holds() && rep.defining == rep.right_holds();
                    let pass = consistent && (perturbed || rep.defining);
                    Ok(Outcome::new(
                        pass,
                        json!({
                            "n": n,
                            "perturbed": perturbed,
                            "g": m.to_string(),
                            "defining": rep.defining,
                            "left": rep.left_holds(),
                            "right": rep.right_holds(),
                            "failing_relations": rep.failures(),
                        }),
                    ))
                },
            );
        }
    }
}

/// `g = [[I, z₁], [0, I]] · diag(h, ᵗh⁻¹) · [[0, -I], [I, z₂]]` on the cell `det C ≠ 0`.
pub fn u0(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    for n in ctx.dims() {
        let mut rng = ctx.rng(200 + n as u64);
        for i in 0..ctx.counts.u0 {
            let mut attempt = 0;
            let (g, dec) = loop {
                let g = sp_element(&mut rng, params, n, 4);
                attempt += 1;
                match u0_decompose(&g) {
                    Ok(d) => break (g, Ok(d)),
                    Err(Error::NotInU0) if attempt < 50 => continue,
                    Err(e) => break (g, Err(e)),
                }
            };
            cases.check(
                format!("symplectic/u0/n{n}/{i:03}"),
                "g = [[I, z1], [0, I]] diag(h, th^-1) [[0, -I], [I, z2]]",
                "big cell decomposition",
                || {
                    let d = dec?;
                    let back = d.reassemble()?;
                    let exact = agree(&back, g.matrix())?;
                    let symmetric = d.z1.is_symmetric() && d.z2.is_symmetric();
                    let h_ok = agree(&d.h, &g.c().transpose().inverse()?)?;
                    Ok(Outcome::new(
                        exact && symmetric && h_ok,
                        json!({
                            "n": n,
                            "g": g.matrix().to_string(),
                            "z1": d.z1.to_string(),
                            "h": d.h.to_string(),
                            "z2": d.z2.to_string(),
                            "reassembles": exact,
                            "symmetric": symmetric,
                        }),
                    ))
                },
            );
        }
    }
}

/// `j(g₁g₂, Z) = j(g₁, g₂Z) j(g₂, Z)` for `Z ∈ Σ(1)`.
pub fn cocycle(ctx: &Ctx, cases: &mut Cases) {
    for n in ctx.dims() {
        let mut rng = ctx.rng(300 + n as u64);
        let params = match point_field(ctx, n) {
            Ok(k) => k,
            Err(e) => {
                cases.skip(format!("symplectic/cocycle/n{n}"), "j(g1 g2, Z) = j(g1, g2 Z) j(g2, Z)", "automorphy cocycle", e.to_string());
                continue;
            }
        };
        for i in 0..ctx.counts.cocycle {
            let g1 = sp_element(&mut rng, params, n, 3);
            let g2 = sp_element(&mut rng, params, n, 3);
            let z = sample_point(&mut rng, params, n);
            cases.check(
                format!("symplectic/cocycle/n{n}/{i:03}"),
                "j(g1 g2, Z) = j(g1, g2 Z) j(g2, Z)",
                "automorphy cocycle",
                || {
                    let z = z?;
                    let lhs = automorphy_factor(&g1.mul(&g2)?, z.matrix())?;
                    let moved = mobius_action(&g2, z.matrix())?;
                    let rhs = automorphy_factor(&g1, &moved)?.mul(&automorphy_factor(&g2, z.matrix())?)?;
                    Ok(Outcome::new(
                        agree(&lhs, &rhs)?,
                        json!({ "n": n, "Z": z.matrix().to_string(), "lhs": lhs.to_string(), "rhs": rhs.to_string() }),
                    ))
                },
            );
        }
    }
}

fn coords(z: &KMatrix) -> Vec<PadicScalar> {
    symmetric_basis(z.rows()).into_iter().map(|(i, j)| z.get(i, j)).collect()
}

/// Checks `v(x) ≥ bound` for every entry, refusing when a vanishing entry is
/// known to fewer digits.
fn entries_at_least(m: &KMatrix, bound: i64) -> Result<bool> {
    for x in m.entries() {
        match (x.valuation(), x.absolute_precision()) {
            (Some(v), _) => {
                if v < bound {
                    return Ok(false);
                }
            }
            (None, Some(a)) if a < bound => {
                return Err(Error::PrecisionLoss(format!("entry known modulo π^{a}, bound {bound}")));
            }
            _ => {}
        }
    }
    Ok(true)
}

/// First-order behaviour of the three generator types on `dZ`.
pub fn differentials(ctx: &Ctx, cases: &mut Cases) {
    for n in ctx.dims() {
        let mut rng = ctx.rng(400 + n as u64);
        let params = match point_field(ctx, n) {
            Ok(k) => k,
            Err(e) => {
                cases.skip(format!("symplectic/differential/n{n}"), "generator action on dZ", "differential action", e.to_string());
                continue;
            }
        };
        let small = (params.precision() / 4).max(2) as i64;
        for i in 0..ctx.counts.differential {
            let z = sample_point(&mut rng, params, n);
            let e = small_symmetric(&mut rng, params, n, small);
            let shift = symmetric_integral(&mut rng, params, n, 2);
            let h = gl_integral(&mut rng, params, n, 1);
            let z_ok = z.as_ref().map(|z| z.matrix().clone()).map_err(Clone::clone);
            let zw = z_ok.clone();
            cases.check(
                format!("symplectic/differential/n{n}/{i:03}/weyl"),
                "-(Z+E)^-1 + Z^-1 = Z^-1 E Z^-1 + O(E^2)",
                "differential of Z -> -Z^-1",
                || {
                    let z = zw?;
                    let zi = z.inverse()?;
                    let zei = z.add(&e)?.inverse()?;
                    let diff = zei.neg().add(&zi)?.sub(&zi.mul(&e)?.mul(&zi)?)?;
                    let v = |m: &KMatrix| m.min_valuation().unwrap_or(i64::MAX / 4);
                    let bound = 2 * v(&e) + 2 * v(&zi) + v(&zei);
                    Ok(Outcome::new(
                        entries_at_least(&diff, bound)?,
                        json!({ "n": n, "Z": z.to_string(), "E": e.to_string(), "bound": bound }),
                    ))
                },
            );
            let zu = z_ok.clone();
            cases.check(
                format!("symplectic/differential/n{n}/{i:03}/unipotent"),
                "[[I, z], [0, I]] Z = Z + z, j = I",
                "unipotent translation",
                || {
                    let z = zu?;
                    let g = SymplecticElement::upper_unipotent(&shift)?;
                    let moved = mobius_action(&g, &z)?;
                    let j = automorphy_factor(&g, &z)?;
                    let pass = agree(&moved, &z.add(&shift)?)? && agree(&j, &KMatrix::identity(params, n))?;
                    Ok(Outcome::new(pass, json!({ "n": n, "Z": z.to_string(), "z": shift.to_string() })))
                },
            );
            let zl = z_ok;
            cases.check(
                format!("symplectic/differential/n{n}/{i:03}/levi"),
                "diag(th^-1, h)(Z+E) - diag(th^-1, h)Z = sigma_1(th^-1) E",
                "levi action on dZ",
                || {
                    let z = zl?;
                    let g = SymplecticElement::levi(&h)?;
                    let hti = h.transpose().inverse()?;
                    let hi = h.inverse()?;
                    let direct = agree(&mobius_action(&g, &z)?, &hti.mul(&z)?.mul(&hi)?)?;
                    let delta = mobius_action(&g, &z.add(&e)?)?.sub(&mobius_action(&g, &z)?)?;
                    let predicted = sigma1_matrix(&hti)?.apply(&coords(&e))?;
                    let mut linear = true;
                    for (a, b) in coords(&delta).iter().zip(&predicted) {
                        linear &= a.certified_eq(b)?;
                    }
                    Ok(Outcome::new(direct && linear, json!({ "n": n, "Z": z.to_string(), "h": h.to_string() })))
                },
            );
        }
    }
}

/// The completion is symplectic and has the given pair as bottom row.
pub fn gram_schmidt(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    for n in ctx.dims() {
        let mut rng = ctx.rng(500 + n as u64);
        for i in 0..20 {
            let pair = integral_pair(&mut rng, params, n);
            let h = gl_integral(&mut rng, params, n, 2).scale(&PadicScalar::pi_pow(params, params.e() as i64 * rng.gen_range(-1..=1)));
            cases.check(
                format!("symplectic/completion/n{n}/{i:02}"),
                "completion g has bottom row (X Y) and tgJg = J",
                "symplectic completion",
                || {
                    let pair = pair.left_mul(&h)?;
                    let g = gram_schmidt_complete(&pair)?;
                    let symplectic = is_symplectic(g.matrix())?.is_symplectic();
                    let bottom = agree(&g.c(), pair.x())? && agree(&g.d(), pair.y())?;
                    Ok(Outcome::new(
                        symplectic && bottom,
                        json!({ "n": n, "X": pair.x().to_string(), "Y": pair.y().to_string(), "g": g.matrix().to_string() }),
                    ))
                },
            );
        }
    }
}

/// `σ_r` is multiplicative and its top power is `det σ_1`.
pub fn wedge_powers(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    for n in ctx.dims() {
        let mut rng = ctx.rng(600 + n as u64);
        let top = n * (n + 1) / 2;
        for i in 0..10 {
            let h1 = gl_integral(&mut rng, params, n, 2);
            let h2 = gl_integral(&mut rng, params, n, 2);
            cases.check(
                format!("symplectic/wedge/n{n}/{i:02}"),
                "sigma_r(h1 h2) = sigma_r(h1) sigma_r(h2), sigma_top = det sigma_1",
                "exterior powers of the adjoint action on dZ",
                || {
                    let mut pass = true;
                    for r in 0..=top {
                        let lhs = sigma_r_matrix(&h1.mul(&h2)?, r)?;
                        let rhs = sigma_r_matrix(&h1, r)?.mul(&sigma_r_matrix(&h2, r)?)?;
                        pass &= agree(&lhs, &rhs)?;
                    }
                    let det = sigma1_matrix(&h1)?.det()?;
                    pass &= sigma_r_matrix(&h1, top)?.get(0, 0).certified_eq(&det)?;
                    if n == 1 {
                        pass &= sigma1_matrix(&h1)?.get(0, 0).certified_eq(&(h1.get(0, 0) * h1.get(0, 0)))?;
                    }
                    Ok(Outcome::new(pass, json!({ "n": n, "h1": h1.to_string(), "h2": h2.to_string() })))
                },
            );
        }
    }
}
