use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use siegel_core::sample::{gl_integral, integer, integral_pair, sp_integral, symmetric_integral, unit_integer};
use siegel_core::siegel::{
    enumerate_reps, in_sigma_m, lemma_equivalence_check, make_diagonal_point, translation_lemma_check, IntPair,
    MembershipCertificate,
};
use siegel_core::symplectic::{mobius_action, right_action};
use siegel_core::{Error, FieldParams, KMatrix, PadicScalar, RepSet, Result, SiegelPoint, SymplecticElement};

use super::symplectic::sample_point;
use crate::config::{ConfigError, Ctx};
use crate::report::{Cases, Outcome};

/// Ramification needed for sample points of `Σ(1)` in size `n`.
fn needed(n: usize) -> u32 {
    if n == 1 {
        2
    } else {
        9
    }
}

/// Representative sets built on demand.
#[derive(Default)]
struct RepCache {
    sets: BTreeMap<(u64, usize, u32), std::result::Result<RepSet, Error>>,
}

impl RepCache {
    fn get(&mut self, p: u64, n: usize, m: u32) -> Result<&RepSet> {
        self.sets
            .entry((p, n, m))
            .or_insert_with(|| enumerate_reps(p, n, m))
            .as_ref()
            .map_err(Clone::clone)
    }
}

pub fn pair_json(pair: &IntPair) -> Value {
    json!({ "X": pair.x, "Y": pair.y })
}

pub fn certificate_json(z: &SiegelPoint, cert: &MembershipCertificate) -> Value {
    json!({
        "point": z.matrix().to_string(),
        "level": cert.level,
        "threshold": cert.threshold,
        "witness": pair_json(&cert.witness),
        "witness_det": cert.witness_det.to_string(),
        "verdict": cert.member,
    })
}

pub fn run(ctx: &Ctx, cases: &mut Cases, strict: bool) -> std::result::Result<(), ConfigError> {
    let e = ctx.params.e();
    let runnable: Vec<usize> = ctx.dims().into_iter().filter(|&n| e.is_multiple_of(needed(n))).collect();
    if strict && (ctx.n.is_some() || runnable.is_empty()) {
        if let Some(&n) = ctx.dims().iter().find(|&&n| !e.is_multiple_of(needed(n))) {
            return Err(ConfigError::Ramification { n, needed: needed(n), e });
        }
    }
    let mut cache = RepCache::default();
    rep_counts(ctx, cases, &mut cache);
    exclusion(ctx, cases, &mut cache);
    equivalence(ctx, cases);
    for n in ctx.dims() {
        if !runnable.contains(&n) {
            let reason = format!("sample points for n = {n} need e divisible by {}, got {e}", needed(n));
            cases.skip(format!("siegel/diagonal/n{n}"), "diagonal point lies in some Sigma(m)", "diagonal points", reason.clone());
            cases.skip(format!("siegel/translation/n{n}"), "g Sigma(m) in Sigma(nm)", "integral translation", reason);
        }
    }
    for &n in &runnable {
        diagonal(ctx, cases, &mut cache, n);
        monotonicity(ctx, cases, &mut cache, n);
        translation(ctx, cases, &mut cache, n);
    }
    Ok(())
}

fn rep_counts(ctx: &Ctx, cases: &mut Cases, cache: &mut RepCache) {
    let p = ctx.params.p();
    for n in ctx.dims() {
        let top = if n == 1 { ctx.m.min(3) } else { 0 };
        for m in 0..=top {
            let level = n as u32 * m + 1;
            cases.check(
                format!("siegel/reps/n{n}/m{m}"),
                "one primitive pair per GL(n, o)-class mod p^(nm+1)",
                "representative sets",
                || {
                    let reps = cache.get(p, n, m)?;
                    let expected = if n == 1 {
                        p.pow(m) * (p + 1)
                    } else {
                        (p + 1) * (p * p + 1) * p.pow(3 * (level - 1))
                    };
                    let has_origin = reps.pairs.first().is_some_and(|r| {
                        r.x.iter().all(|&v| v == 0) && (0..n * n).all(|k| r.y[k] == i64::from(k % (n + 1) == 0))
                    });
                    let q = p.pow(level) as i64;
                    let primitive = reps.pairs.iter().all(|r| r.plucker.iter().any(|c| c.rem_euclid(p as i64) != 0));
                    let distinct = n != 1
                        || reps.pairs.iter().enumerate().all(|(i, a)| {
                            reps.pairs[..i].iter().all(|b| (a.x[0] * b.y[0] - a.y[0] * b.x[0]).rem_euclid(q) != 0)
                        });
                    Ok(Outcome::new(
                        reps.pairs.len() as u64 == expected && has_origin && primitive && distinct,
                        json!({ "n": n, "m": m, "count": reps.pairs.len(), "expected": expected }),
                    ))
                },
            );
        }
    }
}

fn membership_scan(z: &SiegelPoint, levels: impl Iterator<Item = u32>, cache: &mut RepCache) -> Result<Vec<MembershipCertificate>> {
    let p = z.params().p();
    levels.map(|m| in_sigma_m(z, m, cache.get(p, z.n(), m)?)).collect()
}

/// Diagonal points with entries of valuation `e / (n+1)^k` lie in some
/// `Σ(m)`, `m ≤ 3`.
fn diagonal(ctx: &Ctx, cases: &mut Cases, cache: &mut RepCache, n: usize) {
    let params = ctx.params;
    let e = params.e() as u64;
    let exponent_sets: Vec<Vec<u32>> = if n == 1 {
        (1..6u32).filter(|&k| e.is_multiple_of(2u64.pow(k))).map(|k| vec![k]).collect()
    } else {
        vec![vec![1, 2], vec![2, 1]]
    };
    for ks in exponent_sets {
        let label = ks.iter().map(u32::to_string).collect::<Vec<_>>().join("-");
        cases.check(
            format!("siegel/diagonal/n{n}/k{label}"),
            "diagonal point lies in some Sigma(m), m <= 3",
            "diagonal points",
            || {
                let z = make_diagonal_point(params, &ks)?;
                let mut last = None;
                for m in 0..=3 {
                    let reps = match cache.get(params.p(), n, m) {
                        Ok(r) => r,
                        Err(Error::Unsupported(_)) if last.is_some() => break,
                        Err(e) => return Err(e),
                    };
                    let cert = in_sigma_m(&z, m, reps)?;
                    let member = cert.member;
                    last = Some(cert);
                    if member {
                        break;
                    }
                }
                let cert = last.ok_or(Error::Unsupported("no representative set".into()))?;
                Ok(Outcome::new(cert.member, certificate_json(&z, &cert)))
            },
        );
    }
}

/// Points of `Sym(n, F)` fail every `Σ(m)`.
fn exclusion(ctx: &Ctx, cases: &mut Cases, cache: &mut RepCache) {
    let params = ctx.params;
    let p = params.p() as i64;
    for n in ctx.dims() {
        let mut rng = ctx.rng(700 + n as u64);
        let top = if n == 1 { ctx.m.min(3) } else { 1 };
        for i in 0..12 {
            let z = if n == 1 {
                let x = match i {
                    0 => PadicScalar::zero(params),
                    1 => PadicScalar::from_i64(params, p * p),
                    2 => PadicScalar::from_ratio(params, 1, p).expect("p invertible"),
                    3 => PadicScalar::from_ratio(params, 1 + p, p * p).expect("p invertible"),
                    _ => PadicScalar::from_i64(params, integer(&mut rng, p as u64, 3) - p),
                };
                SiegelPoint::scalar(x)
            } else {
                let s = symmetric_integral(&mut rng, params, 2, 2);
                let s = if i % 3 == 2 { s.scale(&PadicScalar::pi_pow(params, -(params.e() as i64))) } else { s };
                SiegelPoint::new(s).expect("symmetric")
            };
            cases.check(
                format!("siegel/exclusion/n{n}/{i:02}"),
                "Z in Sym(n, F) lies in no Sigma(m)",
                "base field points excluded",
                || {
                    let certs = membership_scan(&z, 0..=top, cache)?;
                    let pass = certs.iter().all(|c| !c.member);
                    let last = certs.last().expect("at least one level");
                    Ok(Outcome::new(pass, certificate_json(&z, last)))
                },
            );
        }
    }
}

/// `Σ(m) ⊂ Σ(m+1)` on sample points.
fn monotonicity(ctx: &Ctx, cases: &mut Cases, cache: &mut RepCache, n: usize) {
    let params = ctx.params;
    let mut rng = ctx.rng(800 + n as u64);
    let top = if n == 1 { ctx.m.clamp(1, 3) } else { 2 };
    for i in 0..10 {
        let z = if n == 1 { level_point(&mut rng, params, rng_level(i, top)) } else { sample_point(&mut rng, params, n) };
        cases.check(
            format!("siegel/monotone/n{n}/{i:02}"),
            "Z in Sigma(m) implies Z in Sigma(m+1)",
            "filtration is increasing",
            || {
                let z = z?;
                let certs = match membership_scan(&z, 0..=top, cache) {
                    Err(Error::Unsupported(_)) if n == 2 => membership_scan(&z, 0..=1, cache)?,
                    other => other?,
                };
                let pass = certs.windows(2).all(|w| !w[0].member || w[1].member) && certs.iter().any(|c| c.member);
                let verdicts: Vec<bool> = certs.iter().map(|c| c.member).collect();
                Ok(Outcome::new(pass, json!({ "point": z.matrix().to_string(), "membership": verdicts })))
            },
        );
    }
}

fn rng_level(i: usize, top: u32) -> u32 {
    1 + (i as u32 % top.max(1))
}

/// `n = 1` point of `Σ(m)` at distance `π^j`, `(m-1)e < j ≤ me`, from `F`,
/// moved by an integral element.
fn level_point(rng: &mut ChaCha8Rng, params: FieldParams, m: u32) -> Result<SiegelPoint> {
    let e = params.e() as i64;
    let lo = (m as i64 - 1) * e + 1;
    let candidates: Vec<i64> = (lo.max(1)..=m as i64 * e).filter(|j| j % e != 0).collect();
    let j = candidates[rng.gen_range(0..candidates.len())];
    let a = PadicScalar::from_i64(params, integer(rng, params.p(), 2));
    let u = PadicScalar::from_i64(params, unit_integer(rng, params.p(), 1));
    let z = a + PadicScalar::pi_pow(params, j) * u;
    let g = sp_integral(rng, params, 1, 3);
    SiegelPoint::new(mobius_action(&g, &KMatrix::diag(params, &[z]))?)
}

/// Predicates agree for pairs congruent modulo `p^(nm+1)` up to `GL(n, o)`.
fn equivalence(ctx: &Ctx, cases: &mut Cases) {
    let params = ctx.params;
    for n in ctx.dims() {
        let mut rng = ctx.rng(900 + n as u64);
        let top = ctx.m.min(2);
        for i in 0..10 {
            let m = i as u32 % (top + 1);
            let level = n as u32 * m + 1;
            let pair = integral_pair(&mut rng, params, n);
            let shift = symmetric_integral(&mut rng, params, n, 1).scale(&PadicScalar::from_i64(params, params.p() as i64).pow(level as i64).expect("integer power"));
            let h = gl_integral(&mut rng, params, n, 1);
            cases.check(
                format!("siegel/equivalence/n{n}/{i:02}"),
                "Sigma(m; X, Y) = Sigma(m; X', Y') when (X, Y) = h(X', Y') mod p^(nm+1)",
                "congruent pairs cut out the same piece",
                || {
                    let moved = right_action(&pair, &SymplecticElement::upper_unipotent(&shift)?)?;
                    let other = moved.left_mul(&h.inverse()?)?;
                    let out = lemma_equivalence_check(m, &pair, &other, &h)?;
                    Ok(Outcome::new(
                        out.agree && out.samples > 0,
                        json!({
                            "m": m,
                            "X": pair.x().to_string(),
                            "Y": pair.y().to_string(),
                            "X'": other.x().to_string(),
                            "Y'": other.y().to_string(),
                            "samples": out.samples,
                            "inside": out.inside,
                        }),
                    ))
                },
            );
        }
    }
}

/// `gZ ∈ Σ(nm)` for integral `g` and `Z ∈ Σ(m)`.
fn translation(ctx: &Ctx, cases: &mut Cases, cache: &mut RepCache, n: usize) {
    let params = ctx.params;
    let p = params.p();
    let mut rng = ctx.rng(1000 + n as u64);
    let count = if n == 1 { ctx.counts.translation_n1 } else { ctx.counts.translation_n2 };
    let top = ctx.m.clamp(1, 3);
    for i in 0..count {
        let m = if n == 1 { rng_level(i, top) } else { 1 };
        let g = sp_integral(&mut rng, params, n, 4);
        let z = if n == 1 { level_point(&mut rng, params, m) } else { sample_point(&mut rng, params, n) };
        cases.check(
            format!("siegel/translation/n{n}/{i:03}"),
            "g Sigma(m) in Sigma(nm) for g in Sp(2n, o)",
            "integral translation",
            || {
                let z = z?;
                cache.get(p, n, m)?;
                cache.get(p, n, n as u32 * m)?;
                let reps_m = cache.get(p, n, m)?.clone();
                let reps_nm = cache.get(p, n, n as u32 * m)?;
                let out = translation_lemma_check(&g, &z, m, &reps_m, reps_nm)?;
                Ok(Outcome::new(
                    out.premise.member && out.conclusion.member,
                    json!({
                        "g": g.matrix().to_string(),
                        "m": m,
                        "premise": certificate_json(&z, &out.premise),
                        "conclusion": certificate_json(&out.image, &out.conclusion),
                    }),
                ))
            },
        );
    }
}
