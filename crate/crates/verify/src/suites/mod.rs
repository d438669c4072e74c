//! Case families grouped into suites. Each family draws from its own seeded
//! stream, so a suite run alone produces the same records as inside `all`.

pub mod duality;
pub mod series;
pub mod siegel;
pub mod symplectic;

use siegel_core::{KMatrix, RationalFunction, Result};

use crate::config::{ConfigError, Ctx, Suite, SuiteConfig};
use crate::report::{Cases, SuiteReport};

pub fn run_suite(config: &SuiteConfig) -> std::result::Result<SuiteReport, ConfigError> {
    let ctx = Ctx::new(config)?;
    let mut cases = Cases::default();
    match config.suite {
        Suite::Symplectic => symplectic::run(&ctx, &mut cases),
        Suite::Siegel => siegel::run(&ctx, &mut cases, true)?,
        Suite::Series => series::run(&ctx, &mut cases),
        Suite::Casselman => series::run_casselman(&ctx, &mut cases),
        Suite::Duality => duality::run(&ctx, &mut cases),
        Suite::All => {
            symplectic::run(&ctx, &mut cases);
            siegel::run(&ctx, &mut cases, false)?;
            series::run(&ctx, &mut cases);
            series::run_casselman(&ctx, &mut cases);
            duality::run(&ctx, &mut cases);
        }
    }
    let summary = serde_json::to_value(config).expect("config serializes");
    Ok(SuiteReport::new(config.suite.name(), summary, cases.records))
}

/// Entrywise equality that refuses when too few digits agree.
pub(crate) fn agree(a: &KMatrix, b: &KMatrix) -> Result<bool> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return Ok(false);
    }
    for (x, y) in a.entries().iter().zip(b.entries()) {
        if !x.certified_eq(y)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Equality of rational functions: the cross products `a_num b_den` and
/// `b_num a_den` must agree coefficientwise with certified digits.
pub(crate) fn agree_fn(a: &RationalFunction, b: &RationalFunction) -> Result<bool> {
    let left = a.numerator().mul(&b.denominator());
    let right = b.numerator().mul(&a.denominator());
    let n = left.coeffs().len().max(right.coeffs().len());
    for k in 0..n {
        if !left.coeff(k).certified_eq(&right.coeff(k))? {
            return Ok(false);
        }
    }
    Ok(true)
}
