//! Surjective finite-fiber charts of rational varieties.
//!
//! * [`exactpoly`]: exact scalars, sparse polynomials, resultants, roots.
//! * [`varspace`]: products of affine and projective spaces and polynomial maps.
//! * [`atlasbuild`]: explicit chart constructions with provenance.
//! * [`chartverify`]: base-point, surjectivity, fiber and degree evidence.
//! * [`obstruct`]: verdicts on affine surfaces that admit no finite surjective chart.

pub mod exactpoly;
pub mod varspace;
pub mod atlasbuild;
pub mod chartverify;
pub mod obstruct;
