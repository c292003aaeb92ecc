//! The local density β_L = f^N · f^{−n²} · #G̃(κ) and everything it is assembled from.

mod exponents;
mod groups;

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

pub use exponents::{
    appendix_ledger, component_beta, compute_n, d_i, expected_form, needs_arf, reductive_factors, DimLedger,
    Exponents,
};
pub use groups::{FactorKind, ReductiveFactor};

use crate::error::{Error, Result, Stage};
use crate::forms::{sublattice_chain, FormKind, SublatticeChain};
use crate::io::decimal;
use crate::jordan::{jordan_split, Classification, JordanBlock, JordanDecomposition};
use crate::lattice::HermitianLattice;
use crate::ring::Case;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorEntry {
    #[serde(flatten)]
    pub factor: ReductiveFactor,
    #[serde(with = "decimal::biguint")]
    pub order: BigUint,
    pub dim: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DensityReport {
    pub case: Case,
    pub f: u64,
    pub n: usize,
    pub blocks: Vec<JordanBlock>,
    #[serde(flatten)]
    pub exponents: Exponents,
    /// (i, d_i) for each nonzero block.
    pub d_i: Vec<(i64, i64)>,
    pub beta: u32,
    pub factors: Vec<FactorEntry>,
    pub dim_reductive: i64,
    pub dim_unipotent_radical: i64,
    #[serde(rename = "order_Gtilde", with = "decimal::biguint")]
    pub order_gtilde: BigUint,
    pub appendix_ledger: DimLedger,
    /// β_L = mantissa · f^{f_exponent}.
    #[serde(with = "decimal::biguint")]
    pub mantissa: BigUint,
    pub f_exponent: i64,
    #[serde(rename = "beta_L", with = "decimal::bigrational")]
    pub beta_l: BigRational,
}

impl DensityReport {
    pub fn classification(&self) -> Classification {
        Classification { case: self.case, blocks: self.blocks.clone() }
    }
}

fn f_pow(f: u64, e: i64) -> BigRational {
    let base = BigRational::from_integer(BigInt::from(f));
    if e >= 0 {
        num_traits::pow(base, e as usize)
    } else {
        num_traits::pow(base.recip(), (-e) as usize)
    }
}

/// The report from type data and the Arf invariants of the blocks with [`needs_arf`].
pub fn assemble(cls: &Classification, f: u64, arfs: &BTreeMap<i64, u8>) -> DensityReport {
    let n = cls.total_rank();
    let n2 = (n * n) as i64;
    let exponents = compute_n(cls);
    let beta = component_beta(cls);
    let factors: Vec<FactorEntry> = reductive_factors(cls, arfs)
        .into_iter()
        .map(|factor| FactorEntry { order: factor.group_order(f), dim: factor.group_dim(), factor })
        .collect();
    let dim_reductive: i64 = factors.iter().map(|e| e.dim).sum();
    let mantissa: BigUint =
        factors.iter().fold(BigUint::one(), |acc, e| acc * &e.order) * (BigUint::one() << beta as usize);
    let dim_unipotent_radical = n2 - dim_reductive;
    let order_gtilde = BigUint::from(f).pow(dim_unipotent_radical as u32) * &mantissa;
    let f_exponent = exponents.n - dim_reductive;
    let beta_l = BigRational::from_integer(BigInt::from(mantissa.clone())) * f_pow(f, f_exponent);
    DensityReport {
        case: cls.case,
        f,
        n,
        blocks: cls.blocks.clone(),
        exponents,
        d_i: cls.blocks.iter().map(|b| (b.i, d_i(b.i, b.rank))).collect(),
        beta,
        factors,
        dim_reductive,
        dim_unipotent_radical,
        order_gtilde,
        appendix_ledger: appendix_ledger(cls),
        mantissa,
        f_exponent,
        beta_l,
    }
}

/// Residue-form data of every nonzero block, cross-checked against the type table.
pub fn block_chains(dec: &JordanDecomposition) -> Result<Vec<SublatticeChain>> {
    let case = dec.case();
    let mut out = Vec::new();
    for b in &dec.classification.blocks {
        let chain = sublattice_chain(dec, b.i)?;
        let (kind, dim) = expected_form(case, b);
        let form = match kind {
            FormKind::Symplectic => chain.symplectic.as_ref(),
            FormKind::Quadratic => chain.quadratic.as_ref(),
        };
        let got = form.map(|r| r.dim);
        if got != Some(dim) {
            return Err(Error::internal(
                Stage::Density,
                format!("residue form at i={} has dimension {got:?}, type table gives {dim}", b.i),
            ));
        }
        out.push(chain);
    }
    Ok(out)
}

/// Arf invariants of the blocks whose factor is an even orthogonal group.
pub fn block_arfs(dec: &JordanDecomposition, chains: &[SublatticeChain]) -> Result<BTreeMap<i64, u8>> {
    let mut arfs = BTreeMap::new();
    for (b, chain) in dec.classification.blocks.iter().zip(chains) {
        if needs_arf(dec.case(), b) {
            let a = chain.quadratic.as_ref().and_then(|q| q.arf).ok_or_else(|| {
                Error::internal(Stage::Density, format!("no Arf invariant at i={}", b.i))
            })?;
            arfs.insert(b.i, a);
        }
    }
    Ok(arfs)
}

/// Split, then build residue forms, raising the working precision when the forms need more
/// π-adic digits than the split kept.
pub fn analyze(lattice: &HermitianLattice) -> Result<(JordanDecomposition, Vec<SublatticeChain>)> {
    let mut l = lattice.clone();
    loop {
        let dec = jordan_split(&l)?;
        match block_chains(&dec) {
            Err(Error::PrecisionExhausted { .. }) if l.ring().precision() < 64 => {
                let k = (2 * l.ring().precision()).min(64);
                let ring = Arc::new(l.ring().with_precision(k)?);
                l = lattice.with_ring(&ring)?;
            }
            Err(e) => return Err(e),
            Ok(chains) => return Ok((dec, chains)),
        }
    }
}

/// The full density pipeline.
pub fn local_density(lattice: &HermitianLattice) -> Result<DensityReport> {
    if lattice.rank() == 0 {
        return Ok(assemble(&Classification::empty(lattice.ring().case()), lattice.ring().f(), &BTreeMap::new()));
    }
    let (dec, chains) = analyze(lattice)?;
    let arfs = block_arfs(&dec, &chains)?;
    Ok(assemble(&dec.classification, lattice.ring().f(), &arfs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingContext;
    use num_traits::ToPrimitive;

    fn ring(case: Case, r: usize) -> Arc<RingContext> {
        Arc::new(RingContext::new(case, r, &[1], 24).unwrap())
    }

    fn beta_l(l: &HermitianLattice) -> f64 {
        local_density(l).unwrap().beta_l.to_f64().unwrap()
    }

    #[test]
    fn small_unimodular_densities() {
        let r = ring(Case::One, 1);
        let h0 = local_density(&HermitianLattice::hyperbolic(&r, 0).unwrap()).unwrap();
        assert_eq!(h0.beta_l, BigRational::from_integer(3.into()));
        assert_eq!(h0.order_gtilde, BigUint::from(12u32));
        assert_eq!(beta_l(&HermitianLattice::diagonal(&r, &[1]).unwrap()), 2.0);
        assert_eq!(beta_l(&HermitianLattice::diagonal(&r, &[2]).unwrap()), 4.0);
        let r2 = ring(Case::Two, 1);
        assert_eq!(beta_l(&HermitianLattice::hyperbolic(&r2, 1).unwrap()), 24.0);
    }

    #[test]
    fn empty_lattice_has_density_one() {
        let r = ring(Case::Two, 2);
        assert!(local_density(&HermitianLattice::zero(&r)).unwrap().beta_l.is_one());
    }

    #[test]
    fn report_invariants() {
        let r = ring(Case::Two, 1);
        let l = HermitianLattice::diagonal(&r, &[1, 2, 4]).unwrap();
        let rep = local_density(&l).unwrap();
        let n2 = (rep.n * rep.n) as i64;
        assert_eq!(rep.appendix_ledger.l + rep.dim_reductive, n2);
        let lhs = f_pow(rep.f, rep.exponents.n - n2) * BigRational::from_integer(BigInt::from(rep.order_gtilde.clone()));
        assert_eq!(lhs, rep.beta_l);
    }
}
