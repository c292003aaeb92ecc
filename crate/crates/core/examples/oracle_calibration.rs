//! Compare the congruence-count oracle with the density formula on small lattices.

use std::sync::Arc;

use herm2::density::local_density;
use herm2::lattice::HermitianLattice;
use herm2::oracle::{budget_from_env, normalized_density, DEFAULT_BUDGET};
use herm2::ring::{Case, RingContext};

fn main() -> herm2::Result<()> {
    let budget = budget_from_env(DEFAULT_BUDGET);
    for case in [Case::One, Case::Two] {
        let r = Arc::new(RingContext::new(case, 1, &[1], 16)?);
        let two_delta = r.from_int(2);
        let mut cases: Vec<(String, HermitianLattice)> = vec![
            ("(1)".into(), HermitianLattice::diagonal(&r, &[1])?),
            ("(3)".into(), HermitianLattice::diagonal(&r, &[3])?),
            ("(2)".into(), HermitianLattice::diagonal(&r, &[2])?),
            ("(6)".into(), HermitianLattice::diagonal(&r, &[6])?),
            ("(4)".into(), HermitianLattice::diagonal(&r, &[4])?),
            ("H(0)".into(), HermitianLattice::hyperbolic(&r, 0)?),
            ("H(1)".into(), HermitianLattice::hyperbolic(&r, 1)?),
            ("diag(1,1)".into(), HermitianLattice::diagonal(&r, &[1, 1])?),
            ("diag(1,3)".into(), HermitianLattice::diagonal(&r, &[1, 3])?),
            ("diag(1,2)".into(), HermitianLattice::diagonal(&r, &[1, 2])?),
        ];
        for b in [0, 1] {
            cases.push((format!("A(2,{},pi)", 2 * b), HermitianLattice::binary(&r, r.from_int(2), r.from_int(2 * b), r.pi())?));
            cases.push((format!("A(2d,{},1)", 2 * b), HermitianLattice::binary(&r, two_delta, r.from_int(2 * b), r.one())?));
        }
        for (name, l) in cases {
            let rep = local_density(&l)?;
            let t = std::time::Instant::now();
            match normalized_density(&l, 5, budget) {
                Ok(p) => {
                    let ratio = p.stabilized_value.as_ref().map(|v| v / &rep.beta_l);
                    println!(
                        "{case} {name:12} beta_L={:8} oracle={:?} at={:?} ratio={:?} fibers={:?} ({:.1?})",
                        rep.beta_l.to_string(),
                        p.normalized.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        p.stabilized_at,
                        ratio.map(|x| x.to_string()),
                        p.lift_fibers,
                        t.elapsed()
                    );
                }
                Err(e) => println!("{case} {name:12} beta_L={} oracle error: {e}", rep.beta_l),
            }
        }
    }
    Ok(())
}
