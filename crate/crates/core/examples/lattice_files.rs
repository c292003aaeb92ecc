//! Lattice files: the Gram form and the jordan_blocks shortcut, validation errors, and a report
//! written with its schema tag and read back.

use herm2::density::{local_density, DensityReport};
use herm2::io::{lattice_to_json, parse_lattice, strip_schema, with_schema};

const GRAM: &str = r#"{"case": 2, "residue_degree": 1, "param": [1], "precision": 16,
    "gram": [[1, 0], [0, "2"]]}"#;
const BLOCKS: &str = r#"{"case": 1, "residue_degree": 2, "precision": 12,
    "jordan_blocks": [{"i": 0, "gram": [[0, 1], [1, 0]]},
                      {"i": 1, "gram": [[0, {"a0": [0, 0], "a1": [1, 0]}],
                                        [{"a0": [2, 0], "a1": [-1, 0]}, 0]]}]}"#;
const BROKEN: &str = r#"{"case": 1, "residue_degree": 1, "precision": 8, "gram": [[1, 1], [0, 1]]}"#;

fn main() -> herm2::Result<()> {
    for (name, text) in [("gram", GRAM), ("jordan_blocks", BLOCKS), ("broken", BROKEN)] {
        match parse_lattice(text, None) {
            Ok(l) => {
                let rep = local_density(&l)?;
                let json = serde_json::to_string(&with_schema(&rep)).expect("serializes");
                let back: DensityReport = serde_json::from_value(strip_schema(serde_json::from_str(&json).expect("valid"))?)
                    .expect("report reparses");
                println!("{name}: β_L = {}, round trip {}", rep.beta_l, back == rep);
                println!("  as file: {}", lattice_to_json(&l));
            }
            Err(e) => println!("{name}: rejected: {e}"),
        }
    }
    let coarse = parse_lattice(GRAM, Some(4))?;
    println!("precision override: 2^{}", coarse.ring().precision());
    Ok(())
}
