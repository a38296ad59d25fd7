//! Reading an algebra document with exact coefficients and writing it back.

use cokahler::io::{parse_coefficient, parse_document, AlgebraDocument};

const DOCUMENT: &str = r#"{
  "name": "example",
  "dimension": 5,
  "differential": {
    "e1": [{ "coeff": "sqrt(3)/2", "monomial": [2, 5] }, { "coeff": "1/2", "monomial": [1, 4] }],
    "e2": [{ "coeff": "sqrt(3)/2", "monomial": [1, 5] }, { "coeff": "1/2", "monomial": [2, 4] }],
    "e3": [{ "coeff": "1", "monomial": [1, 2] }, { "coeff": "1", "monomial": [3, 4] }]
  },
  "metric": "identity",
  "alpha": ["0", "0", "0", "0", "1"],
  "omega": [{ "coeff": "1", "monomial": [1, 2] }, { "coeff": "1", "monomial": [3, 4] }]
}"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for text in ["sqrt(3)/2", "1 - 1/4", "2sqrt(2)", "1/0", "1.5"] {
        println!("{text:>10} -> {:?}", parse_coefficient(text));
    }
    let doc = parse_document(DOCUMENT, 1e-9)?;
    println!("loaded {} of dimension {}", doc.name, doc.algebra.dimension());
    println!("de^1 = {}", doc.algebra.differential_of_basis(0));
    let round = AlgebraDocument::from_json(DOCUMENT)?.to_json();
    println!("{round}");
    let broken = DOCUMENT.replace("[3, 4] }]\n  },", "[3, 3] }]\n  },");
    match parse_document(&broken, 1e-9) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("rejected: {e}"),
    }
    Ok(())
}
