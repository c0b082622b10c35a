//! Embedded regression corpus: known class polynomials with exact
//! coefficients, used by the `regress` command and the acceptance suite.

use crate::poly::{OmegaBasis, PolyCoeffs};
use rug::Integer;
use serde::Deserialize;

/// One regression case; coefficients ascending, as decimal strings.
#[derive(Debug, Clone, Deserialize)]
pub struct CorpusCase {
    pub id: String,
    pub note: String,
    pub d: i64,
    pub primes: Vec<i64>,
    pub e: i64,
    pub root_power: usize,
    pub domain: String,
    #[serde(default)]
    pub coefficients: Vec<String>,
    #[serde(default)]
    pub omega_coefficients: Vec<[String; 2]>,
    pub squarefree: bool,
}

impl CorpusCase {
    /// Expected coefficients as exact polynomial data.
    pub fn expected(&self) -> PolyCoeffs {
        if self.domain == "Z" {
            PolyCoeffs::Int(
                self.coefficients
                    .iter()
                    .map(|s| s.parse::<Integer>().expect("integer literal"))
                    .collect(),
            )
        } else {
            PolyCoeffs::Quad {
                omega: OmegaBasis::new(self.d),
                coeffs: self
                    .omega_coefficients
                    .iter()
                    .map(|[u, v]| {
                        (
                            u.parse::<Integer>().expect("integer literal"),
                            v.parse::<Integer>().expect("integer literal"),
                        )
                    })
                    .collect(),
            }
        }
    }
}

const CORPUS_JSON: &str = include_str!("../data/corpus.json");

/// All embedded regression cases.
pub fn cases() -> Vec<CorpusCase> {
    serde_json::from_str(CORPUS_JSON).expect("corpus.json is well-formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_parses_and_is_consistent() {
        let cases = cases();
        assert_eq!(cases.len(), 9);
        for case in &cases {
            let expected = case.expected();
            assert!(expected.degree() >= 4, "{}", case.id);
            match &expected {
                PolyCoeffs::Int(c) => {
                    assert_eq!(*c.last().unwrap(), 1, "{} must be monic", case.id)
                }
                PolyCoeffs::Quad { coeffs, .. } => {
                    assert_eq!(coeffs.last().unwrap().0, 1, "{} must be monic", case.id)
                }
            }
        }
    }
}
