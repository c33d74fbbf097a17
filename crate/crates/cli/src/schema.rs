//! JSON documents for spectral data (instances) and tuples of principal
//! parts. Every number is a string in the Gaussian-rational grammar so that
//! values stay exact.

use dsquiver_core::matrixops::MatrixTuple;
use dsquiver_core::numeric::{gauss_parse, ExactMatrix, GaussRat};
use dsquiver_core::spectral::{IrregularBlock, JordanEntry, PoleData, ResidueSpec, SpectralData};
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDoc {
    pub rank: usize,
    pub poles: Vec<PoleDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoleDoc {
    pub point: String,
    pub order: usize,
    pub blocks: Vec<BlockDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockDoc {
    pub size: usize,
    /// Coefficients of `s², s³, …`.
    #[serde(default)]
    pub q: Vec<String>,
    pub residue: ResidueDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ResidueDoc {
    Jordan(Vec<JordanDoc>),
    Matrix(Vec<Vec<String>>),
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JordanDoc {
    pub value: String,
    pub blocks: Vec<usize>,
}

/// `coeffs[j−1]` is the coefficient of `x^{−j}` in the local coordinate.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TupleDoc {
    pub rank: usize,
    pub poles: Vec<TuplePoleDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuplePoleDoc {
    pub point: String,
    pub coeffs: Vec<Vec<Vec<String>>>,
}

fn gauss(s: &str, at: &str) -> Result<GaussRat, CliError> {
    gauss_parse(s).map_err(|e| CliError::Input(format!("{at}: {e}")))
}

fn gauss_list(v: &[String], at: &str) -> Result<Vec<GaussRat>, CliError> {
    v.iter().map(|s| gauss(s, at)).collect()
}

fn matrix(rows: &[Vec<String>], at: &str) -> Result<ExactMatrix, CliError> {
    let rows = rows.iter().map(|r| gauss_list(r, at)).collect::<Result<Vec<_>, _>>()?;
    if rows.is_empty() {
        return Err(CliError::Input(format!("{at}: empty matrix")));
    }
    let m = ExactMatrix::from_rows(rows).map_err(|e| CliError::Input(format!("{at}: {e}")))?;
    if !m.is_square() {
        return Err(CliError::Input(format!("{at}: matrix is not square")));
    }
    Ok(m)
}

fn matrix_doc(m: &ExactMatrix) -> Vec<Vec<String>> {
    m.to_rows().iter().map(|r| r.iter().map(GaussRat::to_text).collect()).collect()
}

fn texts(v: &[GaussRat]) -> Vec<String> {
    v.iter().map(GaussRat::to_text).collect()
}

impl InstanceDoc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("instance: {e}")))
    }

    pub fn to_spectral(&self) -> Result<SpectralData, CliError> {
        let mut poles = Vec::with_capacity(self.poles.len());
        for (i, p) in self.poles.iter().enumerate() {
            let mut blocks = Vec::with_capacity(p.blocks.len());
            for (j, b) in p.blocks.iter().enumerate() {
                let at = format!("pole {i} block {j}");
                let residue = match &b.residue {
                    ResidueDoc::Jordan(es) => ResidueSpec::Jordan(
                        es.iter()
                            .map(|e| Ok(JordanEntry { value: gauss(&e.value, &at)?, blocks: e.blocks.clone() }))
                            .collect::<Result<_, CliError>>()?,
                    ),
                    ResidueDoc::Matrix(rows) => ResidueSpec::Matrix(matrix(rows, &at)?),
                };
                let xi = b.xi.as_ref().map(|x| gauss_list(x, &at)).transpose()?;
                let block = IrregularBlock::new(gauss_list(&b.q, &at)?, b.size, residue, xi)
                    .map_err(|e| CliError::Input(format!("{at}: {e}")))?;
                blocks.push(block);
            }
            poles.push(PoleData { label: p.point.clone(), order: p.order, blocks });
        }
        SpectralData::new(self.rank, poles).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn from_spectral(data: &SpectralData) -> Self {
        let poles = data
            .poles
            .iter()
            .map(|p| PoleDoc {
                point: p.label.clone(),
                order: p.order,
                blocks: p
                    .blocks
                    .iter()
                    .map(|b| BlockDoc {
                        size: b.size,
                        q: texts(&b.q),
                        residue: match &b.residue {
                            ResidueSpec::Jordan(es) => ResidueDoc::Jordan(
                                es.iter().map(|e| JordanDoc { value: e.value.to_text(), blocks: e.blocks.clone() }).collect(),
                            ),
                            ResidueSpec::Matrix(m) => ResidueDoc::Matrix(matrix_doc(m)),
                        },
                        xi: Some(texts(&b.xi)),
                    })
                    .collect(),
            })
            .collect();
        InstanceDoc { rank: data.rank, poles }
    }
}

impl TupleDoc {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("tuple: {e}")))
    }

    pub fn to_tuple(&self) -> Result<MatrixTuple, CliError> {
        let mut poles = Vec::with_capacity(self.poles.len());
        for (i, p) in self.poles.iter().enumerate() {
            let coeffs = p
                .coeffs
                .iter()
                .enumerate()
                .map(|(j, m)| matrix(m, &format!("pole {i} coefficient {}", j + 1)))
                .collect::<Result<Vec<_>, _>>()?;
            poles.push(coeffs);
        }
        MatrixTuple::new(self.rank, poles).map_err(|e| CliError::Input(e.to_string()))
    }

    pub fn from_tuple(t: &MatrixTuple, points: &[String]) -> Self {
        let poles = t
            .poles
            .iter()
            .zip(points)
            .map(|(p, point)| TuplePoleDoc { point: point.clone(), coeffs: p.iter().map(matrix_doc).collect() })
            .collect();
        TupleDoc { rank: t.rank, poles }
    }

    pub fn points(&self) -> Vec<String> {
        self.poles.iter().map(|p| p.point.clone()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const ORDER_TWO: &str = r#"{"rank": 2, "poles": [
        {"point": "infinity", "order": 2, "blocks": [
            {"size": 1, "q": ["1"], "residue": {"jordan": [{"value": "1/2", "blocks": [1]}]}},
            {"size": 1, "q": ["-1"], "residue": {"jordan": [{"value": "-1", "blocks": [1]}]}}]},
        {"point": "a", "order": 2, "blocks": [
            {"size": 1, "q": ["2"], "residue": {"matrix": [["1/3"]]}},
            {"size": 1, "residue": {"jordan": [{"value": "1/6", "blocks": [1]}]}, "xi": ["1/6"]}]}]}"#;

    #[test]
    fn instance_survives_a_round_trip() {
        let data = InstanceDoc::parse(ORDER_TWO).unwrap().to_spectral().unwrap();
        assert_eq!(data.poles[1].blocks[0].q, vec![GaussRat::from_int(2)]);
        assert!(data.poles[1].blocks[1].q.is_empty());
        let again = InstanceDoc::from_spectral(&data);
        let text = serde_json::to_string(&again).unwrap();
        assert_eq!(InstanceDoc::parse(&text).unwrap().to_spectral().unwrap(), data);
    }

    #[test]
    fn unknown_fields_and_bad_numbers_are_rejected() {
        let extra = ORDER_TWO.replacen("\"rank\": 2", "\"rank\": 2, \"colour\": 1", 1);
        assert!(InstanceDoc::parse(&extra).is_err());
        let bad = ORDER_TWO.replacen("1/2", "1//2", 1);
        assert!(InstanceDoc::parse(&bad).unwrap().to_spectral().is_err());
    }

    #[test]
    fn repeated_polynomial_parts_are_rejected() {
        let dup = ORDER_TWO.replacen("\"q\": [\"-1\"]", "\"q\": [\"1\"]", 1);
        let err = InstanceDoc::parse(&dup).unwrap().to_spectral().unwrap_err();
        assert!(err.to_string().contains("not distinct"), "{err}");
    }
}
