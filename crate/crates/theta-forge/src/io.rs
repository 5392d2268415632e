//! File formats: lattice and projective-system JSON, and the CSV float
//! convention (17 significant digits, decimal dot) used by every emitter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intmat::IMat;
use crate::lattice::EuclideanLattice;
use crate::linalg::Mat;
use crate::prolim::ProjectiveSystem;

/// Lattice file: either a Gram matrix or a basis matrix (rows are basis
/// vectors, G = B B^T).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LatticeFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub basis: Option<Vec<Vec<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl LatticeFile {
    pub fn into_lattice(self) -> Result<EuclideanLattice> {
        let lattice = match (self.gram, self.basis) {
            (Some(g), _) => {
                if let Some(rank) = self.rank {
                    if rank != g.len() {
                        return Err(Error::DomainError(format!(
                            "declared rank {rank} does not match gram dimension {}",
                            g.len()
                        )));
                    }
                }
                EuclideanLattice::from_gram(Mat::from_rows(&g))?
            }
            (None, Some(b)) => EuclideanLattice::from_basis(&Mat::from_rows(&b))?,
            (None, None) => {
                return Err(Error::DomainError(
                    "lattice file needs a 'gram' or a 'basis' field".into(),
                ))
            }
        };
        Ok(match self.label {
            Some(label) => lattice.with_label(label),
            None => lattice,
        })
    }

    pub fn from_lattice(lattice: &EuclideanLattice) -> Self {
        LatticeFile {
            rank: Some(lattice.rank()),
            gram: Some(lattice.gram().to_rows()),
            basis: None,
            label: lattice.label().map(str::to_owned),
        }
    }
}

/// One level of a projective system: its Gram and the integer map to the
/// previous (shallower) level. The first level carries no map.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemLevel {
    pub gram: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub levels: Vec<SystemLevel>,
}

impl SystemFile {
    pub fn into_system(self) -> Result<ProjectiveSystem> {
        let mut levels = Vec::new();
        let mut maps = Vec::new();
        for (i, level) in self.levels.into_iter().enumerate() {
            let rank = level.gram.len();
            levels.push(if rank == 0 {
                EuclideanLattice::rank0()
            } else {
                EuclideanLattice::from_gram(Mat::from_rows(&level.gram))?
            });
            match (i, level.map) {
                (0, None) => {}
                (0, Some(_)) => {
                    return Err(Error::DomainError("level 0 must not carry a map".into()))
                }
                // an empty row list is the map onto a rank-0 level
                (_, Some(m)) if m.is_empty() => maps.push(IMat::zeros(0, rank)),
                (_, Some(m)) => maps.push(IMat::from_rows(&m)),
                (_, None) => {
                    return Err(Error::DomainError(format!("level {i} is missing its map")))
                }
            }
        }
        ProjectiveSystem::new(levels, maps)
    }

    pub fn from_system(sys: &ProjectiveSystem) -> Self {
        let levels = sys
            .levels()
            .iter()
            .enumerate()
            .map(|(i, l)| SystemLevel {
                gram: l.gram().to_rows(),
                map: (i > 0).then(|| sys.maps()[i - 1].to_rows()),
            })
            .collect();
        SystemFile { levels }
    }
}

/// 17 significant digits, decimal dot: round-trip safe for f64.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parse "a:b:k" into k evenly spaced values from a to b inclusive.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = spec.split(':').collect();
    let err = || Error::DomainError(format!("grid '{spec}' is not of the form a:b:k"));
    match parts.as_slice() {
        [single] => Ok(vec![single.parse().map_err(|_| err())?]),
        [a, b, k] => {
            let a: f64 = a.parse().map_err(|_| err())?;
            let b: f64 = b.parse().map_err(|_| err())?;
            let k: usize = k.parse().map_err(|_| err())?;
            if k == 0 {
                return Err(err());
            }
            if k == 1 {
                return Ok(vec![a]);
            }
            Ok((0..k)
                .map(|i| a + (b - a) * i as f64 / (k - 1) as f64)
                .collect())
        }
        _ => Err(err()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_roundtrip() {
        let a2 = EuclideanLattice::hexagonal().with_label("A2");
        let json = serde_json::to_string(&LatticeFile::from_lattice(&a2)).unwrap();
        let back: LatticeFile = serde_json::from_str(&json).unwrap();
        let l = back.into_lattice().unwrap();
        assert_eq!(l.label(), Some("A2"));
        assert!((l.gram()[(0, 1)] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn basis_form_accepted() {
        let f: LatticeFile =
            serde_json::from_str(r#"{"basis": [[1.0, 0.0], [0.5, 0.5]]}"#).unwrap();
        let l = f.into_lattice().unwrap();
        assert!((l.covolume() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_mismatch_rejected() {
        let f: LatticeFile = serde_json::from_str(r#"{"rank": 3, "gram": [[1.0]]}"#).unwrap();
        assert!(f.into_lattice().is_err());
    }

    #[test]
    fn system_roundtrip() {
        let fam = crate::prolim::DiagonalProFamily::Explicit(vec![1.0, 4.0]);
        let sys = fam.truncate(2).unwrap();
        let json = serde_json::to_string(&SystemFile::from_system(&sys)).unwrap();
        let back: SystemFile = serde_json::from_str(&json).unwrap();
        let sys2 = back.into_system().unwrap();
        assert_eq!(sys2.depth(), 2);
    }

    #[test]
    fn float_format_roundtrips() {
        for &x in &[std::f64::consts::PI, 1.0 / 3.0, 1e-300, -2.5e17] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
    }

    #[test]
    fn grid_parsing() {
        assert_eq!(parse_grid("0:40:41").unwrap().len(), 41);
        assert_eq!(parse_grid("2.5").unwrap(), vec![2.5]);
        let g = parse_grid("1:2:3").unwrap();
        assert_eq!(g, vec![1.0, 1.5, 2.0]);
        assert!(parse_grid("a:b").is_err());
    }
}
