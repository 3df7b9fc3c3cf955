//! The fan JSON interchange format:
//! `{"dim": d, "rays": [[int,...],...], "maxCones": [[idx,...],...]}`
//! with 0-based ray indices and maxCones sorted ascending both within and
//! across cones.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fan::{make_fan, Fan};
use crate::lattice::{Int, IntVector};

#[derive(Serialize, Deserialize)]
struct FanJson {
    dim: usize,
    rays: Vec<Vec<i64>>,
    #[serde(rename = "maxCones")]
    max_cones: Vec<Vec<usize>>,
}

pub fn fan_to_json(fan: &Fan) -> String {
    let rays: Vec<Vec<i64>> = fan
        .rays()
        .iter()
        .map(|r| {
            r.0.iter()
                .map(|e| i64::try_from(e).expect("ray coordinate fits in i64"))
                .collect()
        })
        .collect();
    let doc = FanJson {
        dim: fan.dim(),
        rays,
        max_cones: fan.max_cones().to_vec(),
    };
    serde_json::to_string(&doc).expect("fan serializes")
}

pub fn fan_from_json(text: &str) -> Result<Fan> {
    let doc: FanJson = serde_json::from_str(text).map_err(|e| Error::Json(e.to_string()))?;
    let rays: Vec<IntVector> = doc
        .rays
        .iter()
        .map(|r| IntVector(r.iter().map(|&e| Int::from(e)).collect()))
        .collect();
    make_fan(doc.dim, rays, doc.max_cones)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{fan_ex23, fan_p2};

    #[test]
    fn round_trip() {
        for fan in [fan_p2(), fan_ex23()] {
            let text = fan_to_json(&fan);
            let back = fan_from_json(&text).unwrap();
            assert_eq!(fan, back);
        }
    }

    #[test]
    fn format_is_stable() {
        let text = fan_to_json(&fan_p2());
        assert_eq!(
            text,
            r#"{"dim":2,"rays":[[1,0],[0,1],[-1,-1]],"maxCones":[[0,1],[0,2],[1,2]]}"#
        );
    }

    #[test]
    fn bad_json_is_rejected() {
        assert!(matches!(fan_from_json("{"), Err(Error::Json(_))));
        assert!(fan_from_json(r#"{"dim":2,"rays":[[2,0],[0,1]],"maxCones":[[0,1]]}"#).is_err());
    }
}
