//! JSON interchange: `{"dims":[...],"layers":[{"W":[[...]],"b":[...]}]}`.
//! Floats are written in shortest round-trip form and parse back bit-exact.

use serde::{Deserialize, Serialize};

use crate::ann::{Layer, Matrix, Network};
use crate::error::{shape, Error, Result};

#[derive(Serialize, Deserialize)]
struct RawLayer {
    #[serde(rename = "W")]
    w: Vec<Vec<f64>>,
    b: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawNetwork {
    dims: Vec<usize>,
    layers: Vec<RawLayer>,
}

pub fn to_json(net: &Network) -> String {
    let raw = RawNetwork {
        dims: net.dims(),
        layers: net.layers().iter().map(|l| RawLayer { w: l.w.to_rows(), b: l.b.clone() }).collect(),
    };
    serde_json::to_string(&raw).expect("finite floats always serialize")
}

pub fn from_json(s: &str) -> Result<Network> {
    let raw: RawNetwork = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    if raw.dims.len() != raw.layers.len() + 1 {
        return Err(shape(format!(
            "dims lists {} widths for {} layers",
            raw.dims.len(),
            raw.layers.len()
        )));
    }
    let mut layers = Vec::with_capacity(raw.layers.len());
    for (k, l) in raw.layers.into_iter().enumerate() {
        let (i, o) = (raw.dims[k], raw.dims[k + 1]);
        let ctx = |msg: String| shape(format!("layer {}: {}", k + 1, msg));
        if l.w.len() != o {
            return Err(ctx(format!("W has {} rows, dims say {}", l.w.len(), o)));
        }
        if let Some(r) = l.w.iter().position(|row| row.len() != i) {
            return Err(ctx(format!("W row {} has {} entries, dims say {}", r + 1, l.w[r].len(), i)));
        }
        if l.b.len() != o {
            return Err(ctx(format!("bias has length {}, expected {}", l.b.len(), o)));
        }
        let w = Matrix::from_rows(&l.w).map_err(|e| ctx(e.to_string()))?;
        layers.push(Layer::new(w, l.b).map_err(|e| ctx(e.to_string()))?);
    }
    Network::new(layers)
}
